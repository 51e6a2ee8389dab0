// SPDX-License-Identifier: Apache-2.0

//! Pareto active learning: keep a per-design uncertainty region built from
//! GP confidence bounds, classify designs as Pareto-optimal (P),
//! non-Pareto-optimal (N), or unclassified (U), and spend oracle calls on
//! the most uncertain designs until the partition settles.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::FeatureVector;
use crate::gp::{self, FitOptions, GpError, Hyperparams};
use crate::oracle::{EvalClass, EvalCounts, Oracle, OracleError, PpaPoint};

#[derive(Debug, Error)]
pub enum PalError {
    #[error("design space must hold at least 2 designs, got {0}")]
    TooFewDesigns(usize),
    #[error("init size {init} exceeds design-space size {total}")]
    InitTooLarge { init: usize, total: usize },
    #[error("need 2 or 3 objectives, got {0}")]
    BadObjectives(usize),
    #[error("gp: {0}")]
    Gp(#[from] GpError),
    #[error("oracle: {0}")]
    Oracle(#[from] OracleError),
}

/// One physical objective, always minimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Area,
    Power,
    Delay,
}

impl Objective {
    pub fn of(self, p: &PpaPoint) -> f64 {
        match self {
            Objective::Area => p.area,
            Objective::Power => p.power,
            Objective::Delay => p.delay,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Objective::Area => "area",
            Objective::Power => "power",
            Objective::Delay => "delay",
        }
    }
}

pub fn objective_values(p: &PpaPoint, objectives: &[Objective]) -> Vec<f64> {
    objectives.iter().map(|o| o.of(p)).collect()
}

/// Axis-aligned uncertainty box in objective space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Region {
    /// The initial region: all of objective space.
    pub fn unbounded(dims: usize) -> Region {
        Region {
            lower: vec![f64::NEG_INFINITY; dims],
            upper: vec![f64::INFINITY; dims],
        }
    }

    /// Diagonal length over the finite dimensions.
    pub fn diagonal(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .filter(|(l, u)| l.is_finite() && u.is_finite())
            .map(|(l, u)| (u - l) * (u - l))
            .sum::<f64>()
            .sqrt()
    }
}

/// Confidence hyper-rectangle `[m - sqrt(beta) s, m + sqrt(beta) s]` per
/// dimension.
pub fn hyper_rectangle(mean: &[f64], stddev: &[f64], beta: f64) -> Region {
    let half = beta.sqrt();
    Region {
        lower: mean
            .iter()
            .zip(stddev)
            .map(|(m, s)| m - half * s)
            .collect(),
        upper: mean
            .iter()
            .zip(stddev)
            .map(|(m, s)| m + half * s)
            .collect(),
    }
}

/// `R_{t+1} = R_t intersect HR`. When the two boxes are disjoint along a
/// dimension (possible once hyperparameters are refit between iterations),
/// that dimension collapses to the midpoint of the gap, which keeps the
/// result inside `R_t` and the sequence nested.
pub fn intersect(r: &Region, hr: &Region) -> Region {
    let mut lower = Vec::with_capacity(r.lower.len());
    let mut upper = Vec::with_capacity(r.lower.len());
    for i in 0..r.lower.len() {
        let lo = r.lower[i].max(hr.lower[i]);
        let hi = r.upper[i].min(hr.upper[i]);
        if lo <= hi {
            lower.push(lo);
            upper.push(hi);
        } else {
            let mid = 0.5 * (lo + hi);
            let mid = mid.clamp(r.lower[i], r.upper[i]);
            lower.push(mid);
            upper.push(mid);
        }
    }
    Region { lower, upper }
}

/// Classification state of one design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    Pareto,
    NotPareto,
    Unclassified,
}

/// `a` dominates `b` with tolerance `delta` (minimization): no worse than
/// `b + delta` everywhere and better than `b - delta` somewhere.
fn dominates_delta(a: &[f64], b: &[f64], delta: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| *x <= y + delta)
        && a.iter().zip(b).any(|(x, y)| x + delta < *y)
}

/// One classification pass over the unclassified designs, using the regions
/// of iteration t. The reference set is P union U, snapshotted at entry so
/// the pass order does not matter; designs already in P or N keep their
/// class.
pub fn classify(regions: &[Region], classes: &mut [Class], delta: f64) {
    let reference: Vec<usize> = classes
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != Class::NotPareto)
        .map(|(i, _)| i)
        .collect();
    let snapshot = classes.to_vec();
    for x in 0..classes.len() {
        if snapshot[x] != Class::Unclassified {
            continue;
        }
        let rx = &regions[x];
        let mut discarded = false;
        let mut pessimistic_safe = true;
        for &y in &reference {
            if y == x {
                continue;
            }
            let ry = &regions[y];
            // x is surely dominated: someone's pessimistic corner beats
            // even the optimistic corner of x.
            if dominates_delta(&ry.upper, &rx.lower, delta) {
                discarded = true;
                break;
            }
            // x could still be dominated: someone's optimistic corner
            // beats the pessimistic corner of x.
            if dominates_delta(&ry.lower, &rx.upper, delta) {
                pessimistic_safe = false;
            }
        }
        if discarded {
            classes[x] = Class::NotPareto;
        } else if pessimistic_safe {
            classes[x] = Class::Pareto;
        }
    }
}

/// Pick the `batch` candidates with the largest region diagonals from
/// `(U union P) \ S`; ties broken by design index ascending. An empty return
/// signals convergence.
pub fn select_samples(
    regions: &[Region],
    classes: &[Class],
    sampled: &BTreeSet<usize>,
    batch: usize,
) -> Vec<usize> {
    let mut candidates: Vec<(f64, usize)> = classes
        .iter()
        .enumerate()
        .filter(|(i, c)| **c != Class::NotPareto && !sampled.contains(i))
        .map(|(i, _)| (regions[i].diagonal(), i))
        .collect();
    candidates
        .sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal).then(a.1.cmp(&b.1)));
    candidates.into_iter().take(batch).map(|(_, i)| i).collect()
}

/// Run controls. `fit` governs the full hyperparameter searches, which run
/// at iteration 0 and every `refit_every` iterations; in between, models are
/// rebuilt on the grown sample with the hyperparameters kept fixed.
#[derive(Debug, Clone)]
pub struct PalConfig {
    pub objectives: Vec<Objective>,
    pub beta: f64,
    pub delta: f64,
    pub t_max: usize,
    pub batch_size: usize,
    /// Defaults to 250 for 2 objectives, 700 for 3.
    pub init_size: Option<usize>,
    pub seed: u64,
    /// Strict mode returns exactly P; otherwise designs still unclassified
    /// at timeout whose pessimistic corner is non-dominated are added,
    /// flagged timeout-optimistic.
    pub strict: bool,
    pub fit: FitOptions,
    pub refit_every: usize,
}

impl PalConfig {
    pub fn new(objectives: Vec<Objective>, seed: u64) -> PalConfig {
        PalConfig {
            objectives,
            beta: 16.0,
            delta: 0.001,
            t_max: 20,
            batch_size: 1,
            init_size: None,
            seed,
            strict: false,
            fit: FitOptions::default(),
            refit_every: 5,
        }
    }

    fn effective_init(&self, total: usize) -> usize {
        self.init_size
            .unwrap_or(if self.objectives.len() == 2 { 250 } else { 700 })
            .min(total)
    }
}

/// One verified frontier entry; objective values are true oracle labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierPoint {
    pub design_id: String,
    pub index: usize,
    pub objectives: Vec<f64>,
    pub timeout_optimistic: bool,
}

/// Per-iteration trace entry (one JSON line in `regions_trace.jsonl`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IterationTrace {
    pub t: usize,
    pub labeled: usize,
    pub pareto: usize,
    pub not_pareto: usize,
    pub unclassified: usize,
    pub selected: Vec<usize>,
    pub max_diagonal: f64,
}

#[derive(Debug, Clone)]
pub struct PalReport {
    /// Verified, non-dominated frontier in true objective values.
    pub frontier: Vec<FrontierPoint>,
    /// All designs classified Pareto (plus timeout-optimistic additions),
    /// before the verification filter.
    pub predicted: Vec<usize>,
    pub classes: Vec<Class>,
    pub counts: EvalCounts,
    pub iterations: usize,
    pub trace: Vec<IterationTrace>,
}

/// Uniform sample of `k` distinct indices from `0..total` (partial
/// Fisher-Yates).
fn sample_without_replacement(total: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..total).collect();
    for i in 0..k.min(total) {
        let j = rng.gen_range(i..total);
        idx.swap(i, j);
    }
    idx.truncate(k);
    idx
}

/// Algorithm: label a random initial subset, then iterate
/// {fit one GP per objective, intersect confidence boxes into the running
/// regions, classify, sample the widest region} until nothing is
/// unclassified or `t_max` is reached; finish with a verification pass over
/// the predicted set using true oracle labels.
pub fn run(
    designs: &[(String, FeatureVector)],
    oracle: &dyn Oracle,
    cfg: &PalConfig,
) -> Result<PalReport, PalError> {
    let total = designs.len();
    if total < 2 {
        return Err(PalError::TooFewDesigns(total));
    }
    let dims = cfg.objectives.len();
    if !(2..=3).contains(&dims) {
        return Err(PalError::BadObjectives(dims));
    }
    let init = cfg.effective_init(total);
    if cfg.init_size.is_some_and(|i| i > total) {
        return Err(PalError::InitTooLarge {
            init: cfg.init_size.unwrap(),
            total,
        });
    }

    let dense: Vec<Vec<f64>> = designs.iter().map(|(_, fv)| fv.to_dense()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut sampled: BTreeSet<usize> = BTreeSet::new();
    let mut labels: Vec<Option<Vec<f64>>> = vec![None; total];
    for i in sample_without_replacement(total, init, &mut rng) {
        let ppa = oracle.evaluate(&designs[i].0, &designs[i].1, EvalClass::Init)?;
        labels[i] = Some(objective_values(&ppa, &cfg.objectives));
        sampled.insert(i);
    }

    let mut regions: Vec<Region> = (0..total).map(|_| Region::unbounded(dims)).collect();
    let mut classes = vec![Class::Unclassified; total];
    let mut hps: Vec<Option<Hyperparams>> = vec![None; dims];
    let mut trace = Vec::new();
    let mut t = 0;
    while classes.iter().any(|c| *c == Class::Unclassified) && t < cfg.t_max {
        let xs: Vec<Vec<f64>> = sampled.iter().map(|&i| dense[i].clone()).collect();
        let live: Vec<usize> = (0..total)
            .filter(|i| classes[*i] != Class::NotPareto)
            .collect();
        let queries: Vec<Vec<f64>> = live.iter().map(|&i| dense[i].clone()).collect();
        let mut boxes: Vec<(Vec<f64>, Vec<f64>)> =
            vec![(Vec::with_capacity(dims), Vec::with_capacity(dims)); live.len()];
        for (j, _) in cfg.objectives.iter().enumerate() {
            let ys: Vec<f64> = sampled
                .iter()
                .map(|&i| labels[i].as_ref().unwrap()[j])
                .collect();
            let full_fit = hps[j].is_none() || t % cfg.refit_every.max(1) == 0;
            let model = if full_fit {
                let opts = FitOptions {
                    seed: cfg.seed ^ (j as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15),
                    init: hps[j],
                    ..cfg.fit
                };
                let m = gp::fit(&xs, &ys, &opts)?;
                hps[j] = if m.degenerate { None } else { Some(m.hyperparams()) };
                m
            } else {
                gp::fit_fixed(&xs, &ys, hps[j].unwrap())?
            };
            for (b, p) in boxes.iter_mut().zip(model.predict_batch(&queries)?) {
                b.0.push(p.mean);
                b.1.push(p.stddev);
            }
        }
        for (slot, (mean, stddev)) in live.iter().zip(&boxes) {
            let hr = hyper_rectangle(mean, stddev, cfg.beta);
            regions[*slot] = intersect(&regions[*slot], &hr);
        }
        classify(&regions, &mut classes, cfg.delta);
        let selected = select_samples(&regions, &classes, &sampled, cfg.batch_size);
        let count = |c: Class| classes.iter().filter(|x| **x == c).count();
        trace.push(IterationTrace {
            t,
            labeled: sampled.len(),
            pareto: count(Class::Pareto),
            not_pareto: count(Class::NotPareto),
            unclassified: count(Class::Unclassified),
            selected: selected.clone(),
            max_diagonal: selected
                .first()
                .map(|&i| regions[i].diagonal())
                .unwrap_or(0.0),
        });
        if selected.is_empty() {
            break; // every live design already sampled: converged
        }
        for i in selected {
            let ppa = oracle.evaluate(&designs[i].0, &designs[i].1, EvalClass::ActiveSample)?;
            labels[i] = Some(objective_values(&ppa, &cfg.objectives));
            sampled.insert(i);
        }
        t += 1;
    }

    // Predicted set: P, plus (unless strict) residual unclassified designs
    // whose pessimistic corner is not dominated by any live design's
    // pessimistic corner.
    let mut predicted: Vec<usize> = (0..total).filter(|i| classes[*i] == Class::Pareto).collect();
    let mut optimistic: BTreeSet<usize> = BTreeSet::new();
    if !cfg.strict {
        let live: Vec<usize> = (0..total)
            .filter(|i| classes[*i] != Class::NotPareto)
            .collect();
        for &x in &live {
            if classes[x] != Class::Unclassified {
                continue;
            }
            let dominated = live.iter().any(|&y| {
                y != x && dominates_delta(&regions[y].upper, &regions[x].upper, cfg.delta)
            });
            if !dominated {
                predicted.push(x);
                optimistic.insert(x);
            }
        }
        predicted.sort_unstable();
    }

    // Verification pass: true labels for the predicted set; these are not
    // fed back into the models. The reported frontier keeps only the
    // verified designs that are non-dominated in true values.
    let mut verified: Vec<FrontierPoint> = Vec::with_capacity(predicted.len());
    for &i in &predicted {
        let ppa = oracle.evaluate(&designs[i].0, &designs[i].1, EvalClass::Verify)?;
        verified.push(FrontierPoint {
            design_id: designs[i].0.clone(),
            index: i,
            objectives: objective_values(&ppa, &cfg.objectives),
            timeout_optimistic: optimistic.contains(&i),
        });
    }
    let frontier: Vec<FrontierPoint> = verified
        .iter()
        .filter(|p| {
            !verified.iter().any(|q| {
                q.index != p.index && dominates_delta(&q.objectives, &p.objectives, 0.0)
            })
        })
        .cloned()
        .collect();

    Ok(PalReport {
        frontier,
        predicted,
        classes,
        counts: oracle.counts(),
        iterations: t,
        trace,
    })
}
