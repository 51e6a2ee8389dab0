// SPDX-License-Identifier: Apache-2.0

//! Scalarization-sweep baseline: fit a kernel-ridge regressor from design
//! features to a weighted sum of normalized objectives, sweep the weight(s)
//! over a fixed grid, harvest the top-k predicted designs per weight, and
//! verify the union with the oracle. Kernel ridge regression with an RBF
//! kernel stands in for support-vector regression (see the report note).

use std::collections::BTreeSet;

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::FeatureVector;
use crate::oracle::{EvalClass, EvalCounts, Oracle, OracleError, PpaPoint};
use crate::pal::{objective_values, Objective};
use crate::pareto::{extract_front, ParetoSet};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("degenerate normalization bounds for objective {0}")]
    DegenerateBounds(&'static str),
    #[error("fewer than 2 distinct scalarized targets; cannot fit")]
    DegenerateTargets,
    #[error("need at least {need} labeled points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("factorization failed while fitting the ridge model")]
    Factorization,
    #[error("oracle: {0}")]
    Oracle(#[from] OracleError),
}

/// Joint objective space being swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Space {
    /// power-delay: `alpha * power + delay`
    Pd,
    /// area-delay: `alpha * area + delay`
    Ad,
    /// power-performance-area: `alpha1 * area + alpha2 * power + delay`
    Ppa,
}

impl Space {
    /// Objectives in scalarization order; delay is always the unweighted
    /// final term.
    pub fn objectives(self) -> Vec<Objective> {
        match self {
            Space::Pd => vec![Objective::Power, Objective::Delay],
            Space::Ad => vec![Objective::Area, Objective::Delay],
            Space::Ppa => vec![Objective::Area, Objective::Power, Objective::Delay],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Space::Pd => "PD",
            Space::Ad => "AD",
            Space::Ppa => "PPA",
        }
    }
}

/// The 15 standard sweep weights.
pub fn default_alphas() -> Vec<f64> {
    vec![
        1000.0,
        0.0,
        100.0,
        1.0 / 100.0,
        50.0,
        1.0 / 50.0,
        20.0,
        1.0 / 20.0,
        10.0,
        1.0 / 10.0,
        8.0,
        1.0 / 8.0,
        2.0,
        1.0 / 2.0,
        1.0,
    ]
}

/// Per-objective min/max used for min-max normalization, aligned with
/// `Space::objectives()` order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

/// Bounds over a labeled dataset; fixed once per sweep.
pub fn bounds_of<'a>(
    space: Space,
    points: impl Iterator<Item = &'a PpaPoint>,
) -> Result<Bounds, SweepError> {
    let objectives = space.objectives();
    let mut min = vec![f64::INFINITY; objectives.len()];
    let mut max = vec![f64::NEG_INFINITY; objectives.len()];
    for p in points {
        for (i, o) in objectives.iter().enumerate() {
            min[i] = min[i].min(o.of(p));
            max[i] = max[i].max(o.of(p));
        }
    }
    for (i, o) in objectives.iter().enumerate() {
        if !(max[i] > min[i]) {
            return Err(SweepError::DegenerateBounds(o.name()));
        }
    }
    Ok(Bounds { min, max })
}

/// Weighted sum of min-max-normalized objectives. `weights` has one entry
/// per objective except the final delay term, which always has weight 1.
pub fn scalarize(
    ppa: &PpaPoint,
    space: Space,
    weights: &[f64],
    bounds: &Bounds,
) -> Result<f64, SweepError> {
    let objectives = space.objectives();
    debug_assert_eq!(weights.len() + 1, objectives.len());
    let mut total = 0.0;
    for (i, o) in objectives.iter().enumerate() {
        if !(bounds.max[i] > bounds.min[i]) {
            return Err(SweepError::DegenerateBounds(o.name()));
        }
        let normalized = (o.of(ppa) - bounds.min[i]) / (bounds.max[i] - bounds.min[i]);
        let w = weights.get(i).copied().unwrap_or(1.0);
        total += w * normalized;
    }
    Ok(total)
}

/// All weight tuples for a space: the alpha list itself for PD/AD, the
/// cartesian square for PPA.
pub fn weight_tuples(space: Space, alphas: &[f64]) -> Vec<Vec<f64>> {
    match space {
        Space::Pd | Space::Ad => alphas.iter().map(|&a| vec![a]).collect(),
        Space::Ppa => alphas
            .iter()
            .flat_map(|&a1| alphas.iter().map(move |&a2| vec![a1, a2]))
            .collect(),
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub space: Space,
    pub alphas: Vec<f64>,
    pub top_k: usize,
    pub training_size: usize,
    pub seed: u64,
    pub lambda_grid: Vec<f64>,
    pub holdout_fraction: f64,
}

impl SweepConfig {
    pub fn new(space: Space, seed: u64) -> SweepConfig {
        SweepConfig {
            space,
            alphas: default_alphas(),
            top_k: 10,
            training_size: 2500,
            seed,
            lambda_grid: vec![1e-8, 1e-6, 1e-4, 1e-2, 1e-1],
            holdout_fraction: 0.2,
        }
    }
}

/// One verified candidate with its true objective values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifiedPoint {
    pub design_id: String,
    pub index: usize,
    pub objectives: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    /// Substitution notice, emitted at the top of run artifacts.
    pub header_note: String,
    pub space: Space,
    pub models_fitted: usize,
    /// Union of top-k predicted designs over all weights (full-space
    /// indices, ascending).
    pub candidates: Vec<usize>,
    /// Oracle-verified candidates with true objective values.
    pub verified: Vec<VerifiedPoint>,
    /// Non-dominated subset of the verified candidates.
    pub frontier: ParetoSet,
    /// Held-out mean squared error per raw objective.
    pub mse: Vec<(&'static str, f64)>,
    pub counts: EvalCounts,
}

pub const KRR_NOTE: &str =
    "regressor: kernel ridge (RBF, 5-fold CV ridge penalty) substituted for epsilon-SVR";

// ---- kernel ridge machinery ------------------------------------------------

struct KernelBasis {
    x_mean: Vec<f64>,
    x_scale: Vec<f64>,
    bandwidth2: f64,
    train: DMatrix<f64>,
}

impl KernelBasis {
    fn standardize(&self, rows: &[Vec<f64>]) -> DMatrix<f64> {
        DMatrix::from_fn(rows.len(), self.x_mean.len(), |i, j| {
            (rows[i][j] - self.x_mean[j]) / self.x_scale[j]
        })
    }

    fn kernel(&self, a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
        DMatrix::from_fn(a.nrows(), b.nrows(), |i, j| {
            let d2: f64 = (0..a.ncols()).map(|k| (a[(i, k)] - b[(j, k)]).powi(2)).sum();
            (-d2 / (2.0 * self.bandwidth2)).exp()
        })
    }
}

fn basis_for(train: &[Vec<f64>]) -> KernelBasis {
    let d = train[0].len();
    let m = train.len() as f64;
    let mut mean = vec![0.0; d];
    for r in train {
        for (s, v) in mean.iter_mut().zip(r) {
            *s += v;
        }
    }
    mean.iter_mut().for_each(|s| *s /= m);
    let mut scale = vec![0.0; d];
    for r in train {
        for (j, v) in r.iter().enumerate() {
            scale[j] += (v - mean[j]).powi(2);
        }
    }
    for s in &mut scale {
        *s = (*s / m).sqrt();
        if *s < 1e-12 {
            *s = 1.0;
        }
    }
    let basis = KernelBasis {
        x_mean: mean,
        x_scale: scale,
        bandwidth2: 1.0,
        train: DMatrix::zeros(0, 0),
    };
    let xs = basis.standardize(train);
    // Median-heuristic bandwidth on a bounded subsample of pairs.
    let cap = train.len().min(256);
    let mut d2s: Vec<f64> = Vec::with_capacity(cap * (cap - 1) / 2);
    for i in 0..cap {
        for j in (i + 1)..cap {
            d2s.push((0..xs.ncols()).map(|k| (xs[(i, k)] - xs[(j, k)]).powi(2)).sum());
        }
    }
    d2s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = d2s.get(d2s.len() / 2).copied().unwrap_or(1.0).max(1e-12);
    KernelBasis {
        bandwidth2: median,
        train: xs,
        ..basis
    }
}

/// Solve (K + lambda m I) a = y_centered for one target given a cached
/// factorization.
fn ridge_solve(chol: &Cholesky<f64, nalgebra::Dyn>, y: &DVector<f64>) -> DVector<f64> {
    chol.solve(y)
}

fn factor(k: &DMatrix<f64>, lambda: f64) -> Option<Cholesky<f64, nalgebra::Dyn>> {
    let m = k.nrows();
    let mut reg = k.clone();
    for i in 0..m {
        reg[(i, i)] += lambda * m as f64 + 1e-10;
    }
    Cholesky::new(reg)
}

/// Five-fold CV squared error of each lambda, factorizations shared across
/// all targets by the caller.
struct CvPlan {
    folds: Vec<Vec<usize>>, // indices into the training rows
    /// For each (fold, lambda): factorization of the kept rows' kernel.
    factors: Vec<Vec<Cholesky<f64, nalgebra::Dyn>>>,
    /// For each fold: cross-kernel (held-out rows x kept rows) and kept ids.
    cross: Vec<(DMatrix<f64>, Vec<usize>)>,
}

fn build_cv_plan(
    basis: &KernelBasis,
    k_full: &DMatrix<f64>,
    lambdas: &[f64],
    seed: u64,
) -> Result<CvPlan, SweepError> {
    let m = k_full.nrows();
    let mut order: Vec<usize> = (0..m).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in (1..m).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let folds: Vec<Vec<usize>> = (0..5)
        .map(|f| order.iter().copied().skip(f).step_by(5).collect())
        .collect();
    let mut factors = Vec::with_capacity(folds.len());
    let mut cross = Vec::with_capacity(folds.len());
    for fold in &folds {
        let held: BTreeSet<usize> = fold.iter().copied().collect();
        let kept: Vec<usize> = (0..m).filter(|i| !held.contains(i)).collect();
        let k_kept = DMatrix::from_fn(kept.len(), kept.len(), |i, j| k_full[(kept[i], kept[j])]);
        let k_cross = DMatrix::from_fn(fold.len(), kept.len(), |i, j| k_full[(fold[i], kept[j])]);
        let mut per_lambda = Vec::with_capacity(lambdas.len());
        for &l in lambdas {
            per_lambda.push(factor(&k_kept, l).ok_or(SweepError::Factorization)?);
        }
        factors.push(per_lambda);
        cross.push((k_cross, kept));
        let _ = basis;
    }
    Ok(CvPlan {
        folds,
        factors,
        cross,
    })
}

fn cv_pick_lambda(plan: &CvPlan, lambdas: &[f64], y: &[f64]) -> usize {
    let mut best = (f64::INFINITY, 0usize);
    for (li, _) in lambdas.iter().enumerate() {
        let mut err = 0.0;
        let mut count = 0usize;
        for (f, fold) in plan.folds.iter().enumerate() {
            let (k_cross, kept) = &plan.cross[f];
            let y_mean = kept.iter().map(|&i| y[i]).sum::<f64>() / kept.len() as f64;
            let yk = DVector::from_iterator(kept.len(), kept.iter().map(|&i| y[i] - y_mean));
            let a = ridge_solve(&plan.factors[f][li], &yk);
            let pred = k_cross * &a;
            for (slot, &i) in fold.iter().enumerate() {
                err += (pred[slot] + y_mean - y[i]).powi(2);
                count += 1;
            }
        }
        let err = err / count.max(1) as f64;
        if err < best.0 {
            best = (err, li);
        }
    }
    best.1
}

// ---- the sweep -------------------------------------------------------------

/// Fit one regressor per weight tuple over the labeled data, harvest top-k
/// predictions per weight over the full space, verify the union with the
/// oracle, and report the verified Pareto subset.
pub fn sweep(
    labeled: &[(String, FeatureVector, PpaPoint)],
    full_space: &[(String, FeatureVector)],
    oracle: &dyn Oracle,
    cfg: &SweepConfig,
) -> Result<SweepReport, SweepError> {
    if labeled.len() < 10 {
        return Err(SweepError::TooFewPoints {
            need: 10,
            got: labeled.len(),
        });
    }
    let objectives = cfg.space.objectives();
    let bounds = bounds_of(cfg.space, labeled.iter().map(|(_, _, p)| p))?;

    // Training subset (seeded shuffle) with a held-out tail for the MSE hook.
    let mut order: Vec<usize> = (0..labeled.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for i in (1..order.len()).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    order.truncate(cfg.training_size.min(order.len()));
    let holdout = ((order.len() as f64 * cfg.holdout_fraction) as usize).min(order.len() - 2);
    let (train_ids, held_ids) = order.split_at(order.len() - holdout);

    let train_x: Vec<Vec<f64>> = train_ids.iter().map(|&i| labeled[i].1.to_dense()).collect();
    let basis = basis_for(&train_x);
    let k_full = basis.kernel(&basis.train, &basis.train);
    let plan = build_cv_plan(&basis, &k_full, &cfg.lambda_grid, cfg.seed ^ 0xa5a5)?;

    // Full-fit factorizations cached per lambda.
    let mut full_factors: Vec<Option<Cholesky<f64, nalgebra::Dyn>>> =
        vec![None; cfg.lambda_grid.len()];
    let factor_for = |li: usize,
                          cache: &mut Vec<Option<Cholesky<f64, nalgebra::Dyn>>>|
     -> Result<(), SweepError> {
        if cache[li].is_none() {
            cache[li] = Some(factor(&k_full, cfg.lambda_grid[li]).ok_or(SweepError::Factorization)?);
        }
        Ok(())
    };

    let space_x: Vec<Vec<f64>> = full_space.iter().map(|(_, fv)| fv.to_dense()).collect();
    let k_space = basis.kernel(&basis.standardize(&space_x), &basis.train);

    let tuples = weight_tuples(cfg.space, &cfg.alphas);
    let mut candidates: BTreeSet<usize> = BTreeSet::new();
    for weights in &tuples {
        let y: Vec<f64> = train_ids
            .iter()
            .map(|&i| scalarize(&labeled[i].2, cfg.space, weights, &bounds))
            .collect::<Result<_, _>>()?;
        let spread = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - y.iter().cloned().fold(f64::INFINITY, f64::min);
        if !(spread > 0.0) {
            return Err(SweepError::DegenerateTargets);
        }
        let li = cv_pick_lambda(&plan, &cfg.lambda_grid, &y);
        factor_for(li, &mut full_factors)?;
        let y_mean = y.iter().sum::<f64>() / y.len() as f64;
        let yc = DVector::from_iterator(y.len(), y.iter().map(|v| v - y_mean));
        let a = ridge_solve(full_factors[li].as_ref().unwrap(), &yc);
        let pred = &k_space * &a;
        let mut ranked: Vec<(f64, usize)> =
            pred.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        ranked.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap().then(p.1.cmp(&q.1)));
        candidates.extend(ranked.iter().take(cfg.top_k).map(|(_, i)| *i));
    }

    // Verification: oracle-label the candidate union.
    let candidates: Vec<usize> = candidates.into_iter().collect();
    let mut verified = Vec::with_capacity(candidates.len());
    for &i in &candidates {
        let (id, fv) = &full_space[i];
        let ppa = oracle.evaluate(id, fv, EvalClass::Verify)?;
        verified.push(VerifiedPoint {
            design_id: id.clone(),
            index: i,
            objectives: objective_values(&ppa, &objectives),
        });
    }
    let frontier = extract_front(
        &verified
            .iter()
            .map(|v| (v.index, v.objectives.clone()))
            .collect::<Vec<_>>(),
    );

    // Held-out MSE per raw objective (model-quality hook).
    let mut mse = Vec::new();
    if !held_ids.is_empty() {
        let held_x: Vec<Vec<f64>> = held_ids.iter().map(|&i| labeled[i].1.to_dense()).collect();
        let k_held = basis.kernel(&basis.standardize(&held_x), &basis.train);
        for o in &objectives {
            let y: Vec<f64> = train_ids.iter().map(|&i| o.of(&labeled[i].2)).collect();
            let li = cv_pick_lambda(&plan, &cfg.lambda_grid, &y);
            factor_for(li, &mut full_factors)?;
            let y_mean = y.iter().sum::<f64>() / y.len() as f64;
            let yc = DVector::from_iterator(y.len(), y.iter().map(|v| v - y_mean));
            let a = ridge_solve(full_factors[li].as_ref().unwrap(), &yc);
            let pred = &k_held * &a;
            let err: f64 = held_ids
                .iter()
                .enumerate()
                .map(|(slot, &i)| (pred[slot] + y_mean - o.of(&labeled[i].2)).powi(2))
                .sum::<f64>()
                / held_ids.len() as f64;
            mse.push((o.name(), err));
        }
    }

    Ok(SweepReport {
        header_note: KRR_NOTE.to_string(),
        space: cfg.space,
        models_fitted: tuples.len(),
        candidates,
        verified,
        frontier,
        mse,
        counts: oracle.counts(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{evaluate_synthetic, SyntheticOracle};

    fn ppa(a: f64, p: f64, d: f64) -> PpaPoint {
        PpaPoint {
            area: a,
            power: p,
            delay: d,
        }
    }

    fn sample_bounds() -> Bounds {
        Bounds {
            min: vec![1.0, 0.2],
            max: vec![3.0, 0.6],
        }
    }

    #[test]
    fn scalarize_anchors() {
        let b = sample_bounds();
        // Weight zero: normalized delay alone.
        let v = scalarize(&ppa(0.0, 2.0, 0.4), Space::Pd, &[0.0], &b).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
        // Per-objective minima scalarize to 0 for any weight.
        for alpha in [0.0, 0.5, 10.0] {
            let v = scalarize(&ppa(0.0, 1.0, 0.2), Space::Pd, &[alpha], &b).unwrap();
            assert_eq!(v, 0.0);
        }
        // PPA at per-objective maxima with unit weights -> 3.0.
        let b3 = Bounds {
            min: vec![100.0, 1.0, 0.2],
            max: vec![300.0, 3.0, 0.6],
        };
        let v = scalarize(&ppa(300.0, 3.0, 0.6), Space::Ppa, &[1.0, 1.0], &b3).unwrap();
        assert!((v - 3.0).abs() < 1e-12);
    }

    #[test]
    fn scalarize_rejects_degenerate_bounds() {
        let b = Bounds {
            min: vec![1.0, 0.4],
            max: vec![3.0, 0.4],
        };
        assert!(matches!(
            scalarize(&ppa(0.0, 2.0, 0.4), Space::Pd, &[1.0], &b),
            Err(SweepError::DegenerateBounds("delay"))
        ));
    }

    #[test]
    fn scalarization_is_monotone_under_dominance() {
        let b = sample_bounds();
        let better = ppa(0.0, 1.5, 0.3);
        let worse = ppa(0.0, 1.6, 0.3);
        for alpha in [0.0, 0.1, 1.0, 100.0] {
            let sb = scalarize(&better, Space::Pd, &[alpha], &b).unwrap();
            let sw = scalarize(&worse, Space::Pd, &[alpha], &b).unwrap();
            assert!(sb <= sw);
            if alpha > 0.0 {
                assert!(sb < sw);
            }
        }
    }

    #[test]
    fn argmin_invariant_to_affine_rescaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let pts: Vec<PpaPoint> = (0..40)
            .map(|_| {
                ppa(
                    rng.gen_range(100.0..400.0),
                    rng.gen_range(1.0..4.0),
                    rng.gen_range(0.2..0.9),
                )
            })
            .collect();
        let scaled: Vec<PpaPoint> = pts
            .iter()
            .map(|p| ppa(p.area, 7.0 * p.power + 3.0, 0.25 * p.delay + 1.0))
            .collect();
        let b1 = bounds_of(Space::Pd, pts.iter()).unwrap();
        let b2 = bounds_of(Space::Pd, scaled.iter()).unwrap();
        for alpha in default_alphas() {
            let argmin = |set: &[PpaPoint], b: &Bounds| {
                (0..set.len())
                    .min_by(|&i, &j| {
                        scalarize(&set[i], Space::Pd, &[alpha], b)
                            .unwrap()
                            .partial_cmp(&scalarize(&set[j], Space::Pd, &[alpha], b).unwrap())
                            .unwrap()
                    })
                    .unwrap()
            };
            assert_eq!(argmin(&pts, &b1), argmin(&scaled, &b2), "alpha {alpha}");
        }
    }

    #[test]
    fn weight_tuple_counts() {
        let alphas = default_alphas();
        assert_eq!(alphas.len(), 15);
        assert_eq!(weight_tuples(Space::Pd, &alphas).len(), 15);
        assert_eq!(weight_tuples(Space::Ppa, &alphas).len(), 225);
    }

    fn labeled_space(
        count: usize,
        seed: u64,
    ) -> (Vec<(String, FeatureVector, PpaPoint)>, Vec<(String, FeatureVector)>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut labeled = Vec::new();
        let mut space = Vec::new();
        for i in 0..count {
            let fv = FeatureVector {
                size: rng.gen_range(100usize..220),
                mfo: rng.gen_range(4usize..32),
                target_delay: [0.1, 0.2, 0.3, 0.4][i % 4],
                utilization: [0.5, 0.6, 0.7, 0.8][(i / 4) % 4],
                spfo: vec![rng.gen_range(0u64..40), rng.gen_range(0u64..40)],
            };
            let id = format!("d{i}");
            let ppa = evaluate_synthetic(&fv, 77, 0.0);
            labeled.push((id.clone(), fv.clone(), ppa));
            space.push((id, fv));
        }
        (labeled, space)
    }

    #[test]
    fn sweep_counts_models_and_bounds_candidates() {
        let (labeled, space) = labeled_space(60, 3);
        let oracle = SyntheticOracle::new(77, 0.0);
        let mut cfg = SweepConfig::new(Space::Pd, 5);
        cfg.top_k = 4;
        let report = sweep(&labeled, &space, &oracle, &cfg).unwrap();
        assert_eq!(report.models_fitted, 15);
        assert!(report.candidates.len() <= 15 * cfg.top_k);
        assert_eq!(report.counts.verify, report.candidates.len());
        assert!(!report.frontier.points.is_empty());
        assert!(report.header_note.contains("kernel ridge"));
        assert_eq!(report.mse.len(), 2);
    }

    #[test]
    fn sweep_finds_true_scalarized_minimizers() {
        // Full space == dataset: with an interpolating regressor, each
        // weight's true minimizer must appear in the candidate union.
        let (labeled, space) = labeled_space(40, 9);
        let oracle = SyntheticOracle::new(77, 0.0);
        let mut cfg = SweepConfig::new(Space::Pd, 5);
        cfg.top_k = 10;
        let report = sweep(&labeled, &space, &oracle, &cfg).unwrap();
        let bounds = bounds_of(Space::Pd, labeled.iter().map(|(_, _, p)| p)).unwrap();
        for alpha in &cfg.alphas {
            let best = (0..labeled.len())
                .min_by(|&i, &j| {
                    scalarize(&labeled[i].2, Space::Pd, &[*alpha], &bounds)
                        .unwrap()
                        .partial_cmp(
                            &scalarize(&labeled[j].2, Space::Pd, &[*alpha], &bounds).unwrap(),
                        )
                        .unwrap()
                })
                .unwrap();
            assert!(
                report.candidates.contains(&best),
                "alpha {alpha}: true minimizer {best} missing"
            );
        }
    }

    #[test]
    fn sweep_is_deterministic() {
        let (labeled, space) = labeled_space(50, 4);
        let cfg = SweepConfig::new(Space::Ad, 8);
        let a = sweep(&labeled, &space, &SyntheticOracle::new(1, 0.0), &cfg).unwrap();
        let b = sweep(&labeled, &space, &SyntheticOracle::new(1, 0.0), &cfg).unwrap();
        assert_eq!(a.candidates, b.candidates);
        assert_eq!(a.verified, b.verified);
        assert_eq!(a.mse, b.mse);
    }

    #[test]
    fn degenerate_targets_are_rejected() {
        let fv = FeatureVector {
            size: 100,
            mfo: 8,
            target_delay: 0.2,
            utilization: 0.7,
            spfo: vec![1],
        };
        let labeled: Vec<_> = (0..12)
            .map(|i| (format!("d{i}"), fv.clone(), ppa(100.0 + i as f64, 1.0, 0.3)))
            .collect();
        let space: Vec<_> = labeled.iter().map(|(i, f, _)| (i.clone(), f.clone())).collect();
        let oracle = SyntheticOracle::new(0, 0.0);
        // Power and delay are constant across the set -> degenerate bounds.
        let cfg = SweepConfig::new(Space::Pd, 1);
        assert!(matches!(
            sweep(&labeled, &space, &oracle, &cfg),
            Err(SweepError::DegenerateBounds(_))
        ));
    }
}
