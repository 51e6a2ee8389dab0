// SPDX-License-Identifier: Apache-2.0

//! Small end-to-end library demo: run the active-learning explorer and the
//! scalarized sweep on the seeded synthetic benchmark space and compare
//! their frontier quality against exhaustive ground truth.

use prefix_dse::alpha_sweep::{sweep, Space, SweepConfig};
use prefix_dse::features::benchmark_space;
use prefix_dse::oracle::{EvalClass, Oracle, SyntheticOracle};
use prefix_dse::pal::{self, objective_values, Objective, PalConfig};
use prefix_dse::pareto::{extract_front, hv_error, reference_point};
use rand::{Rng, SeedableRng};

fn main() {
    let designs = benchmark_space(2000, 1);
    let objectives = vec![Objective::Power, Objective::Delay];

    // Exhaustive ground truth for scoring only.
    let truth = SyntheticOracle::new(42, 0.02);
    let universe: Vec<(usize, Vec<f64>)> = designs
        .iter()
        .enumerate()
        .map(|(i, (id, fv))| {
            let p = truth.evaluate(id, fv, EvalClass::Init).unwrap();
            (i, objective_values(&p, &objectives))
        })
        .collect();
    let truth_front = extract_front(&universe);
    let reference = reference_point(&universe);

    // Pareto active learning.
    let oracle = SyntheticOracle::new(42, 0.02);
    let mut cfg = PalConfig::new(objectives.clone(), 7);
    cfg.init_size = Some(150);
    cfg.t_max = 10;
    cfg.batch_size = 2;
    let report = pal::run(&designs, &oracle, &cfg).unwrap();
    let pts: Vec<(usize, Vec<f64>)> = report
        .frontier
        .iter()
        .map(|p| (p.index, p.objectives.clone()))
        .collect();
    let eta = hv_error(&truth_front, &extract_front(&pts), &reference).unwrap();
    println!(
        "pal:   eta {eta:.4} with {} oracle calls ({} frontier points)",
        report.counts.total(),
        report.frontier.len()
    );

    // Scalarized sweep baseline over a 400-design training sample.
    let oracle = SyntheticOracle::new(42, 0.02);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(500);
    let mut idx: Vec<usize> = (0..designs.len()).collect();
    for i in (1..idx.len()).rev() {
        idx.swap(i, rng.gen_range(0..=i));
    }
    let labeled: Vec<_> = idx[..400]
        .iter()
        .map(|&i| {
            let (id, fv) = &designs[i];
            let p = oracle.evaluate(id, fv, EvalClass::Init).unwrap();
            (id.clone(), fv.clone(), p)
        })
        .collect();
    let r = sweep(&labeled, &designs, &oracle, &SweepConfig::new(Space::Pd, 500)).unwrap();
    let pts: Vec<(usize, Vec<f64>)> = r
        .verified
        .iter()
        .map(|v| (v.index, v.objectives.clone()))
        .collect();
    let eta = hv_error(&truth_front, &extract_front(&pts), &reference).unwrap();
    println!(
        "sweep: eta {eta:.4} with {} oracle calls ({} verified points)",
        oracle.counts().total(),
        r.verified.len()
    );
}
