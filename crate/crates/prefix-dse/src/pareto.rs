// SPDX-License-Identifier: Apache-2.0

//! Dominance tests, Pareto-set extraction, hypervolume (2-D and 3-D), and
//! hypervolume error.
//!
//! All objectives are minimized. Hypervolume is measured against a reference
//! point that every front point must weakly dominate; by convention the
//! reference point is the per-dimension maximum over the evaluation universe.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParetoError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("unsupported objective dimension {0} (2 or 3 supported)")]
    UnsupportedDimension(usize),
    #[error("point {index} exceeds the reference point in dimension {dim}")]
    BeyondReference { index: usize, dim: usize },
    #[error("true front has zero hypervolume; error ratio undefined")]
    ZeroTrueVolume,
}

/// A set of mutually non-dominated objective points with the designs that
/// achieve them.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoSet {
    pub points: Vec<(usize, Vec<f64>)>,
    pub reference_point: Vec<f64>,
}

/// Strict Pareto dominance under minimization: `p` is no worse everywhere and
/// strictly better somewhere.
pub fn dominates(p: &[f64], q: &[f64]) -> Result<bool, ParetoError> {
    if p.len() != q.len() {
        return Err(ParetoError::DimensionMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    let mut strict = false;
    for (a, b) in p.iter().zip(q) {
        if a > b {
            return Ok(false);
        }
        if a < b {
            strict = true;
        }
    }
    Ok(strict)
}

/// Per-dimension maxima of a point set — the reference-point convention used
/// throughout the crate.
pub fn reference_point(points: &[(usize, Vec<f64>)]) -> Vec<f64> {
    let dims = points.first().map_or(0, |(_, v)| v.len());
    let mut r = vec![f64::NEG_INFINITY; dims];
    for (_, v) in points {
        for (ri, vi) in r.iter_mut().zip(v) {
            *ri = ri.max(*vi);
        }
    }
    r
}

/// Maximal non-dominated subset. Duplicate objective vectors are all kept.
pub fn extract_front(points: &[(usize, Vec<f64>)]) -> ParetoSet {
    let reference_point = reference_point(points);
    let mut kept = Vec::new();
    for (i, (id, p)) in points.iter().enumerate() {
        let dominated = points.iter().enumerate().any(|(j, (_, q))| {
            i != j && dominates(q, p).unwrap_or(false)
        });
        if !dominated {
            kept.push((*id, p.clone()));
        }
    }
    ParetoSet {
        points: kept,
        reference_point,
    }
}

/// Exact hypervolume of the region dominated by `front` and bounded by its
/// reference point. Supports 2-D (sweep line) and 3-D (slice and sweep).
pub fn hypervolume(front: &ParetoSet) -> Result<f64, ParetoError> {
    if front.points.is_empty() {
        return Ok(0.0);
    }
    let dims = front.reference_point.len();
    let mut uniq: Vec<&Vec<f64>> = Vec::new();
    for (idx, (_, p)) in front.points.iter().enumerate() {
        if p.len() != dims {
            return Err(ParetoError::DimensionMismatch {
                left: p.len(),
                right: dims,
            });
        }
        for (d, (pi, ri)) in p.iter().zip(&front.reference_point).enumerate() {
            if pi > ri {
                return Err(ParetoError::BeyondReference { index: idx, dim: d });
            }
        }
        if !uniq.iter().any(|q| *q == p) {
            uniq.push(p);
        }
    }
    match dims {
        2 => Ok(hv2(&uniq, &front.reference_point)),
        3 => Ok(hv3(&uniq, &front.reference_point)),
        d => Err(ParetoError::UnsupportedDimension(d)),
    }
}

/// 2-D sweep: sort by x ascending, accumulate rectangles down to the best y
/// seen so far.
fn hv2(points: &[&Vec<f64>], reference: &[f64]) -> f64 {
    let mut pts: Vec<(f64, f64)> = points.iter().map(|p| (p[0], p[1])).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut vol = 0.0;
    let mut best_y = reference[1];
    for (x, y) in pts {
        if y < best_y {
            vol += (reference[0] - x) * (best_y - y);
            best_y = y;
        }
    }
    vol
}

/// 3-D slice-and-sweep: sort by z, integrate the 2-D hypervolume of the
/// accumulated (x, y) staircase over each z slab.
fn hv3(points: &[&Vec<f64>], reference: &[f64]) -> f64 {
    let mut pts: Vec<(f64, f64, f64)> =
        points.iter().map(|p| (p[2], p[0], p[1])).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut vol = 0.0;
    let mut active: Vec<Vec<f64>> = Vec::new();
    let ref2 = [reference[0], reference[1]];
    let mut i = 0;
    while i < pts.len() {
        let z = pts[i].0;
        while i < pts.len() && pts[i].0 == z {
            active.push(vec![pts[i].1, pts[i].2]);
            i += 1;
        }
        let z_next = pts.get(i).map_or(reference[2], |p| p.0);
        let refs: Vec<&Vec<f64>> = active.iter().collect();
        vol += hv2(&refs, &ref2) * (z_next - z);
    }
    vol
}

/// Relative hypervolume loss of a predicted front versus the true front,
/// both measured against the same reference point.
pub fn hv_error(
    true_front: &ParetoSet,
    predicted_front: &ParetoSet,
    reference: &[f64],
) -> Result<f64, ParetoError> {
    let tf = ParetoSet {
        points: true_front.points.clone(),
        reference_point: reference.to_vec(),
    };
    let pf = ParetoSet {
        points: predicted_front.points.clone(),
        reference_point: reference.to_vec(),
    };
    let vt = hypervolume(&tf)?;
    if vt <= 0.0 {
        return Err(ParetoError::ZeroTrueVolume);
    }
    let vp = hypervolume(&pf)?;
    Ok((vt - vp) / vt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn pts(v: &[&[f64]]) -> Vec<(usize, Vec<f64>)> {
        v.iter().enumerate().map(|(i, p)| (i, p.to_vec())).collect()
    }

    #[test]
    fn dominance_basics() {
        assert!(dominates(&[1.0, 1.0], &[2.0, 2.0]).unwrap());
        assert!(!dominates(&[1.0, 2.0], &[2.0, 1.0]).unwrap());
        assert!(!dominates(&[2.0, 1.0], &[1.0, 2.0]).unwrap());
        assert!(!dominates(&[1.0, 2.0], &[1.0, 2.0]).unwrap());
        assert!(matches!(
            dominates(&[1.0], &[1.0, 2.0]),
            Err(ParetoError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn front_extraction_simple() {
        let f = extract_front(&pts(&[&[1.0, 1.0], &[2.0, 2.0]]));
        assert_eq!(f.points, vec![(0, vec![1.0, 1.0])]);
        let same = extract_front(&pts(&[&[1.0, 1.0], &[1.0, 1.0], &[1.0, 1.0]]));
        assert_eq!(same.points.len(), 3);
    }

    fn brute_force_front(points: &[(usize, Vec<f64>)]) -> Vec<usize> {
        let mut ids = Vec::new();
        for (i, (id, p)) in points.iter().enumerate() {
            let mut dominated = false;
            for (j, (_, q)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                let le = q.iter().zip(p).all(|(a, b)| a <= b);
                let lt = q.iter().zip(p).any(|(a, b)| a < b);
                if le && lt {
                    dominated = true;
                    break;
                }
            }
            if !dominated {
                ids.push(*id);
            }
        }
        ids
    }

    #[test]
    fn front_matches_brute_force_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for dims in [2usize, 3] {
            for _ in 0..50 {
                let points: Vec<(usize, Vec<f64>)> = (0..100)
                    .map(|i| (i, (0..dims).map(|_| rng.gen::<f64>()).collect()))
                    .collect();
                let fast: Vec<usize> =
                    extract_front(&points).points.iter().map(|(i, _)| *i).collect();
                assert_eq!(fast, brute_force_front(&points));
            }
        }
    }

    #[test]
    fn front_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let points: Vec<(usize, Vec<f64>)> = (0..60)
            .map(|i| (i, vec![rng.gen(), rng.gen(), rng.gen()]))
            .collect();
        let once = extract_front(&points);
        let twice = extract_front(&once.points);
        assert_eq!(once.points, twice.points);
    }

    #[test]
    fn hv_single_rectangle() {
        let f = ParetoSet {
            points: pts(&[&[1.0, 1.0]]),
            reference_point: vec![3.0, 3.0],
        };
        assert_relative_eq!(hypervolume(&f).unwrap(), 4.0);
    }

    #[test]
    fn hv_two_point_staircase() {
        let f = ParetoSet {
            points: pts(&[&[1.0, 2.0], &[2.0, 1.0]]),
            reference_point: vec![3.0, 3.0],
        };
        // Inclusion-exclusion: 2 + 2 - 1.
        assert_relative_eq!(hypervolume(&f).unwrap(), 3.0);
    }

    #[test]
    fn hv_empty_and_errors() {
        let empty = ParetoSet {
            points: vec![],
            reference_point: vec![1.0, 1.0],
        };
        assert_eq!(hypervolume(&empty).unwrap(), 0.0);
        let bad = ParetoSet {
            points: pts(&[&[4.0, 1.0]]),
            reference_point: vec![3.0, 3.0],
        };
        assert!(matches!(
            hypervolume(&bad),
            Err(ParetoError::BeyondReference { index: 0, dim: 0 })
        ));
    }

    #[test]
    fn hv_duplicates_counted_once() {
        let f = ParetoSet {
            points: pts(&[&[1.0, 1.0], &[1.0, 1.0]]),
            reference_point: vec![3.0, 3.0],
        };
        assert_relative_eq!(hypervolume(&f).unwrap(), 4.0);
    }

    #[test]
    fn hv3_axis_boxes() {
        // Two disjoint-corner boxes plus overlap, hand-computed:
        // a=(0,1,1), b=(1,0,1) with ref (2,2,2).
        // vol(a)=2*1*1=2, vol(b)=1*2*1=2, overlap=1*1*1=1 -> 3.
        let f = ParetoSet {
            points: pts(&[&[0.0, 1.0, 1.0], &[1.0, 0.0, 1.0]]),
            reference_point: vec![2.0, 2.0, 2.0],
        };
        assert_relative_eq!(hypervolume(&f).unwrap(), 3.0);
    }

    fn monte_carlo_hv(front: &ParetoSet, samples: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dims = front.reference_point.len();
        let lo: Vec<f64> = (0..dims)
            .map(|d| {
                front
                    .points
                    .iter()
                    .map(|(_, p)| p[d])
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        let hi = &front.reference_point;
        let mut hits = 0usize;
        for _ in 0..samples {
            let x: Vec<f64> = (0..dims)
                .map(|d| rng.gen_range(lo[d]..hi[d]))
                .collect();
            if front
                .points
                .iter()
                .any(|(_, p)| p.iter().zip(&x).all(|(a, b)| a <= b))
            {
                hits += 1;
            }
        }
        let box_vol: f64 = (0..dims).map(|d| hi[d] - lo[d]).product();
        box_vol * hits as f64 / samples as f64
    }

    #[test]
    fn hv_matches_monte_carlo() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for dims in [2usize, 3] {
            for rep in 0..10 {
                let raw: Vec<(usize, Vec<f64>)> = (0..20)
                    .map(|i| (i, (0..dims).map(|_| rng.gen::<f64>()).collect()))
                    .collect();
                let mut front = extract_front(&raw);
                front.reference_point = vec![1.0; dims];
                let exact = hypervolume(&front).unwrap();
                let mc = monte_carlo_hv(&front, 200_000, rep);
                assert!(
                    (exact - mc).abs() <= 0.01 * exact.max(1e-9) + 5e-3,
                    "dims={dims} rep={rep} exact={exact} mc={mc}"
                );
            }
        }
    }

    #[test]
    fn hv_monotone_under_addition() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let raw: Vec<(usize, Vec<f64>)> = (0..15)
                .map(|i| (i, vec![rng.gen(), rng.gen()]))
                .collect();
            let mut front = extract_front(&raw[..10].to_vec());
            front.reference_point = vec![1.0, 1.0];
            let base = hypervolume(&front).unwrap();
            let mut grown = extract_front(&raw);
            grown.reference_point = vec![1.0, 1.0];
            assert!(hypervolume(&grown).unwrap() >= base - 1e-12);
        }
    }

    #[test]
    fn hv_error_cases() {
        let truth = ParetoSet {
            points: pts(&[&[1.0, 2.0], &[2.0, 1.0]]),
            reference_point: vec![3.0, 3.0],
        };
        let reference = [3.0, 3.0];
        assert_relative_eq!(hv_error(&truth, &truth, &reference).unwrap(), 0.0);
        let partial = ParetoSet {
            points: pts(&[&[1.0, 2.0]]),
            reference_point: vec![3.0, 3.0],
        };
        assert_relative_eq!(
            hv_error(&truth, &partial, &reference).unwrap(),
            (3.0 - 2.0) / 3.0
        );
        // Dominated extras do not change the error.
        let superset = ParetoSet {
            points: pts(&[&[1.0, 2.0], &[2.0, 1.0], &[2.5, 2.5]]),
            reference_point: vec![3.0, 3.0],
        };
        assert_relative_eq!(hv_error(&truth, &superset, &reference).unwrap(), 0.0);
        let degenerate = ParetoSet {
            points: pts(&[&[3.0, 3.0]]),
            reference_point: vec![3.0, 3.0],
        };
        assert!(matches!(
            hv_error(&degenerate, &truth, &reference),
            Err(ParetoError::ZeroTrueVolume)
        ));
    }
}
