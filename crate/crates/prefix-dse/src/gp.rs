// SPDX-License-Identifier: Apache-2.0

//! Gaussian-process regression with an isotropic radial-basis-function
//! kernel: exact posterior mean/variance and marginal-likelihood
//! hyperparameter fitting. One model is fit per objective; predictions feed
//! the uncertainty regions of the active-learning engine.

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GpError {
    #[error("need at least 2 training points, got {0}")]
    NotEnoughData(usize),
    #[error("dimension mismatch: model has {expected} features, input has {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("covariance factorization failed even with maximum jitter")]
    FactorizationFailed,
    #[error("posterior variance {0} fell below the numerical-health floor")]
    NegativeVariance(f64),
    #[error("training inputs have inconsistent dimensionality")]
    RaggedInputs,
}

/// Kernel hyperparameters. `k(x, x') = signal_variance *
/// exp(-|x - x'|^2 / (2 length_scale^2))`, plus `noise_variance` on the
/// diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperparams {
    pub signal_variance: f64,
    pub length_scale: f64,
    pub noise_variance: f64,
}

/// Fitting controls: multi-restart gradient ascent on the log marginal
/// likelihood over log-hyperparameters.
#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    pub restarts: usize,
    pub iterations: usize,
    pub seed: u64,
    /// Lower bound kept on the noise variance during optimization.
    pub noise_floor: f64,
    /// Pin the noise variance to this value instead of optimizing it
    /// (e.g. for noise-free data).
    pub fixed_noise: Option<f64>,
    /// Optional explicit starting point for the first restart.
    pub init: Option<Hyperparams>,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            restarts: 5,
            iterations: 100,
            seed: 0,
            noise_floor: 1e-8,
            fixed_noise: None,
            init: None,
        }
    }
}

/// A fitted model. Training inputs are standardized internally; callers pass
/// raw feature vectors to both `fit` and `predict`.
#[derive(Debug, Clone)]
pub struct GpModel {
    x_mean: Vec<f64>,
    x_scale: Vec<f64>,
    train_x: DMatrix<f64>, // standardized, one row per point
    y_mean: f64,
    hp: Hyperparams,
    chol_l: DMatrix<f64>,
    alpha: DVector<f64>,
    /// Diagonal jitter that had to be added for the factorization, if any.
    pub jitter: f64,
    /// True when the targets had zero variance; the model is a constant.
    pub degenerate: bool,
}

/// Mean and standard deviation of the posterior at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub mean: f64,
    pub stddev: f64,
}

const JITTER_LADDER: [f64; 6] = [0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6];
/// Health floor: a computed variance below this indicates broken algebra
/// rather than rounding, and fails the run.
const VARIANCE_HEALTH_FLOOR: f64 = -1e-8;

fn standardize_stats(x: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let d = x[0].len();
    let m = x.len() as f64;
    let mut mean = vec![0.0; d];
    for row in x {
        for (s, v) in mean.iter_mut().zip(row) {
            *s += v;
        }
    }
    for s in &mut mean {
        *s /= m;
    }
    let mut scale = vec![0.0; d];
    for row in x {
        for (j, v) in row.iter().enumerate() {
            scale[j] += (v - mean[j]).powi(2);
        }
    }
    for s in &mut scale {
        *s = (*s / m).sqrt();
        if *s < 1e-12 {
            *s = 1.0; // constant dimension: map to zero, do not blow up
        }
    }
    (mean, scale)
}

fn to_matrix(x: &[Vec<f64>], mean: &[f64], scale: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(x.len(), mean.len(), |i, j| (x[i][j] - mean[j]) / scale[j])
}

fn sq_dist(a: &DMatrix<f64>, i: usize, b: &DMatrix<f64>, j: usize) -> f64 {
    (0..a.ncols())
        .map(|k| (a[(i, k)] - b[(j, k)]).powi(2))
        .sum()
}

/// Kernel matrix of the noise-free part between row sets `a` and `b`.
fn kernel_matrix(a: &DMatrix<f64>, b: &DMatrix<f64>, hp: &Hyperparams) -> DMatrix<f64> {
    let inv2l2 = 0.5 / (hp.length_scale * hp.length_scale);
    DMatrix::from_fn(a.nrows(), b.nrows(), |i, j| {
        hp.signal_variance * (-sq_dist(a, i, b, j) * inv2l2).exp()
    })
}

fn factorize(
    xs: &DMatrix<f64>,
    hp: &Hyperparams,
) -> Result<(Cholesky<f64, nalgebra::Dyn>, f64), GpError> {
    let kf = kernel_matrix(xs, xs, hp);
    for &jitter in &JITTER_LADDER {
        let mut k = kf.clone();
        for i in 0..k.nrows() {
            k[(i, i)] += hp.noise_variance + jitter;
        }
        if let Some(ch) = Cholesky::new(k) {
            return Ok((ch, jitter));
        }
    }
    Err(GpError::FactorizationFailed)
}

/// Log marginal likelihood and its gradient with respect to
/// (log signal_variance, log length_scale, log noise_variance), for
/// standardized inputs and centered targets.
pub fn lml_and_grad(
    xs: &DMatrix<f64>,
    y: &DVector<f64>,
    hp: &Hyperparams,
) -> Result<(f64, [f64; 3]), GpError> {
    let m = xs.nrows();
    let (chol, _) = factorize(xs, hp)?;
    let alpha = chol.solve(y);
    let log_det: f64 = (0..m).map(|i| chol.l_dirty()[(i, i)].ln()).sum();
    let lml = -0.5 * y.dot(&alpha)
        - log_det
        - 0.5 * m as f64 * (2.0 * std::f64::consts::PI).ln();

    // d(lml)/d(theta) = 0.5 tr((alpha alpha^T - K^{-1}) dK/dtheta)
    let kinv = chol.inverse();
    let kf = kernel_matrix(xs, xs, hp);
    let mut grad = [0.0f64; 3];
    let l2 = hp.length_scale * hp.length_scale;
    for i in 0..m {
        for j in 0..m {
            let w = alpha[i] * alpha[j] - kinv[(i, j)];
            // dK/d(log sf2) = Kf
            grad[0] += 0.5 * w * kf[(i, j)];
            // dK/d(log l) = Kf * r^2 / l^2
            grad[1] += 0.5 * w * kf[(i, j)] * sq_dist(xs, i, xs, j) / l2;
            // dK/d(log sn2) = sn2 I
            if i == j {
                grad[2] += 0.5 * w * hp.noise_variance;
            }
        }
    }
    Ok((lml, grad))
}

fn optimize(
    xs: &DMatrix<f64>,
    y: &DVector<f64>,
    opts: &FitOptions,
    y_var: f64,
) -> Result<Hyperparams, GpError> {
    let d = xs.ncols() as f64;
    let default_init = Hyperparams {
        signal_variance: y_var.max(1e-12),
        length_scale: d.sqrt().max(1.0),
        noise_variance: (1e-4 * y_var).max(opts.noise_floor),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best: Option<(f64, Hyperparams)> = None;
    for restart in 0..opts.restarts.max(1) {
        let start = if restart == 0 {
            opts.init.unwrap_or(default_init)
        } else {
            // Log-space perturbation of the heuristic start.
            let mut j = || rng.gen_range(-1.5f64..1.5);
            Hyperparams {
                signal_variance: default_init.signal_variance * j().exp(),
                length_scale: default_init.length_scale * j().exp(),
                noise_variance: (default_init.noise_variance * j().exp())
                    .max(opts.noise_floor),
            }
        };
        let mut theta = [
            start.signal_variance.ln(),
            start.length_scale.ln(),
            opts.fixed_noise
                .unwrap_or(start.noise_variance)
                .max(opts.noise_floor)
                .ln(),
        ];
        let floor_log = opts.noise_floor.ln();
        let hp_of = |t: &[f64; 3]| Hyperparams {
            signal_variance: t[0].exp(),
            length_scale: t[1].exp(),
            noise_variance: t[2].exp().max(opts.noise_floor),
        };
        let Ok((mut value, mut grad)) = lml_and_grad(xs, y, &hp_of(&theta)) else {
            continue;
        };
        let mut step = 0.1;
        for _ in 0..opts.iterations {
            if opts.fixed_noise.is_some() {
                grad[2] = 0.0;
            }
            let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
            if norm < 1e-9 {
                break;
            }
            let mut trial = theta;
            for (t, g) in trial.iter_mut().zip(&grad) {
                *t += step * g / norm.max(1.0);
                *t = t.clamp(floor_log.min(-30.0), 30.0);
            }
            match lml_and_grad(xs, y, &hp_of(&trial)) {
                Ok((v, g)) if v > value => {
                    theta = trial;
                    value = v;
                    grad = g;
                    step = (step * 1.2).min(1.0);
                }
                _ => {
                    step *= 0.5;
                    if step < 1e-6 {
                        break;
                    }
                }
            }
        }
        if best.as_ref().map_or(true, |(bv, _)| value > *bv) {
            best = Some((value, hp_of(&theta)));
        }
    }
    best.map(|(_, hp)| hp).ok_or(GpError::FactorizationFailed)
}

/// Fit a model by multi-restart gradient ascent on the log marginal
/// likelihood. Zero-variance targets yield a flagged constant model.
pub fn fit(x: &[Vec<f64>], y: &[f64], opts: &FitOptions) -> Result<GpModel, GpError> {
    if x.len() < 2 || x.len() != y.len() {
        return Err(GpError::NotEnoughData(x.len().min(y.len())));
    }
    let dims = x[0].len();
    if x.iter().any(|r| r.len() != dims) {
        return Err(GpError::RaggedInputs);
    }
    let (x_mean, x_scale) = standardize_stats(x);
    let xs = to_matrix(x, &x_mean, &x_scale);
    let m = y.len() as f64;
    let y_mean = y.iter().sum::<f64>() / m;
    let y_var = y.iter().map(|v| (v - y_mean).powi(2)).sum::<f64>() / m;
    if y_var < 1e-24 {
        return Ok(GpModel {
            x_mean,
            x_scale,
            train_x: xs,
            y_mean,
            hp: Hyperparams {
                signal_variance: 0.0,
                length_scale: 1.0,
                noise_variance: 0.0,
            },
            chol_l: DMatrix::zeros(0, 0),
            alpha: DVector::zeros(0),
            jitter: 0.0,
            degenerate: true,
        });
    }
    let yc = DVector::from_iterator(y.len(), y.iter().map(|v| v - y_mean));
    let hp = optimize(&xs, &yc, opts, y_var)?;
    GpModel::assemble(x_mean, x_scale, xs, y_mean, yc, hp)
}

/// Build a model with fixed, caller-chosen hyperparameters (no
/// optimization). Inputs are standardized the same way as in [`fit`].
pub fn fit_fixed(x: &[Vec<f64>], y: &[f64], hp: Hyperparams) -> Result<GpModel, GpError> {
    if x.len() < 2 || x.len() != y.len() {
        return Err(GpError::NotEnoughData(x.len().min(y.len())));
    }
    let (x_mean, x_scale) = standardize_stats(x);
    let xs = to_matrix(x, &x_mean, &x_scale);
    let y_mean = y.iter().sum::<f64>() / y.len() as f64;
    let yc = DVector::from_iterator(y.len(), y.iter().map(|v| v - y_mean));
    GpModel::assemble(x_mean, x_scale, xs, y_mean, yc, hp)
}

/// Like [`fit_fixed`] but without input standardization; inputs are used in
/// their raw coordinates. Useful when models over nested training sets must
/// share one coordinate frame.
pub fn fit_fixed_raw(x: &[Vec<f64>], y: &[f64], hp: Hyperparams) -> Result<GpModel, GpError> {
    if x.len() < 2 || x.len() != y.len() {
        return Err(GpError::NotEnoughData(x.len().min(y.len())));
    }
    let d = x[0].len();
    let (x_mean, x_scale) = (vec![0.0; d], vec![1.0; d]);
    let xs = to_matrix(x, &x_mean, &x_scale);
    let y_mean = y.iter().sum::<f64>() / y.len() as f64;
    let yc = DVector::from_iterator(y.len(), y.iter().map(|v| v - y_mean));
    GpModel::assemble(x_mean, x_scale, xs, y_mean, yc, hp)
}

impl GpModel {
    fn assemble(
        x_mean: Vec<f64>,
        x_scale: Vec<f64>,
        xs: DMatrix<f64>,
        y_mean: f64,
        yc: DVector<f64>,
        hp: Hyperparams,
    ) -> Result<GpModel, GpError> {
        let (chol, jitter) = factorize(&xs, &hp)?;
        let mut alpha = chol.solve(&yc);
        // Iterative refinement: the kernel matrix is often near-singular at
        // tiny noise levels, and a couple of residual corrections recover
        // most of the accuracy the raw triangular solve loses.
        let mut ktilde = kernel_matrix(&xs, &xs, &hp);
        for i in 0..ktilde.nrows() {
            ktilde[(i, i)] += hp.noise_variance + jitter;
        }
        for _ in 0..2 {
            let residual = &yc - &ktilde * &alpha;
            alpha += chol.solve(&residual);
        }
        Ok(GpModel {
            x_mean,
            x_scale,
            train_x: xs,
            y_mean,
            hp,
            chol_l: chol.l(),
            alpha,
            jitter,
            degenerate: false,
        })
    }

    pub fn hyperparams(&self) -> Hyperparams {
        self.hp
    }

    pub fn predict(&self, x: &[f64]) -> Result<Prediction, GpError> {
        let mut out = self.predict_batch(std::slice::from_ref(&x.to_vec()))?;
        Ok(out.pop().unwrap())
    }

    /// Exact posterior at each query point: `m(x) = k(x,X)^T (K + s^2 I)^{-1}
    /// Y` and the matching predictive variance (including the noise term).
    pub fn predict_batch(&self, xq: &[Vec<f64>]) -> Result<Vec<Prediction>, GpError> {
        let d = self.x_mean.len();
        if let Some(bad) = xq.iter().find(|r| r.len() != d) {
            return Err(GpError::DimensionMismatch {
                expected: d,
                got: bad.len(),
            });
        }
        if self.degenerate {
            return Ok(xq
                .iter()
                .map(|_| Prediction {
                    mean: self.y_mean,
                    stddev: 0.0,
                })
                .collect());
        }
        let q = to_matrix(xq, &self.x_mean, &self.x_scale);
        let kstar = kernel_matrix(&self.train_x, &q, &self.hp); // m x q
        // v = L^{-1} k*; var = sf2 + sn2 - |v|^2 per column.
        let mut v = kstar.clone();
        self.chol_l
            .solve_lower_triangular_mut(&mut v)
            .then_some(())
            .ok_or(GpError::FactorizationFailed)?;
        let prior = self.hp.signal_variance + self.hp.noise_variance;
        let mut out = Vec::with_capacity(xq.len());
        for j in 0..xq.len() {
            let mean = self.y_mean + kstar.column(j).dot(&self.alpha);
            let var = prior - v.column(j).norm_squared();
            if var < VARIANCE_HEALTH_FLOOR {
                return Err(GpError::NegativeVariance(var));
            }
            out.push(Prediction {
                mean,
                stddev: var.max(0.0).sqrt(),
            });
        }
        Ok(out)
    }
}
