// SPDX-License-Identifier: Apache-2.0

//! Evaluation stand-in for the synthesis/place-and-route flow: maps a design
//! instance to measured (area, power, delay), either through a deterministic
//! synthetic cost model or by ingesting externally produced measurement CSVs.
//! Every call is accounted to an evaluation class (INIT / ACTIVE-SAMPLE /
//! VERIFY) so exploration reports can break down oracle usage.

use std::collections::HashMap;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::FeatureVector;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("row {row}: {msg}")]
    BadRow { row: usize, msg: String },
    #[error("missing column {0}")]
    MissingColumn(&'static str),
    #[error("duplicate key ({design_id}, {target_delay}, {utilization}) at row {row}")]
    DuplicateKey {
        design_id: String,
        target_delay: f64,
        utilization: f64,
        row: usize,
    },
    #[error("no measurement for ({design_id}, {target_delay}, {utilization})")]
    MissingMeasurement {
        design_id: String,
        target_delay: f64,
        utilization: f64,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A measured or predicted point in objective space. Units are µm² (area),
/// mW (power), ns (delay); all strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PpaPoint {
    pub area: f64,
    pub power: f64,
    pub delay: f64,
}

impl PpaPoint {
    pub fn to_vec(self) -> Vec<f64> {
        vec![self.area, self.power, self.delay]
    }
}

/// One labeled design instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub design_id: String,
    pub target_delay: f64,
    pub utilization: f64,
    pub ppa: PpaPoint,
    pub source: EvalSource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalSource {
    Synthetic,
    Ingested,
}

/// Accounting class of one oracle call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalClass {
    Init,
    ActiveSample,
    Verify,
}

/// Per-class oracle-call counters; safe for concurrent accumulation.
#[derive(Debug, Default)]
pub struct EvalCounter {
    init: AtomicUsize,
    active_sample: AtomicUsize,
    verify: AtomicUsize,
}

/// A plain snapshot of [`EvalCounter`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalCounts {
    pub init: usize,
    pub active_sample: usize,
    pub verify: usize,
}

impl EvalCounts {
    pub fn total(&self) -> usize {
        self.init + self.active_sample + self.verify
    }
}

impl EvalCounter {
    pub fn record(&self, class: EvalClass) {
        let slot = match class {
            EvalClass::Init => &self.init,
            EvalClass::ActiveSample => &self.active_sample,
            EvalClass::Verify => &self.verify,
        };
        slot.fetch_add(1, Ordering::Relaxed);
    }

    pub fn counts(&self) -> EvalCounts {
        EvalCounts {
            init: self.init.load(Ordering::Relaxed),
            active_sample: self.active_sample.load(Ordering::Relaxed),
            verify: self.verify.load(Ordering::Relaxed),
        }
    }
}

/// Versioned constants of the synthetic cost model. Changing any of these is
/// a breaking change to golden test data.
pub mod model_v1 {
    pub const VERSION: &str = "synthetic-v1";
    /// Area: base + per-node cost + placement overhead at low utilization.
    pub const AREA_BASE: f64 = 40.0;
    pub const AREA_PER_NODE: f64 = 1.9;
    pub const AREA_UTIL: f64 = 1.1;
    /// Power: per-node switching cost, inflated as target delay tightens.
    pub const POWER_BASE: f64 = 0.8;
    pub const POWER_PER_NODE: f64 = 0.012;
    pub const POWER_TD: f64 = 0.02;
    /// Delay: wire/congestion cost from fan-out and sum-path-fan-out, plus a
    /// convex penalty for aggressive target delays, plus utilization load.
    pub const DELAY_BASE: f64 = 0.12;
    pub const DELAY_MFO: f64 = 0.010;
    pub const DELAY_SPFO: f64 = 0.0015;
    pub const DELAY_TD: f64 = 0.020;
    pub const DELAY_UTIL: f64 = 0.004;
    /// Default lognormal measurement-noise sigma.
    pub const NOISE_SIGMA: f64 = 0.02;
}

fn fv_hash(fv: &FeatureVector) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    let mut absorb = |x: u64| {
        for b in x.to_le_bytes() {
            h = (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    for v in fv.to_dense() {
        absorb(v.to_bits());
    }
    h
}

/// Deterministic synthetic measurement. The model is monotone: area and
/// power strictly increase with size; delay increases with mfo and mean
/// spfo. Conflicts arise because small graphs need high fan-out, so (area,
/// power) and delay pull in opposite directions. With `noise_sigma > 0` a
/// lognormal factor seeded per-instance (order-independent) is applied.
pub fn evaluate_synthetic(fv: &FeatureVector, noise_seed: u64, noise_sigma: f64) -> PpaPoint {
    use model_v1::*;
    let s = fv.size as f64;
    let mean_spfo = if fv.spfo.is_empty() {
        0.0
    } else {
        fv.spfo.iter().sum::<u64>() as f64 / fv.spfo.len() as f64
    };
    let td = fv.target_delay;
    let util = fv.utilization;
    let area = AREA_BASE + AREA_PER_NODE * s + AREA_UTIL * s / util;
    let power = POWER_BASE + POWER_PER_NODE * s * (1.0 + POWER_TD / td);
    let tightness = (0.4 / td - 1.0).powi(2);
    let delay = DELAY_BASE
        + DELAY_MFO * fv.mfo as f64
        + DELAY_SPFO * mean_spfo
        + DELAY_TD * tightness
        + DELAY_UTIL * util * fv.mfo as f64;
    let mut point = PpaPoint { area, power, delay };
    if noise_sigma > 0.0 {
        // Three independent lognormal factors from a per-instance stream.
        let mut state = noise_seed ^ fv_hash(fv);
        let mut next_normal = || {
            // splitmix64 for the uniforms, Box-Muller for the normal.
            let mut u = || {
                state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
                let mut z = state;
                z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
                z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
                z ^= z >> 31;
                (z >> 11) as f64 / (1u64 << 53) as f64
            };
            let (a, b) = (u().max(f64::MIN_POSITIVE), u());
            (-2.0 * a.ln()).sqrt() * (std::f64::consts::TAU * b).cos()
        };
        point.area *= (noise_sigma * next_normal()).exp();
        point.power *= (noise_sigma * next_normal()).exp();
        point.delay *= (noise_sigma * next_normal()).exp();
    }
    point
}

/// Oracle abstraction used by the exploration engines.
pub trait Oracle {
    fn evaluate(&self, design_id: &str, fv: &FeatureVector, class: EvalClass)
        -> Result<PpaPoint, OracleError>;
    fn counts(&self) -> EvalCounts;
}

/// The synthetic cost model as an [`Oracle`].
pub struct SyntheticOracle {
    pub noise_seed: u64,
    pub noise_sigma: f64,
    counter: EvalCounter,
}

impl SyntheticOracle {
    pub fn new(noise_seed: u64, noise_sigma: f64) -> Self {
        SyntheticOracle {
            noise_seed,
            noise_sigma,
            counter: EvalCounter::default(),
        }
    }
}

impl Oracle for SyntheticOracle {
    fn evaluate(
        &self,
        _design_id: &str,
        fv: &FeatureVector,
        class: EvalClass,
    ) -> Result<PpaPoint, OracleError> {
        self.counter.record(class);
        Ok(evaluate_synthetic(fv, self.noise_seed, self.noise_sigma))
    }

    fn counts(&self) -> EvalCounts {
        self.counter.counts()
    }
}

/// An [`Oracle`] backed by ingested measurements, keyed by
/// (design_id, target_delay, utilization).
pub struct DatasetOracle {
    map: HashMap<(String, u64, u64), PpaPoint>,
    counter: EvalCounter,
}

fn setting_key(design_id: &str, td: f64, util: f64) -> (String, u64, u64) {
    (design_id.to_string(), td.to_bits(), util.to_bits())
}

impl DatasetOracle {
    pub fn new(records: &[EvalRecord]) -> Self {
        let map = records
            .iter()
            .map(|r| {
                (
                    setting_key(&r.design_id, r.target_delay, r.utilization),
                    r.ppa,
                )
            })
            .collect();
        DatasetOracle {
            map,
            counter: EvalCounter::default(),
        }
    }
}

impl Oracle for DatasetOracle {
    fn evaluate(
        &self,
        design_id: &str,
        fv: &FeatureVector,
        class: EvalClass,
    ) -> Result<PpaPoint, OracleError> {
        let key = setting_key(design_id, fv.target_delay, fv.utilization);
        match self.map.get(&key) {
            Some(&ppa) => {
                self.counter.record(class);
                Ok(ppa)
            }
            None => Err(OracleError::MissingMeasurement {
                design_id: design_id.to_string(),
                target_delay: fv.target_delay,
                utilization: fv.utilization,
            }),
        }
    }

    fn counts(&self) -> EvalCounts {
        self.counter.counts()
    }
}

/// Read a measurement CSV with header
/// `design_id,target_delay,utilization,area,power,delay`.
pub fn ingest_csv(path: &Path) -> Result<Vec<EvalRecord>, OracleError> {
    ingest_reader(csv::Reader::from_path(path)?)
}

pub fn ingest_str(text: &str) -> Result<Vec<EvalRecord>, OracleError> {
    ingest_reader(csv::Reader::from_reader(text.as_bytes()))
}

fn ingest_reader<R: std::io::Read>(mut rdr: csv::Reader<R>) -> Result<Vec<EvalRecord>, OracleError> {
    const COLUMNS: [&str; 6] = [
        "design_id",
        "target_delay",
        "utilization",
        "area",
        "power",
        "delay",
    ];
    let headers = rdr.headers()?.clone();
    let mut index = Vec::with_capacity(COLUMNS.len());
    for col in COLUMNS {
        match headers.iter().position(|h| h == col) {
            Some(i) => index.push(i),
            None => return Err(OracleError::MissingColumn(col)),
        }
    }
    let mut seen: HashMap<(String, u64, u64), usize> = HashMap::new();
    let mut records = Vec::new();
    for (rownum, row) in rdr.records().enumerate() {
        let row = row?;
        let row_id = rownum + 2; // 1-based, after the header line
        let field = |slot: usize| -> &str { row.get(index[slot]).unwrap_or("") };
        let number = |slot: usize| -> Result<f64, OracleError> {
            field(slot).parse::<f64>().map_err(|_| OracleError::BadRow {
                row: row_id,
                msg: format!("column {} is not a number: {:?}", COLUMNS[slot], field(slot)),
            })
        };
        let design_id = field(0).to_string();
        let target_delay = number(1)?;
        let utilization = number(2)?;
        let ppa = PpaPoint {
            area: number(3)?,
            power: number(4)?,
            delay: number(5)?,
        };
        for (name, v) in [
            ("target_delay", target_delay),
            ("utilization", utilization),
            ("area", ppa.area),
            ("power", ppa.power),
            ("delay", ppa.delay),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(OracleError::BadRow {
                    row: row_id,
                    msg: format!("column {name} must be positive and finite, got {v}"),
                });
            }
        }
        let key = setting_key(&design_id, target_delay, utilization);
        if seen.insert(key, row_id).is_some() {
            return Err(OracleError::DuplicateKey {
                design_id,
                target_delay,
                utilization,
                row: row_id,
            });
        }
        records.push(EvalRecord {
            design_id,
            target_delay,
            utilization,
            ppa,
            source: EvalSource::Ingested,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{default_grid, extract};
    use crate::pgg::{enumerate, quasi_random_sample, EnumConfig};

    fn fv(size: usize, mfo: usize, td: f64, util: f64, spfo: &[u64]) -> FeatureVector {
        FeatureVector {
            size,
            mfo,
            target_delay: td,
            utilization: util,
            spfo: spfo.to_vec(),
        }
    }

    #[test]
    fn synthetic_is_deterministic() {
        let a = fv(120, 8, 0.2, 0.7, &[5, 9, 12]);
        let x = evaluate_synthetic(&a, 42, model_v1::NOISE_SIGMA);
        let y = evaluate_synthetic(&a, 42, model_v1::NOISE_SIGMA);
        assert_eq!(x, y);
        let z = evaluate_synthetic(&a, 43, model_v1::NOISE_SIGMA);
        assert_ne!(x, z);
    }

    #[test]
    fn synthetic_monotone_in_size() {
        let small = fv(100, 8, 0.2, 0.7, &[5, 9]);
        let large = fv(140, 8, 0.2, 0.7, &[5, 9]);
        let ps = evaluate_synthetic(&small, 0, 0.0);
        let pl = evaluate_synthetic(&large, 0, 0.0);
        assert!(pl.area > ps.area);
        assert!(pl.power > ps.power);
    }

    #[test]
    fn synthetic_delay_tightens_convexly() {
        let base = |td| evaluate_synthetic(&fv(120, 8, td, 0.7, &[5]), 0, 0.0).delay;
        let (d1, d2, d4) = (base(0.1), base(0.2), base(0.4));
        assert!(d1 > d2 && d2 > d4);
        assert!(d1 - d2 > d2 - d4, "penalty must be convex");
    }

    fn sample_fvs(seed: u64) -> Vec<FeatureVector> {
        let mut fvs = Vec::new();
        for mfo in [4usize, 6, 8] {
            let mut cfg = EnumConfig::new(16, mfo);
            cfg.size_slack = 16;
            let pool = enumerate(&cfg).unwrap();
            for (_, _, g) in quasi_random_sample(&pool, 5, seed).graphs {
                for (td, util) in default_grid() {
                    fvs.push(extract(&g, td, util));
                }
            }
        }
        fvs
    }

    #[test]
    fn size_power_correlation_is_strong() {
        let fvs = sample_fvs(11);
        assert!(fvs.len() >= 200, "need a 200-design sample, got {}", fvs.len());
        let pts: Vec<PpaPoint> = fvs
            .iter()
            .map(|f| evaluate_synthetic(f, 7, model_v1::NOISE_SIGMA))
            .collect();
        let xs: Vec<f64> = fvs.iter().map(|f| f.size as f64).collect();
        let ys: Vec<f64> = pts.iter().map(|p| p.power).collect();
        let n = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
        let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
        let corr = cov / (vx.sqrt() * vy.sqrt());
        assert!(corr > 0.5, "corr(size, power) = {corr}");
    }

    #[test]
    fn frontier_is_nontrivial_in_delay_power() {
        let fvs = sample_fvs(3);
        let pts: Vec<PpaPoint> = fvs
            .iter()
            .map(|f| evaluate_synthetic(f, 5, model_v1::NOISE_SIGMA))
            .collect();
        let non_dominated = pts
            .iter()
            .enumerate()
            .filter(|(i, p)| {
                !pts.iter().enumerate().any(|(j, q)| {
                    *i != j
                        && q.delay <= p.delay
                        && q.power <= p.power
                        && (q.delay < p.delay || q.power < p.power)
                })
            })
            .count();
        assert!(non_dominated >= 2, "only {non_dominated} non-dominated points");
    }

    #[test]
    fn oracle_counters_partition_calls() {
        let oracle = SyntheticOracle::new(1, 0.0);
        let f = fv(100, 4, 0.2, 0.6, &[3]);
        for _ in 0..3 {
            oracle.evaluate("d0", &f, EvalClass::Init).unwrap();
        }
        oracle.evaluate("d0", &f, EvalClass::ActiveSample).unwrap();
        oracle.evaluate("d0", &f, EvalClass::Verify).unwrap();
        let c = oracle.counts();
        assert_eq!((c.init, c.active_sample, c.verify), (3, 1, 1));
        assert_eq!(c.total(), 5);
    }

    const GOOD_CSV: &str = "design_id,target_delay,utilization,area,power,delay\n\
        d0,0.2,0.7,120.5,1.4,0.31\n\
        d0,0.3,0.7,118.0,1.2,0.33\n\
        d1,0.2,0.7,131.0,1.6,0.29\n";

    #[test]
    fn ingest_well_formed() {
        let records = ingest_str(GOOD_CSV).unwrap();
        assert_eq!(records.len(), 3);
        assert_eq!(records[0].design_id, "d0");
        assert_eq!(records[2].ppa.delay, 0.29);
        assert!(records.iter().all(|r| r.source == EvalSource::Ingested));
        assert_eq!(ingest_str(GOOD_CSV).unwrap(), records);
    }

    #[test]
    fn ingest_rejects_bad_rows() {
        let negative = GOOD_CSV.replace("131.0,1.6,0.29", "131.0,1.6,-1");
        match ingest_str(&negative) {
            Err(OracleError::BadRow { row, .. }) => assert_eq!(row, 4),
            other => panic!("expected BadRow, got {other:?}"),
        }
        let dup = GOOD_CSV.replace("d1,0.2", "d0,0.2");
        assert!(matches!(
            ingest_str(&dup),
            Err(OracleError::DuplicateKey { row: 4, .. })
        ));
        let missing = GOOD_CSV.replace("power", "pwr");
        assert!(matches!(
            ingest_str(&missing),
            Err(OracleError::MissingColumn("power"))
        ));
    }

    #[test]
    fn dataset_oracle_lookup() {
        let records = ingest_str(GOOD_CSV).unwrap();
        let oracle = DatasetOracle::new(&records);
        let f = fv(10, 2, 0.2, 0.7, &[]);
        let p = oracle.evaluate("d1", &f, EvalClass::Verify).unwrap();
        assert_eq!(p.area, 131.0);
        assert!(oracle.evaluate("dX", &f, EvalClass::Verify).is_err());
        assert_eq!(oracle.counts().verify, 1);
    }
}
