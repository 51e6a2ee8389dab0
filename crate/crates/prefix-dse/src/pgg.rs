// SPDX-License-Identifier: Apache-2.0

//! Bottom-up enumeration of minimum-depth, fan-out-constrained prefix graphs.
//!
//! An `m`-bit graph is extended to `m+1` bits by inserting a chain of new
//! nodes with msb `m`: the first node's trivial fan-in is input `m`, each
//! subsequent node's trivial fan-in is its chain predecessor, every
//! non-trivial fan-in is an existing node, and the chain terminates at span
//! `[m:0]`. Two structural pruning rules (semi-regularity of level-1 nodes
//! and the trivial-fan-in level restriction), size pruning within a slack of
//! the best known size, and capacity-bounded `(mfo, size)` bucketing keep the
//! pool tractable; a quasi-random two-level-binning sampler draws diverse
//! designs from the result.

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::prefix_graph::{GraphError, PrefixGraph};

#[derive(Debug, Error)]
pub enum PggError {
    #[error("invalid enumeration config: {0}")]
    InvalidConfig(String),
    #[error("memory budget exceeded at bit width {bit_width} ({graphs} graphs retained)")]
    MemoryBudget { bit_width: usize, graphs: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Parameters of one enumeration run.
#[derive(Debug, Clone)]
pub struct EnumConfig {
    pub n: usize,
    pub mfo_limit: usize,
    /// Maximum logic level; defaults to `log2 n`.
    pub level_limit: usize,
    /// Maximum graphs retained per `(mfo, size)` bucket.
    pub size_bucket_capacity: usize,
    /// Admissible size above the best known size at each bit width.
    pub size_slack: usize,
    /// Level-1 nodes may only combine consecutive even/odd input pairs.
    pub semi_regularity: bool,
    /// Strict mode: every odd bit's chain must start with its level-1 pair.
    pub strict_semi_regular: bool,
    /// Require level(trivial fan-in) <= level(non-trivial fan-in).
    pub tf_level_restriction: bool,
    /// Retained-graph memory budget; exceeded runs abort with an error.
    pub mem_budget_bytes: usize,
    pub rng_seed: u64,
}

impl EnumConfig {
    pub fn new(n: usize, mfo_limit: usize) -> Self {
        EnumConfig {
            n,
            mfo_limit,
            level_limit: n.trailing_zeros() as usize,
            size_bucket_capacity: 256,
            size_slack: 8,
            semi_regularity: true,
            strict_semi_regular: false,
            tf_level_restriction: true,
            mem_budget_bytes: 4 << 30,
            rng_seed: 0,
        }
    }

    fn validate(&self) -> Result<(), PggError> {
        if !self.n.is_power_of_two() || self.n < 2 || self.n > 128 {
            return Err(PggError::InvalidConfig(format!(
                "bit width {} must be a power of two in 2..=128",
                self.n
            )));
        }
        if self.level_limit < self.n.trailing_zeros() as usize {
            return Err(PggError::InvalidConfig(format!(
                "level limit {} below log2 n = {}",
                self.level_limit,
                self.n.trailing_zeros()
            )));
        }
        if self.level_limit > MAX_LEVEL {
            return Err(PggError::InvalidConfig(format!(
                "level limit {} above the supported maximum {}",
                self.level_limit, MAX_LEVEL
            )));
        }
        if self.mfo_limit < 2 {
            return Err(PggError::InvalidConfig("mfo limit must be >= 2".into()));
        }
        if self.size_bucket_capacity < 1 {
            return Err(PggError::InvalidConfig("bucket capacity must be >= 1".into()));
        }
        Ok(())
    }
}

/// Hard cap on logic levels tracked by the stage-wise fan-out tables.
const MAX_LEVEL: usize = 15;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(mut hash: u64, bytes: &[u8]) -> u64 {
    for &b in bytes {
        hash = (hash ^ u64::from(b)).wrapping_mul(FNV_PRIME);
    }
    hash
}

/// Compact graph used inside the enumerator. Non-input nodes are stored as
/// `(msb, lsb, level, tf_lsb)` in construction order (msb-major, chain order),
/// which is canonical: spans are unique within a graph, so the tuple stream
/// identifies the structure and its FNV-1a hash is the dedup key.
#[derive(Debug, Clone)]
struct Compact {
    nodes: Vec<[u8; 4]>,
    /// Stage-wise fan-out: `node_fanout[i][l]` consumers of node `i` at
    /// consuming level `l`.
    node_fanout: Vec<[u8; MAX_LEVEL + 1]>,
    input_fanout: Vec<[u8; MAX_LEVEL + 1]>,
    /// `msb_start[q]..msb_start[q+1]` indexes the nodes with msb `q`.
    msb_start: Vec<u32>,
    hash: u64,
    mfo: u8,
}

impl Compact {
    fn width1(n: usize) -> Compact {
        Compact {
            nodes: Vec::new(),
            node_fanout: Vec::new(),
            input_fanout: vec![[0; MAX_LEVEL + 1]; n],
            msb_start: vec![0],
            hash: FNV_OFFSET,
            mfo: 0,
        }
    }

    fn size(&self) -> usize {
        self.nodes.len()
    }

    fn msb_range(&self, q: usize) -> std::ops::Range<usize> {
        let lo = self.msb_start[q] as usize;
        let hi = self
            .msb_start
            .get(q + 1)
            .map_or(self.nodes.len(), |&v| v as usize);
        lo..hi
    }

    fn approx_bytes(&self) -> usize {
        self.nodes.len() * 20 + self.input_fanout.len() * 16 + self.msb_start.len() * 4 + 16
    }

    fn to_prefix_graph(&self, n: usize) -> Result<PrefixGraph, GraphError> {
        // Span -> id map; inputs are ids 0..n, node i is id n+i.
        let mut span_id: BTreeMap<(u8, u8), usize> =
            (0..n).map(|k| ((k as u8, k as u8), k)).collect();
        let mut parts = Vec::with_capacity(self.nodes.len());
        for (i, nd) in self.nodes.iter().enumerate() {
            let [msb, lsb, _level, tf_lsb] = *nd;
            let tf = span_id[&(msb, tf_lsb)];
            let ntf = span_id[&(tf_lsb - 1, lsb)];
            parts.push((msb, lsb, tf, ntf));
            span_id.insert((msb, lsb), n + i);
        }
        let outputs = (0..n)
            .map(|k| span_id[&(k as u8, 0)])
            .collect::<Vec<_>>();
        PrefixGraph::from_parts(n, &parts, outputs)
    }
}

/// A capacity-bounded dedup bucket keeping the lexicographically smallest
/// hashes; `hashes` is sorted and aligned with `graphs`.
struct Bucket {
    hashes: Vec<u64>,
    graphs: Vec<Compact>,
}

impl Bucket {
    fn new() -> Bucket {
        Bucket {
            hashes: Vec::new(),
            graphs: Vec::new(),
        }
    }

    /// Whether `hash` would currently be admitted (not a duplicate, and not
    /// above the capacity cut-off). Cheap pre-check before materializing.
    fn admits(&self, hash: u64, cap: usize) -> bool {
        match self.hashes.binary_search(&hash) {
            Ok(_) => false,
            Err(pos) => pos < cap,
        }
    }

    fn insert(&mut self, hash: u64, graph: Compact, cap: usize) {
        if let Err(pos) = self.hashes.binary_search(&hash) {
            if pos < cap {
                self.hashes.insert(pos, hash);
                self.graphs.insert(pos, graph);
                if self.hashes.len() > cap {
                    self.hashes.pop();
                    self.graphs.pop();
                }
            }
        }
    }
}

/// Result of one enumeration run: graphs binned by `(mfo, size)`.
pub struct SolutionPool {
    n: usize,
    buckets: BTreeMap<(usize, usize), Vec<Compact>>,
}

impl SolutionPool {
    pub fn bit_width(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.buckets.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.buckets.is_empty()
    }

    pub fn min_size(&self) -> Option<usize> {
        self.buckets.keys().map(|&(_, s)| s).min()
    }

    /// `(mfo, size, count)` per bucket, ascending.
    pub fn bucket_stats(&self) -> Vec<(usize, usize, usize)> {
        self.buckets
            .iter()
            .map(|(&(m, s), g)| (m, s, g.len()))
            .collect()
    }

    /// All graphs in deterministic order (ascending bucket key, then hash).
    pub fn all_graphs(&self) -> Vec<(usize, usize, PrefixGraph)> {
        self.buckets
            .iter()
            .flat_map(|(&(m, s), gs)| {
                gs.iter()
                    .map(move |g| (m, s, g.to_prefix_graph(self.n).expect("pool graph valid")))
            })
            .collect()
    }
}

/// Enumerate all admissible `cfg.n`-bit graphs, growing bit by bit.
pub fn enumerate(cfg: &EnumConfig) -> Result<SolutionPool, PggError> {
    cfg.validate()?;
    let n = cfg.n;
    // Working pool keyed (size, mfo) so iteration is size-ascending.
    let mut pool: BTreeMap<(usize, usize), Bucket> = BTreeMap::new();
    let mut seed_bucket = Bucket::new();
    seed_bucket.insert(FNV_OFFSET, Compact::width1(n), 1);
    pool.insert((0, 0), seed_bucket);

    for m in 1..n {
        let mut next: BTreeMap<(usize, usize), Bucket> = BTreeMap::new();
        let mut best = usize::MAX;
        for (&(psize, _), bucket) in &pool {
            if psize.saturating_add(1) > best.saturating_add(cfg.size_slack) {
                break;
            }
            for parent in &bucket.graphs {
                extend_graph(parent, m, cfg, &mut best, &mut next);
            }
        }
        // A late best-size improvement may leave oversized buckets behind.
        let cutoff = best.saturating_add(cfg.size_slack);
        next.retain(|&(s, _), _| s <= cutoff);
        pool = next;
        if std::env::var_os("PREFIX_DSE_ENUM_TRACE").is_some() {
            eprintln!(
                "width {:3}: best {:5} graphs {}",
                m + 1,
                best as isize,
                pool.values().map(|b| b.graphs.len()).sum::<usize>()
            );
        }
        if pool.is_empty() {
            break;
        }
        let bytes: usize = pool
            .values()
            .flat_map(|b| b.graphs.iter().map(Compact::approx_bytes))
            .sum();
        if bytes > cfg.mem_budget_bytes {
            return Err(PggError::MemoryBudget {
                bit_width: m + 1,
                graphs: pool.values().map(|b| b.graphs.len()).sum(),
            });
        }
    }

    let mut buckets = BTreeMap::new();
    for ((size, mfo), b) in pool {
        if size == 0 {
            continue; // n == 1 seed; unreachable for n >= 2
        }
        buckets.insert((mfo, size), b.graphs);
    }
    Ok(SolutionPool { n, buckets })
}

/// One step of the extension chain under construction for bit `m`.
#[derive(Clone, Copy)]
struct Step {
    lsb: u8,
    level: u8,
    tf_lsb: u8,
    /// Non-trivial fan-in: existing node index, or `usize::MAX` for an input.
    ntf: usize,
}

fn extend_graph(
    parent: &Compact,
    m: usize,
    cfg: &EnumConfig,
    best: &mut usize,
    next: &mut BTreeMap<(usize, usize), Bucket>,
) {
    let mut chain: Vec<Step> = Vec::with_capacity(cfg.level_limit);
    dfs(parent, m, cfg, best, next, &mut chain, parent.hash, parent.mfo);
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    parent: &Compact,
    m: usize,
    cfg: &EnumConfig,
    best: &mut usize,
    next: &mut BTreeMap<(usize, usize), Bucket>,
    chain: &mut Vec<Step>,
    hash: u64,
    mfo: u8,
) {
    let (chain_lsb, chain_level) = chain
        .last()
        .map_or((m, 0), |s| (s.lsb as usize, s.level as usize));
    // Size pruning: the chain needs at least one more node.
    if parent.size() + chain.len() + 1 > best.saturating_add(cfg.size_slack) {
        return;
    }

    // Candidate non-trivial fan-ins span [chain_lsb-1 : b].
    let q = chain_lsb - 1;

    // Input q as non-trivial fan-in: a level-1 node [m:m-1], first step only.
    if chain.is_empty() && q == m - 1 {
        let pair_ok = !cfg.semi_regularity || m % 2 == 1;
        if pair_ok && (1 < cfg.level_limit || q == 0) {
            let fo = parent.input_fanout[q][1] as usize;
            if fo + 1 <= cfg.mfo_limit {
                try_step(
                    parent, m, cfg, best, next, chain, hash, mfo,
                    Step { lsb: q as u8, level: 1, tf_lsb: m as u8, ntf: usize::MAX },
                    (fo + 1) as u8,
                );
            }
        }
    }
    // Strict semi-regularity forces the level-1 pair as the chain head.
    if cfg.strict_semi_regular && chain.is_empty() && m % 2 == 1 {
        return;
    }

    for idx in parent.msb_range(q) {
        let [_, lsb, level, _] = parent.nodes[idx];
        let level = level as usize;
        if cfg.tf_level_restriction && chain_level > level {
            continue;
        }
        let new_level = 1 + level.max(chain_level);
        if new_level > cfg.level_limit || (lsb > 0 && new_level >= cfg.level_limit) {
            continue;
        }
        let fo = parent.node_fanout[idx][new_level] as usize;
        if fo + 1 > cfg.mfo_limit {
            continue;
        }
        let tf_lsb = chain_lsb as u8;
        try_step(
            parent, m, cfg, best, next, chain, hash, mfo,
            Step { lsb, level: new_level as u8, tf_lsb, ntf: idx },
            (fo + 1) as u8,
        );
    }
}

#[allow(clippy::too_many_arguments)]
fn try_step(
    parent: &Compact,
    m: usize,
    cfg: &EnumConfig,
    best: &mut usize,
    next: &mut BTreeMap<(usize, usize), Bucket>,
    chain: &mut Vec<Step>,
    hash: u64,
    mfo: u8,
    step: Step,
    ntf_fanout: u8,
) {
    let hash = fnv1a(hash, &[m as u8, step.lsb, step.level, step.tf_lsb]);
    let mfo = mfo.max(ntf_fanout);
    chain.push(step);
    if step.lsb == 0 {
        commit(parent, m, cfg, best, next, chain, hash, mfo);
    } else {
        dfs(parent, m, cfg, best, next, chain, hash, mfo);
    }
    chain.pop();
}

#[allow(clippy::too_many_arguments)]
fn commit(
    parent: &Compact,
    m: usize,
    cfg: &EnumConfig,
    best: &mut usize,
    next: &mut BTreeMap<(usize, usize), Bucket>,
    chain: &[Step],
    hash: u64,
    mfo: u8,
) {
    let size = parent.size() + chain.len();
    if size > best.saturating_add(cfg.size_slack) {
        return;
    }
    if size < *best {
        *best = size;
        let cutoff = best.saturating_add(cfg.size_slack);
        next.retain(|&(s, _), _| s <= cutoff);
    }
    let bucket = next.entry((size, mfo as usize)).or_insert_with(Bucket::new);
    if !bucket.admits(hash, cfg.size_bucket_capacity) {
        return;
    }

    let mut child = parent.clone();
    // Input m is the trivial fan-in of the chain head; chain node j feeds
    // chain node j+1 at that node's level.
    child.input_fanout[m][chain[0].level as usize] += 1;
    for (j, s) in chain.iter().enumerate() {
        child.nodes.push([m as u8, s.lsb, s.level, s.tf_lsb]);
        let mut fo = [0u8; MAX_LEVEL + 1];
        if let Some(next_step) = chain.get(j + 1) {
            fo[next_step.level as usize] = 1;
        }
        child.node_fanout.push(fo);
        if s.ntf == usize::MAX {
            child.input_fanout[m - 1][s.level as usize] += 1;
        } else {
            child.node_fanout[s.ntf][s.level as usize] += 1;
        }
    }
    child
        .msb_start
        .push((child.nodes.len() - chain.len()) as u32);
    child.hash = hash;
    child.mfo = mfo;
    bucket.insert(hash, child, cfg.size_bucket_capacity);
}

/// [`enumerate`] with automatic size-slack relaxation. Tight fan-out limits
/// need intermediate graphs well above the per-width minimum size; when a run
/// dead-ends (empty pool), retry with the slack doubled, up to `2 * n`.
/// Returns the pool plus the slack that produced it.
pub fn enumerate_adaptive(cfg: &EnumConfig) -> Result<(SolutionPool, usize), PggError> {
    let mut cfg = cfg.clone();
    loop {
        let pool = enumerate(&cfg)?;
        if !pool.is_empty() || cfg.size_slack >= 2 * cfg.n {
            return Ok((pool, cfg.size_slack));
        }
        cfg.size_slack = (cfg.size_slack * 2).max(1);
    }
}

/// Quasi-random sample: round-robin over mfo bins, cycling each bin's size
/// buckets in ascending order, taking one uniformly random unpicked graph per
/// visit. `exhausted` is set when the pool ran out before `count`.
pub struct SampleResult {
    pub graphs: Vec<(usize, usize, PrefixGraph)>,
    pub exhausted: bool,
}

pub fn quasi_random_sample(pool: &SolutionPool, count: usize, rng_seed: u64) -> SampleResult {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    // Per-mfo list of (size, remaining graph indices).
    let mut bins: BTreeMap<usize, Vec<(usize, Vec<usize>)>> = BTreeMap::new();
    for (&(mfo, size), graphs) in &pool.buckets {
        bins.entry(mfo)
            .or_default()
            .push((size, (0..graphs.len()).collect()));
    }
    let mfos: Vec<usize> = bins.keys().copied().collect();
    let mut size_cursor: BTreeMap<usize, usize> = mfos.iter().map(|&m| (m, 0)).collect();
    let mut picked = Vec::new();
    let mut remaining: usize = pool.len();
    while picked.len() < count && remaining > 0 {
        for &mfo in &mfos {
            if picked.len() >= count {
                break;
            }
            let sizes = bins.get_mut(&mfo).unwrap();
            let nbins = sizes.len();
            let cursor = size_cursor.get_mut(&mfo).unwrap();
            // Advance to the next non-empty size bucket for this mfo, if any.
            let mut found = None;
            for off in 0..nbins {
                let at = (*cursor + off) % nbins;
                if !sizes[at].1.is_empty() {
                    found = Some(at);
                    break;
                }
            }
            let Some(at) = found else { continue };
            let (size, ref mut left) = sizes[at];
            let pick = left.swap_remove(rng.gen_range(0..left.len()));
            *cursor = (at + 1) % nbins;
            remaining -= 1;
            let graph = pool.buckets[&(mfo, size)][pick]
                .to_prefix_graph(pool.n)
                .expect("pool graph valid");
            picked.push((mfo, size, graph));
        }
    }
    SampleResult {
        exhausted: picked.len() < count,
        graphs: picked,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;

    fn check_pool(pool: &SolutionPool, cfg: &EnumConfig) {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (mfo, size, g) in pool.all_graphs() {
            g.validate().unwrap();
            let m = g.metrics();
            assert_eq!(m.size, size);
            assert_eq!(m.mfo, mfo);
            assert!(m.mfo <= cfg.mfo_limit);
            assert!(m.level <= cfg.level_limit);
            let mask = if cfg.n == 64 { u64::MAX } else { (1u64 << cfg.n) - 1 };
            for _ in 0..20 {
                let a = rng.gen::<u64>() & mask;
                let b = rng.gen::<u64>() & mask;
                assert_eq!(g.simulate_add(a, b).unwrap(), u128::from(a) + u128::from(b));
            }
        }
    }

    #[test]
    fn four_bit_minimum_is_four_nodes() {
        let cfg = EnumConfig::new(4, 4);
        let pool = enumerate(&cfg).unwrap();
        assert_eq!(pool.min_size(), Some(4));
        check_pool(&pool, &cfg);
    }

    #[test]
    fn eight_bit_pool_is_valid_and_deterministic() {
        let cfg = EnumConfig::new(8, 8);
        let a = enumerate(&cfg).unwrap();
        let b = enumerate(&cfg).unwrap();
        check_pool(&a, &cfg);
        assert_eq!(a.bucket_stats(), b.bucket_stats());
        let ga: Vec<String> = a.all_graphs().iter().map(|(_, _, g)| g.serialize()).collect();
        let gb: Vec<String> = b.all_graphs().iter().map(|(_, _, g)| g.serialize()).collect();
        assert_eq!(ga, gb);
    }

    #[test]
    fn relaxing_mfo_never_hurts() {
        let mut prev = usize::MAX;
        for mfo in [3usize, 4, 6, 8] {
            let pool = enumerate(&EnumConfig::new(8, mfo)).unwrap();
            if let Some(s) = pool.min_size() {
                assert!(s <= prev, "mfo {mfo}: min {s} > previous {prev}");
                prev = s;
            }
        }
        assert!(prev < usize::MAX);
    }

    #[test]
    fn level_limit_respected_exactly() {
        let pool = enumerate(&EnumConfig::new(16, 8)).unwrap();
        assert!(!pool.is_empty());
        for (_, _, g) in pool.all_graphs().into_iter().take(50) {
            assert!(g.metrics().level <= 4);
        }
    }

    #[test]
    fn invalid_configs_rejected() {
        assert!(enumerate(&EnumConfig::new(6, 4)).is_err());
        let mut cfg = EnumConfig::new(8, 1);
        assert!(enumerate(&cfg).is_err());
        cfg.mfo_limit = 4;
        cfg.level_limit = 2;
        assert!(enumerate(&cfg).is_err());
    }

    #[test]
    fn adaptive_slack_recovers_dead_ends() {
        let cfg = EnumConfig::new(32, 4);
        assert!(enumerate(&cfg).unwrap().is_empty());
        let (pool, slack) = enumerate_adaptive(&cfg).unwrap();
        assert!(!pool.is_empty());
        assert!(slack > cfg.size_slack);
        check_pool(&pool, &cfg);
    }

    #[test]
    fn sample_single_bucket() {
        let cfg = EnumConfig::new(4, 4);
        let pool = enumerate(&cfg).unwrap();
        let total = pool.len();
        let r = quasi_random_sample(&pool, 3usize.min(total), 9);
        assert_eq!(r.graphs.len(), 3usize.min(total));
        assert!(!r.exhausted);
        let texts: Vec<String> = r.graphs.iter().map(|(_, _, g)| g.serialize()).collect();
        let mut dedup = texts.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), texts.len(), "samples must be distinct");
    }

    #[test]
    fn sample_exhaustion_returns_everything() {
        let pool = enumerate(&EnumConfig::new(8, 6)).unwrap();
        let total = pool.len();
        let r = quasi_random_sample(&pool, total, 3);
        assert_eq!(r.graphs.len(), total);
        assert!(!r.exhausted);
        let over = quasi_random_sample(&pool, total + 10, 3);
        assert_eq!(over.graphs.len(), total);
        assert!(over.exhausted);
    }

    #[test]
    fn sample_visits_size_bins_round_robin() {
        let pool = enumerate(&EnumConfig::new(16, 8)).unwrap();
        // Restrict attention to one mfo bin with several size buckets.
        let stats = pool.bucket_stats();
        let mfo = stats
            .iter()
            .map(|&(m, _, _)| m)
            .find(|&m| stats.iter().filter(|&&(m2, _, _)| m2 == m).count() >= 2)
            .expect("an mfo bin with >= 2 size buckets");
        let nbins = stats.iter().filter(|&&(m2, _, _)| m2 == mfo).count();
        let only: BTreeMap<(usize, usize), Vec<Compact>> = pool
            .buckets
            .iter()
            .filter(|(&(m2, _), _)| m2 == mfo)
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        let single = SolutionPool { n: 16, buckets: only };
        let r = quasi_random_sample(&single, nbins, 5);
        let seen: Vec<usize> = r.graphs.iter().map(|&(_, s, _)| s).collect();
        let mut uniq = seen.clone();
        uniq.sort();
        uniq.dedup();
        assert_eq!(uniq.len(), seen.len(), "each size bin visited once first");
    }

    #[test]
    fn sampling_is_deterministic() {
        let pool = enumerate(&EnumConfig::new(8, 8)).unwrap();
        let a = quasi_random_sample(&pool, 10, 77);
        let b = quasi_random_sample(&pool, 10, 77);
        let sa: Vec<String> = a.graphs.iter().map(|(_, _, g)| g.serialize()).collect();
        let sb: Vec<String> = b.graphs.iter().map(|(_, _, g)| g.serialize()).collect();
        assert_eq!(sa, sb);
    }
}
