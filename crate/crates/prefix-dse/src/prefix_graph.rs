// SPDX-License-Identifier: Apache-2.0

//! Parallel prefix networks: representation, validation, functional simulation,
//! metrics, classical regular adders, and a line-oriented text format.
//!
//! An `n`-bit prefix graph has `n` implicit input nodes (ids `0..n`, node `k`
//! spanning `[k:k]`) followed by prefix nodes. Every prefix node spanning
//! `[a:b]` merges a trivial fan-in `[a:c]` (same msb) with a non-trivial
//! fan-in `[c-1:b]` through the associative group-generate/propagate operator.
//! Output bit `k` is produced by a designated node spanning `[k:0]`.

use std::fmt::Write as _;

use thiserror::Error;

/// Index of a node within one graph. Ids are dense: `0..num_nodes`.
pub type NodeId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("input node {id} must span a single bit and have no fan-ins")]
    BadInput { id: NodeId },
    #[error("node {id} fan-in {fanin} does not precede it in topological order")]
    OrderViolation { id: NodeId, fanin: NodeId },
    #[error("node {id} spans [{msb}:{lsb}] but its fan-ins span [{tf_msb}:{tf_lsb}] and [{ntf_msb}:{ntf_lsb}]: spans must concatenate exactly")]
    SpanMismatch {
        id: NodeId,
        msb: u8,
        lsb: u8,
        tf_msb: u8,
        tf_lsb: u8,
        ntf_msb: u8,
        ntf_lsb: u8,
    },
    #[error("node {id} has level {level} but 1 + max(fan-in levels) = {expected}")]
    LevelMismatch {
        id: NodeId,
        level: u8,
        expected: u8,
    },
    #[error("output bit {bit} is not produced by a node spanning [{bit}:0]")]
    MissingOutput { bit: u8 },
    #[error("node id {id} out of range for graph with {num_nodes} nodes")]
    IdOutOfRange { id: NodeId, num_nodes: usize },
    #[error("unsupported bit width {n} for {kind:?}: {reason}")]
    UnsupportedWidth {
        n: usize,
        kind: RegularKind,
        reason: &'static str,
    },
    #[error("operands must fit in {n} bits")]
    OperandTooWide { n: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// One node of a prefix graph. Input nodes have `fanins == None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrefixNode {
    pub msb: u8,
    pub lsb: u8,
    pub level: u8,
    /// `(trivial, nontrivial)` fan-ins; the trivial fan-in shares this node's msb.
    pub fanins: Option<(NodeId, NodeId)>,
}

/// A prefix carry network for an `n`-bit adder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixGraph {
    n: usize,
    nodes: Vec<PrefixNode>,
    /// `outputs[k]` is the node spanning `[k:0]`.
    outputs: Vec<NodeId>,
}

/// `(size, level, mfo)` of a graph. Size counts prefix (non-input) nodes only;
/// mfo counts prefix-graph edges only, not the post-processing consumers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Metrics {
    pub size: usize,
    pub level: usize,
    pub mfo: usize,
}

/// Classical regular adder families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegularKind {
    KoggeStone,
    Sklansky,
    BrentKung,
    Ripple,
}

impl PrefixGraph {
    /// Builds a graph from prefix-node descriptions `(msb, lsb, tf, ntf)` in
    /// topological order; levels are derived. Validates before returning.
    pub fn from_parts(
        n: usize,
        prefix_nodes: &[(u8, u8, NodeId, NodeId)],
        outputs: Vec<NodeId>,
    ) -> Result<Self, GraphError> {
        let mut nodes: Vec<PrefixNode> = (0..n)
            .map(|k| PrefixNode {
                msb: k as u8,
                lsb: k as u8,
                level: 0,
                fanins: None,
            })
            .collect();
        for &(msb, lsb, tf, ntf) in prefix_nodes {
            let id = nodes.len();
            if tf >= id || ntf >= id {
                return Err(GraphError::IdOutOfRange {
                    id: tf.max(ntf),
                    num_nodes: id,
                });
            }
            let level = 1 + nodes[tf].level.max(nodes[ntf].level);
            nodes.push(PrefixNode {
                msb,
                lsb,
                level,
                fanins: Some((tf, ntf)),
            });
        }
        let g = PrefixGraph { n, nodes, outputs };
        g.validate()?;
        Ok(g)
    }

    pub fn bit_width(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[PrefixNode] {
        &self.nodes
    }

    pub fn outputs(&self) -> &[NodeId] {
        &self.outputs
    }

    /// Number of prefix (non-input) nodes.
    pub fn size(&self) -> usize {
        self.nodes.len() - self.n
    }

    /// Checks every structural invariant, returning the first violation.
    pub fn validate(&self) -> Result<(), GraphError> {
        for (id, node) in self.nodes.iter().enumerate() {
            match node.fanins {
                None => {
                    if id >= self.n || node.msb != node.lsb || node.msb as usize != id {
                        return Err(GraphError::BadInput { id });
                    }
                }
                Some((tf, ntf)) => {
                    if tf >= self.nodes.len() || ntf >= self.nodes.len() {
                        return Err(GraphError::IdOutOfRange {
                            id: tf.max(ntf),
                            num_nodes: self.nodes.len(),
                        });
                    }
                    if tf >= id || ntf >= id {
                        return Err(GraphError::OrderViolation {
                            id,
                            fanin: tf.max(ntf),
                        });
                    }
                    let t = &self.nodes[tf];
                    let nt = &self.nodes[ntf];
                    // Trivial spans [a:c], non-trivial spans [c-1:b].
                    if t.msb != node.msb
                        || nt.msb + 1 != t.lsb
                        || nt.lsb != node.lsb
                        || t.lsb > t.msb
                        || nt.lsb > nt.msb
                    {
                        return Err(GraphError::SpanMismatch {
                            id,
                            msb: node.msb,
                            lsb: node.lsb,
                            tf_msb: t.msb,
                            tf_lsb: t.lsb,
                            ntf_msb: nt.msb,
                            ntf_lsb: nt.lsb,
                        });
                    }
                    let expected = 1 + t.level.max(nt.level);
                    if node.level != expected {
                        return Err(GraphError::LevelMismatch {
                            id,
                            level: node.level,
                            expected,
                        });
                    }
                }
            }
        }
        if self.outputs.len() != self.n {
            return Err(GraphError::MissingOutput {
                bit: self.outputs.len() as u8,
            });
        }
        for (bit, &id) in self.outputs.iter().enumerate() {
            if id >= self.nodes.len() {
                return Err(GraphError::IdOutOfRange {
                    id,
                    num_nodes: self.nodes.len(),
                });
            }
            let node = &self.nodes[id];
            if node.msb as usize != bit || node.lsb != 0 {
                return Err(GraphError::MissingOutput { bit: bit as u8 });
            }
        }
        Ok(())
    }

    /// Fan-out count per node, counting prefix-graph edges only.
    pub fn fanout_counts(&self) -> Vec<usize> {
        let mut fo = vec![0usize; self.nodes.len()];
        for node in &self.nodes {
            if let Some((tf, ntf)) = node.fanins {
                fo[tf] += 1;
                fo[ntf] += 1;
            }
        }
        fo
    }

    /// Stage-wise fan-out per node: the largest number of consumers any node
    /// drives within a single consuming level. This is the load the node
    /// presents to one pipeline stage; a node consumed again at a later level
    /// is re-buffered there and does not add to the earlier stage's load.
    pub fn stage_fanout_counts(&self) -> Vec<usize> {
        let mut per_stage: std::collections::HashMap<(NodeId, u8), usize> =
            std::collections::HashMap::new();
        for node in &self.nodes {
            if let Some((tf, ntf)) = node.fanins {
                *per_stage.entry((tf, node.level)).or_default() += 1;
                *per_stage.entry((ntf, node.level)).or_default() += 1;
            }
        }
        let mut fo = vec![0usize; self.nodes.len()];
        for ((id, _), count) in per_stage {
            fo[id] = fo[id].max(count);
        }
        fo
    }

    /// `(size, level, mfo)` of the graph; mfo is the stage-wise maximum.
    pub fn metrics(&self) -> Metrics {
        let level = self.nodes.iter().map(|x| x.level).max().unwrap_or(0) as usize;
        let mfo = self.stage_fanout_counts().into_iter().max().unwrap_or(0);
        Metrics {
            size: self.size(),
            level,
            mfo,
        }
    }

    /// Adds `a + b` through the prefix network. The result has `n + 1` bits;
    /// bit `n` is the carry-out.
    pub fn simulate_add(&self, a: u64, b: u64) -> Result<u128, GraphError> {
        self.validate()?;
        if self.n < 64 && (a >> self.n != 0 || b >> self.n != 0) {
            return Err(GraphError::OperandTooWide { n: self.n });
        }
        let gen = a & b;
        let prop = a ^ b;
        // (G, P) per node, evaluated in topological order.
        let mut gp = vec![(false, false); self.nodes.len()];
        for (id, node) in self.nodes.iter().enumerate() {
            gp[id] = match node.fanins {
                None => {
                    let k = node.msb as u32;
                    (gen >> k & 1 == 1, prop >> k & 1 == 1)
                }
                Some((tf, ntf)) => {
                    let (gh, ph) = gp[tf];
                    let (gl, pl) = gp[ntf];
                    (gh || (ph && gl), ph && pl)
                }
            };
        }
        let mut carries = 0u128; // c_k at bit k
        for (bit, &id) in self.outputs.iter().enumerate() {
            if gp[id].0 {
                carries |= 1 << bit;
            }
        }
        let sum_low = (prop as u128) ^ (carries << 1);
        let carry_out = carries >> (self.n - 1) & 1;
        Ok((sum_low & ((1u128 << self.n) - 1)) | (carry_out << self.n))
    }

    /// Reorders prefix nodes into level-major order (level, msb, lsb),
    /// remapping ids. Two structurally equal graphs canonicalize identically.
    pub fn canonicalize(&self) -> PrefixGraph {
        let mut order: Vec<NodeId> = (self.n..self.nodes.len()).collect();
        order.sort_by_key(|&id| {
            let x = &self.nodes[id];
            (x.level, x.msb, x.lsb)
        });
        let mut remap = vec![0usize; self.nodes.len()];
        for k in 0..self.n {
            remap[k] = k;
        }
        for (pos, &id) in order.iter().enumerate() {
            remap[id] = self.n + pos;
        }
        let mut nodes: Vec<PrefixNode> = self.nodes[..self.n].to_vec();
        for &id in &order {
            let mut node = self.nodes[id];
            if let Some((tf, ntf)) = node.fanins {
                node.fanins = Some((remap[tf], remap[ntf]));
            }
            nodes.push(node);
        }
        PrefixGraph {
            n: self.n,
            nodes,
            outputs: self.outputs.iter().map(|&id| remap[id]).collect(),
        }
    }

    /// Writes the line-oriented text format. Deterministic: byte-identical for
    /// equal graphs.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        writeln!(out, "pfx {}", self.n).unwrap();
        for (id, node) in self.nodes.iter().enumerate().skip(self.n) {
            let (tf, ntf) = node.fanins.expect("prefix node");
            writeln!(
                out,
                "{} {} {} {} {} {}",
                id, node.msb, node.lsb, node.level, tf, ntf
            )
            .unwrap();
        }
        out.push_str("outputs");
        for &id in &self.outputs {
            write!(out, " {}", id).unwrap();
        }
        out.push('\n');
        out
    }

    /// Parses the text format produced by [`serialize`](Self::serialize).
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut n: Option<usize> = None;
        let mut nodes: Vec<PrefixNode> = Vec::new();
        let mut outputs: Option<Vec<NodeId>> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let head = fields.next().unwrap();
            let err = |msg: String| GraphError::Parse { line: line_no, msg };
            if head == "pfx" {
                if n.is_some() {
                    return Err(err("duplicate pfx header".into()));
                }
                let width: usize = fields
                    .next()
                    .ok_or_else(|| err("missing bit width".into()))?
                    .parse()
                    .map_err(|e| err(format!("bad bit width: {e}")))?;
                if width < 1 || width > 128 {
                    return Err(err(format!("bit width {width} out of range 1..=128")));
                }
                n = Some(width);
                nodes = (0..width)
                    .map(|k| PrefixNode {
                        msb: k as u8,
                        lsb: k as u8,
                        level: 0,
                        fanins: None,
                    })
                    .collect();
            } else if head == "outputs" {
                if n.is_none() {
                    return Err(err("outputs before pfx header".into()));
                }
                let ids: Result<Vec<NodeId>, _> = fields.map(str::parse).collect();
                outputs = Some(ids.map_err(|e| err(format!("bad output id: {e}")))?);
            } else {
                let width = n.ok_or_else(|| err("node line before pfx header".into()))?;
                if outputs.is_some() {
                    return Err(err("node line after outputs".into()));
                }
                let mut vals: Vec<u64> = Vec::with_capacity(6);
                vals.push(
                    head.parse()
                        .map_err(|e| err(format!("bad node field: {e}")))?,
                );
                for f in fields {
                    vals.push(f.parse().map_err(|e| err(format!("bad node field: {e}")))?);
                }
                if vals.len() != 6 {
                    return Err(err(format!("expected 6 fields, got {}", vals.len())));
                }
                let [id, msb, lsb, level, tf, ntf] = vals[..] else {
                    unreachable!()
                };
                if id as usize != nodes.len() {
                    return Err(err(format!(
                        "node id {id} out of order, expected {}",
                        nodes.len()
                    )));
                }
                if msb >= width as u64 || lsb > msb || level > 64 {
                    return Err(err(format!("bad span [{msb}:{lsb}] level {level}")));
                }
                nodes.push(PrefixNode {
                    msb: msb as u8,
                    lsb: lsb as u8,
                    level: level as u8,
                    fanins: Some((tf as usize, ntf as usize)),
                });
            }
        }
        let n = n.ok_or(GraphError::Parse {
            line: 1,
            msg: "missing pfx header".into(),
        })?;
        let outputs = outputs.ok_or(GraphError::Parse {
            line: text.lines().count(),
            msg: "missing outputs line".into(),
        })?;
        let g = PrefixGraph { n, nodes, outputs };
        g.validate()?;
        Ok(g)
    }
}

/// Builds one of the classical regular adders.
pub fn make_regular(kind: RegularKind, n: usize) -> Result<PrefixGraph, GraphError> {
    if n < 2 {
        return Err(GraphError::UnsupportedWidth {
            n,
            kind,
            reason: "bit width must be at least 2",
        });
    }
    if n > 128 {
        return Err(GraphError::UnsupportedWidth {
            n,
            kind,
            reason: "bit width must be at most 128",
        });
    }
    if kind != RegularKind::Ripple && !n.is_power_of_two() {
        return Err(GraphError::UnsupportedWidth {
            n,
            kind,
            reason: "tree adders require a power-of-two width",
        });
    }
    match kind {
        RegularKind::Ripple => make_ripple(n),
        RegularKind::KoggeStone => make_kogge_stone(n),
        RegularKind::Sklansky => make_sklansky(n),
        RegularKind::BrentKung => make_brent_kung(n),
    }
}

fn make_ripple(n: usize) -> Result<PrefixGraph, GraphError> {
    let mut parts = Vec::with_capacity(n - 1);
    let mut prev = 0usize; // node spanning [k-1:0]
    for k in 1..n {
        parts.push((k as u8, 0u8, k, prev));
        prev = n + k - 1;
    }
    let outputs = std::iter::once(0)
        .chain(n..2 * n - 1)
        .collect();
    PrefixGraph::from_parts(n, &parts, outputs)
}

fn make_kogge_stone(n: usize) -> Result<PrefixGraph, GraphError> {
    let mut parts = Vec::new();
    // (id, lsb) of the running span [i:lsb] for each bit.
    let mut cur: Vec<(NodeId, usize)> = (0..n).map(|i| (i, i)).collect();
    let mut next_id = n;
    let levels = n.trailing_zeros();
    for _ in 0..levels {
        let prev = cur.clone();
        for i in 0..n {
            let (id_i, lsb_i) = prev[i];
            if lsb_i == 0 {
                continue;
            }
            let (id_p, lsb_p) = prev[lsb_i - 1];
            parts.push((i as u8, lsb_p as u8, id_i, id_p));
            cur[i] = (next_id, lsb_p);
            next_id += 1;
        }
    }
    let outputs = cur.into_iter().map(|(id, _)| id).collect();
    PrefixGraph::from_parts(n, &parts, outputs)
}

fn make_sklansky(n: usize) -> Result<PrefixGraph, GraphError> {
    let mut parts = Vec::new();
    let mut cur: Vec<(NodeId, usize)> = (0..n).map(|i| (i, i)).collect();
    let mut next_id = n;
    let levels = n.trailing_zeros();
    for d in 1..=levels {
        let half = 1usize << (d - 1);
        for i in 0..n {
            if i & half == 0 {
                continue;
            }
            let mid = (i >> (d - 1)) << (d - 1); // lower boundary of the upper half-block
            let (id_i, _) = cur[i];
            let (id_p, lsb_p) = cur[mid - 1];
            parts.push((i as u8, lsb_p as u8, id_i, id_p));
            cur[i] = (next_id, lsb_p);
            next_id += 1;
        }
    }
    let outputs = cur.into_iter().map(|(id, _)| id).collect();
    PrefixGraph::from_parts(n, &parts, outputs)
}

fn make_brent_kung(n: usize) -> Result<PrefixGraph, GraphError> {
    use std::collections::HashMap;
    let mut parts = Vec::new();
    let mut span: HashMap<(usize, usize), NodeId> = (0..n).map(|i| ((i, i), i)).collect();
    let mut next_id = n;
    let levels = n.trailing_zeros() as usize;
    // Up-sweep: power-of-two aligned spans.
    for d in 1..=levels {
        let w = 1usize << d;
        let mut i = w - 1;
        while i < n {
            let tf = span[&(i, i - w / 2 + 1)];
            let ntf = span[&(i - w / 2, i + 1 - w)];
            parts.push((i as u8, (i + 1 - w) as u8, tf, ntf));
            span.insert((i, i + 1 - w), next_id);
            next_id += 1;
            i += w;
        }
    }
    // Down-sweep: fill the remaining [i:0] outputs.
    for d in (1..levels).rev() {
        let w = 1usize << d;
        let mut i = w + w / 2 - 1;
        while i < n {
            let tf = span[&(i, i - w / 2 + 1)];
            let ntf = span[&(i - w / 2, 0)];
            parts.push((i as u8, 0, tf, ntf));
            span.insert((i, 0), next_id);
            next_id += 1;
            i += w;
        }
    }
    let outputs = (0..n).map(|i| span[&(i, 0)]).collect();
    PrefixGraph::from_parts(n, &parts, outputs)
}

/// Small fixed graphs shared across the crate's tests.
#[cfg(test)]
pub(crate) mod test_graphs {
    use super::PrefixGraph;

    /// The six-bit network of size 8, level 3, mfo 2 used as a running example:
    /// o5 decomposes as (i5∘i4)∘((i3∘i2)∘(i1∘i0)).
    pub(crate) fn six_bit_example() -> PrefixGraph {
        // inputs 0..=5; [1:0](6) [3:2](7) [5:4](8) [4:3](9)
        // [2:0](10) [3:0](11) [4:0](12) [5:0](13)
        PrefixGraph::from_parts(
            6,
            &[
                (1, 0, 1, 0),
                (3, 2, 3, 2),
                (5, 4, 5, 4),
                (4, 3, 4, 3),
                (2, 0, 2, 6),
                (3, 0, 7, 6),
                (4, 0, 9, 10),
                (5, 0, 8, 11),
            ],
            vec![0, 6, 10, 11, 12, 13],
        )
        .unwrap()
    }

    /// The eight-bit structure used for the sum-path-fan-out worked example.
    /// Fan-outs: o1 -> 3, b1 -> 2, b2 -> 3, o3 -> 3, i2 -> 2, i4 -> 2.
    pub(crate) fn spfo_example() -> PrefixGraph {
        // inputs 0..=7; o1[1:0](8) b1[3:2](9) b2[5:4](10) [7:6](11)
        // o2[2:0](12) o3[3:0](13) nb2[5:2](14) nb3[7:4](15)
        // o4[4:0](16) o5[5:0](17) o7[7:0](18) [6:2](19) o6[6:0](20)
        PrefixGraph::from_parts(
            8,
            &[
                (1, 0, 1, 0),
                (3, 2, 3, 2),
                (5, 4, 5, 4),
                (7, 6, 7, 6),
                (2, 0, 2, 8),
                (3, 0, 9, 8),
                (5, 2, 10, 9),
                (7, 4, 11, 10),
                (4, 0, 4, 13),
                (5, 0, 10, 13),
                (7, 0, 15, 13),
                (6, 2, 6, 14),
                (6, 0, 19, 8),
            ],
            vec![0, 8, 12, 13, 16, 17, 20, 18],
        )
        .unwrap()
    }
}
