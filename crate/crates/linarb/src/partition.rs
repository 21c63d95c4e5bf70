//! Balanced vertex partitions with per-vertex degree windows.
//!
//! `partition_vertices` splits the vertex set of a d-regular graph into t
//! parts of near-equal size so that every vertex sends close to d/t edges
//! into every part. The construction follows the block-permutation scheme:
//! vertices are grouped into blocks of size t, each block gets an
//! independent uniform assignment of the t part labels (a permutation),
//! and out-of-window degrees are cleared by resampling whole block
//! permutations with the [`crate::lll`] engine.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lll::{resample_until_good, Event, VariableSpace};
use crate::seeding::stream_rng;

/// A t-part vertex partition with the degree window it was checked against.
#[derive(Debug, Clone)]
pub struct VertexPartition {
    pub parts: Vec<Vec<usize>>,
    pub t: usize,
    pub degree_window: (f64, f64),
}

/// On-disk JSON form: `{"t":…, "parts":[[v,…],…]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionFile {
    pub t: usize,
    pub parts: Vec<Vec<usize>>,
}

impl VertexPartition {
    pub fn to_file(&self) -> PartitionFile {
        PartitionFile {
            t: self.t,
            parts: self.parts.clone(),
        }
    }
}

/// The degree window `d/t ± c_window · sqrt(d·log d / t)`.
pub fn degree_window(d: usize, t: usize, c_window: f64) -> (f64, f64) {
    let center = d as f64 / t as f64;
    let spread = if d >= 2 {
        c_window * ((d as f64) * (d as f64).ln() / t as f64).sqrt()
    } else {
        0.0
    };
    (center - spread, center + spread)
}

struct BlockState {
    blocks: Vec<std::ops::Range<usize>>, // vertex index ranges, ascending
    part_of: Vec<usize>,
}

impl BlockState {
    fn assign_block(&mut self, k: usize, rng: &mut rand_chacha::ChaCha8Rng) {
        let range = self.blocks[k].clone();
        let len = range.len();
        let mut labels: Vec<usize> = (0..len).collect();
        labels.shuffle(rng);
        for (off, v) in range.enumerate() {
            self.part_of[v] = labels[off];
        }
    }
}

impl VariableSpace for BlockState {
    fn resample(&mut self, var: usize, rng: &mut rand_chacha::ChaCha8Rng) {
        self.assign_block(var, rng);
    }
}

/// Partitions the vertices of a d-regular graph into `t` parts such that
/// part sizes differ by at most one and every vertex has between `lo` and
/// `hi` neighbors in every part, where `(lo, hi)` is
/// `d/t ± c_window·sqrt(d·log d / t)`.
///
/// Both properties are re-verified by an independent scan before the
/// partition is returned; the resampler is never trusted on its own.
pub fn partition_vertices(
    g: &Graph,
    t: usize,
    c_window: f64,
    seed: u64,
    max_resamples: usize,
) -> Result<VertexPartition> {
    let n = g.n();
    if t == 0 {
        return Err(Error::InvalidParameter("t must be >= 1".into()));
    }
    if t > n {
        return Err(Error::InvalidParameter(format!(
            "t={t} exceeds vertex count n={n}"
        )));
    }
    let d = g
        .regular_degree()
        .ok_or_else(|| Error::Contract("partition_vertices requires a regular graph".into()))?;
    let window = degree_window(d, t, c_window);

    // Blocks F_1..F_s by ascending vertex index, all of size t except
    // possibly the last.
    let mut blocks = Vec::new();
    let mut start = 0;
    while start < n {
        let end = (start + t).min(n);
        blocks.push(start..end);
        start = end;
    }
    let block_of = {
        let mut b = vec![0usize; n];
        for (k, r) in blocks.iter().enumerate() {
            for v in r.clone() {
                b[v] = k;
            }
        }
        b
    };

    let mut rng = stream_rng(seed, "vertex-partition");
    let mut state = BlockState {
        blocks,
        part_of: vec![0; n],
    };
    for k in 0..state.blocks.len() {
        state.assign_block(k, &mut rng);
    }

    // Bad events: d(v, V_i) outside the window. Each event reads the
    // permutations of the blocks containing a neighbor of v.
    let mut events: Vec<Event<BlockState>> = Vec::new();
    for v in 0..n {
        let mut vars: Vec<usize> = g.neighbors(v).iter().map(|&u| block_of[u]).collect();
        vars.sort_unstable();
        vars.dedup();
        if vars.is_empty() {
            continue; // isolated vertex, nothing to check (d = 0)
        }
        let neighbors: Vec<usize> = g.neighbors(v).to_vec();
        let (lo, hi) = window;
        for i in 0..t {
            let neighbors = neighbors.clone();
            events.push(Event::new(vars.clone(), move |s: &BlockState| {
                let count = neighbors.iter().filter(|&&u| s.part_of[u] == i).count() as f64;
                count < lo || count > hi
            }));
        }
    }

    resample_until_good(&mut state, &events, max_resamples, &mut rng)?;

    let mut parts = vec![Vec::new(); t];
    for v in 0..n {
        parts[state.part_of[v]].push(v);
    }
    let partition = VertexPartition {
        parts,
        t,
        degree_window: window,
    };
    verify_partition(g, &partition).map_err(Error::Internal)?;
    Ok(partition)
}

/// Independent scan of both partition properties: exact part sizes
/// (⌈n/t⌉ or ⌊n/t⌋, pairwise difference ≤ 1, disjoint cover) and all n·t
/// degree-window checks.
pub fn verify_partition(g: &Graph, p: &VertexPartition) -> std::result::Result<(), String> {
    let n = g.n();
    if p.parts.len() != p.t {
        return Err(format!("expected {} parts, found {}", p.t, p.parts.len()));
    }
    let mut seen = vec![false; n];
    for part in &p.parts {
        for &v in part {
            if v >= n {
                return Err(format!("vertex {v} out of range"));
            }
            if seen[v] {
                return Err(format!("vertex {v} appears in two parts"));
            }
            seen[v] = true;
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err("partition does not cover all vertices".into());
    }
    let lo_size = n / p.t;
    let hi_size = n.div_ceil(p.t);
    for (i, part) in p.parts.iter().enumerate() {
        if part.len() != lo_size && part.len() != hi_size {
            return Err(format!(
                "part {i} has size {} outside {{{lo_size},{hi_size}}}",
                part.len()
            ));
        }
    }
    let mut part_of = vec![0usize; n];
    for (i, part) in p.parts.iter().enumerate() {
        for &v in part {
            part_of[v] = i;
        }
    }
    let (lo, hi) = p.degree_window;
    for v in 0..n {
        let mut counts = vec![0usize; p.t];
        for &u in g.neighbors(v) {
            counts[part_of[u]] += 1;
        }
        for (i, &c) in counts.iter().enumerate() {
            let c = c as f64;
            if c < lo || c > hi {
                return Err(format!(
                    "d(v={v}, part {i}) = {c} outside window [{lo}, {hi}]"
                ));
            }
        }
    }
    Ok(())
}
