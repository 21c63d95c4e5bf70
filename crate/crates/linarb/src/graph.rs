//! Simple undirected graphs, linear forests, and decomposition checking.
//!
//! Vertices are dense integers `0..n`. Edges are stored in canonical
//! `(min, max)` form everywhere, which makes set semantics directly
//! testable. A [`Graph`] is immutable after construction and can be shared
//! freely across threads.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Canonical form of an undirected edge.
#[inline]
pub fn edge(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Simple undirected graph with sorted per-vertex neighbor lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting loops, parallel edges
    /// and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u},{v}) out of range for n={n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("loop at vertex {u}")));
            }
            if !seen.insert(edge(u, v)) {
                return Err(Error::InvalidParameter(format!(
                    "parallel edge ({u},{v})"
                )));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            n,
            m: seen.len(),
            adj,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// `Some(d)` iff every vertex has degree exactly `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        if self.n == 0 {
            return Some(0);
        }
        let d = self.degree(0);
        if (1..self.n).all(|v| self.degree(v) == d) {
            Some(d)
        } else {
            None
        }
    }

    /// All edges in canonical form, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Induced subgraph on `vs`, plus the new-index → old-index table.
    ///
    /// `vs` must be duplicate-free; vertices keep the relative order given.
    pub fn induced(&self, vs: &[usize]) -> (Graph, Vec<usize>) {
        let mut old_to_new = vec![usize::MAX; self.n];
        for (i, &v) in vs.iter().enumerate() {
            old_to_new[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vs.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = old_to_new[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        let g = Graph::from_edges(vs.len(), &edges).expect("induced subgraph is simple");
        (g, vs.to_vec())
    }

    /// Reads the plain text edge-list format: first line `n m`, then `m`
    /// lines `u v` with `0 <= u < v < n`.
    pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))??;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .ok_or_else(|| Error::Parse("missing n".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad n: {e}")))?;
        let m: usize = it
            .next()
            .ok_or_else(|| Error::Parse("missing m".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad m: {e}")))?;
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let u: usize = it
                .next()
                .ok_or_else(|| Error::Parse(format!("bad edge line: {line}")))?
                .parse()
                .map_err(|e| Error::Parse(format!("bad vertex: {e}")))?;
            let v: usize = it
                .next()
                .ok_or_else(|| Error::Parse(format!("bad edge line: {line}")))?
                .parse()
                .map_err(|e| Error::Parse(format!("bad vertex: {e}")))?;
            if u >= v {
                return Err(Error::Parse(format!(
                    "edge {u} {v} not in canonical u < v order"
                )));
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse(format!(
                "header promised {m} edges, found {}",
                edges.len()
            )));
        }
        Graph::from_edges(n, &edges)
    }

    /// Writes the edge-list format (LF line endings, canonical edge order).
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{} {}", self.n, self.m)?;
        for (u, v) in self.edges() {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    }
}

/// A set of canonical edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeSet {
    set: BTreeSet<(usize, usize)>,
}

impl EdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(iter: I) -> Self {
        let mut s = Self::new();
        for (u, v) in iter {
            s.insert(u, v);
        }
        s
    }

    /// Inserts the edge in canonical form; returns false on duplicates.
    pub fn insert(&mut self, u: usize, v: usize) -> bool {
        self.set.insert(edge(u, v))
    }

    pub fn remove(&mut self, u: usize, v: usize) -> bool {
        self.set.remove(&edge(u, v))
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.set.contains(&edge(u, v))
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.set.iter().copied()
    }

    pub fn union_with(&mut self, other: &EdgeSet) {
        self.set.extend(other.set.iter().copied());
    }

    /// Degree of every vertex within the set (vertex space `0..n`).
    pub fn degrees(&self, n: usize) -> Vec<usize> {
        let mut deg = vec![0usize; n];
        for &(u, v) in &self.set {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Largest vertex index mentioned by any edge, plus one.
    pub fn vertex_span(&self) -> usize {
        self.set.iter().map(|&(_, v)| v + 1).max().unwrap_or(0)
    }
}

impl FromIterator<(usize, usize)> for EdgeSet {
    fn from_iter<T: IntoIterator<Item = (usize, usize)>>(iter: T) -> Self {
        Self::from_edges(iter)
    }
}

impl<'a> IntoIterator for &'a EdgeSet {
    type Item = (usize, usize);
    type IntoIter = std::iter::Copied<std::collections::btree_set::Iter<'a, (usize, usize)>>;
    fn into_iter(self) -> Self::IntoIter {
        self.set.iter().copied()
    }
}

/// Union-find over the vertices touched by an edge set.
pub(crate) struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `x` and `y` were already connected.
    pub(crate) fn union(&mut self, x: usize, y: usize) -> bool {
        let (mut rx, mut ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        if self.size[rx] < self.size[ry] {
            std::mem::swap(&mut rx, &mut ry);
        }
        self.parent[ry] = rx;
        self.size[rx] += self.size[ry];
        true
    }
}

fn structural_linear_forest(es: &EdgeSet) -> std::result::Result<(), String> {
    let n = es.vertex_span();
    let mut deg = vec![0usize; n];
    let mut dsu = Dsu::new(n);
    for (u, v) in es.iter() {
        deg[u] += 1;
        deg[v] += 1;
        if deg[u] > 2 {
            return Err(format!("vertex {u} has degree > 2"));
        }
        if deg[v] > 2 {
            return Err(format!("vertex {v} has degree > 2"));
        }
        if !dsu.union(u, v) {
            return Err(format!("edge ({u},{v}) closes a cycle"));
        }
    }
    Ok(())
}

/// An edge set in which every vertex has degree at most 2 and no cycle
/// exists, i.e. every component is a path or an isolated vertex.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinearForest {
    edges: EdgeSet,
}

impl LinearForest {
    /// Validates the degree and acyclicity invariants before wrapping.
    pub fn try_from_edges(edges: EdgeSet) -> Result<Self> {
        structural_linear_forest(&edges)
            .map_err(|why| Error::Contract(format!("not a linear forest: {why}")))?;
        Ok(LinearForest { edges })
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Path components as vertex sequences (isolated vertices omitted).
    pub fn paths(&self) -> Vec<Vec<usize>> {
        let mut nbr: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for (u, v) in self.edges.iter() {
            nbr.entry(u).or_default().push(v);
            nbr.entry(v).or_default().push(u);
        }
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        let mut out = Vec::new();
        for (&v, lst) in &nbr {
            if lst.len() == 1 && !seen.contains(&v) {
                // walk from one endpoint to the other
                let mut path = vec![v];
                seen.insert(v);
                let mut prev = v;
                let mut cur = lst[0];
                loop {
                    path.push(cur);
                    seen.insert(cur);
                    let next = nbr[&cur].iter().copied().find(|&w| w != prev);
                    match next {
                        Some(w) => {
                            prev = cur;
                            cur = w;
                        }
                        None => break,
                    }
                }
                out.push(path);
            }
        }
        out
    }
}

/// A set of pairwise vertex-disjoint edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Matching {
    edges: EdgeSet,
}

impl Matching {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Validates vertex-disjointness before wrapping.
    pub fn try_from_edges(edges: EdgeSet) -> Result<Self> {
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        for (u, v) in edges.iter() {
            if !seen.insert(u) {
                return Err(Error::Contract(format!(
                    "not a matching: vertex {u} repeated"
                )));
            }
            if !seen.insert(v) {
                return Err(Error::Contract(format!(
                    "not a matching: vertex {v} repeated"
                )));
            }
        }
        Ok(Matching { edges })
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// True iff `es` spans only edges of `g` and forms a linear forest.
///
/// An edge outside `g` rejects the input instead of answering.
pub fn is_linear_forest(g: &Graph, es: &EdgeSet) -> Result<bool> {
    for (u, v) in es.iter() {
        if !g.has_edge(u, v) {
            return Err(Error::Contract(format!(
                "edge ({u},{v}) is not an edge of the graph"
            )));
        }
    }
    Ok(structural_linear_forest(es).is_ok())
}

/// An ordered list of edge-disjoint linear forests covering a graph.
#[derive(Debug, Clone, Default)]
pub struct ForestDecomposition {
    forests: Vec<LinearForest>,
}

impl ForestDecomposition {
    pub fn new(forests: Vec<LinearForest>) -> Self {
        ForestDecomposition { forests }
    }

    pub fn forests(&self) -> &[LinearForest] {
        &self.forests
    }

    pub fn count(&self) -> usize {
        self.forests.len()
    }

    pub fn total_edges(&self) -> usize {
        self.forests.iter().map(LinearForest::len).sum()
    }

    /// Drops empty classes, keeping order.
    pub fn without_empty(self) -> Self {
        ForestDecomposition {
            forests: self.forests.into_iter().filter(|f| !f.is_empty()).collect(),
        }
    }

    pub fn verify(&self, g: &Graph) -> VerificationReport {
        let raw: Vec<Vec<(usize, usize)>> =
            self.forests.iter().map(|f| f.edges().iter().collect()).collect();
        verify_decomposition(g, &raw)
    }

    pub fn to_file(&self, n: usize) -> DecompositionFile {
        DecompositionFile {
            n,
            count: self.count(),
            forests: self
                .forests
                .iter()
                .map(|f| f.edges().iter().map(|(u, v)| [u, v]).collect())
                .collect(),
        }
    }
}

/// On-disk JSON form: `{"n":…, "count":…, "forests":[[[u,v],…],…]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub n: usize,
    pub count: usize,
    pub forests: Vec<Vec<[usize; 2]>>,
}

impl DecompositionFile {
    pub fn classes(&self) -> Vec<Vec<(usize, usize)>> {
        self.forests
            .iter()
            .map(|f| f.iter().map(|&[u, v]| (u, v)).collect())
            .collect()
    }
}

/// First violation found while checking a decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EdgeNotInGraph { forest: usize, edge: (usize, usize) },
    DuplicateEdge { forest: usize, edge: (usize, usize) },
    NotALinearForest { forest: usize, reason: String },
    MissingEdge { edge: (usize, usize) },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::EdgeNotInGraph { forest, edge } => {
                write!(f, "forest {forest}: edge {edge:?} is not in the graph")
            }
            Violation::DuplicateEdge { forest, edge } => {
                write!(f, "forest {forest}: edge {edge:?} appears in an earlier forest")
            }
            Violation::NotALinearForest { forest, reason } => {
                write!(f, "forest {forest}: {reason}")
            }
            Violation::MissingEdge { edge } => {
                write!(f, "edge {edge:?} is covered by no forest")
            }
        }
    }
}

/// Outcome of decomposition verification: a flag plus the first violation.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub valid: bool,
    pub violation: Option<Violation>,
}

impl VerificationReport {
    fn ok() -> Self {
        VerificationReport {
            valid: true,
            violation: None,
        }
    }

    fn fail(v: Violation) -> Self {
        VerificationReport {
            valid: false,
            violation: Some(v),
        }
    }
}

/// Checks the three decomposition invariants against raw edge classes:
/// classes are edge-disjoint, each is a linear forest over `g`'s edges,
/// and their union is exactly `E(g)`.
pub fn verify_decomposition(g: &Graph, classes: &[Vec<(usize, usize)>]) -> VerificationReport {
    let mut covered: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (idx, class) in classes.iter().enumerate() {
        let mut es = EdgeSet::new();
        for &(u, v) in class {
            if u >= g.n() || v >= g.n() || !g.has_edge(u, v) {
                return VerificationReport::fail(Violation::EdgeNotInGraph {
                    forest: idx,
                    edge: edge(u, v),
                });
            }
            if !covered.insert(edge(u, v)) {
                return VerificationReport::fail(Violation::DuplicateEdge {
                    forest: idx,
                    edge: edge(u, v),
                });
            }
            if !es.insert(u, v) {
                return VerificationReport::fail(Violation::DuplicateEdge {
                    forest: idx,
                    edge: edge(u, v),
                });
            }
        }
        if let Err(reason) = structural_linear_forest(&es) {
            return VerificationReport::fail(Violation::NotALinearForest { forest: idx, reason });
        }
    }
    if covered.len() != g.m() {
        for e in g.edges() {
            if !covered.contains(&e) {
                return VerificationReport::fail(Violation::MissingEdge { edge: e });
            }
        }
    }
    VerificationReport::ok()
}

/// Lower bound on the number of linear forests needed: every linear forest
/// has at most `n - 1` edges, and at most two edges at any one vertex.
pub fn la_lower_bound(g: &Graph) -> usize {
    if g.n() == 0 || g.m() == 0 {
        return 0;
    }
    let by_degree = g.max_degree().div_ceil(2);
    let by_edges = if g.n() >= 2 {
        g.m().div_ceil(g.n() - 1)
    } else {
        0
    };
    by_degree.max(by_edges)
}

/// Embeds `g` into a `Δ(g)`-regular simple graph by iterated doubling.
///
/// Each round duplicates the current graph and joins deficient vertices
/// across the two copies, filling the largest deficiencies first. The
/// original vertices keep their ids and the output induces exactly `g`
/// on them.
pub fn regularize(g: &Graph) -> Graph {
    let target = g.max_degree();
    let mut cur = g.clone();
    // The deficient-vertex count doubles every round, so the number of
    // rounds is logarithmic in the target degree.
    for _ in 0..(usize::BITS as usize + 2) {
        if cur.regular_degree() == Some(target) {
            return cur;
        }
        let n = cur.n();
        let mut edges = cur.edges();
        let copy: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (u + n, v + n)).collect();
        edges.extend(copy);
        let mut need_left: Vec<usize> = (0..n).map(|v| target - cur.degree(v)).collect();
        let mut need_right = need_left.clone();
        // Largest deficiency first; right partners re-ranked per vertex.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(need_left[v]));
        for &u in &order {
            while need_left[u] > 0 {
                let pick = (0..n)
                    .filter(|&w| need_right[w] > 0 && !edges.contains(&(u, w + n)))
                    .max_by_key(|&w| (need_right[w], std::cmp::Reverse(w)));
                match pick {
                    Some(w) => {
                        edges.push((u, w + n));
                        need_left[u] -= 1;
                        need_right[w] -= 1;
                    }
                    None => break,
                }
            }
        }
        cur = Graph::from_edges(2 * n, &edges).expect("doubling preserves simplicity");
    }
    unreachable!("regularize failed to converge");
}
