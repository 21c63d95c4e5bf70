//! Edge colorings and structured matching decompositions.
//!
//! The workhorse is [`vizing_color`], the constructive fan/rotate/
//! alternating-path procedure that properly colors any graph with at most
//! Δ+1 colors. On top of it sit bipartite matching layers, perfect-matching
//! peeling for regular bipartite graphs, and the zig-zag Hamiltonian path
//! decomposition of complete graphs on an even number of vertices.

use std::collections::BTreeMap;

use crate::bipartite::Bipartite;
use crate::error::{Error, Result};
use crate::graph::{edge, EdgeSet, Graph, Matching};

const NONE: usize = usize::MAX;

/// A proper edge coloring with colors `0..palette_size`.
#[derive(Debug, Clone)]
pub struct EdgeColoring {
    color: BTreeMap<(usize, usize), usize>,
    palette_size: usize,
}

impl EdgeColoring {
    pub fn color_of(&self, u: usize, v: usize) -> Option<usize> {
        self.color.get(&edge(u, v)).copied()
    }

    pub fn palette_size(&self) -> usize {
        self.palette_size
    }

    pub fn len(&self) -> usize {
        self.color.len()
    }

    pub fn is_empty(&self) -> bool {
        self.color.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.color.iter().map(|(&e, &c)| (e, c))
    }

    /// Color classes as matchings, indexed by color.
    pub fn classes(&self) -> Vec<Matching> {
        let mut sets = vec![EdgeSet::new(); self.palette_size];
        for (&(u, v), &c) in &self.color {
            sets[c].insert(u, v);
        }
        sets.into_iter()
            .map(|s| Matching::try_from_edges(s).expect("proper coloring classes are matchings"))
            .collect()
    }

    /// True iff no two incident edges share a color.
    pub fn is_proper(&self) -> bool {
        let mut at_vertex: std::collections::BTreeSet<(usize, usize)> = Default::default();
        for (&(u, v), &c) in &self.color {
            if !at_vertex.insert((u, c)) {
                return false;
            }
            if !at_vertex.insert((v, c)) {
                return false;
            }
        }
        true
    }
}

struct VizingState {
    max_c: usize,
    by_color: Vec<Vec<usize>>, // by_color[v][c] = neighbor across the c-colored edge
    color_used: Vec<usize>,    // edges currently carrying each color
}

impl VizingState {
    fn new(n: usize, max_c: usize) -> Self {
        VizingState {
            max_c,
            by_color: vec![vec![NONE; max_c]; n],
            color_used: vec![0; max_c],
        }
    }

    #[inline]
    fn is_free(&self, v: usize, c: usize) -> bool {
        self.by_color[v][c] == NONE
    }

    fn first_free(&self, v: usize) -> usize {
        (0..self.max_c)
            .find(|&c| self.is_free(v, c))
            .expect("a palette of size maxdeg+1 always has a free color")
    }

    fn color_at(&self, u: usize, x: usize) -> Option<usize> {
        (0..self.max_c).find(|&c| self.by_color[u][c] == x)
    }

    fn set(&mut self, u: usize, v: usize, c: usize) {
        debug_assert!(self.is_free(u, c) && self.is_free(v, c));
        self.by_color[u][c] = v;
        self.by_color[v][c] = u;
        self.color_used[c] += 1;
    }

    fn unset(&mut self, u: usize, v: usize, c: usize) {
        debug_assert_eq!(self.by_color[u][c], v);
        debug_assert_eq!(self.by_color[v][c], u);
        self.by_color[u][c] = NONE;
        self.by_color[v][c] = NONE;
        self.color_used[c] -= 1;
    }

    /// A color is cheap if some edge already carries it; coloring with a
    /// cheap color never grows the used palette.
    #[inline]
    fn cheap(&self, c: usize) -> bool {
        self.color_used[c] > 0
    }

    /// Maximal fan of `u` starting at `v`: a sequence of distinct neighbors
    /// where each next edge's color is free on the previous fan vertex.
    fn maximal_fan(&self, u: usize, v: usize) -> Vec<usize> {
        let mut fan = vec![v];
        let mut in_fan: std::collections::BTreeSet<usize> = [v].into();
        loop {
            let last = *fan.last().unwrap();
            let mut extended = false;
            for c in 0..self.max_c {
                if self.is_free(last, c) {
                    let x = self.by_color[u][c];
                    if x != NONE && !in_fan.contains(&x) {
                        fan.push(x);
                        in_fan.insert(x);
                        extended = true;
                        break;
                    }
                }
            }
            if !extended {
                return fan;
            }
        }
    }

    /// Flips the colors on the maximal path from `u` alternating d, c, d, …
    /// (`c` is free at `u`, so `u` is an endpoint of its cd-component).
    fn invert_cd_path(&mut self, u: usize, c: usize, d: usize) {
        let mut path = Vec::new();
        let mut cur = u;
        let mut col = d;
        loop {
            let nxt = self.by_color[cur][col];
            if nxt == NONE {
                break;
            }
            path.push((cur, nxt, col));
            cur = nxt;
            col = c + d - col;
        }
        for &(a, b, col) in &path {
            self.unset(a, b, col);
        }
        for &(a, b, col) in &path {
            self.set(a, b, c + d - col);
        }
    }

    fn color_edge(&mut self, u: usize, v: usize) {
        // Try to finish with colors that are already in use before letting
        // any step open a fresh color class.
        if self.try_color_edge(u, v, true) {
            return;
        }
        let ok = self.try_color_edge(u, v, false);
        debug_assert!(ok, "unrestricted pass always colors the edge");
    }

    fn try_color_edge(&mut self, u: usize, v: usize, cheap_only: bool) -> bool {
        let allowed = |st: &Self, c: usize| !cheap_only || st.cheap(c);
        // direct: smallest allowed color free at both endpoints
        if let Some(c) =
            (0..self.max_c).find(|&c| allowed(self, c) && self.is_free(u, c) && self.is_free(v, c))
        {
            self.set(u, v, c);
            return true;
        }
        let fan = self.maximal_fan(u, v);
        // rotation without inversion: smallest allowed color free at u and
        // at some fan vertex
        for d in 0..self.max_c {
            if !allowed(self, d) || !self.is_free(u, d) {
                continue;
            }
            if let Some(w) = fan.iter().position(|&x| self.is_free(x, d)) {
                self.rotate(u, &fan, w, d);
                return true;
            }
        }
        // hard case: free d at the fan's far end by flipping the cd path
        // through u, then rotate the prefix that is still a fan
        let last = *fan.last().unwrap();
        let Some(c) = (0..self.max_c).find(|&c| allowed(self, c) && self.is_free(u, c)) else {
            return false;
        };
        let Some(d) = (0..self.max_c).find(|&d| allowed(self, d) && self.is_free(last, d)) else {
            return false;
        };
        debug_assert!(!self.is_free(u, d));
        self.invert_cd_path(u, c, d);
        debug_assert!(self.is_free(u, d));
        // first fan vertex with d free whose prefix is still a fan in the
        // current coloring (the inversion may have recolored fan edges)
        let mut w = None;
        for (i, &x) in fan.iter().enumerate() {
            if i > 0 {
                let col = self.color_at(u, fan[i]);
                match col {
                    Some(col) if self.is_free(fan[i - 1], col) => {}
                    _ => break,
                }
            }
            if self.is_free(x, d) {
                w = Some(i);
                break;
            }
        }
        let w = w.expect("a rotatable fan prefix always exists");
        self.rotate(u, &fan, w, d);
        true
    }

    /// Shifts each fan edge's color one step toward the uncolored edge
    /// and colors `(u, fan[w])` with `d`.
    fn rotate(&mut self, u: usize, fan: &[usize], w: usize, d: usize) {
        for i in 0..w {
            let col = self
                .color_at(u, fan[i + 1])
                .expect("interior fan edges are colored");
            self.unset(u, fan[i + 1], col);
            self.set(u, fan[i], col);
        }
        self.set(u, fan[w], d);
    }
}

/// Proper edge coloring with at most Δ+1 colors via the fan-rotation
/// procedure; colors are compacted to the used set before returning.
///
/// The procedure leaves the processing order of the uncolored edges free.
/// On small graphs several deterministic orders are tried and the coloring
/// with the fewest used colors wins, which in practice finds Δ-colorings
/// of small class-1 graphs.
pub fn vizing_color(g: &Graph) -> EdgeColoring {
    let delta = g.max_degree();
    if delta == 0 {
        return EdgeColoring {
            color: BTreeMap::new(),
            palette_size: 0,
        };
    }
    let mut best: Option<BTreeMap<(usize, usize), usize>> = None;
    let mut best_used = usize::MAX;
    for edges in edge_orders(g) {
        let mut st = VizingState::new(g.n(), delta + 1);
        for &(u, v) in &edges {
            st.color_edge(u, v);
        }
        let mut color = BTreeMap::new();
        for u in 0..g.n() {
            for c in 0..st.max_c {
                let v = st.by_color[u][c];
                if v != NONE && u < v {
                    color.insert((u, v), c);
                }
            }
        }
        let used = {
            let mut s: Vec<usize> = color.values().copied().collect();
            s.sort_unstable();
            s.dedup();
            s.len()
        };
        if used < best_used {
            best_used = used;
            best = Some(color);
        }
        if best_used <= delta {
            break;
        }
    }
    let mut color = best.expect("at least one order is always tried");
    // compact color indices to the used set, keeping their order
    let used: Vec<usize> = {
        let mut s: Vec<usize> = color.values().copied().collect();
        s.sort_unstable();
        s.dedup();
        s
    };
    let remap: BTreeMap<usize, usize> = used.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    for c in color.values_mut() {
        *c = remap[c];
    }
    let coloring = EdgeColoring {
        color,
        palette_size: used.len(),
    };
    debug_assert!(coloring.is_proper());
    coloring
}

/// Deterministic processing orders: canonical order always, plus a few
/// alternatives on small graphs where retries are cheap.
fn edge_orders(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    let base = g.edges();
    let mut orders = vec![base.clone()];
    if !base.is_empty() && base.len() <= 256 {
        let mut rev = base.clone();
        rev.reverse();
        orders.push(rev);
        let mut by_degree = base.clone();
        by_degree.sort_by_key(|&(u, v)| std::cmp::Reverse(g.degree(u) + g.degree(v)));
        orders.push(by_degree);
        for k in 0u64..5 {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut shuffled = base.clone();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xC0105EED ^ k);
            shuffled.shuffle(&mut rng);
            orders.push(shuffled);
        }
    }
    orders
}

/// An ordered decomposition of a bipartite graph into exactly `s`
/// matchings, possibly with empty layers at the end.
#[derive(Debug, Clone)]
pub struct MatchingLayers {
    pub layers: Vec<Matching>,
}

impl MatchingLayers {
    pub fn s(&self) -> usize {
        self.layers.len()
    }

    pub fn layer(&self, i: usize) -> &Matching {
        &self.layers[i]
    }
}

/// Decomposes a bipartite graph into exactly `s` matchings (host-graph
/// vertex ids) by edge coloring and padding with empty layers.
pub fn bipartite_matchings(b: &Bipartite, s: usize) -> Result<MatchingLayers> {
    if b.max_degree() + 1 > s {
        return Err(Error::InvalidParameter(format!(
            "s={s} too small: need at least maxdeg+1 = {}",
            b.max_degree() + 1
        )));
    }
    let (local, table) = b.to_graph();
    let coloring = vizing_color(&local);
    let mut layers: Vec<Matching> = coloring
        .classes()
        .into_iter()
        .map(|m| {
            let mapped = EdgeSet::from_edges(m.edges().iter().map(|(u, v)| (table[u], table[v])));
            Matching::try_from_edges(mapped).expect("relabeling preserves matchings")
        })
        .collect();
    while layers.len() < s {
        layers.push(Matching::empty());
    }
    Ok(MatchingLayers { layers })
}

/// Splits an r-regular balanced bipartite graph into r perfect matchings,
/// peeling one maximum matching (augmenting paths) at a time.
pub fn peel_perfect_matchings(b: &Bipartite) -> Result<Vec<Matching>> {
    let (nl, nr) = (b.n_left(), b.n_right());
    if nl != nr {
        return Err(Error::Contract(format!(
            "peeling needs balanced sides, got {nl} and {nr}"
        )));
    }
    let r = if nl == 0 { 0 } else { b.left_degree(0) };
    for i in 0..nl {
        if b.left_degree(i) != r {
            return Err(Error::Contract(format!(
                "left vertex {i} has degree {} != {r}",
                b.left_degree(i)
            )));
        }
    }
    for (j, deg) in b.right_degrees().into_iter().enumerate() {
        if deg != r {
            return Err(Error::Contract(format!(
                "right vertex {j} has degree {deg} != {r}"
            )));
        }
    }
    let mut adj: Vec<Vec<usize>> = (0..nl).map(|i| b.neighbors(i).to_vec()).collect();
    let mut out = Vec::with_capacity(r);
    for _round in 0..r {
        let match_left = maximum_matching(&adj, nr);
        if match_left.iter().any(|&j| j == NONE) {
            return Err(Error::Internal(
                "regular bipartite graph is missing a perfect matching".into(),
            ));
        }
        let mut es = EdgeSet::new();
        for (i, &j) in match_left.iter().enumerate() {
            es.insert(b.left[i], b.right[j]);
            adj[i].retain(|&x| x != j);
        }
        out.push(Matching::try_from_edges(es).expect("matched edges are disjoint"));
    }
    Ok(out)
}

/// Kuhn's augmenting-path maximum matching; returns left -> right (or NONE).
fn maximum_matching(adj: &[Vec<usize>], nr: usize) -> Vec<usize> {
    fn try_augment(
        u: usize,
        adj: &[Vec<usize>],
        visited: &mut [bool],
        match_left: &mut [usize],
        match_right: &mut [usize],
    ) -> bool {
        for &v in &adj[u] {
            if visited[v] {
                continue;
            }
            visited[v] = true;
            if match_right[v] == NONE
                || try_augment(match_right[v], adj, visited, match_left, match_right)
            {
                match_left[u] = v;
                match_right[v] = u;
                return true;
            }
        }
        false
    }

    let nl = adj.len();
    let mut match_left = vec![NONE; nl];
    let mut match_right = vec![NONE; nr];
    let mut visited = vec![false; nr];
    for u in 0..nl {
        visited.iter_mut().for_each(|x| *x = false);
        try_augment(u, adj, &mut visited, &mut match_left, &mut match_right);
    }
    match_left
}

/// A Hamiltonian path decomposition of the complete graph on an even
/// number of vertices: t/2 edge-disjoint Hamiltonian paths whose endpoint
/// pairs are pairwise disjoint.
#[derive(Debug, Clone)]
pub struct HamPathSet {
    pub paths: Vec<Vec<usize>>,
    pub endpoints: Vec<(usize, usize)>,
}

/// The zig-zag decomposition: path k visits k, k+1, k-1, k+2, k-2, …, k+t/2
/// with all indices mod t. Every call re-verifies the full invariant set
/// before returning.
pub fn walecki_paths(t: usize) -> Result<HamPathSet> {
    if t < 2 || t % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "walecki_paths needs even t >= 2, got {t}"
        )));
    }
    let half = t / 2;
    let mut paths = Vec::with_capacity(half);
    for k in 0..half {
        let mut seq = Vec::with_capacity(t);
        seq.push(k);
        for j in 1..=half {
            seq.push((k + j) % t);
            if j < half {
                seq.push((k + t - j) % t);
            }
        }
        paths.push(seq);
    }
    let endpoints: Vec<(usize, usize)> = paths
        .iter()
        .map(|p| (*p.first().unwrap(), *p.last().unwrap()))
        .collect();
    let set = HamPathSet { paths, endpoints };
    verify_ham_path_set(t, &set).map_err(Error::Internal)?;
    Ok(set)
}

/// Checks every HamPathSet invariant from scratch.
pub fn verify_ham_path_set(t: usize, set: &HamPathSet) -> std::result::Result<(), String> {
    if set.paths.len() != t / 2 {
        return Err(format!(
            "expected {} paths, found {}",
            t / 2,
            set.paths.len()
        ));
    }
    let mut all_edges = EdgeSet::new();
    for (idx, p) in set.paths.iter().enumerate() {
        if p.len() != t {
            return Err(format!("path {idx} visits {} vertices, wanted {t}", p.len()));
        }
        let mut seen = vec![false; t];
        for &v in p {
            if v >= t {
                return Err(format!("path {idx} mentions vertex {v} >= {t}"));
            }
            if seen[v] {
                return Err(format!("path {idx} repeats vertex {v}"));
            }
            seen[v] = true;
        }
        for pair in p.windows(2) {
            if !all_edges.insert(pair[0], pair[1]) {
                return Err(format!("edge ({},{}) used by two paths", pair[0], pair[1]));
            }
        }
    }
    if all_edges.len() != t * (t - 1) / 2 {
        return Err(format!(
            "paths cover {} edges, wanted {}",
            all_edges.len(),
            t * (t - 1) / 2
        ));
    }
    let mut endpoint_seen = vec![false; t];
    for &(s, e) in &set.endpoints {
        for v in [s, e] {
            if endpoint_seen[v] {
                return Err(format!("vertex {v} is an endpoint of two paths"));
            }
            endpoint_seen[v] = true;
        }
    }
    Ok(())
}

/// Minimum proper edge-coloring size by backtracking; refuses graphs with
/// more than `limit` edges.
pub fn exact_chromatic_index(g: &Graph, limit: usize) -> Result<usize> {
    if g.m() > limit {
        return Err(Error::InvalidParameter(format!(
            "exact_chromatic_index limited to {limit} edges, graph has {}",
            g.m()
        )));
    }
    if g.m() == 0 {
        return Ok(0);
    }
    let mut edges = g.edges();
    edges.sort_by_key(|&(u, v)| std::cmp::Reverse(g.degree(u) + g.degree(v)));
    let delta = g.max_degree();
    for k in delta..=(delta + 1).max(g.m()).min(63) {
        let mut used = vec![0u64; g.n()];
        if edge_color_feasible(&edges, 0, k, 0, &mut used) {
            return Ok(k);
        }
    }
    Err(Error::Internal("chromatic index search failed".into()))
}

fn edge_color_feasible(
    edges: &[(usize, usize)],
    i: usize,
    k: usize,
    max_used: usize,
    used: &mut [u64],
) -> bool {
    if i == edges.len() {
        return true;
    }
    let (u, v) = edges[i];
    let cap = k.min(max_used + 1);
    for c in 0..cap {
        let bit = 1u64 << c;
        if used[u] & bit == 0 && used[v] & bit == 0 {
            used[u] |= bit;
            used[v] |= bit;
            if edge_color_feasible(edges, i + 1, k, max_used.max(c + 1), used) {
                return true;
            }
            used[u] &= !bit;
            used[v] &= !bit;
        }
    }
    false
}
