//! r-regular spanning subgraphs of balanced bipartite graphs via max-flow.
//!
//! The flow network is source → A (capacity r), original edges A → B
//! (capacity 1) and B → sink (capacity r). An r-factor exists iff max-flow
//! saturates the source, i.e. equals r·m. On infeasibility the min cut is
//! translated into a pair (X, Y) violating the exact counting criterion
//! e(X,Y) ≥ r(|X| + |Y| − m), which certifies that no r-factor exists.

use crate::bipartite::Bipartite;
use crate::color::peel_perfect_matchings;
use crate::error::{Error, Result};
use crate::graph::Matching;

/// Parameters of the r-factor extraction derived from the slack formula
/// `gamma = 104·max(lambda, sqrt(d·log d / t))`, `r = floor(d/t - gamma)`.
#[derive(Debug, Clone, Copy)]
pub struct RFactorParams {
    pub r: i64,
    pub gamma: f64,
    pub lambda: f64,
    /// `gamma < r/2`; the extraction is vacuous otherwise.
    pub feasible: bool,
}

/// The slack portion of the formula, usable at non-integer `d` too.
pub fn gamma_formula(d: f64, t: f64, lambda: f64) -> f64 {
    let sqrt_term = if d >= 2.0 {
        (d * d.ln() / t).sqrt()
    } else {
        0.0
    };
    104.0 * lambda.max(sqrt_term)
}

/// Evaluates gamma and r for a d-regular graph split into t parts with
/// spectral bound lambda, along with the `gamma < r/2` feasibility flag.
pub fn compute_gamma(d: usize, t: usize, lambda: f64) -> Result<RFactorParams> {
    if t == 0 {
        return Err(Error::InvalidParameter("t must be >= 1".into()));
    }
    let gamma = gamma_formula(d as f64, t as f64, lambda);
    let r = (d as f64 / t as f64 - gamma).floor() as i64;
    Ok(RFactorParams {
        r,
        gamma,
        lambda,
        feasible: r > 0 && gamma < r as f64 / 2.0,
    })
}

/// A pair (X ⊆ A, Y ⊆ B) with e(X,Y) < r(|X| + |Y| − m), extracted from a
/// minimum cut; host-graph vertex ids.
#[derive(Debug, Clone)]
pub struct MirskyCut {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub crossing_edges: usize,
    pub required: i64,
}

/// Either the edge set of an r-factor or a certificate that none exists.
#[derive(Debug, Clone)]
pub enum RFactorOutcome {
    /// Host-graph edges of the r-regular spanning subgraph.
    Factor(Vec<(usize, usize)>),
    Infeasible(MirskyCut),
}

/// Searches for an r-regular spanning subgraph of a balanced bipartite
/// graph; returns the factor's edges or a violating cut.
pub fn find_r_factor(b: &Bipartite, r: usize) -> Result<RFactorOutcome> {
    let m = b.n_left();
    if m != b.n_right() {
        return Err(Error::Contract(format!(
            "r-factor needs balanced sides, got {} and {}",
            b.n_left(),
            b.n_right()
        )));
    }
    if r == 0 {
        return Ok(RFactorOutcome::Factor(Vec::new()));
    }
    // nodes: 0 = source, 1..=m left, m+1..=2m right, 2m+1 = sink
    let source = 0;
    let sink = 2 * m + 1;
    let mut net = Dinic::new(2 * m + 2);
    for i in 0..m {
        net.add_edge(source, 1 + i, r as i64);
        net.add_edge(1 + m + i, sink, r as i64);
    }
    let mut arc_ids = Vec::new();
    for i in 0..m {
        for &j in b.neighbors(i) {
            arc_ids.push((i, j, net.add_edge(1 + i, 1 + m + j, 1)));
        }
    }
    let flow = net.max_flow(source, sink);
    if flow == (r * m) as i64 {
        let mut edges = Vec::new();
        for &(i, j, arc) in &arc_ids {
            if net.flow_on(arc) == 1 {
                edges.push((b.left[i], b.right[j]));
            }
        }
        return Ok(RFactorOutcome::Factor(edges));
    }
    // min cut: S = vertices reachable from the source in the residual
    // network; X = A ∩ S, Y = B \ S violate the counting criterion.
    let reach = net.residual_reachable(source);
    let x: Vec<usize> = (0..m).filter(|&i| reach[1 + i]).collect();
    let y: Vec<usize> = (0..m).filter(|&j| !reach[1 + m + j]).collect();
    let y_set: Vec<bool> = {
        let mut s = vec![false; m];
        for &j in &y {
            s[j] = true;
        }
        s
    };
    let crossing = x
        .iter()
        .map(|&i| b.neighbors(i).iter().filter(|&&j| y_set[j]).count())
        .sum::<usize>();
    let cut = MirskyCut {
        crossing_edges: crossing,
        required: (r as i64) * ((x.len() + y.len()) as i64 - m as i64),
        x: x.into_iter().map(|i| b.left[i]).collect(),
        y: y.into_iter().map(|j| b.right[j]).collect(),
    };
    debug_assert!((cut.crossing_edges as i64) < cut.required);
    Ok(RFactorOutcome::Infeasible(cut))
}

/// r edge-disjoint matchings of a bipartite graph with |A| = |B| + 1 such
/// that every vertex is matched in at least r−1 of them.
///
/// A fake vertex adjacent to all of A balances the sides; an r-factor of
/// the augmented graph is peeled into r perfect matchings and the fake
/// vertex's edges are dropped, costing each A-vertex at most one matching.
pub fn near_factor_matchings(b: &Bipartite, r: usize) -> Result<Vec<Matching>> {
    if b.n_left() != b.n_right() + 1 {
        return Err(Error::Contract(format!(
            "near-factor needs |A| = |B| + 1, got {} and {}",
            b.n_left(),
            b.n_right()
        )));
    }
    if r == 0 {
        return Err(Error::InvalidParameter("near-factor needs r >= 1".into()));
    }
    let fake = usize::MAX; // host id of the fake vertex, never emitted
    let mut right = b.right.clone();
    right.push(fake);
    let fake_local = right.len() - 1;
    let mut edges = b.local_edges();
    for i in 0..b.n_left() {
        edges.push((i, fake_local));
    }
    let aug = Bipartite::new(b.left.clone(), right, &edges)?;
    match find_r_factor(&aug, r)? {
        RFactorOutcome::Infeasible(cut) => Err(Error::Infeasible(format!(
            "augmented {r}-factor does not exist: |X|={} |Y|={} crossing={} required={}",
            cut.x.len(),
            cut.y.len(),
            cut.crossing_edges,
            cut.required
        ))),
        RFactorOutcome::Factor(factor_edges) => {
            // rebuild a bipartite view of the factor in local indices
            let mut left_index = vec![usize::MAX; 0];
            left_index.resize(0, 0);
            let mut left_map = std::collections::HashMap::new();
            for (i, &u) in aug.left.iter().enumerate() {
                left_map.insert(u, i);
            }
            let mut right_map = std::collections::HashMap::new();
            for (j, &v) in aug.right.iter().enumerate() {
                right_map.insert(v, j);
            }
            let local: Vec<(usize, usize)> = factor_edges
                .iter()
                .map(|&(u, v)| (left_map[&u], right_map[&v]))
                .collect();
            let factor = Bipartite::new(aug.left.clone(), aug.right.clone(), &local)?;
            let peeled = peel_perfect_matchings(&factor)?;
            peeled
                .into_iter()
                .map(|matching| {
                    let kept = matching
                        .edges()
                        .iter()
                        .filter(|&(u, v)| u != fake && v != fake)
                        .collect::<crate::graph::EdgeSet>();
                    Matching::try_from_edges(kept)
                })
                .collect()
        }
    }
}

/// Dinic max-flow on small integer-capacity networks.
pub struct Dinic {
    graph: Vec<Vec<usize>>, // vertex -> arc ids
    to: Vec<usize>,
    cap: Vec<i64>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    pub fn new(n: usize) -> Self {
        Dinic {
            graph: vec![Vec::new(); n],
            to: Vec::new(),
            cap: Vec::new(),
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    /// Adds a directed arc and its residual twin; returns the arc id.
    pub fn add_edge(&mut self, from: usize, to: usize, cap: i64) -> usize {
        let id = self.to.len();
        self.graph[from].push(id);
        self.to.push(to);
        self.cap.push(cap);
        self.graph[to].push(id + 1);
        self.to.push(from);
        self.cap.push(0);
        id
    }

    /// Flow currently routed through the arc with this id.
    pub fn flow_on(&self, id: usize) -> i64 {
        self.cap[id ^ 1]
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        let mut queue = std::collections::VecDeque::new();
        self.level[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for &id in &self.graph[v] {
                if self.cap[id] > 0 && self.level[self.to[id]] < 0 {
                    self.level[self.to[id]] = self.level[v] + 1;
                    queue.push_back(self.to[id]);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, v: usize, t: usize, f: i64) -> i64 {
        if v == t {
            return f;
        }
        while self.iter[v] < self.graph[v].len() {
            let id = self.graph[v][self.iter[v]];
            let u = self.to[id];
            if self.cap[id] > 0 && self.level[u] == self.level[v] + 1 {
                let d = self.dfs(u, t, f.min(self.cap[id]));
                if d > 0 {
                    self.cap[id] -= d;
                    self.cap[id ^ 1] += d;
                    return d;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
        flow
    }

    /// Vertices reachable from `s` through positive-residual arcs.
    pub fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.graph.len()];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            for &id in &self.graph[v] {
                if self.cap[id] > 0 && !seen[self.to[id]] {
                    seen[self.to[id]] = true;
                    stack.push(self.to[id]);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn complete_bipartite(a: usize, b: usize) -> Bipartite {
        let edges: Vec<(usize, usize)> = (0..a).flat_map(|i| (0..b).map(move |j| (i, j))).collect();
        Bipartite::new((0..a).collect(), (a..a + b).collect(), &edges).unwrap()
    }

    fn factor_degrees(b: &Bipartite, edges: &[(usize, usize)]) -> (Vec<usize>, Vec<usize>) {
        let mut left = vec![0usize; b.n_left()];
        let mut right = vec![0usize; b.n_right()];
        for &(u, v) in edges {
            let i = b.left.iter().position(|&x| x == u).unwrap();
            let j = b.right.iter().position(|&x| x == v).unwrap();
            left[i] += 1;
            right[j] += 1;
        }
        (left, right)
    }

    #[test]
    fn zero_factor_is_always_feasible() {
        let b = complete_bipartite(3, 3);
        match find_r_factor(&b, 0).unwrap() {
            RFactorOutcome::Factor(edges) => assert!(edges.is_empty()),
            RFactorOutcome::Infeasible(_) => panic!("r=0 must be feasible"),
        }
    }

    #[test]
    fn k33_has_a_two_factor() {
        let b = complete_bipartite(3, 3);
        match find_r_factor(&b, 2).unwrap() {
            RFactorOutcome::Factor(edges) => {
                let (l, r) = factor_degrees(&b, &edges);
                assert!(l.iter().all(|&d| d == 2));
                assert!(r.iter().all(|&d| d == 2));
            }
            RFactorOutcome::Infeasible(_) => panic!("K33 contains a 2-factor"),
        }
    }

    #[test]
    fn matching_has_no_two_factor() {
        let g = Graph::from_edges(6, &[(0, 3), (1, 4), (2, 5)]).unwrap();
        let b = Bipartite::induced(&g, &[0, 1, 2], &[3, 4, 5]);
        match find_r_factor(&b, 2).unwrap() {
            RFactorOutcome::Factor(_) => panic!("max degree 1 < 2"),
            RFactorOutcome::Infeasible(cut) => {
                assert!((cut.crossing_edges as i64) < cut.required);
            }
        }
    }

    #[test]
    fn unbalanced_sides_are_a_contract_error() {
        let g = Graph::from_edges(3, &[(0, 2), (1, 2)]).unwrap();
        let b = Bipartite::induced(&g, &[0, 1], &[2]);
        assert!(matches!(find_r_factor(&b, 1), Err(Error::Contract(_))));
    }

    #[test]
    fn infeasible_cut_violates_counting_criterion() {
        // path as bipartite graph with a pendant: 2-factor impossible
        let g = Graph::from_edges(4, &[(0, 2), (0, 3), (1, 3)]).unwrap();
        let b = Bipartite::induced(&g, &[0, 1], &[2, 3]);
        match find_r_factor(&b, 2).unwrap() {
            RFactorOutcome::Factor(_) => panic!("vertex 1 has degree 1 < 2"),
            RFactorOutcome::Infeasible(cut) => {
                assert!((cut.crossing_edges as i64) < cut.required);
                assert!(!cut.x.is_empty() || !cut.y.is_empty());
            }
        }
    }

    #[test]
    fn near_factor_example_tiny() {
        // |A|=2, |B|=1, path 0-2, 1-2, r=1
        let g = Graph::from_edges(3, &[(0, 2), (1, 2)]).unwrap();
        let b = Bipartite::induced(&g, &[0, 1], &[2]);
        let ms = near_factor_matchings(&b, 1).unwrap();
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].len(), 1);
    }

    #[test]
    fn near_factor_guarantee_on_slices() {
        // complete bipartite with |A| = |B| + 1: every vertex matched in
        // at least r-1 of the r matchings
        let b = complete_bipartite(4, 3);
        let r = 2;
        let ms = near_factor_matchings(&b, r).unwrap();
        assert_eq!(ms.len(), r);
        let mut matched = vec![0usize; 7];
        for m in &ms {
            for (u, v) in m.edges().iter() {
                matched[u] += 1;
                matched[v] += 1;
            }
        }
        for v in 0..7 {
            assert!(
                matched[v] + 1 >= r,
                "vertex {v} matched {} < r-1",
                matched[v]
            );
        }
    }

    #[test]
    fn near_factor_low_degree_is_infeasible() {
        // A-side vertex with no edges at all: augmented degree 1 < r = 2
        let b = Bipartite::new(vec![0, 1, 2], vec![3, 4], &[(0, 0), (0, 1), (1, 0), (1, 1)])
            .unwrap();
        assert!(matches!(
            near_factor_matchings(&b, 2),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn gamma_formula_examples() {
        // lambda = 0, t = 1, d = e: gamma = 104 * sqrt(e)
        let g = gamma_formula(std::f64::consts::E, 1.0, 0.0);
        assert!((g - 104.0 * std::f64::consts::E.sqrt()).abs() < 1e-9);

        // d = 1e6, t = 10, lambda = 100: sqrt term dominates
        let d = 1e6f64;
        let sqrt_term = (d * d.ln() / 10.0).sqrt();
        let expect = 104.0 * sqrt_term.max(100.0);
        assert!((gamma_formula(d, 10.0, 100.0) - expect).abs() < 1e-6);

        // lambda = d^{2/3} dominating the sqrt term
        let d = 1e9f64;
        let lam = d.powf(2.0 / 3.0);
        assert!((gamma_formula(d, 4.0, lam) - 104.0 * lam).abs() < 1e-3);
    }

    #[test]
    fn compute_gamma_feasibility_flag() {
        let p = compute_gamma(3, 1, 0.0).unwrap();
        assert!(p.r <= 0 && !p.feasible);
        // the slack term only drops below d/t at astronomical degrees
        let p = compute_gamma(1_000_000, 10, 0.0).unwrap();
        assert!(!p.feasible, "gamma {} vs d/t {}", p.gamma, 1e6 / 10.0);
        let p = compute_gamma(1_000_000_000, 10, 0.0).unwrap();
        assert!(p.feasible);
        assert!(p.r > 0);
        let expected_gamma = gamma_formula(1e9, 10.0, 0.0);
        assert!((p.gamma - expected_gamma).abs() < 1e-6);
        assert_eq!(p.r, (1e9 / 10.0 - expected_gamma).floor() as i64);
    }

    #[test]
    fn dinic_flow_value_on_known_network() {
        let mut d = Dinic::new(6);
        d.add_edge(0, 1, 10);
        d.add_edge(0, 2, 10);
        d.add_edge(1, 3, 4);
        d.add_edge(1, 4, 8);
        d.add_edge(2, 4, 9);
        d.add_edge(3, 5, 10);
        d.add_edge(4, 3, 6);
        d.add_edge(4, 5, 10);
        assert_eq!(d.max_flow(0, 5), 19);
    }

    #[test]
    fn kmm_all_r_up_to_m() {
        for m in [1usize, 2, 3, 5, 8] {
            let b = complete_bipartite(m, m);
            for r in 0..=m {
                match find_r_factor(&b, r).unwrap() {
                    RFactorOutcome::Factor(edges) => {
                        assert_eq!(edges.len(), r * m);
                        let (l, rt) = factor_degrees(&b, &edges);
                        assert!(l.iter().all(|&x| x == r));
                        assert!(rt.iter().all(|&x| x == r));
                    }
                    RFactorOutcome::Infeasible(_) => panic!("K_{{{m},{m}}} has an {r}-factor"),
                }
            }
        }
    }
}
