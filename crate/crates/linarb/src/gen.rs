//! Graph generators and spectral-gap estimation.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{edge, Graph};

const PAIRING_RESTARTS: usize = 200;

/// Samples a simple d-regular graph on n vertices via the pairing model.
///
/// Half-edge stubs are shuffled and paired greedily; stubs whose pairing
/// would create a loop or a parallel edge are thrown back and re-shuffled.
/// A pass that makes no progress restarts the whole sample. Deterministic
/// under a fixed seed.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if d >= n && !(n == 0 && d == 0) {
        return Err(Error::InvalidParameter(format!(
            "degree d={d} needs at least d+1 vertices, got n={n}"
        )));
    }
    if n.checked_mul(d).map_or(true, |nd| nd % 2 == 1) {
        return Err(Error::InvalidParameter(format!(
            "n*d must be even, got n={n}, d={d}"
        )));
    }
    if d == 0 {
        return Ok(Graph::empty(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'restart: for _ in 0..PAIRING_RESTARTS {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
        let mut edges: std::collections::BTreeSet<(usize, usize)> = Default::default();
        while !stubs.is_empty() {
            stubs.shuffle(&mut rng);
            let mut leftover = Vec::new();
            let mut progress = false;
            for pair in stubs.chunks(2) {
                let (u, v) = (pair[0], pair[1]);
                if u != v && edges.insert(edge(u, v)) {
                    progress = true;
                } else {
                    leftover.push(u);
                    leftover.push(v);
                }
            }
            if !progress {
                continue 'restart;
            }
            stubs = leftover;
        }
        let edges: Vec<(usize, usize)> = edges.into_iter().collect();
        return Graph::from_edges(n, &edges);
    }
    Err(Error::RetryExhausted(format!(
        "pairing model failed to produce a simple {d}-regular graph on {n} vertices \
         after {PAIRING_RESTARTS} restarts"
    )))
}

/// Circulant graph: vertex `i` adjacent to `i ± o (mod n)` for each offset.
pub fn circulant(n: usize, offsets: &[usize]) -> Result<Graph> {
    let mut seen = std::collections::BTreeSet::new();
    for &o in offsets {
        if o == 0 || o > n / 2 {
            return Err(Error::InvalidParameter(format!(
                "offset {o} outside 1..={}",
                n / 2
            )));
        }
        if !seen.insert(o) {
            return Err(Error::InvalidParameter(format!("duplicate offset {o}")));
        }
    }
    let mut edges = std::collections::BTreeSet::new();
    for i in 0..n {
        for &o in offsets {
            edges.insert(edge(i, (i + o) % n));
        }
    }
    let edges: Vec<(usize, usize)> = edges.into_iter().collect();
    Graph::from_edges(n, &edges)
}

/// The complete graph on t vertices.
pub fn complete_graph(t: usize) -> Result<Graph> {
    if t == 0 {
        return Err(Error::InvalidParameter("complete graph needs t >= 1".into()));
    }
    let edges: Vec<(usize, usize)> = (0..t)
        .flat_map(|u| ((u + 1)..t).map(move |v| (u, v)))
        .collect();
    Graph::from_edges(t, &edges)
}

/// Estimate of the second-largest absolute adjacency eigenvalue of a
/// regular graph.
#[derive(Debug, Clone)]
pub struct SpectralReport {
    pub lambda: f64,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

/// Power iteration on A² with the all-ones direction projected out every
/// step; the all-ones vector is an exact eigenvector of a regular graph,
/// so the deflation is exact and the dominant direction of the deflated
/// operator is the second-largest absolute eigenvalue squared.
pub fn second_eigenvalue(
    g: &Graph,
    tol: f64,
    max_iters: usize,
    seed: u64,
) -> Result<SpectralReport> {
    let d = g
        .regular_degree()
        .ok_or_else(|| Error::Contract("second_eigenvalue requires a regular graph".into()))?;
    let n = g.n();
    if n <= 1 || d == 0 {
        return Ok(SpectralReport {
            lambda: 0.0,
            iterations: 0,
            residual: 0.0,
            converged: true,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    project_out_ones(&mut x);
    normalize(&mut x);

    let apply = |x: &[f64], out: &mut Vec<f64>| {
        out.clear();
        out.resize(n, 0.0);
        for u in 0..n {
            let xu = x[u];
            for &v in g.neighbors(u) {
                out[v] += xu;
            }
        }
    };

    let mut ax = Vec::new();
    let mut y = Vec::new();
    let mut rho = 0.0f64;
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    for it in 1..=max_iters {
        iterations = it;
        apply(&x, &mut ax);
        apply(&ax, &mut y);
        project_out_ones(&mut y);
        rho = dot(&x, &y); // Rayleigh quotient of A² at unit x
        let mut r2 = 0.0;
        for i in 0..n {
            let diff = y[i] - rho * x[i];
            r2 += diff * diff;
        }
        residual = r2.sqrt();
        let scale = rho.max(0.0).sqrt().max(1e-12);
        if residual <= tol * (d as f64) * scale {
            x.clone_from(&y);
            normalize(&mut x);
            return Ok(SpectralReport {
                lambda: rho.max(0.0).sqrt().min(d as f64),
                iterations,
                residual,
                converged: true,
            });
        }
        x.clone_from(&y);
        normalize(&mut x);
    }
    Ok(SpectralReport {
        lambda: rho.max(0.0).sqrt().min(d as f64),
        iterations,
        residual,
        converged: false,
    })
}

fn project_out_ones(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    for v in x.iter_mut() {
        *v -= mean;
    }
}

fn normalize(x: &mut [f64]) {
    let norm = dot(x, x).sqrt();
    if norm > 0.0 {
        for v in x.iter_mut() {
            *v /= norm;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_is_the_only_cubic_graph_on_four_vertices() {
        let g = random_regular(4, 3, 11).unwrap();
        assert_eq!(g.m(), 6);
        assert_eq!(g.regular_degree(), Some(3));
    }

    #[test]
    fn random_regular_is_simple_regular_and_deterministic() {
        let g1 = random_regular(10, 3, 7).unwrap();
        let g2 = random_regular(10, 3, 7).unwrap();
        assert_eq!(g1.regular_degree(), Some(3));
        assert_eq!(g1.edges(), g2.edges());
        let g3 = random_regular(10, 3, 8).unwrap();
        assert!(g3.regular_degree() == Some(3));
    }

    #[test]
    fn parity_violation_is_rejected() {
        assert!(matches!(
            random_regular(5, 3, 1),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn dense_regular_instances_come_out_fast() {
        // whole-sample rejection would essentially never succeed here
        let g = random_regular(256, 64, 3).unwrap();
        assert_eq!(g.regular_degree(), Some(64));
    }

    #[test]
    fn circulant_examples() {
        let c5 = circulant(5, &[1]).unwrap();
        assert_eq!(c5.m(), 5);
        assert_eq!(c5.regular_degree(), Some(2));

        let g = circulant(8, &[1, 4]).unwrap();
        assert_eq!(g.regular_degree(), Some(3));

        let k6 = circulant(6, &[1, 2, 3]).unwrap();
        assert_eq!(k6.m(), 15);
        assert_eq!(k6.regular_degree(), Some(5));
    }

    #[test]
    fn complete_graph_examples() {
        assert_eq!(complete_graph(1).unwrap().m(), 0);
        assert_eq!(complete_graph(3).unwrap().m(), 3);
        assert_eq!(complete_graph(6).unwrap().m(), 15);
    }

    // Jacobi eigenvalue sweep; dense oracle for tiny graphs.
    fn dense_second_abs_eigenvalue(g: &Graph) -> f64 {
        let n = g.n();
        let mut a = vec![vec![0.0f64; n]; n];
        for (u, v) in g.edges() {
            a[u][v] = 1.0;
            a[v][u] = 1.0;
        }
        for _sweep in 0..100 {
            let mut off = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += a[p][q] * a[p][q];
                }
            }
            if off < 1e-20 {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    if a[p][q].abs() < 1e-15 {
                        continue;
                    }
                    let theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[k][p];
                        let akq = a[k][q];
                        a[k][p] = c * akp - s * akq;
                        a[k][q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[p][k];
                        let aqk = a[q][k];
                        a[p][k] = c * apk - s * aqk;
                        a[q][k] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut eigs: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
        // drop one copy of the top eigenvalue d, keep max |remaining|
        let top = eigs
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        let pos = eigs.iter().position(|&e| (e - top).abs() < 1e-9).unwrap();
        eigs.remove(pos);
        eigs.into_iter().map(f64::abs).fold(0.0, f64::max)
    }

    #[test]
    fn complete_graph_lambda_is_one() {
        let k7 = complete_graph(7).unwrap();
        let rep = second_eigenvalue(&k7, 1e-7, 10_000, 5).unwrap();
        assert!(rep.converged);
        assert!((rep.lambda - 1.0).abs() < 1e-4, "lambda={}", rep.lambda);
    }

    #[test]
    fn cycles_match_dense_oracle() {
        for n in [3usize, 4, 5, 6, 8, 10, 12] {
            let g = circulant(n, &[1]).unwrap();
            let expect = dense_second_abs_eigenvalue(&g);
            let rep = second_eigenvalue(&g, 1e-8, 50_000, 1).unwrap();
            assert!(
                (rep.lambda - expect).abs() <= 1e-3 * 2.0,
                "n={n}: got {} expected {expect}",
                rep.lambda
            );
        }
    }

    #[test]
    fn petersen_lambda_is_two() {
        let petersen = petersen_graph();
        let rep = second_eigenvalue(&petersen, 1e-8, 50_000, 9).unwrap();
        assert!((rep.lambda - 2.0).abs() < 1e-4, "lambda={}", rep.lambda);
        let dense = dense_second_abs_eigenvalue(&petersen);
        assert!((dense - 2.0).abs() < 1e-7);
    }

    #[test]
    fn circulant_lambda_matches_closed_form() {
        // max_{k != 0} |sum_o 2 cos(2 pi k o / n)|
        for (n, offsets) in [(12usize, vec![1usize, 3]), (15, vec![1, 2, 4])] {
            let g = circulant(n, &offsets).unwrap();
            let d = g.regular_degree().unwrap() as f64;
            let mut expect: f64 = 0.0;
            for k in 1..n {
                let s: f64 = offsets
                    .iter()
                    .map(|&o| 2.0 * (std::f64::consts::TAU * k as f64 * o as f64 / n as f64).cos())
                    .sum();
                expect = expect.max(s.abs());
            }
            let rep = second_eigenvalue(&g, 1e-8, 100_000, 2).unwrap();
            assert!(
                (rep.lambda - expect).abs() <= 1e-3 * d,
                "n={n} offsets={offsets:?}: got {} expected {expect}",
                rep.lambda
            );
        }
    }

    #[test]
    fn non_regular_input_is_a_contract_error() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(matches!(
            second_eigenvalue(&g, 1e-6, 100, 0),
            Err(Error::Contract(_))
        ));
    }

    pub(super) fn petersen_graph() -> Graph {
        // outer 5-cycle, inner 5-cycle with step 2, spokes
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
            edges.push((i, 5 + i));
        }
        Graph::from_edges(10, &edges).unwrap()
    }
}
