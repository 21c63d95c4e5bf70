//! Resample-until-good engine over independent random variables.
//!
//! Callers describe a state of independently resamplable variables and a
//! list of bad events, each declaring the variable indices it reads. The
//! engine repeatedly picks the lowest-index violated event and resamples
//! exactly its declared variables until no event is violated or the
//! budget runs out. The engine does not check the usual `e·q·(D+1) < 1`
//! sufficient condition; it exposes the dependency degree and leaves that
//! judgement to callers, whose outputs are certified independently.

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A state whose variables can be independently redrawn.
pub trait VariableSpace {
    /// Redraws variable `var`, leaving every other variable untouched.
    fn resample(&mut self, var: usize, rng: &mut ChaCha8Rng);
}

/// A bad event: a predicate over the state plus the variables it reads.
pub struct Event<S: ?Sized> {
    vars: Vec<usize>,
    predicate: Box<dyn Fn(&S) -> bool>,
}

impl<S: ?Sized> Event<S> {
    pub fn new(mut vars: Vec<usize>, predicate: impl Fn(&S) -> bool + 'static) -> Self {
        vars.sort_unstable();
        vars.dedup();
        Event {
            vars,
            predicate: Box::new(predicate),
        }
    }

    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn is_violated(&self, state: &S) -> bool {
        (self.predicate)(state)
    }
}

/// Counters for one engine run.
#[derive(Debug, Clone)]
pub struct ResampleLog {
    pub total_resamples: usize,
    pub per_event_resamples: Vec<usize>,
    pub terminated: bool,
}

/// Maximum degree of the dependency graph: events are adjacent iff they
/// declare a common variable.
pub fn dependency_degree<S: ?Sized>(events: &[Event<S>]) -> usize {
    let mut var_to_events: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (i, e) in events.iter().enumerate() {
        for &v in e.vars() {
            var_to_events.entry(v).or_default().push(i);
        }
    }
    let mut best = 0;
    let mut nbrs = std::collections::BTreeSet::new();
    for (i, e) in events.iter().enumerate() {
        nbrs.clear();
        for &v in e.vars() {
            for &j in &var_to_events[&v] {
                if j != i {
                    nbrs.insert(j);
                }
            }
        }
        best = best.max(nbrs.len());
    }
    best
}

/// Runs the resampling loop; on success the final state violates no event.
///
/// Violated-event selection is lowest-index-first, so runs are fully
/// reproducible under a seeded RNG.
pub fn resample_until_good<S: VariableSpace>(
    state: &mut S,
    events: &[Event<S>],
    max_resamples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<ResampleLog> {
    if max_resamples == 0 {
        return Err(Error::InvalidParameter("max_resamples must be >= 1".into()));
    }
    for (i, e) in events.iter().enumerate() {
        if e.vars().is_empty() {
            return Err(Error::InvalidParameter(format!(
                "event {i} declares no variables"
            )));
        }
    }
    let mut log = ResampleLog {
        total_resamples: 0,
        per_event_resamples: vec![0; events.len()],
        terminated: false,
    };
    loop {
        let violated = events.iter().position(|e| e.is_violated(state));
        let Some(idx) = violated else {
            log.terminated = true;
            return Ok(log);
        };
        if log.total_resamples >= max_resamples {
            return Err(Error::ResampleBudget {
                resamples: log.total_resamples,
            });
        }
        for &v in events[idx].vars() {
            state.resample(v, rng);
        }
        log.total_resamples += 1;
        log.per_event_resamples[idx] += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    struct Coins(Vec<bool>);

    impl VariableSpace for Coins {
        fn resample(&mut self, var: usize, rng: &mut ChaCha8Rng) {
            self.0[var] = rng.gen();
        }
    }

    #[test]
    fn zero_events_returns_initial_assignment() {
        let mut coins = Coins(vec![true, false]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let log = resample_until_good(&mut coins, &[], 10, &mut rng).unwrap();
        assert!(log.terminated);
        assert_eq!(log.total_resamples, 0);
        assert_eq!(coins.0, vec![true, false]);
    }

    #[test]
    fn single_coin_event_terminates_quickly() {
        let mut total = 0usize;
        for seed in 0..50 {
            let mut coins = Coins(vec![true]);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let events = vec![Event::new(vec![0], |c: &Coins| c.0[0])];
            let log = resample_until_good(&mut coins, &events, 1000, &mut rng).unwrap();
            assert!(!coins.0[0]);
            total += log.total_resamples;
        }
        // geometric with p = 1/2: mean 50 total over 50 runs; allow slack
        assert!(total < 200, "suspiciously many resamples: {total}");
    }

    #[test]
    fn hypergraph_two_coloring() {
        // 3-uniform hypergraph on 7 vertices with 6 edges
        let hyperedges: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [2, 3, 4],
            [4, 5, 6],
            [0, 3, 6],
            [1, 4, 6],
            [1, 3, 5],
        ];
        let mut colors = Coins(vec![false; 7]);
        let events: Vec<Event<Coins>> = hyperedges
            .iter()
            .map(|&e| {
                Event::new(e.to_vec(), move |c: &Coins| {
                    c.0[e[0]] == c.0[e[1]] && c.0[e[1]] == c.0[e[2]]
                })
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let log = resample_until_good(&mut colors, &events, 10_000, &mut rng).unwrap();
        assert!(log.terminated);
        for e in events {
            assert!(!e.is_violated(&colors));
        }
    }

    #[test]
    fn resampling_touches_only_declared_variables() {
        struct Spy {
            values: Vec<u64>,
        }
        impl VariableSpace for Spy {
            fn resample(&mut self, var: usize, rng: &mut ChaCha8Rng) {
                self.values[var] = rng.gen();
            }
        }
        let mut spy = Spy {
            values: vec![1, 2, 3, 4],
        };
        let events = vec![Event::new(vec![1, 2], |s: &Spy| s.values[1] % 2 == 1)];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        resample_until_good(&mut spy, &events, 1000, &mut rng).unwrap();
        assert_eq!(spy.values[0], 1);
        assert_eq!(spy.values[3], 4);
    }

    #[test]
    fn predicate_ignores_undeclared_variables() {
        // perturbing an undeclared variable never flips the predicate
        struct Pair(Vec<i32>);
        impl VariableSpace for Pair {
            fn resample(&mut self, var: usize, rng: &mut ChaCha8Rng) {
                self.0[var] = rng.gen_range(0..10);
            }
        }
        let event = Event::new(vec![0], |p: &Pair| p.0[0] > 5);
        let mut p = Pair(vec![7, 0]);
        let before = event.is_violated(&p);
        p.0[1] = 99; // undeclared
        assert_eq!(event.is_violated(&p), before);
    }

    #[test]
    fn dependency_degree_counts_shared_variables() {
        let events: Vec<Event<Coins>> = vec![
            Event::new(vec![0, 1], |_| false),
            Event::new(vec![1, 2], |_| false),
            Event::new(vec![3], |_| false),
        ];
        assert_eq!(dependency_degree(&events), 1);
    }

    #[test]
    fn budget_exhaustion_reports_failure() {
        let mut coins = Coins(vec![true]);
        let events = vec![Event::new(vec![0], |_c: &Coins| true)]; // never satisfied
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let err = resample_until_good(&mut coins, &events, 5, &mut rng).unwrap_err();
        assert!(matches!(err, Error::ResampleBudget { resamples: 5 }));
    }
}
