//! Particles with `t` spins each and hard-core conflicts; admissible
//! configurations are the independent transversals of the derived instance.
//! The chain samples a vertex uniformly and moves there when it is free.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::haxell::find_it_unguaranteed;
use crate::instance::{validate_instance, Instance};
use crate::transversal::{is_full_it, Transversal};

/// Name recorded in run metadata.
pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.9), seed_from_u64, one stream per chain";

#[derive(Clone, Debug)]
pub struct SpinSystem {
    pub particles: usize,
    pub t: usize,
    /// Conflicts `((u, i), (v, j))` with `u ≠ v`.
    pub conflicts: Vec<((usize, usize), (usize, usize))>,
}

/// Vertex `(u, i)` becomes `u·t + i`; particle `u` becomes block `u`.
pub fn spin_to_instance(sys: &SpinSystem) -> Result<Instance> {
    let n = sys.particles * sys.t;
    let mut edges = Vec::with_capacity(sys.conflicts.len());
    for &((u, i), (v, j)) in &sys.conflicts {
        for (p, s) in [(u, i), (v, j)] {
            if p >= sys.particles {
                return Err(Error::VertexOutOfRange {
                    vertex: p,
                    n: sys.particles,
                });
            }
            if s >= sys.t {
                return Err(Error::SpinOutOfRange { spin: s, t: sys.t });
            }
        }
        if u == v {
            return Err(Error::SelfBlockConflict(u));
        }
        edges.push((u * sys.t + i, v * sys.t + j));
    }
    let graph = Graph::from_edges(n, &edges)?;
    let blocks = (0..sys.particles)
        .map(|u| (u * sys.t..(u + 1) * sys.t).collect())
        .collect();
    validate_instance(graph, blocks)
}

#[derive(Clone, Debug)]
pub struct ChainState {
    pub config: Transversal,
    pub step: u64,
}

impl ChainState {
    pub fn new(inst: &Instance, config: Transversal) -> Result<Self> {
        if !is_full_it(inst, &config) {
            return Err(Error::NotAnIt("initial configuration".into()));
        }
        Ok(ChainState { config, step: 0 })
    }
}

/// One iteration with the sampled vertex `v`: if `v` has no neighbour in the
/// configuration it replaces the vertex of its block. Returns whether the
/// configuration changed.
pub fn mcmc_step(inst: &Instance, state: &mut ChainState, v: usize) -> bool {
    state.step += 1;
    if inst
        .neighbors(v)
        .iter()
        .any(|&w| state.config.contains(inst, w))
    {
        return false;
    }
    let b = inst.block_of(v);
    let changed = state.config.get(b) != Some(v);
    state.config.set(b, Some(v));
    changed
}

#[derive(Clone, Debug, Serialize)]
pub struct RunMetadata {
    pub rng: &'static str,
    pub seed: u64,
    pub stream: u64,
    pub steps: u64,
    pub start: Transversal,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainRun {
    pub metadata: RunMetadata,
    /// Visits per configuration (sorted vertex list), counted after every step.
    pub counts: BTreeMap<Vec<usize>, u64>,
    /// Steps that changed the configuration.
    pub moves: u64,
    /// Distinct changing transitions observed.
    #[serde(skip)]
    pub transitions: BTreeSet<(Vec<usize>, Vec<usize>)>,
}

impl ChainRun {
    pub fn distribution(&self) -> BTreeMap<Vec<usize>, f64> {
        let total = self.metadata.steps.max(1) as f64;
        self.counts
            .iter()
            .map(|(k, &c)| (k.clone(), c as f64 / total))
            .collect()
    }
}

/// Runs `steps` iterations from `start` (default: the descent's IT).
pub fn run_chain(
    inst: &Instance,
    start: Option<&Transversal>,
    steps: u64,
    seed: u64,
    stream: u64,
) -> Result<ChainRun> {
    let start = match start {
        Some(s) => s.clone(),
        None => {
            find_it_unguaranteed(inst)
                .map_err(|e| Error::NoInitialState(e.to_string()))?
                .transversal
        }
    };
    let mut state = ChainState::new(inst, start.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut counts = BTreeMap::new();
    let mut transitions = BTreeSet::new();
    let mut moves = 0;
    let mut key = state.config.vertices();
    for _ in 0..steps {
        let v = rng.random_range(0..inst.n());
        if mcmc_step(inst, &mut state, v) {
            moves += 1;
            let next = state.config.vertices();
            transitions.insert((key, next.clone()));
            key = next;
        }
        *counts.entry(key.clone()).or_insert(0) += 1;
    }
    Ok(ChainRun {
        metadata: RunMetadata {
            rng: RNG_NAME,
            seed,
            stream,
            steps,
            start,
        },
        counts,
        moves,
        transitions,
    })
}

/// Independent chains on streams `0..chains`, run in parallel.
pub fn run_chains(
    inst: &Instance,
    start: Option<&Transversal>,
    steps: u64,
    seed: u64,
    chains: u64,
) -> Result<Vec<ChainRun>> {
    (0..chains)
        .into_par_iter()
        .map(|stream| run_chain(inst, start, steps, seed, stream))
        .collect()
}

/// `½ Σ |p − q|` over the union of supports.
pub fn tv_distance<K: Ord>(p: &BTreeMap<K, f64>, q: &BTreeMap<K, f64>) -> f64 {
    let mut sum = 0.0;
    for (k, &a) in p {
        sum += (a - q.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, &b) in q {
        if !p.contains_key(k) {
            sum += b.abs();
        }
    }
    sum / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{edge12, k22_one_block};

    fn two_state() -> Instance {
        spin_to_instance(&SpinSystem {
            particles: 1,
            t: 2,
            conflicts: vec![],
        })
        .unwrap()
    }

    #[test]
    fn spin_instances() {
        let g = two_state();
        assert_eq!((g.n(), g.num_blocks(), g.graph().edge_count()), (2, 1, 0));
        let coloring = spin_to_instance(&SpinSystem {
            particles: 2,
            t: 2,
            conflicts: vec![((0, 0), (1, 0)), ((0, 1), (1, 1))],
        })
        .unwrap();
        assert_eq!(crate::reconfig::enumerate_its(&coloring).unwrap().len(), 2);
        let bad = SpinSystem {
            particles: 2,
            t: 2,
            conflicts: vec![((0, 0), (0, 1))],
        };
        assert!(matches!(
            spin_to_instance(&bad),
            Err(Error::SelfBlockConflict(0))
        ));
        let out = SpinSystem {
            particles: 2,
            t: 2,
            conflicts: vec![((0, 2), (1, 1))],
        };
        assert!(matches!(
            spin_to_instance(&out),
            Err(Error::SpinOutOfRange { spin: 2, t: 2 })
        ));
    }

    #[test]
    fn step_examples() {
        let g = two_state();
        let mut st = ChainState::new(&g, Transversal::from_vertices(&g, &[0]).unwrap()).unwrap();
        assert!(!mcmc_step(&g, &mut st, 0));
        assert!(mcmc_step(&g, &mut st, 1));
        assert_eq!(st.config.vertices(), vec![1]);
        let e = edge12();
        let mut st = ChainState::new(&e, Transversal::from_vertices(&e, &[0, 2]).unwrap()).unwrap();
        assert!(!mcmc_step(&e, &mut st, 1));
        assert!(mcmc_step(&e, &mut st, 3));
        assert_eq!(st.config.vertices(), vec![0, 3]);
        assert_eq!(st.step, 2);
    }

    #[test]
    fn two_state_is_uniform() {
        let g = two_state();
        let run = run_chain(&g, None, 100_000, 1, 0).unwrap();
        for p in run.distribution().values() {
            assert!((p - 0.5).abs() < 0.02);
        }
    }

    #[test]
    fn k22_never_crosses() {
        let g = k22_one_block();
        let start = Transversal::from_vertices(&g, &[0]).unwrap();
        let run = run_chain(&g, Some(&start), 10_000, 3, 0).unwrap();
        let side: Vec<usize> = (0..4).filter(|&v| v == 0 || !g.has_edge(0, v)).collect();
        assert!(run.counts.keys().all(|k| side.contains(&k[0])));
    }

    #[test]
    fn deterministic_given_seed() {
        let g = edge12();
        let a = run_chain(&g, None, 1000, 9, 2).unwrap();
        let b = run_chain(&g, None, 1000, 9, 2).unwrap();
        assert_eq!(a.counts, b.counts);
        let c = run_chain(&g, None, 1000, 9, 3).unwrap();
        assert_ne!(a.counts, c.counts);
    }

    #[test]
    fn tv_examples() {
        let p: BTreeMap<u8, f64> = [(0, 0.6), (1, 0.4)].into();
        let q: BTreeMap<u8, f64> = [(0, 0.5), (1, 0.5)].into();
        assert!((tv_distance(&p, &q) - 0.1).abs() < 1e-12);
        assert_eq!(tv_distance(&p, &p), 0.0);
        let a: BTreeMap<u8, f64> = [(0, 1.0)].into();
        let b: BTreeMap<u8, f64> = [(1, 1.0)].into();
        assert_eq!(tv_distance(&a, &b), 1.0);
    }
}
