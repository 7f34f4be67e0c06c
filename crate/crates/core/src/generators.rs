//! Instance generators for test corpora.
//!
//! Random instances use degree-guarded uniform edge insertion. This is biased
//! relative to the uniform distribution over graphs of maximum degree `Δ`; it
//! is meant for coverage, not for sampling.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instance::{validate_instance, Instance};
use crate::transversal::Transversal;

/// How the vertices of the `K_{Δ,Δ}` copies are distributed over blocks of size
/// `2Δ`. Copy `i` has sides `R_i = {2Δi, .., 2Δi+Δ-1}` and
/// `B_i = {2Δi+Δ, .., 2Δi+2Δ-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Placement {
    /// Block `i` is copy `i`.
    Trivial,
    /// Block `U` is `R_U ∪ B_{σ⁻¹(U)}`, so copy `i` spans blocks `i` and `σ(i)`.
    Matched(Vec<usize>),
    /// Uniformly random assignment of vertices to blocks of size `2Δ`.
    Shuffled(u64),
}

fn kdd_edges(delta: usize, m: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(m * delta * delta);
    for i in 0..m {
        let base = 2 * delta * i;
        for a in 0..delta {
            for b in 0..delta {
                edges.push((base + a, base + delta + b));
            }
        }
    }
    edges
}

fn check_permutation(sigma: &[usize], m: usize) -> Result<()> {
    let mut seen = vec![false; m];
    if sigma.len() != m
        || sigma
            .iter()
            .any(|&x| x >= m || std::mem::replace(&mut seen[x], true))
    {
        return Err(Error::InfeasibleParameters(format!(
            "{sigma:?} is not a permutation of 0..{m}"
        )));
    }
    Ok(())
}

/// `m` disjoint copies of `K_{Δ,Δ}` on blocks of size `2Δ`.
pub fn gen_disjoint_kdd(delta: usize, m: usize, placement: &Placement) -> Result<Instance> {
    if delta == 0 || m == 0 {
        return Err(Error::InfeasibleParameters("need Δ ≥ 1 and m ≥ 1".into()));
    }
    let n = 2 * delta * m;
    let graph = Graph::from_edges(n, &kdd_edges(delta, m))?;
    let blocks: Vec<Vec<usize>> = match placement {
        Placement::Trivial => (0..m)
            .map(|i| (2 * delta * i..2 * delta * (i + 1)).collect())
            .collect(),
        Placement::Matched(sigma) => {
            check_permutation(sigma, m)?;
            let mut blocks: Vec<Vec<usize>> = (0..m)
                .map(|u| (2 * delta * u..2 * delta * u + delta).collect())
                .collect();
            for (i, &target) in sigma.iter().enumerate() {
                blocks[target].extend(2 * delta * i + delta..2 * delta * (i + 1));
            }
            blocks
        }
        Placement::Shuffled(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            order.chunks(2 * delta).map(<[usize]>::to_vec).collect()
        }
    };
    validate_instance(graph, blocks)
}

/// A frozen pair with its planted block permutation.
#[derive(Clone, Debug)]
pub struct ExtremalPair {
    pub instance: Instance,
    pub s: Transversal,
    pub t: Transversal,
    /// `σ` in the instance's (canonical) block indices.
    pub sigma: Vec<usize>,
}

/// The matched placement with `S` taking the first `R`-vertex of each block and
/// `T` its partner in the next block along `σ`.
pub fn gen_extremal_pair(delta: usize, m: usize, sigma: &[usize]) -> Result<ExtremalPair> {
    let instance = gen_disjoint_kdd(delta, m, &Placement::Matched(sigma.to_vec()))?;
    let s_vertices: Vec<usize> = (0..m).map(|u| 2 * delta * u).collect();
    let t_vertices: Vec<usize> = (0..m).map(|u| 2 * delta * u + delta).collect();
    let s = Transversal::from_vertices(&instance, &s_vertices)?;
    let t = Transversal::from_vertices(&instance, &t_vertices)?;
    let canon = |u: usize| instance.block_of(2 * delta * u);
    let mut planted = vec![0; m];
    for u in 0..m {
        planted[canon(u)] = canon(sigma[u]);
    }
    Ok(ExtremalPair {
        instance,
        s,
        t,
        sigma: planted,
    })
}

/// Blocks of `thickness` consecutive vertices; random edges inserted while both
/// endpoints stay below degree `delta`. The instance's `Δ` is recomputed and
/// may be smaller than requested.
pub fn gen_random_instance(
    delta: usize,
    num_blocks: usize,
    thickness: usize,
    seed: u64,
) -> Result<Instance> {
    if num_blocks == 0 || thickness == 0 {
        return Err(Error::InfeasibleParameters(
            "need at least one nonempty block".into(),
        ));
    }
    let n = num_blocks * thickness;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degree = vec![0usize; n];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    if delta > 0 && n > 1 {
        let target = rng.random_range(0..=n * delta / 2);
        let mut attempts = 0;
        while edges.len() < target && attempts < 20 * n * delta {
            attempts += 1;
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u == v || degree[u] >= delta || degree[v] >= delta {
                continue;
            }
            let e = (u.min(v), u.max(v));
            if edges.contains(&e) {
                continue;
            }
            edges.push(e);
            degree[u] += 1;
            degree[v] += 1;
        }
    }
    assert!(degree.iter().all(|&d| d <= delta), "degree guard exceeded");
    let graph = Graph::from_edges(n, &edges)?;
    let blocks = (0..num_blocks)
        .map(|b| (b * thickness..(b + 1) * thickness).collect())
        .collect();
    validate_instance(graph, blocks)
}

/// `copies` planted `K_{Δ,Δ}` components, each with one side inside a single
/// block and the other side anywhere, on blocks of exactly `2Δ` vertices; the
/// remaining vertices get degree-guarded random edges among themselves.
pub fn gen_planted_instance(
    delta: usize,
    num_blocks: usize,
    copies: usize,
    seed: u64,
) -> Result<Instance> {
    if delta == 0 || num_blocks == 0 || copies > num_blocks {
        return Err(Error::InfeasibleParameters(format!(
            "planted instance needs Δ ≥ 1 and 1 ≤ copies ≤ blocks, got Δ={delta}, blocks={num_blocks}, copies={copies}"
        )));
    }
    let t = 2 * delta;
    let n = t * num_blocks;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut free: Vec<Vec<usize>> = (0..num_blocks)
        .map(|b| (b * t..(b + 1) * t).collect())
        .collect();
    for f in &mut free {
        f.shuffle(&mut rng);
    }
    let mut homes: Vec<usize> = (0..num_blocks).collect();
    homes.shuffle(&mut rng);
    let mut used = vec![false; n];
    let mut edges = Vec::new();
    for &home in homes.iter().take(copies) {
        if free[home].len() < delta {
            continue;
        }
        let keep = free[home].len() - delta;
        let a: Vec<usize> = free[home].split_off(keep);
        let mut b = Vec::with_capacity(delta);
        while b.len() < delta {
            let pool: Vec<usize> = (0..num_blocks).filter(|&w| !free[w].is_empty()).collect();
            if pool.is_empty() {
                return Err(Error::InfeasibleParameters(
                    "ran out of vertices for planted copies".into(),
                ));
            }
            let w = pool[rng.random_range(0..pool.len())];
            b.push(free[w].pop().unwrap());
        }
        for &x in &a {
            used[x] = true;
            for &y in &b {
                used[y] = true;
                edges.push((x, y));
            }
        }
    }
    let rest: Vec<usize> = (0..n).filter(|&v| !used[v]).collect();
    let mut degree = vec![0usize; n];
    if rest.len() > 1 {
        let target = rng.random_range(0..=rest.len() * delta / 2);
        let mut added = 0;
        let mut attempts = 0;
        while added < target && attempts < 20 * n * delta {
            attempts += 1;
            let u = rest[rng.random_range(0..rest.len())];
            let v = rest[rng.random_range(0..rest.len())];
            let e = (u.min(v), u.max(v));
            if u == v || degree[u] >= delta || degree[v] >= delta || edges.contains(&e) {
                continue;
            }
            edges.push(e);
            degree[u] += 1;
            degree[v] += 1;
            added += 1;
        }
    }
    let graph = Graph::from_edges(n, &edges)?;
    assert!(graph.max_degree() <= delta, "degree guard exceeded");
    let blocks = (0..num_blocks)
        .map(|b| (b * t..(b + 1) * t).collect())
        .collect();
    validate_instance(graph, blocks)
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Schema(format!("bad {what} '{s}' in generator spec")))
}

fn parse_seed(s: &str) -> Result<u64> {
    parse_num(s.strip_prefix("seed").unwrap_or(s), "seed")
}

/// Parses a generator spec:
///
/// - `gen:kdd:Δ:m:trivial`, `gen:kdd:Δ:m:seedN` (shuffled), `gen:kdd:Δ:m:σ0,σ1,..`
/// - `gen:extremal:Δ:m:σ0,σ1,..`
/// - `gen:random:Δ:blocks:thickness:seedN`
/// - `gen:planted:Δ:blocks:copies:seedN`
pub fn parse_gen_spec(spec: &str) -> Result<Instance> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::Schema(format!("unrecognised generator spec '{spec}'"));
    let sigma = |s: &str| -> Result<Vec<usize>> {
        s.split(',')
            .map(|x| parse_num(x, "permutation entry"))
            .collect()
    };
    match parts.as_slice() {
        ["gen", "kdd", d, m, how] => {
            let (d, m) = (parse_num(d, "Δ")?, parse_num(m, "m")?);
            let placement = if *how == "trivial" {
                Placement::Trivial
            } else if how.starts_with("seed") {
                Placement::Shuffled(parse_seed(how)?)
            } else {
                Placement::Matched(sigma(how)?)
            };
            gen_disjoint_kdd(d, m, &placement)
        }
        ["gen", "extremal", d, m, s] => {
            Ok(gen_extremal_pair(parse_num(d, "Δ")?, parse_num(m, "m")?, &sigma(s)?)?.instance)
        }
        ["gen", "random", d, b, t, seed] => gen_random_instance(
            parse_num(d, "Δ")?,
            parse_num(b, "block count")?,
            parse_num(t, "thickness")?,
            parse_seed(seed)?,
        ),
        ["gen", "planted", d, b, c, seed] => gen_planted_instance(
            parse_num(d, "Δ")?,
            parse_num(b, "block count")?,
            parse_num(c, "copy count")?,
            parse_seed(seed)?,
        ),
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::is_disjoint_kdd_union;
    use crate::reconfig::certificate::extremal_certificate;
    use crate::reconfig::graph::build_reconfig_graph;

    #[test]
    fn trivial_kdd() {
        let g = gen_disjoint_kdd(2, 1, &Placement::Trivial).unwrap();
        assert_eq!((g.n(), g.num_blocks(), g.delta()), (4, 1, 2));
        assert!(is_disjoint_kdd_union(&g));
    }

    #[test]
    fn kdd_union_for_all_placements() {
        for d in 1..=3 {
            for m in 1..=3 {
                for seed in 0..5 {
                    let g = gen_disjoint_kdd(d, m, &Placement::Shuffled(seed)).unwrap();
                    assert!(is_disjoint_kdd_union(&g));
                    assert_eq!(g.thickness(), 2 * d);
                }
            }
        }
        let g = gen_disjoint_kdd(1, 2, &Placement::Matched(vec![1, 0])).unwrap();
        assert!(is_disjoint_kdd_union(&g));
        assert!(g.is_irreducible());
    }

    #[test]
    fn bad_permutation() {
        assert!(matches!(
            gen_disjoint_kdd(1, 2, &Placement::Matched(vec![0, 0])),
            Err(Error::InfeasibleParameters(_))
        ));
    }

    #[test]
    fn extremal_single_edge() {
        let p = gen_extremal_pair(1, 1, &[0]).unwrap();
        assert_eq!((p.instance.n(), p.instance.num_blocks()), (2, 1));
        assert_eq!((p.s.vertices(), p.t.vertices()), (vec![0], vec![1]));
    }

    #[test]
    fn extremal_certificate_recovers_sigma() {
        for sigma in [vec![1, 0], vec![0, 1], vec![1, 2, 0], vec![2, 0, 1, 3]] {
            for d in 1..=2 {
                let p = gen_extremal_pair(d, sigma.len(), &sigma).unwrap();
                let c = extremal_certificate(&p.instance, &p.s, &p.t).unwrap();
                assert_eq!(c.sigma, p.sigma);
            }
        }
    }

    #[test]
    fn extremal_pair_disconnected() {
        let p = gen_extremal_pair(2, 2, &[1, 0]).unwrap();
        let rg = build_reconfig_graph(&p.instance).unwrap();
        let ids = rg.component_ids();
        assert_ne!(
            ids[rg.index_of(&p.s).unwrap()],
            ids[rg.index_of(&p.t).unwrap()]
        );
    }

    #[test]
    fn random_instances() {
        let g = gen_random_instance(0, 3, 2, 1).unwrap();
        assert_eq!(g.graph().edge_count(), 0);
        let g = gen_random_instance(2, 3, 4, 7).unwrap();
        assert!(g.delta() <= 2);
        assert_eq!(g.thickness(), 4);
        let h = gen_random_instance(2, 3, 4, 7).unwrap();
        assert_eq!(g.to_json(), h.to_json());
        assert!(gen_random_instance(1, 0, 2, 0).is_err());
    }

    #[test]
    fn planted_has_kdd_component() {
        for seed in 0..20 {
            let g = gen_planted_instance(2, 3, 1, seed).unwrap();
            assert!(g.delta() <= 2);
            assert_eq!(g.thickness(), 4);
            let has_k = g.graph().components().iter().any(|c| {
                c.len() == 4
                    && c.iter().all(|&v| g.graph().degree(v) == 2)
                    && g.graph().edge_count() >= 4
            });
            assert!(has_k);
        }
        assert!(gen_planted_instance(1, 2, 3, 0).is_err());
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(parse_gen_spec("gen:kdd:2:3:seed7").unwrap().num_blocks(), 3);
        assert_eq!(parse_gen_spec("gen:kdd:1:1:trivial").unwrap().n(), 2);
        assert_eq!(parse_gen_spec("gen:kdd:1:2:1,0").unwrap().n(), 4);
        assert_eq!(parse_gen_spec("gen:extremal:1:2:1,0").unwrap().n(), 4);
        assert_eq!(parse_gen_spec("gen:random:2:3:4:seed1").unwrap().n(), 12);
        assert_eq!(parse_gen_spec("gen:planted:2:3:1:seed4").unwrap().n(), 12);
        assert!(matches!(parse_gen_spec("gen:nope"), Err(Error::Schema(_))));
        assert!(matches!(
            parse_gen_spec("gen:kdd:x:1:trivial"),
            Err(Error::Schema(_))
        ));
    }
}
