//! Constructive reconfiguration of a pair `(S, T)` by descent on the tuples
//! `(S ∩ T, S △ T, v)`.
//!
//! Both transversals move; the moves of `S` and `T` are recorded separately and
//! the answer is the `S`-history followed by the reversed `T`-history. Every
//! iteration either strictly decreases the tuple order or makes a single
//! neutral move (same key) after which a decrease is forced.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::haxell::{clear_neighbours, descent_step_bound, FeasibleTuple, TupleKey};
use crate::instance::{
    irreducible_components, is_disjoint_kdd_union, BlockSubset, Instance, SubInstance,
};
use crate::reconfig::certificate::{cross_pair, extremal_certificate, Certificate};
use crate::reconfig::graph::{default_cap, search_path};
use crate::reconfig::swap::{lift_path, swap_instance_with_sides};
use crate::transversal::{is_full_it, oplus, Transversal};

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Outcome {
    Path {
        path: Vec<Transversal>,
    },
    Obstruction {
        certificate: Certificate,
    },
    /// Found by exhaustive search: `T0` lies outside the component of `S0`,
    /// which has `reachable` elements, yet the pair is not frozen.
    Separated {
        reachable: usize,
    },
}

impl Outcome {
    pub fn path(&self) -> Option<&[Transversal]> {
        match self {
            Outcome::Path { path } => Some(path),
            Outcome::Obstruction { .. } | Outcome::Separated { .. } => None,
        }
    }
}

/// How often each move fired, summed over the recursion.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MoveStats {
    pub extend: usize,
    pub resolve: usize,
    pub cross: usize,
    pub boundary: usize,
    pub pull: usize,
    pub substitute: usize,
    pub swap: usize,
    /// Exhaustive searches on `K_{Δ,Δ}` unions where the descent stalled.
    pub fallback: usize,
    pub max_depth: usize,
}

impl MoveStats {
    fn absorb(&mut self, other: &MoveStats) {
        self.extend += other.extend;
        self.resolve += other.resolve;
        self.cross += other.cross;
        self.boundary += other.boundary;
        self.pull += other.pull;
        self.substitute += other.substitute;
        self.swap += other.swap;
        self.fallback += other.fallback;
        self.max_depth = self.max_depth.max(other.max_depth);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Reconfiguration {
    pub outcome: Outcome,
    pub stats: MoveStats,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Progress {
    Strict,
    Neutral,
}

struct Pair<'a> {
    inst: &'a Instance,
    s: Transversal,
    t: Transversal,
    s_path: Vec<Transversal>,
    t_path: Vec<Transversal>,
}

impl Pair<'_> {
    fn move_s(&mut self, v: usize) -> Result<()> {
        let next = oplus(self.inst, &self.s, v)?;
        if next != self.s {
            self.s = next;
            self.s_path.push(self.s.clone());
        }
        Ok(())
    }

    fn move_t(&mut self, v: usize) -> Result<()> {
        let next = oplus(self.inst, &self.t, v)?;
        if next != self.t {
            self.t = next;
            self.t_path.push(self.t.clone());
        }
        Ok(())
    }

    fn move_both(&mut self, v: usize) -> Result<()> {
        self.move_s(v)?;
        self.move_t(v)
    }

    /// Clears `x`'s neighbourhood on `ℛ` and replays the moves on both sides.
    fn clear(&mut self, r: &BlockSubset, x: usize) -> Result<()> {
        let cleared = clear_neighbours(self.inst, r, &self.s, &self.t, x)?;
        for w in cleared.moves {
            self.move_both(w)?;
        }
        Ok(())
    }

    fn tuple(&self, seq: &[usize]) -> Result<FeasibleTuple> {
        FeasibleTuple::with_sequence(
            self.inst,
            self.s.intersection(&self.t),
            self.s.symmetric_difference(&self.t),
            seq,
        )
    }

    fn into_path(self) -> Vec<Transversal> {
        let mut joined = self.s_path;
        joined.extend(self.t_path.into_iter().rev().skip(1));
        remove_loops(joined)
    }
}

/// Cuts every closed walk out of a path, keeping its endpoints.
fn remove_loops(path: Vec<Transversal>) -> Vec<Transversal> {
    let mut out: Vec<Transversal> = Vec::with_capacity(path.len());
    let mut at = std::collections::HashMap::new();
    for p in path {
        if let Some(&i) = at.get(&p) {
            for q in out.drain(i + 1..) {
                at.remove(&q);
            }
        } else {
            at.insert(p.clone(), out.len());
            out.push(p);
        }
    }
    out
}

/// Reconfigures `s0` to `t0` on an irreducible `2Δ`-thick instance, or
/// certifies that the pair is frozen.
pub fn constructive_reconfigure(
    inst: &Instance,
    s0: &Transversal,
    t0: &Transversal,
) -> Result<Reconfiguration> {
    if !inst.is_irreducible() {
        return Err(Error::precondition("instance is not irreducible"));
    }
    if !inst.is_haxell_thick() {
        return Err(Error::precondition(format!(
            "thickness {} < 2Δ = {}",
            inst.thickness(),
            2 * inst.delta()
        )));
    }
    if !is_full_it(inst, s0) {
        return Err(Error::NotAnIt("S0".into()));
    }
    if !is_full_it(inst, t0) {
        return Err(Error::NotAnIt("T0".into()));
    }
    descend(inst, s0, t0, 0)
}

fn descend(
    inst: &Instance,
    s0: &Transversal,
    t0: &Transversal,
    depth: usize,
) -> Result<Reconfiguration> {
    let mut stats = MoveStats {
        max_depth: depth,
        ..MoveStats::default()
    };
    if inst.delta() == 0 {
        // one block, no edges: a single move
        let mut path = vec![s0.clone()];
        if s0 != t0 {
            path.push(t0.clone());
        }
        return Ok(Reconfiguration {
            outcome: Outcome::Path { path },
            stats,
        });
    }

    let mut pair = Pair {
        inst,
        s: s0.clone(),
        t: t0.clone(),
        s_path: vec![s0.clone()],
        t_path: vec![t0.clone()],
    };
    let bound = 2 * descent_step_bound(inst.num_blocks()) + 2;
    let mut seq: Vec<usize> = Vec::new();
    let mut last: Option<(TupleKey, Progress)> = None;
    let mut steps = 0u64;

    while pair.s != pair.t {
        steps += 1;
        if steps > bound {
            return Err(Error::invariant(format!(
                "pair descent exceeded {bound} steps"
            )));
        }
        let tuple = pair.tuple(&seq)?;
        tuple.check_bounds()?;
        let key = tuple.key();
        if let Some((prev, progress)) = &last {
            let ok = match progress {
                Progress::Strict => key < *prev,
                Progress::Neutral => key == *prev,
            };
            if !ok {
                return Err(Error::invariant(format!(
                    "pair descent key went from {prev:?} to {key:?}"
                )));
            }
        }

        let progress = if tuple.last_degree() == Some(0) {
            let vm = *seq.last().unwrap();
            let k = tuple.block_layer_of(inst, vm).unwrap();
            pair.move_both(vm)?;
            seq.truncate(k);
            stats.resolve += 1;
            Progress::Strict
        } else if let Some(u) = tuple.find_extension(inst, |_| false) {
            seq.push(u);
            stats.extend += 1;
            Progress::Strict
        } else if tuple.degrees().iter().any(|&d| d >= 2) {
            return Err(Error::invariant("no extension although some d_k ≥ 2"));
        } else {
            check_partition(inst, &tuple)?;
            if tuple.partial().is_empty() {
                match cross_pair(inst, &pair.s, &pair.t)? {
                    Some((a, b)) => {
                        pair.move_s(a)?;
                        pair.move_t(b)?;
                        stats.cross += 1;
                        Progress::Neutral
                    }
                    None => {
                        let certificate = extremal_certificate(inst, &pair.s, &pair.t)?;
                        return Ok(Reconfiguration {
                            outcome: Outcome::Obstruction { certificate },
                            stats,
                        });
                    }
                }
            } else if seq.is_empty() {
                boundary_move(&mut pair)?;
                stats.boundary += 1;
                Progress::Neutral
            } else {
                let vm = *seq.last().unwrap();
                let xm = tuple.partial_neighbours(inst, vm)[0];
                let xm_block = inst.block_of(xm);
                let r = BlockSubset::new(
                    (0..inst.num_blocks())
                        .filter(|&b| tuple.block_layer(b).is_none())
                        .collect(),
                );
                let nb = inst.neighbors(vm).to_vec();
                if let Some(&x) = nb.iter().find(|&&x| inst.block_of(x) != xm_block) {
                    let k = tuple.block_layer_of(inst, x).unwrap();
                    pair.clear(&r, x)?;
                    pair.move_both(x)?;
                    seq.truncate(k);
                    stats.pull += 1;
                    Progress::Strict
                } else if let Some(&x) = nb
                    .iter()
                    .find(|&&x| inst.neighbors(x) != inst.neighbors(xm))
                {
                    pair.clear(&r, x)?;
                    pair.move_both(x)?;
                    stats.substitute += 1;
                    Progress::Neutral
                } else if swap_and_recurse(&mut pair, &nb, xm, depth, &mut stats)? {
                    stats.swap += 1;
                    seq.clear();
                    Progress::Strict
                } else if is_disjoint_kdd_union(inst) {
                    stats.fallback += 1;
                    let outcome = match search_path(
                        inst,
                        s0,
                        t0,
                        usize::try_from(default_cap()).unwrap_or(usize::MAX),
                    )? {
                        Ok(path) => Outcome::Path { path },
                        Err(reachable) => Outcome::Separated { reachable },
                    };
                    return Ok(Reconfiguration { outcome, stats });
                } else {
                    return Err(Error::invariant(
                        "no component of the reduced instance could be reconfigured",
                    ));
                }
            }
        };
        if progress == Progress::Neutral && matches!(last, Some((_, Progress::Neutral))) {
            return Err(Error::invariant("two neutral moves in a row"));
        }
        last = Some((key, progress));
    }

    Ok(Reconfiguration {
        outcome: Outcome::Path {
            path: pair.into_path(),
        },
        stats,
    })
}

/// At a stable state `{N(u) : u ∈ C_m}` must partition `V_{B_m}`.
fn check_partition(inst: &Instance, tuple: &FeasibleTuple) -> Result<()> {
    let mut count = vec![0usize; inst.n()];
    for u in tuple.c_set() {
        for &w in inst.neighbors(u) {
            count[w] += 1;
        }
    }
    let mut in_b = vec![false; inst.n()];
    for v in tuple.b_vertices(inst) {
        in_b[v] = true;
    }
    match (0..inst.n()).find(|&v| count[v] != usize::from(in_b[v])) {
        Some(v) => Err(Error::invariant(format!(
            "neighbourhoods of C_m do not partition V_B_m at vertex {v}"
        ))),
        None => Ok(()),
    }
}

/// Empty sequence, `S ∩ T` and `S △ T` nonempty: pick the lowest `x` outside
/// the agreeing blocks with a neighbour inside them, clear its neighbourhood
/// there and move `x` into the side it is independent of.
fn boundary_move(pair: &mut Pair) -> Result<()> {
    let inst = pair.inst;
    let r = BlockSubset::new(pair.s.agreement(&pair.t));
    let x = (0..inst.n())
        .find(|&v| {
            !r.contains(inst.block_of(v))
                && inst
                    .neighbors(v)
                    .iter()
                    .any(|&w| r.contains(inst.block_of(w)))
        })
        .ok_or_else(|| Error::invariant("irreducible instance without a boundary vertex"))?;
    pair.clear(&r, x)?;
    if inst.neighbors(x).iter().any(|&w| pair.t.contains(inst, w)) {
        pair.move_s(x)
    } else {
        pair.move_t(x)
    }
}

/// `N(v_m)` all share `N(x_m)`: the edge `x_m v_m` spans a `K_{Δ,Δ}` component
/// with `A = N(v_m)` inside `x_m`'s block. Swap it out, reconfigure `T` towards
/// `S` on one component of the reduced instance, and lift back. Increases
/// `|S ∩ T|`. Returns `false` when every component of the reduced instance is
/// stuck, which only happens on unions of `K_{Δ,Δ}` copies.
fn swap_and_recurse(
    pair: &mut Pair,
    side_a: &[usize],
    xm: usize,
    depth: usize,
    stats: &mut MoveStats,
) -> Result<bool> {
    let inst = pair.inst;
    let side_b = inst.neighbors(xm).to_vec();
    let ctx = swap_instance_with_sides(inst, side_a, &side_b, inst.block_of(xm))?;
    let red = ctx.reduced();
    let s_r = ctx.restrict(&pair.s);
    let t_r = ctx.restrict(&pair.t);
    if !is_full_it(red, &s_r) || !is_full_it(red, &t_r) {
        return Err(Error::invariant(
            "restriction to the reduced instance is not an IT",
        ));
    }

    let comps = irreducible_components(red);
    let project = |tr: &Transversal, comp: &SubInstance| {
        let mut out = Transversal::empty(comp.instance.num_blocks());
        for cb in 0..comp.instance.num_blocks() {
            out.set(
                cb,
                tr.get(comp.block_labels[cb]).and_then(|v| comp.to_child(v)),
            );
        }
        out
    };
    let mut order: Vec<(bool, usize)> = Vec::new();
    for (i, comp) in comps.iter().enumerate() {
        if project(&s_r, comp) == project(&t_r, comp) {
            return Err(Error::invariant(format!(
                "component {i} of the reduced instance has no disagreeing block"
            )));
        }
        order.push((is_disjoint_kdd_union(&comp.instance), i));
    }
    order.sort();

    for &(_, i) in &order {
        let comp = &comps[i];
        let run = descend(
            &comp.instance,
            &project(&t_r, comp),
            &project(&s_r, comp),
            depth + 1,
        )?;
        stats.absorb(&run.stats);
        let Outcome::Path { path } = run.outcome else {
            continue;
        };
        let mapped: Vec<Transversal> = path
            .iter()
            .map(|p| {
                let mut r = t_r.clone();
                for cb in 0..comp.instance.num_blocks() {
                    r.set(comp.block_labels[cb], p.get(cb).map(|v| comp.to_parent(v)));
                }
                r
            })
            .collect();
        let last = mapped.last().unwrap();
        let mut end = Transversal::empty(inst.num_blocks());
        end.set(ctx.donor, Some(xm));
        for cb in 0..red.num_blocks() {
            end.set(
                ctx.reduced.block_labels[cb],
                last.get(cb).map(|v| ctx.reduced.to_parent(v)),
            );
        }
        let lifted = lift_path(inst, &ctx, &mapped, Some(&pair.t), Some(&end))?;
        for step in lifted.into_iter().skip(1) {
            pair.t = step;
            pair.t_path.push(pair.t.clone());
        }
        if pair.t != end {
            return Err(Error::invariant("lifted path missed its endpoint"));
        }
        return Ok(true);
    }
    Ok(false)
}
