//! Removing a `K_{Δ,Δ}` component by swapping its far side with the spare
//! vertices of the block that holds its near side, and lifting transversals
//! and paths of the smaller instance back.
//!
//! With `K = (A, B)`, `A ⊆ U`: every block `W ≠ U` meeting `B` gives up
//! `B ∩ W` and receives a set `Y(W)` of spare vertices of `U`, giving
//! `W' = (W ∖ B) ∪ Y(W)`. The block `U` and the component `K` disappear.

use crate::error::{Error, Result};
use crate::instance::{is_complete_bipartite_dd, Instance, SubInstance};
use crate::transversal::{is_full_it, it_adjacent, oplus, Transversal};

#[derive(Clone, Debug)]
pub struct SwapContext {
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
    /// The block `U ⊇ A`.
    pub donor: usize,
    /// Blocks `W ≠ U` meeting `B`, ascending.
    pub targets: Vec<usize>,
    /// `Y(W)` for each target, parallel to `targets`.
    pub y: Vec<Vec<usize>>,
    /// Blocks untouched by the swap.
    pub remainder: Vec<usize>,
    /// The reduced instance; its block labels are parent block indices (`W`
    /// for `W'`).
    pub reduced: SubInstance,
}

/// Swap for the `K_{Δ,Δ}` component with vertex set `component`; the side inside
/// `u` becomes `A` (if both sides fit, the one holding the smallest vertex).
pub fn swap_instance(inst: &Instance, component: &[usize], u: usize) -> Result<SwapContext> {
    let mut comp = component.to_vec();
    comp.sort_unstable();
    comp.dedup();
    let d = inst.delta();
    if comp.is_empty() || !is_complete_bipartite_dd(inst.graph(), &comp, d) {
        return Err(Error::NotAComponent);
    }
    let side_b: Vec<usize> = inst.neighbors(comp[0]).to_vec();
    let side_a: Vec<usize> = comp
        .iter()
        .copied()
        .filter(|v| !side_b.contains(v))
        .collect();
    let inside = |side: &[usize]| side.iter().all(|&v| inst.block_of(v) == u);
    let (a, b) = if inside(&side_a) {
        (side_a, side_b)
    } else if inside(&side_b) {
        (side_b, side_a)
    } else {
        return Err(Error::SideNotInBlock(u));
    };
    swap_instance_with_sides(inst, &a, &b, u)
}

/// Swap with the sides given explicitly (`A ⊆ U`).
pub fn swap_instance_with_sides(
    inst: &Instance,
    side_a: &[usize],
    side_b: &[usize],
    u: usize,
) -> Result<SwapContext> {
    let mut a = side_a.to_vec();
    let mut b = side_b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    let d = inst.delta();
    if a.len() != d || b.len() != d {
        return Err(Error::NotAComponent);
    }
    // complete between the sides and closed: each side's neighbourhood is the other
    if a.iter().any(|&x| inst.neighbors(x) != b.as_slice())
        || b.iter().any(|&x| inst.neighbors(x) != a.as_slice())
    {
        return Err(Error::NotAComponent);
    }
    if u >= inst.num_blocks() || a.iter().any(|&x| inst.block_of(x) != u) {
        return Err(Error::SideNotInBlock(u));
    }

    let mut targets: Vec<usize> = b
        .iter()
        .map(|&x| inst.block_of(x))
        .filter(|&w| w != u)
        .collect();
    targets.sort_unstable();
    targets.dedup();
    let remainder: Vec<usize> = (0..inst.num_blocks())
        .filter(|&w| w != u && !targets.contains(&w))
        .collect();

    let spare: Vec<usize> = inst
        .block(u)
        .iter()
        .copied()
        .filter(|v| !a.contains(v) && !b.contains(v))
        .collect();
    let need: usize = targets
        .iter()
        .map(|&w| b.iter().filter(|&&x| inst.block_of(x) == w).count())
        .sum();
    if need > spare.len() {
        return Err(Error::precondition(format!(
            "block {u} has {} spare vertices but B meets other blocks in {need}",
            spare.len()
        )));
    }
    let mut y = Vec::with_capacity(targets.len());
    let mut next = 0;
    for &w in &targets {
        let k = b.iter().filter(|&&x| inst.block_of(x) == w).count();
        y.push(spare[next..next + k].to_vec());
        next += k;
    }
    if let Some(last) = y.last_mut() {
        last.extend_from_slice(&spare[next..]);
    }

    let mut blocks: Vec<(usize, Vec<usize>)> = Vec::new();
    for (i, &w) in targets.iter().enumerate() {
        let mut wb: Vec<usize> = inst
            .block(w)
            .iter()
            .copied()
            .filter(|v| !b.contains(v))
            .chain(y[i].iter().copied())
            .collect();
        wb.sort_unstable();
        blocks.push((w, wb));
    }
    for &r in &remainder {
        blocks.push((r, inst.block(r).to_vec()));
    }
    let reduced = SubInstance::from_parent_blocks(inst.graph(), blocks);
    if inst.is_haxell_thick()
        && reduced.instance.thickness() < 2 * d
        && reduced.instance.num_blocks() > 0
    {
        return Err(Error::invariant("reduced instance lost 2Δ-thickness"));
    }
    Ok(SwapContext {
        side_a: a,
        side_b: b,
        donor: u,
        targets,
        y,
        remainder,
        reduced,
    })
}

impl SwapContext {
    pub fn reduced(&self) -> &Instance {
        &self.reduced.instance
    }

    fn target_index(&self, parent_block: usize) -> Option<usize> {
        self.targets.binary_search(&parent_block).ok()
    }

    fn in_y(&self, target: usize, v: usize) -> bool {
        self.y[target].contains(&v)
    }

    /// Parent vertex chosen by the reduced transversal in each parent block
    /// other than `U`.
    fn parent_choice(&self, parent: &Instance, s: &Transversal) -> Vec<Option<usize>> {
        let mut out = vec![None; parent.num_blocks()];
        for cb in 0..self.reduced().num_blocks() {
            out[self.reduced.block_labels[cb]] = s.get(cb).map(|v| self.reduced.to_parent(v));
        }
        out
    }

    /// Targets `W` with `S ∩ W' ⊆ Y(W)`.
    fn y_targets(&self, parent: &Instance, s: &Transversal) -> Vec<usize> {
        let choice = self.parent_choice(parent, s);
        (0..self.targets.len())
            .filter(|&i| choice[self.targets[i]].is_some_and(|v| self.in_y(i, v)))
            .collect()
    }

    /// Restriction of a parent transversal to the reduced instance. Full when
    /// `t` avoids `B`; otherwise blocks `W'` whose vertex of `t` lies in `B` are
    /// left empty unless the donor slot supplies their `Y(W)` vertex.
    pub fn restrict(&self, t: &Transversal) -> Transversal {
        let red = self.reduced();
        let mut out = Transversal::empty(red.num_blocks());
        for cb in 0..red.num_blocks() {
            let pb = self.reduced.block_labels[cb];
            let choice = if let Some(i) = self.target_index(pb) {
                // the vertex in W' may sit in W or, for a swapped-in vertex, in U
                let in_w = t.get(pb).filter(|v| !self.side_b.contains(v));
                let in_y = t.get(self.donor).filter(|&v| self.in_y(i, v));
                in_w.or(in_y)
            } else {
                t.get(pb)
            };
            out.set(cb, choice.and_then(|v| self.reduced.to_child(v)));
        }
        out
    }

    /// Whether `t ∈ M(s)`.
    pub fn in_lift(&self, parent: &Instance, s: &Transversal, t: &Transversal) -> bool {
        let choice = self.parent_choice(parent, s);
        let ys = self.y_targets(parent, s);
        let Some(tu) = t.get(self.donor) else {
            return false;
        };
        if ys.is_empty() {
            if !self.side_a.contains(&tu) {
                return false;
            }
        } else if !ys.iter().any(|&i| choice[self.targets[i]] == Some(tu)) {
            return false;
        }
        (0..parent.num_blocks())
            .filter(|&b| b != self.donor)
            .all(|b| match self.target_index(b) {
                Some(i) if ys.contains(&i) => t
                    .get(b)
                    .is_some_and(|v| self.side_b.contains(&v) && parent.block_of(v) == b),
                _ => t.get(b) == choice[b],
            })
    }
}

/// The set `M(S)` of parent transversals attached to a reduced transversal.
pub fn lift_transversal(
    parent: &Instance,
    ctx: &SwapContext,
    s: &Transversal,
) -> Result<Vec<Transversal>> {
    if !is_full_it(ctx.reduced(), s) {
        return Err(Error::NotAnIt("reduced transversal".into()));
    }
    let choice = ctx.parent_choice(parent, s);
    let ys = ctx.y_targets(parent, s);
    let base = Transversal::from_slots(choice.clone());
    let mut out = Vec::new();
    if ys.is_empty() {
        for &a in &ctx.side_a {
            let mut t = base.clone();
            t.set(ctx.donor, Some(a));
            out.push(t);
        }
    } else {
        let mut y_vertices: Vec<usize> = ys
            .iter()
            .map(|&i| choice[ctx.targets[i]].unwrap())
            .collect();
        y_vertices.sort_unstable();
        let options: Vec<Vec<usize>> = ys
            .iter()
            .map(|&i| {
                ctx.side_b
                    .iter()
                    .copied()
                    .filter(|&v| parent.block_of(v) == ctx.targets[i])
                    .collect()
            })
            .collect();
        let mut combos: Vec<Vec<usize>> = vec![vec![]];
        for opts in &options {
            combos = combos
                .into_iter()
                .flat_map(|pre| {
                    opts.iter().map(move |&v| {
                        let mut p = pre.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        for &yv in &y_vertices {
            for combo in &combos {
                let mut t = base.clone();
                t.set(ctx.donor, Some(yv));
                for (j, &i) in ys.iter().enumerate() {
                    t.set(ctx.targets[i], Some(combo[j]));
                }
                out.push(t);
            }
        }
    }
    let mut union: Vec<usize> = Vec::new();
    for t in &out {
        if !is_full_it(parent, t) {
            return Err(Error::invariant(format!(
                "lifted set {:?} is not an IT",
                t.vertices()
            )));
        }
        union.extend(t.vertices());
    }
    union.sort_unstable();
    union.dedup();
    if !parent.graph().is_independent(&union) {
        return Err(Error::invariant(
            "union of the lifted set is not independent",
        ));
    }
    Ok(out)
}

/// Moves inside one lifted set: `from` and `to` lie in a common `M(S)`, whose
/// union is independent, so replacing block by block never breaks anything.
fn walk_within(
    parent: &Instance,
    from: &Transversal,
    to: &Transversal,
    out: &mut Vec<Transversal>,
) -> Result<()> {
    let mut cur = from.clone();
    for b in cur.disagreement(to) {
        cur = oplus(parent, &cur, to.get(b).unwrap())?;
        out.push(cur.clone());
    }
    Ok(())
}

/// Lifts a path of the reduced instance. The lifted path starts at `start`
/// (default: the first element of `M(path[0])`) and, if `end` is given, finishes
/// there; `end` must lie in `M(path[last])`.
pub fn lift_path(
    parent: &Instance,
    ctx: &SwapContext,
    path: &[Transversal],
    start: Option<&Transversal>,
    end: Option<&Transversal>,
) -> Result<Vec<Transversal>> {
    let red = ctx.reduced();
    let Some(first) = path.first() else {
        return Ok(Vec::new());
    };
    for (i, pair) in path.windows(2).enumerate() {
        if !it_adjacent(red, &pair[0], &pair[1])? {
            return Err(Error::NotAdjacent(i));
        }
    }
    let mut cur = match start {
        Some(t) => {
            if !ctx.in_lift(parent, first, t) {
                return Err(Error::precondition("start is not in M(first)"));
            }
            t.clone()
        }
        None => lift_transversal(parent, ctx, first)?.swap_remove(0),
    };
    let mut out = vec![cur.clone()];
    for pair in path.windows(2) {
        let (s1, s2) = (&pair[0], &pair[1]);
        let cb = s1.disagreement(s2)[0];
        let pb = ctx.reduced.block_labels[cb];
        let v = ctx.reduced.to_parent(s1.get(cb).unwrap());
        let w = ctx.reduced.to_parent(s2.get(cb).unwrap());
        let moves: Vec<usize> = match ctx.target_index(pb) {
            None => vec![w],
            Some(i) => {
                let (v_in_y, w_in_y) = (ctx.in_y(i, v), ctx.in_y(i, w));
                let b = *ctx
                    .side_b
                    .iter()
                    .find(|&&x| parent.block_of(x) == pb)
                    .expect("target block meets B");
                if v_in_y == w_in_y {
                    vec![w]
                } else if w_in_y {
                    if ctx.y_targets(parent, s1).is_empty() {
                        vec![w, b]
                    } else {
                        vec![b]
                    }
                } else {
                    // leaving Y(W): the reverse of the case above
                    let remaining: Vec<usize> = ctx
                        .y_targets(parent, s2)
                        .into_iter()
                        .map(|j| {
                            ctx.reduced.to_parent(
                                s2.get(ctx.reduced.block_with_label(ctx.targets[j]).unwrap())
                                    .unwrap(),
                            )
                        })
                        .collect();
                    match remaining.iter().min() {
                        None => vec![w, ctx.side_a[0]],
                        Some(&y2) if cur.get(ctx.donor) == Some(v) => vec![y2, w],
                        Some(_) => vec![w],
                    }
                }
            }
        };
        for m in moves {
            let next = oplus(parent, &cur, m)?;
            if next != cur {
                cur = next;
                out.push(cur.clone());
            }
        }
        if !ctx.in_lift(parent, s2, &cur) {
            return Err(Error::invariant(format!(
                "lifted step landed outside M(S2) at {:?}",
                cur.vertices()
            )));
        }
    }
    if let Some(target) = end {
        if !ctx.in_lift(parent, path.last().unwrap(), target) {
            return Err(Error::precondition("end is not in M(last)"));
        }
        let from = cur.clone();
        walk_within(parent, &from, target, &mut out)?;
    }
    Ok(out)
}
