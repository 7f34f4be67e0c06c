//! Structure forced on a pair of ITs that cannot be made to agree anywhere:
//! the neighbourhoods of `S ∪ T` tile `V(G)`, `S ∪ T` is a perfect matching
//! inducing a block permutation `σ`, and `(R_U, B_{σ(U)})` are the parts of the
//! `K_{Δ,Δ}` copies.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::transversal::{is_full_it, Transversal};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    /// `σ(U)` is the block holding the `T`-partner of `S_U`.
    pub sigma: Vec<usize>,
    /// `(R_U, B_{σ(U)})` for each block `U`.
    pub sides: Vec<(Vec<usize>, Vec<usize>)>,
}

fn fail(step: u8, reason: impl Into<String>) -> Error {
    Error::CertificateFailed {
        step,
        reason: reason.into(),
    }
}

/// Steps 1–3: domination, tiling and the matching. Returns `σ`.
fn matching_permutation(inst: &Instance, s: &Transversal, t: &Transversal) -> Result<Vec<usize>> {
    let k = inst.num_blocks();
    let mut owner: Vec<Option<usize>> = vec![None; inst.n()];
    let union: Vec<usize> = s.vertices().into_iter().chain(t.vertices()).collect();
    let mut count = vec![0usize; inst.n()];
    for &u in &union {
        for &w in inst.neighbors(u) {
            count[w] += 1;
            owner[w] = Some(u);
        }
    }
    if let Some(v) = (0..inst.n()).find(|&v| count[v] == 0) {
        return Err(fail(1, format!("vertex {v} has no neighbour in S ∪ T")));
    }
    if !s.agreement(t).is_empty() {
        return Err(fail(2, "S and T share a vertex"));
    }
    if let Some(v) = (0..inst.n()).find(|&v| count[v] > 1) {
        return Err(fail(
            2,
            format!("vertex {v} lies in {} neighbourhoods", count[v]),
        ));
    }
    if let Some(&u) = union
        .iter()
        .find(|&&u| inst.neighbors(u).len() != inst.delta())
    {
        return Err(fail(2, format!("vertex {u} of S ∪ T has degree below Δ")));
    }
    let mut sigma = vec![usize::MAX; k];
    for b in 0..k {
        let su = s.get(b).unwrap();
        let partner = owner[su].unwrap();
        if !t.contains(inst, partner) {
            return Err(fail(3, format!("{su} in S is not matched into T")));
        }
        if owner[partner] != Some(su) {
            return Err(fail(3, format!("matching at {su} is not symmetric")));
        }
        sigma[b] = inst.block_of(partner);
    }
    let mut seen = vec![false; k];
    for &b in &sigma {
        if std::mem::replace(&mut seen[b], true) {
            return Err(fail(3, "matching does not lift to a permutation"));
        }
    }
    Ok(sigma)
}

fn red_blue(
    inst: &Instance,
    s: &Transversal,
    t: &Transversal,
    u: usize,
) -> (Vec<usize>, Vec<usize>) {
    let adjacent_to =
        |x: &Transversal, v: usize| inst.neighbors(v).iter().any(|&w| x.contains(inst, w));
    let block = inst.block(u);
    let red = block
        .iter()
        .copied()
        .filter(|&v| adjacent_to(t, v))
        .collect();
    let blue = block
        .iter()
        .copied()
        .filter(|&v| adjacent_to(s, v))
        .collect();
    (red, blue)
}

/// A non-adjacent pair `s ∈ R_U`, `t ∈ B_{σ(U)}`, lowest `U`, then `s`, then
/// `t`. `S ⊕ s` and `T ⊕ t` are then both ITs. Requires steps 1–3 to hold.
pub fn cross_pair(
    inst: &Instance,
    s: &Transversal,
    t: &Transversal,
) -> Result<Option<(usize, usize)>> {
    let sigma = matching_permutation(inst, s, t)?;
    for u in 0..inst.num_blocks() {
        let (red, _) = red_blue(inst, s, t, u);
        let (_, blue) = red_blue(inst, s, t, sigma[u]);
        for &a in &red {
            if let Some(&b) = blue.iter().find(|&&b| !inst.has_edge(a, b)) {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

/// Verifies the extremal structure for `(S, T)` step by step and returns it.
pub fn extremal_certificate(
    inst: &Instance,
    s: &Transversal,
    t: &Transversal,
) -> Result<Certificate> {
    if !is_full_it(inst, s) {
        return Err(Error::NotAnIt("S".into()));
    }
    if !is_full_it(inst, t) {
        return Err(Error::NotAnIt("T".into()));
    }
    let sigma = matching_permutation(inst, s, t)?;
    let d = inst.delta();
    let mut sides = Vec::with_capacity(inst.num_blocks());
    for u in 0..inst.num_blocks() {
        let (red, blue_u) = red_blue(inst, s, t, u);
        if red.len() != d || blue_u.len() != d {
            return Err(fail(
                4,
                format!(
                    "block {u}: |R_U| = {}, |B_U| = {}, Δ = {d}",
                    red.len(),
                    blue_u.len()
                ),
            ));
        }
        let (_, blue) = red_blue(inst, s, t, sigma[u]);
        for &a in &red {
            if let Some(&b) = blue.iter().find(|&&b| !inst.has_edge(a, b)) {
                return Err(fail(
                    5,
                    format!("{a} in R_{u} is not adjacent to {b} in B_{}", sigma[u]),
                ));
            }
        }
        sides.push((red, blue));
    }
    Ok(Certificate { sigma, sides })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{edge12, inst, single_edge};

    fn tr(g: &Instance, v: &[usize]) -> Transversal {
        Transversal::from_vertices(g, v).unwrap()
    }

    #[test]
    fn single_edge_certificate() {
        let g = single_edge();
        let c = extremal_certificate(&g, &tr(&g, &[0]), &tr(&g, &[1])).unwrap();
        assert_eq!(c.sigma, vec![0]);
        assert_eq!(c.sides, vec![(vec![0], vec![1])]);
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"sigma":[0],"sides":[[[0],[1]]]}"#
        );
    }

    #[test]
    fn crossed_pair_of_edges() {
        // blocks {0,3}, {1,2}; edges 0–1 and 2–3; S = {0,2}, T = {1,3}
        let g = inst(4, &[(0, 1), (2, 3)], &[&[0, 3], &[1, 2]]);
        let c = extremal_certificate(&g, &tr(&g, &[0, 2]), &tr(&g, &[1, 3])).unwrap();
        assert_eq!(c.sigma, vec![1, 0]);
    }

    #[test]
    fn undominated_vertex_fails_step_one() {
        let g = edge12();
        assert!(matches!(
            extremal_certificate(&g, &tr(&g, &[0, 2]), &tr(&g, &[1, 3])),
            Err(Error::CertificateFailed { step: 1, .. })
        ));
    }

    #[test]
    fn overlap_fails_step_two() {
        // everything dominated, but 3 sees both 0 and 1
        let g = inst(
            5,
            &[(0, 1), (0, 2), (0, 3), (1, 3), (1, 4)],
            &[&[0, 1, 2, 3, 4]],
        );
        assert!(matches!(
            extremal_certificate(&g, &tr(&g, &[0]), &tr(&g, &[1])),
            Err(Error::CertificateFailed { step: 2, .. })
        ));
    }

    #[test]
    fn no_cross_pair_in_extremal_structure() {
        let g = inst(4, &[(0, 1), (2, 3)], &[&[0, 3], &[1, 2]]);
        assert_eq!(
            cross_pair(&g, &tr(&g, &[0, 2]), &tr(&g, &[1, 3])).unwrap(),
            None
        );
    }
}
