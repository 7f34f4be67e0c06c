use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::transversal::Transversal;

/// Default cap on the product of block sizes explored by enumeration.
pub const DEFAULT_CAP: u128 = 10_000_000;

/// Cap from `ITRANS_CAP`, falling back to [`DEFAULT_CAP`].
pub fn default_cap() -> u128 {
    std::env::var("ITRANS_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_CAP)
}

/// Product of block sizes, the size of the backtracking tree's leaf level.
pub fn search_estimate(inst: &Instance) -> u128 {
    inst.blocks()
        .iter()
        .fold(1u128, |acc, b| acc.saturating_mul(b.len() as u128))
}

pub fn enumerate_its(inst: &Instance) -> Result<Vec<Transversal>> {
    enumerate_its_capped(inst, default_cap())
}

/// All independent transversals, in canonical (block-lexicographic) order.
pub fn enumerate_its_capped(inst: &Instance, cap: u128) -> Result<Vec<Transversal>> {
    let estimate = search_estimate(inst);
    if estimate > cap {
        return Err(Error::CapExceeded { estimate, cap });
    }
    let k = inst.num_blocks();
    let mut out = Vec::new();
    if k == 0 {
        out.push(Transversal::empty(0));
        return Ok(out);
    }
    // blocked[v] counts chosen neighbours of v
    let mut blocked = vec![0u32; inst.n()];
    let mut slots: Vec<Option<usize>> = vec![None; k];
    let mut cursor = vec![0usize; k];
    let mut depth = 0usize;
    loop {
        if let Some(v) = slots[depth].take() {
            for &w in inst.neighbors(v) {
                blocked[w] -= 1;
            }
        }
        let block = inst.block(depth);
        let mut chosen = None;
        while cursor[depth] < block.len() {
            let v = block[cursor[depth]];
            cursor[depth] += 1;
            if blocked[v] == 0 {
                chosen = Some(v);
                break;
            }
        }
        match chosen {
            Some(v) => {
                for &w in inst.neighbors(v) {
                    blocked[w] += 1;
                }
                slots[depth] = Some(v);
                if depth + 1 == k {
                    out.push(Transversal::from_slots(slots.clone()));
                } else {
                    depth += 1;
                    cursor[depth] = 0;
                }
            }
            None => {
                if depth == 0 {
                    break;
                }
                depth -= 1;
            }
        }
    }
    Ok(out)
}

/// Neighbours of the IT `t` in the reconfigurability graph: every `t ⊕ w` with
/// `w` free of `t`.
pub fn it_neighbours(inst: &Instance, t: &Transversal) -> Vec<Transversal> {
    let mut out = Vec::new();
    for b in 0..inst.num_blocks() {
        let cur = t.get(b);
        for &w in inst.block(b) {
            if Some(w) == cur || inst.neighbors(w).iter().any(|&x| t.contains(inst, x)) {
                continue;
            }
            let mut next = t.clone();
            next.set(b, Some(w));
            out.push(next);
        }
    }
    out
}

/// Breadth-first search from `s` without enumerating `IT(𝒢)`. Returns a
/// shortest path to `t`, or the size of `s`'s component when `t` is not in it.
/// At most `cap` transversals are visited.
pub fn search_path(
    inst: &Instance,
    s: &Transversal,
    t: &Transversal,
    cap: usize,
) -> Result<std::result::Result<Vec<Transversal>, usize>> {
    let mut parent: HashMap<Transversal, Option<Transversal>> = HashMap::new();
    parent.insert(s.clone(), None);
    let mut queue = VecDeque::from([s.clone()]);
    while let Some(cur) = queue.pop_front() {
        if &cur == t {
            let mut path = vec![cur.clone()];
            let mut at = cur;
            while let Some(Some(p)) = parent.get(&at) {
                path.push(p.clone());
                at = p.clone();
            }
            path.reverse();
            return Ok(Ok(path));
        }
        for next in it_neighbours(inst, &cur) {
            if !parent.contains_key(&next) {
                if parent.len() >= cap {
                    return Err(Error::CapExceeded {
                        estimate: parent.len() as u128 + 1,
                        cap: cap as u128,
                    });
                }
                parent.insert(next.clone(), Some(cur.clone()));
                queue.push_back(next);
            }
        }
    }
    Ok(Err(parent.len()))
}

/// The reconfigurability graph on `IT(𝒢)`.
#[derive(Clone, Debug)]
pub struct ReconfigGraph {
    pub its: Vec<Transversal>,
    pub adj: Vec<Vec<usize>>,
    index: HashMap<Transversal, usize>,
}

pub fn build_reconfig_graph(inst: &Instance) -> Result<ReconfigGraph> {
    build_reconfig_graph_capped(inst, default_cap())
}

pub fn build_reconfig_graph_capped(inst: &Instance, cap: u128) -> Result<ReconfigGraph> {
    let its = enumerate_its_capped(inst, cap)?;
    Ok(ReconfigGraph::from_its(inst, its))
}

impl ReconfigGraph {
    /// Edges are found by trying every single-block replacement `T ⊕ w` with `w`
    /// free of `T`, which is exactly the set of neighbours of `T`.
    pub fn from_its(inst: &Instance, its: Vec<Transversal>) -> Self {
        let index: HashMap<Transversal, usize> = its
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, t)| (t, i))
            .collect();
        let adj: Vec<Vec<usize>> = its
            .par_iter()
            .map(|t| {
                let mut nbrs: Vec<usize> = it_neighbours(inst, t)
                    .iter()
                    .filter_map(|next| index.get(next).copied())
                    .collect();
                nbrs.sort_unstable();
                nbrs
            })
            .collect();
        ReconfigGraph { its, adj, index }
    }

    pub fn len(&self) -> usize {
        self.its.len()
    }

    pub fn is_empty(&self) -> bool {
        self.its.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn index_of(&self, t: &Transversal) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// Component id per IT, ids in order of first appearance.
    pub fn component_ids(&self) -> Vec<usize> {
        let mut id = vec![usize::MAX; self.len()];
        let mut next = 0;
        for start in 0..self.len() {
            if id[start] != usize::MAX {
                continue;
            }
            id[start] = next;
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if id[w] == usize::MAX {
                        id[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        id
    }

    /// Components as lists of IT indices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let ids = self.component_ids();
        let count = ids.iter().copied().max().map_or(0, |m| m + 1);
        let mut out = vec![Vec::new(); count];
        for (i, &c) in ids.iter().enumerate() {
            out[c].push(i);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    fn bfs(&self, from: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        dist[from] = 0;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Shortest path between two ITs, if they are reconfigurable.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut prev = vec![usize::MAX; self.len()];
        prev[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for &w in &self.adj[u] {
                if prev[w] == usize::MAX {
                    prev[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if prev[to] == usize::MAX {
            return None;
        }
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = prev[cur];
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }

    /// Diameter of each component (same order as [`Self::components`]), by
    /// BFS from every vertex. Refuses graphs with more than `cap` ITs.
    pub fn diameters(&self, cap: usize) -> Result<Vec<usize>> {
        if self.len() > cap {
            return Err(Error::CapExceeded {
                estimate: self.len() as u128,
                cap: cap as u128,
            });
        }
        let ids = self.component_ids();
        let count = ids.iter().copied().max().map_or(0, |m| m + 1);
        let ecc: Vec<usize> = (0..self.len())
            .into_par_iter()
            .map(|i| {
                self.bfs(i)
                    .into_iter()
                    .filter(|&d| d != usize::MAX)
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = vec![0; count];
        for (i, e) in ecc.into_iter().enumerate() {
            out[ids[i]] = out[ids[i]].max(e);
        }
        Ok(out)
    }
}
