//! Standalone path checker. It reads only the raw edge list and blocks, and
//! shares no code with the engines whose output it checks.

use std::collections::{BTreeSet, HashSet};

use crate::instance::InstanceSchema;

pub struct PathValidator {
    edges: HashSet<(usize, usize)>,
    block_of: Vec<usize>,
    num_blocks: usize,
}

impl PathValidator {
    pub fn new(schema: &InstanceSchema) -> Self {
        let mut block_of = vec![usize::MAX; schema.n];
        for (i, b) in schema.blocks.iter().enumerate() {
            for &v in b {
                block_of[v] = i;
            }
        }
        let edges = schema
            .edges
            .iter()
            .flat_map(|&[u, v]| [(u, v), (v, u)])
            .collect();
        PathValidator {
            edges,
            block_of,
            num_blocks: schema.blocks.len(),
        }
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    /// Checks that `set` is an independent set meeting every block once.
    pub fn check_it(&self, set: &[usize]) -> Result<(), String> {
        let mut seen = vec![false; self.num_blocks];
        for &v in set {
            let b = *self
                .block_of
                .get(v)
                .ok_or_else(|| format!("vertex {v} out of range"))?;
            if std::mem::replace(&mut seen[b], true) {
                return Err(format!("block {b} hit twice"));
            }
        }
        if let Some(b) = seen.iter().position(|&x| !x) {
            return Err(format!("block {b} missed"));
        }
        for (i, &u) in set.iter().enumerate() {
            if let Some(&v) = set[i + 1..].iter().find(|&&v| self.adjacent(u, v)) {
                return Err(format!("{u} and {v} are adjacent"));
            }
        }
        Ok(())
    }

    /// Checks a path of ITs step by step: every union of consecutive elements
    /// is independent with exactly one more vertex than there are blocks.
    pub fn check_path(
        &self,
        path: &[Vec<usize>],
        start: &[usize],
        end: &[usize],
    ) -> Result<(), String> {
        let as_set = |x: &[usize]| x.iter().copied().collect::<BTreeSet<usize>>();
        let first = path.first().ok_or("empty path")?;
        if as_set(first) != as_set(start) {
            return Err("path does not start at the source".into());
        }
        if as_set(path.last().unwrap()) != as_set(end) {
            return Err("path does not end at the target".into());
        }
        for (i, p) in path.iter().enumerate() {
            self.check_it(p).map_err(|e| format!("element {i}: {e}"))?;
        }
        for (i, pair) in path.windows(2).enumerate() {
            let union: Vec<usize> = as_set(&pair[0]).union(&as_set(&pair[1])).copied().collect();
            if union.len() != self.num_blocks + 1 {
                return Err(format!("step {i}: union has {} vertices", union.len()));
            }
            for (j, &u) in union.iter().enumerate() {
                if let Some(&v) = union[j + 1..].iter().find(|&&v| self.adjacent(u, v)) {
                    return Err(format!("step {i}: {u} and {v} are adjacent"));
                }
            }
        }
        Ok(())
    }
}
