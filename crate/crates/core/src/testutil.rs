use crate::graph::Graph;
use crate::instance::{validate_instance, Instance};

pub fn inst(n: usize, edges: &[(usize, usize)], blocks: &[&[usize]]) -> Instance {
    validate_instance(
        Graph::from_edges(n, edges).unwrap(),
        blocks.iter().map(|b| b.to_vec()).collect(),
    )
    .unwrap()
}

/// One edge, one block.
pub fn single_edge() -> Instance {
    inst(2, &[(0, 1)], &[&[0, 1]])
}

/// Edge 1–2 with blocks {0,1}, {2,3}.
pub fn edge12() -> Instance {
    inst(4, &[(1, 2)], &[&[0, 1], &[2, 3]])
}

/// K_{2,2} with sides {0,1} and {2,3} in a single block.
pub fn k22_one_block() -> Instance {
    inst(4, &[(0, 2), (0, 3), (1, 2), (1, 3)], &[&[0, 1, 2, 3]])
}
