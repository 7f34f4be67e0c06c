//! Vertex-partitioned graphs ("instances"), their sub-instances, unions and
//! irreducible decomposition.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A graph together with a partition of its vertices into blocks.
///
/// Blocks are stored sorted and ordered by their smallest vertex, so two
/// instances built from the same data compare equal regardless of input order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    graph: Graph,
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
    delta: usize,
    thickness: usize,
}

/// JSON interchange form: `{"n": .., "edges": [[u, v], ..], "blocks": [[..], ..]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct InstanceSchema {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub blocks: Vec<Vec<usize>>,
}

pub fn validate_instance(graph: Graph, blocks: Vec<Vec<usize>>) -> Result<Instance> {
    let n = graph.n();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (b, block) in blocks.iter().enumerate() {
        if block.is_empty() {
            return Err(Error::EmptyBlock(b));
        }
        for &v in block {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if let Some(first) = owner[v] {
                return Err(Error::OverlappingBlocks {
                    vertex: v,
                    first,
                    second: b,
                });
            }
            owner[v] = Some(b);
        }
    }
    if let Some(v) = owner.iter().position(Option::is_none) {
        return Err(Error::UncoveredVertex(v));
    }

    let mut blocks = blocks;
    for block in &mut blocks {
        block.sort_unstable();
    }
    blocks.sort_unstable_by_key(|b| b[0]);
    let mut block_of = vec![0; n];
    for (b, block) in blocks.iter().enumerate() {
        for &v in block {
            block_of[v] = b;
        }
    }
    let delta = graph.max_degree();
    let thickness = blocks.iter().map(Vec::len).min().unwrap_or(0);
    Ok(Instance {
        graph,
        blocks,
        block_of,
        delta,
        thickness,
    })
}

impl Instance {
    pub fn from_schema(schema: &InstanceSchema) -> Result<Self> {
        let edges: Vec<(usize, usize)> = schema.edges.iter().map(|e| (e[0], e[1])).collect();
        let graph = Graph::from_edges(schema.n, &edges)?;
        validate_instance(graph, schema.blocks.clone())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let schema: InstanceSchema = serde_json::from_str(text)?;
        Self::from_schema(&schema)
    }

    pub fn to_schema(&self) -> InstanceSchema {
        InstanceSchema {
            n: self.n(),
            edges: self
                .graph
                .edges()
                .into_iter()
                .map(|(u, v)| [u, v])
                .collect(),
            blocks: self.blocks.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_schema()).expect("schema serializes")
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn thickness(&self) -> usize {
        self.thickness
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, b: usize) -> &[usize] {
        &self.blocks[b]
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.block_of[v]
    }

    /// Whether the partition is `2Δ`-thick.
    pub fn is_haxell_thick(&self) -> bool {
        self.thickness >= 2 * self.delta
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        self.graph.neighbors(v)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.graph.has_edge(u, v)
    }

    pub fn is_irreducible(&self) -> bool {
        irreducible_components(self).len() == 1
    }
}

/// A set of block indices ℛ together with its vertex union `V_ℛ`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BlockSubset {
    indices: Vec<usize>,
}

impl BlockSubset {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        BlockSubset { indices }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, b: usize) -> bool {
        self.indices.binary_search(&b).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// `V_ℛ`, sorted.
    pub fn vertices(&self, inst: &Instance) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .indices
            .iter()
            .flat_map(|&b| inst.block(b).iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    /// The complementary subset `𝒰 \ ℛ`.
    pub fn complement(&self, inst: &Instance) -> BlockSubset {
        BlockSubset {
            indices: (0..inst.num_blocks())
                .filter(|&b| !self.contains(b))
                .collect(),
        }
    }

    /// The induced instance `𝒢_ℛ = (G[V_ℛ], ℛ)`.
    pub fn induced(&self, inst: &Instance) -> SubInstance {
        SubInstance::from_parent_blocks(
            inst.graph(),
            self.indices
                .iter()
                .map(|&b| (b, inst.block(b).to_vec()))
                .collect(),
        )
    }
}

/// An instance carved out of a parent graph, with maps back to the parent.
#[derive(Clone, Debug)]
pub struct SubInstance {
    pub instance: Instance,
    /// Child vertex `i` is parent vertex `vertices[i]` (increasing).
    pub vertices: Vec<usize>,
    /// Child block `j` carries the label `block_labels[j]` supplied by the caller
    /// (usually a parent block index).
    pub block_labels: Vec<usize>,
    parent_to_child: Vec<Option<usize>>,
}

impl SubInstance {
    /// Builds the instance induced on the union of `blocks`, each given as parent
    /// vertices with a caller-chosen label. The blocks must be disjoint and
    /// nonempty.
    pub fn from_parent_blocks(parent: &Graph, blocks: Vec<(usize, Vec<usize>)>) -> SubInstance {
        let mut vertices: Vec<usize> = blocks.iter().flat_map(|(_, b)| b.iter().copied()).collect();
        vertices.sort_unstable();
        let mut parent_to_child = vec![None; parent.n()];
        for (i, &v) in vertices.iter().enumerate() {
            parent_to_child[v] = Some(i);
        }
        let graph = parent.induced(&vertices);
        let child_blocks: Vec<Vec<usize>> = blocks
            .iter()
            .map(|(_, b)| b.iter().map(|&v| parent_to_child[v].unwrap()).collect())
            .collect();
        let instance =
            validate_instance(graph, child_blocks).expect("sub-instance blocks form a partition");
        let block_labels = instance
            .blocks()
            .iter()
            .map(|cb| {
                let first_parent = vertices[cb[0]];
                blocks
                    .iter()
                    .find(|(_, b)| b.contains(&first_parent))
                    .map(|(label, _)| *label)
                    .unwrap()
            })
            .collect();
        SubInstance {
            instance,
            vertices,
            block_labels,
            parent_to_child,
        }
    }

    pub fn to_parent(&self, v: usize) -> usize {
        self.vertices[v]
    }

    pub fn to_child(&self, v: usize) -> Option<usize> {
        self.parent_to_child.get(v).copied().flatten()
    }

    /// Child block index carrying `label`.
    pub fn block_with_label(&self, label: usize) -> Option<usize> {
        self.block_labels.iter().position(|&l| l == label)
    }
}

/// Splits an instance into irreducible pieces: blocks are linked when an edge
/// joins them, and each connected class of blocks becomes one sub-instance
/// (block labels are parent block indices).
pub fn irreducible_components(inst: &Instance) -> Vec<SubInstance> {
    let k = inst.num_blocks();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (u, v) in inst.graph().edges() {
        let (a, b) = (
            find(&mut parent, inst.block_of(u)),
            find(&mut parent, inst.block_of(v)),
        );
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of = vec![usize::MAX; k];
    for b in 0..k {
        let r = find(&mut parent, b);
        if class_of[r] == usize::MAX {
            class_of[r] = classes.len();
            classes.push(Vec::new());
        }
        classes[class_of[r]].push(b);
    }
    classes
        .into_iter()
        .map(|c| BlockSubset::new(c).induced(inst))
        .collect()
}

/// Disjoint union: `b`'s vertices are shifted past `a`'s.
pub fn union_instances(a: &Instance, b: &Instance) -> Instance {
    let shift = a.n();
    let mut edges = a.graph().edges();
    edges.extend(
        b.graph()
            .edges()
            .into_iter()
            .map(|(u, v)| (u + shift, v + shift)),
    );
    let graph = Graph::from_edges(a.n() + b.n(), &edges).expect("union edges in range");
    let mut blocks = a.blocks().to_vec();
    blocks.extend(
        b.blocks()
            .iter()
            .map(|blk| blk.iter().map(|&v| v + shift).collect()),
    );
    validate_instance(graph, blocks).expect("union of valid instances is valid")
}

/// True iff `G` is exactly `|𝒰|` vertex-disjoint copies of `K_{Δ,Δ}`, ignoring
/// how the copies sit in the blocks.
pub fn is_disjoint_kdd_union(inst: &Instance) -> bool {
    let d = inst.delta();
    if d == 0 {
        return false;
    }
    let g = inst.graph();
    let comps = g.components();
    if comps.len() != inst.num_blocks() {
        return false;
    }
    comps
        .iter()
        .all(|comp| is_complete_bipartite_dd(g, comp, d))
}

/// Whether the connected vertex set `comp` induces `K_{d,d}` and nothing else.
pub(crate) fn is_complete_bipartite_dd(g: &Graph, comp: &[usize], d: usize) -> bool {
    if comp.len() != 2 * d || comp.iter().any(|&v| g.degree(v) != d) {
        return false;
    }
    // every vertex has degree d; it is K_{d,d} iff the neighbourhood of the first
    // vertex is one side and every vertex there sees the rest
    let side_b = g.neighbors(comp[0]);
    let side_a: Vec<usize> = comp
        .iter()
        .copied()
        .filter(|v| !side_b.contains(v))
        .collect();
    side_a.len() == d
        && side_a.iter().all(|&a| g.neighbors(a) == side_b)
        && side_b.iter().all(|&b| g.neighbors(b) == side_a.as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn inst(n: usize, edges: &[(usize, usize)], blocks: &[&[usize]]) -> Instance {
        validate_instance(
            Graph::from_edges(n, edges).unwrap(),
            blocks.iter().map(|b| b.to_vec()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn validate_examples() {
        let a = inst(2, &[(0, 1)], &[&[0, 1]]);
        assert_eq!((a.delta(), a.thickness()), (1, 2));
        let b = inst(4, &[(1, 2)], &[&[0, 1], &[2, 3]]);
        assert_eq!((b.delta(), b.thickness()), (1, 2));
        let err = validate_instance(Graph::empty(2), vec![vec![0], vec![0, 1]]).unwrap_err();
        assert!(matches!(err, Error::OverlappingBlocks { vertex: 0, .. }));
        let err = validate_instance(Graph::empty(3), vec![vec![0, 1]]).unwrap_err();
        assert!(matches!(err, Error::UncoveredVertex(2)));
        let err = validate_instance(Graph::empty(1), vec![vec![0], vec![]]).unwrap_err();
        assert!(matches!(err, Error::EmptyBlock(1)));
    }

    #[test]
    fn blocks_canonicalized() {
        let a = inst(4, &[], &[&[3, 1], &[2, 0]]);
        assert_eq!(a.blocks(), &[vec![0, 2], vec![1, 3]]);
        assert_eq!(a.block_of(3), 1);
    }

    #[test]
    fn json_round_trip_and_schema_errors() {
        let a = inst(4, &[(1, 2)], &[&[0, 1], &[2, 3]]);
        assert_eq!(Instance::from_json(&a.to_json()).unwrap(), a);
        assert!(matches!(
            Instance::from_json("{\"n\": 2, \"edges\": []}"),
            Err(Error::Json(_))
        ));
        assert!(Instance::from_json("not json").is_err());
    }

    #[test]
    fn components_examples() {
        let a = inst(4, &[(1, 2)], &[&[0, 1], &[2, 3]]);
        assert_eq!(irreducible_components(&a).len(), 1);
        let b = inst(4, &[(0, 1), (2, 3)], &[&[0, 1], &[2, 3]]);
        let comps = irreducible_components(&b);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[1].vertices, vec![2, 3]);
        assert_eq!(comps[1].instance.graph().edges(), vec![(0, 1)]);
        let c = inst(4, &[(0, 2), (0, 3), (1, 2), (1, 3)], &[&[0, 1, 2, 3]]);
        assert_eq!(irreducible_components(&c).len(), 1);
    }

    /// Irreducibility defined by non-decomposability: no nontrivial split of
    /// the blocks into two groups with no edge between them.
    fn irreducible_by_splits(inst: &Instance) -> bool {
        let k = inst.num_blocks();
        if k == 0 {
            return false;
        }
        for mask in 1u32..(1 << k) - 1 {
            let side = |v: usize| mask >> inst.block_of(v) & 1;
            if inst
                .graph()
                .edges()
                .iter()
                .all(|&(u, v)| side(u) == side(v))
            {
                return false;
            }
        }
        true
    }

    #[test]
    fn contact_connectivity_matches_non_decomposability() {
        // all graphs on 6 vertices with blocks {0,1},{2,3},{4,5}, edges from a
        // fixed pool of cross pairs
        let pool = [(0, 2), (1, 4), (3, 5), (0, 5), (2, 4), (1, 3), (0, 1)];
        for mask in 0u32..(1 << pool.len()) {
            let edges: Vec<_> = (0..pool.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| pool[i])
                .collect();
            let a = inst(6, &edges, &[&[0, 1], &[2, 3], &[4, 5]]);
            assert_eq!(a.is_irreducible(), irreducible_by_splits(&a), "{edges:?}");
        }
    }

    #[test]
    fn union_examples() {
        let e = inst(2, &[(0, 1)], &[&[0, 1]]);
        let u = union_instances(&e, &e);
        assert_eq!((u.n(), u.num_blocks(), u.delta()), (4, 2, 1));
        let empty = inst(0, &[], &[]);
        assert_eq!(union_instances(&e, &empty), e);
        assert_eq!(union_instances(&empty, &e), e);
    }

    #[test]
    fn components_reunion_to_input() {
        let a = inst(
            8,
            &[(0, 4), (1, 5), (2, 3)],
            &[&[0, 1], &[2, 3], &[4, 5], &[6, 7]],
        );
        let comps = irreducible_components(&a);
        assert_eq!(comps.len(), 3);
        // mapping every child edge back through the index map recovers G
        let mut edges: Vec<(usize, usize)> = comps
            .iter()
            .flat_map(|c| {
                c.instance
                    .graph()
                    .edges()
                    .into_iter()
                    .map(|(u, v)| (c.to_parent(u), c.to_parent(v)))
                    .collect::<Vec<_>>()
            })
            .collect();
        edges.sort_unstable();
        assert_eq!(edges, a.graph().edges());
        let total: usize = comps.iter().map(|c| c.instance.n()).sum();
        assert_eq!(total, a.n());
    }

    #[test]
    fn kdd_examples() {
        let k22 = inst(4, &[(0, 2), (0, 3), (1, 2), (1, 3)], &[&[0, 1, 2, 3]]);
        assert!(is_disjoint_kdd_union(&k22));
        let e = inst(4, &[(1, 2)], &[&[0, 1], &[2, 3]]);
        assert!(!is_disjoint_kdd_union(&e));
        let two = inst(4, &[(0, 1), (2, 3)], &[&[0, 1], &[2, 3]]);
        assert!(is_disjoint_kdd_union(&two));
        let straddle = inst(4, &[(0, 2), (1, 3)], &[&[0, 1], &[2, 3]]);
        assert!(is_disjoint_kdd_union(&straddle));
        let path = inst(4, &[(0, 1), (1, 2), (2, 3)], &[&[0, 1, 2, 3]]);
        assert!(!is_disjoint_kdd_union(&path));
        let c4_one_block_two = inst(
            8,
            &[(0, 2), (0, 3), (1, 2), (1, 3)],
            &[&[0, 1, 2, 3], &[4, 5, 6, 7]],
        );
        assert!(!is_disjoint_kdd_union(&c4_one_block_two));
    }
}
