//! Bipartite graphs with dense, stable edge identifiers.
//!
//! Variable nodes live on the left, check nodes on the right. Adjacency lists
//! are ordered by ascending opposite-node index, so message-passing schedules
//! and cycle enumeration are deterministic.

use thiserror::Error;

/// One of the two node sets of a bipartite graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// A node reference: side plus index within that side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeRef {
    pub side: Side,
    pub index: usize,
}

impl NodeRef {
    pub fn left(index: usize) -> Self {
        NodeRef { side: Side::Left, index }
    }

    pub fn right(index: usize) -> Self {
        NodeRef { side: Side::Right, index }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({left}, {right}) out of range for a {left_count}x{right_count} graph")]
    EdgeOutOfRange {
        left: usize,
        right: usize,
        left_count: usize,
        right_count: usize,
    },
    #[error("duplicate edge ({left}, {right})")]
    DuplicateEdge { left: usize, right: usize },
}

/// A simple undirected bipartite graph.
///
/// Edge ids are dense `0..edge_count()`, assigned in (left, right)
/// lexicographic order, so a graph built twice from the same edge set gets
/// identical ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left_count: usize,
    right_count: usize,
    edges: Vec<(usize, usize)>,
    left_adj: Vec<Vec<usize>>,
    right_adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    /// Builds a graph from an edge list. Rejects out-of-range endpoints and
    /// repeated (left, right) pairs.
    pub fn new(
        left_count: usize,
        right_count: usize,
        mut edges: Vec<(usize, usize)>,
    ) -> Result<Self, GraphError> {
        for &(l, r) in &edges {
            if l >= left_count || r >= right_count {
                return Err(GraphError::EdgeOutOfRange {
                    left: l,
                    right: r,
                    left_count,
                    right_count,
                });
            }
        }
        edges.sort_unstable();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge { left: w[0].0, right: w[0].1 });
            }
        }
        let mut left_adj = vec![Vec::new(); left_count];
        let mut right_adj = vec![Vec::new(); right_count];
        for (id, &(l, r)) in edges.iter().enumerate() {
            left_adj[l].push(id);
            right_adj[r].push(id);
        }
        // Left lists inherit lexicographic order (ascending right index); the
        // right lists need an explicit sort by left endpoint.
        for adj in &mut right_adj {
            adj.sort_unstable_by_key(|&id| edges[id].0);
        }
        Ok(BipartiteGraph { left_count, right_count, edges, left_adj, right_adj })
    }

    pub fn left_count(&self) -> usize {
        self.left_count
    }

    pub fn right_count(&self) -> usize {
        self.right_count
    }

    pub fn node_count(&self) -> usize {
        self.left_count + self.right_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    /// Edge ids incident to `node`, ordered by ascending opposite-node index.
    pub fn adjacency(&self, node: NodeRef) -> &[usize] {
        match node.side {
            Side::Left => &self.left_adj[node.index],
            Side::Right => &self.right_adj[node.index],
        }
    }

    pub fn degree(&self, node: NodeRef) -> usize {
        self.adjacency(node).len()
    }

    /// The endpoint of `edge` on the given side.
    pub fn endpoint(&self, edge: usize, side: Side) -> usize {
        let (l, r) = self.edges[edge];
        match side {
            Side::Left => l,
            Side::Right => r,
        }
    }

    /// The endpoint of `edge` opposite to `node`.
    pub fn opposite(&self, edge: usize, node: NodeRef) -> NodeRef {
        let other = node.side.opposite();
        NodeRef { side: other, index: self.endpoint(edge, other) }
    }

    pub fn neighbors<'a>(&'a self, node: NodeRef) -> impl Iterator<Item = NodeRef> + 'a {
        self.adjacency(node).iter().map(move |&e| self.opposite(e, node))
    }

    /// Flat node numbering used by the enumeration oracle: left nodes first,
    /// then right nodes.
    pub fn flat_id(&self, node: NodeRef) -> usize {
        match node.side {
            Side::Left => node.index,
            Side::Right => self.left_count + node.index,
        }
    }

    pub fn node_from_flat(&self, id: usize) -> NodeRef {
        if id < self.left_count {
            NodeRef::left(id)
        } else {
            NodeRef::right(id - self.left_count)
        }
    }

    /// All nodes of one side.
    pub fn nodes(&self, side: Side) -> impl Iterator<Item = NodeRef> {
        let count = match side {
            Side::Left => self.left_count,
            Side::Right => self.right_count,
        };
        (0..count).map(move |i| NodeRef { side, index: i })
    }
}

/// The complete bipartite graph K(a, b), handy in tests.
pub fn complete_bipartite(a: usize, b: usize) -> BipartiteGraph {
    let edges = (0..a).flat_map(|l| (0..b).map(move |r| (l, r))).collect();
    BipartiteGraph::new(a, b, edges).expect("complete bipartite edges are valid")
}
