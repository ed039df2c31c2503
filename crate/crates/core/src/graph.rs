//! Simple undirected signed graphs with dense integer node ids.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Mul, Neg};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("node id {id} out of range for a graph on {node_count} nodes")]
    NodeOutOfRange { id: usize, node_count: usize },
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
}

/// Edge sign, `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn is_positive(self) -> bool {
        self == Sign::Plus
    }

    /// Sign of an integer product of `count` negative factors.
    pub fn from_negative_parity(count: u64) -> Sign {
        if count % 2 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
        }
    }
}

/// Positive/negative degree counts of one node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeProfile {
    pub positive: u64,
    pub negative: u64,
}

impl DegreeProfile {
    pub fn total(&self) -> u64 {
        self.positive + self.negative
    }

    /// Net degree `d = d+ - d-`.
    pub fn net(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

/// An immutable simple undirected signed graph.
///
/// Edges are stored once in normalized `(u, v)` order with `u < v`; an
/// adjacency index sorted by neighbor id is kept in sync at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedGraph {
    node_count: usize,
    edges: Vec<(u32, u32, Sign)>,
    adj: Vec<Vec<(u32, Sign)>>,
}

impl SignedGraph {
    /// Builds a graph from an edge list, rejecting self-loops, duplicate
    /// pairs (regardless of sign) and out-of-range ids.
    pub fn new<I>(node_count: usize, edges: I) -> Result<SignedGraph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, Sign)>,
    {
        let mut normalized: Vec<(u32, u32, Sign)> = Vec::new();
        let mut seen: HashSet<(u32, u32)> = HashSet::new();
        for (a, b, sign) in edges {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            for id in [a, b] {
                if id >= node_count {
                    return Err(GraphError::NodeOutOfRange { id, node_count });
                }
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            let key = (u as u32, v as u32);
            if !seen.insert(key) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            normalized.push((key.0, key.1, sign));
        }
        normalized.sort_unstable();
        let mut adj: Vec<Vec<(u32, Sign)>> = vec![Vec::new(); node_count];
        for &(u, v, s) in &normalized {
            adj[u as usize].push((v, s));
            adj[v as usize].push((u, s));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(SignedGraph {
            node_count,
            edges: normalized,
            adj,
        })
    }

    /// Construction bypass for edges already known to be simple,
    /// in-range and normalized to `u < v`; validated in debug builds.
    pub(crate) fn from_normalized_edges(
        node_count: usize,
        mut edges: Vec<(u32, u32, Sign)>,
    ) -> SignedGraph {
        edges.sort_unstable();
        debug_assert!(edges.iter().all(|&(u, v, _)| u < v && (v as usize) < node_count));
        debug_assert!(edges.windows(2).all(|w| (w[0].0, w[0].1) != (w[1].0, w[1].1)));
        let mut adj: Vec<Vec<(u32, Sign)>> = vec![Vec::new(); node_count];
        for &(u, v, s) in &edges {
            adj[u as usize].push((v, s));
            adj[v as usize].push((u, s));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        SignedGraph {
            node_count,
            edges,
            adj,
        }
    }

    /// A graph with `node_count` nodes and no edges.
    pub fn edgeless(node_count: usize) -> SignedGraph {
        SignedGraph {
            node_count,
            edges: Vec::new(),
            adj: vec![Vec::new(); node_count],
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn positive_edge_count(&self) -> u64 {
        self.edges.iter().filter(|e| e.2.is_positive()).count() as u64
    }

    pub fn negative_edge_count(&self) -> u64 {
        self.edge_count() as u64 - self.positive_edge_count()
    }

    /// Edges in normalized `(u, v, sign)` order with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Sign)> + '_ {
        self.edges
            .iter()
            .map(|&(u, v, s)| (u as usize, v as usize, s))
    }

    /// Neighbors of `u` sorted by node id, with the incident edge sign.
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, Sign)> + '_ {
        self.adj[u].iter().map(|&(v, s)| (v as usize, s))
    }

    pub(crate) fn adjacency_row(&self, u: usize) -> &[(u32, Sign)] {
        &self.adj[u]
    }

    /// Sign of the edge between `u` and `v`, if present.
    pub fn sign_of(&self, u: usize, v: usize) -> Option<Sign> {
        let row = &self.adj[u];
        row.binary_search_by_key(&(v as u32), |&(w, _)| w)
            .ok()
            .map(|idx| row[idx].1)
    }

    /// Positive and negative degree of `u`.
    pub fn degrees(&self, u: usize) -> Result<DegreeProfile, GraphError> {
        if u >= self.node_count {
            return Err(GraphError::NodeOutOfRange {
                id: u,
                node_count: self.node_count,
            });
        }
        let positive = self.adj[u].iter().filter(|(_, s)| s.is_positive()).count() as u64;
        let negative = self.adj[u].len() as u64 - positive;
        Ok(DegreeProfile { positive, negative })
    }

    /// The common net degree if the graph is net-regular, otherwise `None`.
    /// An empty graph has no net-regularity value.
    pub fn net_regularity(&self) -> Option<i64> {
        if self.node_count == 0 {
            return None;
        }
        let d = self.degrees(0).unwrap().net();
        for u in 1..self.node_count {
            if self.degrees(u).unwrap().net() != d {
                return None;
            }
        }
        Some(d)
    }

    /// The common negative degree if all nodes share one, otherwise `None`.
    pub fn constant_negative_degree(&self) -> Option<u64> {
        if self.node_count == 0 {
            return None;
        }
        let d = self.degrees(0).unwrap().negative;
        for u in 1..self.node_count {
            if self.degrees(u).unwrap().negative != d {
                return None;
            }
        }
        Some(d)
    }

    /// Structural balance: every component 2-partitions so that positive
    /// edges stay inside a part and negative edges cross. Equivalent to all
    /// cycles carrying an even number of negative edges.
    pub fn is_balanced(&self) -> bool {
        let mut side: Vec<Option<Sign>> = vec![None; self.node_count];
        let mut stack = Vec::new();
        for root in 0..self.node_count {
            if side[root].is_some() {
                continue;
            }
            side[root] = Some(Sign::Plus);
            stack.push(root);
            while let Some(u) = stack.pop() {
                let su = side[u].unwrap();
                for &(v, s) in &self.adj[u] {
                    let expected = su * s;
                    match side[v as usize] {
                        None => {
                            side[v as usize] = Some(expected);
                            stack.push(v as usize);
                        }
                        Some(sv) => {
                            if sv != expected {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// Connectivity over the underlying unsigned graph.
    pub fn is_connected(&self) -> bool {
        if self.node_count == 0 {
            return false;
        }
        let mut seen = vec![false; self.node_count];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1usize;
        while let Some(u) = stack.pop() {
            for &(v, _) in &self.adj[u] {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    count += 1;
                    stack.push(v as usize);
                }
            }
        }
        count == self.node_count
    }

    /// The graph with every edge sign flipped.
    pub fn flip_signs(&self) -> SignedGraph {
        let edges = self
            .edges
            .iter()
            .map(|&(u, v, s)| (u as usize, v as usize, -s))
            .collect::<Vec<_>>();
        SignedGraph::new(self.node_count, edges).expect("flipping signs preserves validity")
    }
}
