//! Corona product of two signed graphs.
//!
//! `G1 o G2` takes one copy of `G1` and one copy of `G2` per `G1`-node,
//! joins each `G1`-node to every node of its copy, and signs the new edge
//! between `u` and `v` as `mu1(u) * mu2(v)`.

use thiserror::Error;

use crate::graph::{Sign, SignedGraph};
use crate::ingest::triad_census;
use crate::marking::MarkingVector;

#[derive(Debug, Error)]
pub enum CoronaError {
    #[error("marking for {side} has length {marking} but the graph has {nodes} nodes")]
    MarkingMismatch {
        side: &'static str,
        marking: usize,
        nodes: usize,
    },
    #[error("the second factor must have at least one node")]
    EmptySecondFactor,
}

/// The node labeling of `G1 o G2` on `n(1 + k)` nodes.
///
/// `G1`-node `i` keeps id `i`; node `j` of the copy attached to `i` gets id
/// `n + j*n + i`. Grouping copy positions this way makes the adjacency
/// matrix equal to the block form whose lower-right block is
/// `A(G2) (x) I_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoronaLayout {
    pub n: usize,
    pub k: usize,
}

/// Where a product node came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoronaNode {
    /// Node `i` of `G1`.
    Base(usize),
    /// Node `j` of the `G2` copy attached to `G1`-node `i`.
    Copy { base: usize, copy_node: usize },
}

impl CoronaLayout {
    pub fn new(n: usize, k: usize) -> CoronaLayout {
        CoronaLayout { n, k }
    }

    pub fn total_nodes(&self) -> usize {
        self.n * (1 + self.k)
    }

    pub fn base_node(&self, i: usize) -> usize {
        debug_assert!(i < self.n);
        i
    }

    pub fn copy_node(&self, base: usize, copy_node: usize) -> usize {
        debug_assert!(base < self.n && copy_node < self.k);
        self.n + copy_node * self.n + base
    }

    pub fn decode(&self, id: usize) -> CoronaNode {
        if id < self.n {
            CoronaNode::Base(id)
        } else {
            let off = id - self.n;
            CoronaNode::Copy {
                base: off % self.n,
                copy_node: off / self.n,
            }
        }
    }
}

fn check_markings(
    g1: &SignedGraph,
    mu1: &MarkingVector,
    g2: &SignedGraph,
    mu2: &MarkingVector,
) -> Result<(), CoronaError> {
    if mu1.len() != g1.node_count() {
        return Err(CoronaError::MarkingMismatch {
            side: "g1",
            marking: mu1.len(),
            nodes: g1.node_count(),
        });
    }
    if mu2.len() != g2.node_count() {
        return Err(CoronaError::MarkingMismatch {
            side: "g2",
            marking: mu2.len(),
            nodes: g2.node_count(),
        });
    }
    if g2.node_count() == 0 {
        return Err(CoronaError::EmptySecondFactor);
    }
    Ok(())
}

/// Constructs `G1 o G2` under [`CoronaLayout`].
pub fn corona_product(
    g1: &SignedGraph,
    mu1: &MarkingVector,
    g2: &SignedGraph,
    mu2: &MarkingVector,
) -> Result<SignedGraph, CoronaError> {
    check_markings(g1, mu1, g2, mu2)?;
    let layout = CoronaLayout::new(g1.node_count(), g2.node_count());
    // All three edge families are simple and normalized under the layout:
    // copy ids preserve order within a copy, and base ids precede copies.
    let mut edges: Vec<(u32, u32, Sign)> =
        Vec::with_capacity(g1.edge_count() + layout.n * (g2.edge_count() + layout.k));
    for (u, v, s) in g1.edges() {
        edges.push((u as u32, v as u32, s));
    }
    for (a, b, s) in g2.edges() {
        for i in 0..layout.n {
            edges.push((layout.copy_node(i, a) as u32, layout.copy_node(i, b) as u32, s));
        }
    }
    for i in 0..layout.n {
        for j in 0..layout.k {
            edges.push((
                layout.base_node(i) as u32,
                layout.copy_node(i, j) as u32,
                mu1.get(i) * mu2.get(j),
            ));
        }
    }
    Ok(SignedGraph::from_normalized_edges(layout.total_nodes(), edges))
}

/// How edge endpoints are marked: both `+`, opposite, or both `-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkPair {
    PlusPlus,
    Mixed,
    MinusMinus,
}

impl MarkPair {
    pub fn of(a: Sign, b: Sign) -> MarkPair {
        match (a, b) {
            (Sign::Plus, Sign::Plus) => MarkPair::PlusPlus,
            (Sign::Minus, Sign::Minus) => MarkPair::MinusMinus,
            _ => MarkPair::Mixed,
        }
    }

    fn index(self) -> usize {
        match self {
            MarkPair::PlusPlus => 0,
            MarkPair::Mixed => 1,
            MarkPair::MinusMinus => 2,
        }
    }
}

/// Edge counts split by sign and endpoint-marking pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EdgeClasses {
    counts: [[u64; 3]; 2],
}

impl EdgeClasses {
    pub fn of(g: &SignedGraph, mu: &MarkingVector) -> EdgeClasses {
        let mut classes = EdgeClasses::default();
        for (u, v, s) in g.edges() {
            let sign_idx = if s.is_positive() { 0 } else { 1 };
            classes.counts[sign_idx][MarkPair::of(mu.get(u), mu.get(v)).index()] += 1;
        }
        classes
    }

    pub fn get(&self, sign: Sign, pair: MarkPair) -> u64 {
        let sign_idx = if sign.is_positive() { 0 } else { 1 };
        self.counts[sign_idx][pair.index()]
    }

    pub fn total(&self, sign: Sign) -> u64 {
        let sign_idx = if sign.is_positive() { 0 } else { 1 };
        self.counts[sign_idx].iter().sum()
    }
}

/// Predicted statistics of `G1 o G2`, computed without building the product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoronaStats {
    pub nodes: u64,
    pub edges: u64,
    pub positive_edges: u64,
    pub negative_edges: u64,
    /// Triad counts by number of negative edges.
    pub triads: [u64; 4],
    /// Positively/negatively marked node counts of `G1`.
    pub m1: (u64, u64),
    /// Positively/negatively marked node counts of `G2`.
    pub m2: (u64, u64),
    /// Sign-by-marking edge classes of `G2`, the triad source terms.
    pub g2_classes: EdgeClasses,
}

impl CoronaStats {
    pub fn total_triads(&self) -> u64 {
        self.triads.iter().sum()
    }
}

/// Edge and triad counts of the product from the factor statistics alone.
pub fn predicted_stats(
    g1: &SignedGraph,
    mu1: &MarkingVector,
    g2: &SignedGraph,
    mu2: &MarkingVector,
) -> Result<CoronaStats, CoronaError> {
    check_markings(g1, mu1, g2, mu2)?;
    let n = g1.node_count() as u64;
    let k = g2.node_count() as u64;
    let (m1p, m1m) = (mu1.plus_count(), mu1.minus_count());
    let (m2p, m2m) = (mu2.plus_count(), mu2.minus_count());
    let classes = EdgeClasses::of(g2, mu2);
    let t1 = triad_census(g1);
    let t2 = triad_census(g2);

    let e1p = g1.positive_edge_count();
    let e1m = g1.negative_edge_count();
    let e2p = g2.positive_edge_count();
    let e2m = g2.negative_edge_count();

    let positive_edges = e1p + n * e2p + m1p * m2p + m1m * m2m;
    let negative_edges = e1m + n * e2m + m1p * m2m + m1m * m2p;

    use MarkPair::{Mixed, MinusMinus, PlusPlus};
    let c = |s, p| classes.get(s, p);
    let triads = [
        t1[0] + n * t2[0] + m1p * c(Sign::Plus, PlusPlus) + m1m * c(Sign::Plus, MinusMinus),
        t1[1]
            + n * t2[1]
            + m1p * (c(Sign::Plus, Mixed) + c(Sign::Minus, PlusPlus))
            + m1m * (c(Sign::Plus, Mixed) + c(Sign::Minus, MinusMinus)),
        t1[2]
            + n * t2[2]
            + m1p * (c(Sign::Plus, MinusMinus) + c(Sign::Minus, Mixed))
            + m1m * (c(Sign::Plus, PlusPlus) + c(Sign::Minus, Mixed)),
        t1[3] + n * t2[3] + m1p * c(Sign::Minus, MinusMinus) + m1m * c(Sign::Minus, PlusPlus),
    ];

    let stats = CoronaStats {
        nodes: n + n * k,
        edges: g1.edge_count() as u64 + n * g2.edge_count() as u64 + n * k,
        positive_edges,
        negative_edges,
        triads,
        m1: (m1p, m1m),
        m2: (m2p, m2m),
        g2_classes: classes,
    };
    debug_assert_eq!(stats.positive_edges + stats.negative_edges, stats.edges);
    debug_assert_eq!(
        stats.total_triads(),
        t1.iter().sum::<u64>() + n * (t2.iter().sum::<u64>() + g2.edge_count() as u64)
    );
    Ok(stats)
}

/// The `G2` edge shapes that force an unbalanced product of balanced factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnbalancingEdge {
    /// A positive edge connecting two oppositely marked nodes.
    PositiveMixed,
    /// A negative edge connecting two positively marked nodes.
    NegativeBothPlus,
    /// A negative edge connecting two negatively marked nodes.
    NegativeBothMinus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BalanceClassification {
    Balanced,
    /// At least one factor is itself unbalanced.
    UnbalancedByInputs,
    /// Both factors balanced; the listed `G2` edge types break the product.
    UnbalancedByEdgeTypes(Vec<UnbalancingEdge>),
}

impl BalanceClassification {
    pub fn is_balanced(&self) -> bool {
        matches!(self, BalanceClassification::Balanced)
    }
}

/// Classifies the balance of `G1 o G2` without building it.
pub fn balance_of_corona(
    g1: &SignedGraph,
    mu1: &MarkingVector,
    g2: &SignedGraph,
    mu2: &MarkingVector,
) -> Result<BalanceClassification, CoronaError> {
    check_markings(g1, mu1, g2, mu2)?;
    if !g1.is_balanced() || !g2.is_balanced() {
        return Ok(BalanceClassification::UnbalancedByInputs);
    }
    let classes = EdgeClasses::of(g2, mu2);
    let mut types = Vec::new();
    if classes.get(Sign::Plus, MarkPair::Mixed) > 0 {
        types.push(UnbalancingEdge::PositiveMixed);
    }
    if classes.get(Sign::Minus, MarkPair::PlusPlus) > 0 {
        types.push(UnbalancingEdge::NegativeBothPlus);
    }
    if classes.get(Sign::Minus, MarkPair::MinusMinus) > 0 {
        types.push(UnbalancingEdge::NegativeBothMinus);
    }
    if types.is_empty() {
        Ok(BalanceClassification::Balanced)
    } else {
        Ok(BalanceClassification::UnbalancedByEdgeTypes(types))
    }
}
