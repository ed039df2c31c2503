//! Iterated corona growth: `G^(m) = G^(m-1) o G` under canonical marking.
//!
//! [`grow`] builds the graph explicitly with per-node birth metadata;
//! [`trace`] runs the exact integer counters (marked nodes, signed edges,
//! triads per step) and cross-checks the closed forms against the
//! recurrence sums.

mod conflict;
mod degrees;

pub use conflict::{
    algebraic_conflict, branch_function, branch_spectrum, BranchClause, BranchEntry,
    BranchSpectrum, ConflictMethod, ConflictReport, DEFAULT_ORACLE_NODE_CAP,
};
pub use degrees::{
    degree_distribution, degree_divergences, node_degree, DegreeClass, DegreeDivergence,
    NodeDegreeResult, NodeDescriptor,
};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::corona::{corona_product, CoronaError, CoronaLayout, EdgeClasses, MarkPair};
use crate::graph::{Sign, SignedGraph};
use crate::ingest::triad_census;
use crate::marking::{MarkingScheme, MarkingVector};
use crate::spectra::SpectraError;

/// Default cap on explicitly constructed nodes.
pub const DEFAULT_NODE_BUDGET: usize = 10_000_000;

#[derive(Debug, Error)]
pub enum GrowthError {
    #[error("the seed graph must have at least one node")]
    EmptySeed,
    #[error("the seed graph must be connected")]
    DisconnectedSeed,
    #[error("growing to {required} nodes exceeds the node budget of {budget}")]
    NodeBudget { required: BigUint, budget: usize },
    #[error("closed forms are derived for canonical marking only")]
    UnsupportedMarking,
    #[error("unsupported hypothesis: {0}")]
    UnsupportedHypothesis(String),
    #[error("branch spectrum would hold {entries} entries, over the limit of {limit}")]
    BranchBudget { entries: u128, limit: u128 },
    #[error("invalid node descriptor: {0}")]
    InvalidDescriptor(String),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Corona(#[from] CoronaError),
    #[error("internal counter inconsistency: {0}")]
    Internal(String),
}

/// `n (n+1)^m`, the node count of `G^(m)` for an `n`-node seed.
pub fn grown_node_count(n: usize, m: usize) -> BigUint {
    BigUint::from(n) * BigUint::from(n + 1).pow(m as u32)
}

/// `(k+n)(n+1)^m - n`, the edge count of `G^(m)`.
pub fn grown_edge_count(n: usize, k: usize, m: usize) -> BigUint {
    BigUint::from(k + n) * BigUint::from(n + 1).pow(m as u32) - BigUint::from(n)
}

/// Where and how a node of a grown graph was born.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeMeta {
    /// 0 for seed nodes, otherwise the step that created the node.
    pub birth_step: usize,
    /// Which seed node this is a copy of.
    pub seed_node: usize,
    /// Canonical marking of the seed node, `mu0(v)`.
    pub initial_marking: Sign,
    /// Marking of the attachment target at birth, `mu(u)`.
    pub attach_marking: Option<Sign>,
    pub attached_to: Option<usize>,
}

/// An explicitly grown corona graph with birth metadata.
#[derive(Debug, Clone)]
pub struct GrownGraph {
    pub graph: SignedGraph,
    pub meta: Vec<NodeMeta>,
    pub steps: usize,
}

/// Builds `G^(m)` explicitly. The canonical marking of the whole current
/// graph is recomputed at every step.
pub fn grow(seed: &SignedGraph, m: usize, node_budget: usize) -> Result<GrownGraph, GrowthError> {
    let n = seed.node_count();
    if n == 0 {
        return Err(GrowthError::EmptySeed);
    }
    if !seed.is_connected() {
        return Err(GrowthError::DisconnectedSeed);
    }
    let required = grown_node_count(n, m);
    if required > BigUint::from(node_budget) {
        return Err(GrowthError::NodeBudget {
            required,
            budget: node_budget,
        });
    }

    let mu_seed = MarkingVector::canonical(seed);
    let mut graph = seed.clone();
    let mut meta: Vec<NodeMeta> = (0..n)
        .map(|v| NodeMeta {
            birth_step: 0,
            seed_node: v,
            initial_marking: mu_seed.get(v),
            attach_marking: None,
            attached_to: None,
        })
        .collect();

    for step in 1..=m {
        let mu_current = MarkingVector::canonical(&graph);
        let base = graph.node_count();
        let layout = CoronaLayout::new(base, n);
        let next = corona_product(&graph, &mu_current, seed, &mu_seed)?;
        for j in 0..n {
            for u in 0..base {
                debug_assert_eq!(meta.len(), layout.copy_node(u, j));
                meta.push(NodeMeta {
                    birth_step: step,
                    seed_node: j,
                    initial_marking: mu_seed.get(j),
                    attach_marking: Some(mu_current.get(u)),
                    attached_to: Some(u),
                });
            }
        }
        graph = next;
    }
    Ok(GrownGraph {
        graph,
        meta,
        steps: m,
    })
}

/// The seed-side counters that determine every closed form: canonical
/// marked-node counts, signed edge totals, sign-by-marking edge classes and
/// the triad census.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedProfile {
    pub n: u64,
    pub k: u64,
    pub n_plus: u64,
    pub n_minus: u64,
    pub e_plus: u64,
    pub e_minus: u64,
    pub classes: EdgeClasses,
    pub triads: [u64; 4],
}

pub fn seed_profile(seed: &SignedGraph) -> SeedProfile {
    let mu = MarkingVector::canonical(seed);
    SeedProfile {
        n: seed.node_count() as u64,
        k: seed.edge_count() as u64,
        n_plus: mu.plus_count(),
        n_minus: mu.minus_count(),
        e_plus: seed.positive_edge_count(),
        e_minus: seed.negative_edge_count(),
        classes: EdgeClasses::of(seed, &mu),
        triads: triad_census(seed),
    }
}

/// Marked-node counts `(n_+^(i), n_-^(i))` for `i = 0..=m` under canonical
/// marking, by the parity-cased recurrence.
pub fn marked_count_sequence(profile: &SeedProfile, m: usize) -> Vec<(BigUint, BigUint)> {
    let n = BigUint::from(profile.n);
    let mut seq = Vec::with_capacity(m + 1);
    let mut plus = BigUint::from(profile.n_plus);
    let mut minus = BigUint::from(profile.n_minus);
    seq.push((plus.clone(), minus.clone()));
    for _ in 0..m {
        let total = &plus + &minus;
        let (next_plus, next_minus) = match (profile.n_plus % 2, profile.n_minus % 2) {
            // Every node flips; new nodes copy their attachment target.
            (1, 1) => (&minus + &n * &plus, &plus + &n * &minus),
            // Every node turns negative.
            (0, 1) => (&n * &plus, &n * &minus + &total),
            // Markings are stable.
            (0, 0) => (&plus * (&n + 1u32), &minus * (&n + 1u32)),
            // Every node turns positive.
            (1, 0) => (&total + &n * &plus, &n * &minus),
            _ => unreachable!(),
        };
        plus = next_plus;
        minus = next_minus;
        seq.push((plus.clone(), minus.clone()));
    }
    seq
}

/// Per-step totals of one growth run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub step: usize,
    pub nodes: BigUint,
    pub n_plus: BigUint,
    pub n_minus: BigUint,
    pub edges: BigUint,
    pub e_plus: BigUint,
    pub e_minus: BigUint,
    pub triads: [BigUint; 4],
}

/// Exact counters for `G^(0..m)` plus the closed-form constants
/// `k1 = (n+1)^m`, `k2 = k1 - 1`, `k3 = sum of n_-^(i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthTrace {
    pub seed: SeedProfile,
    pub m: usize,
    pub steps: Vec<TraceStep>,
    pub k1: BigUint,
    pub k2: BigUint,
    pub k3: BigUint,
}

impl GrowthTrace {
    pub fn final_step(&self) -> &TraceStep {
        self.steps.last().expect("trace has step 0")
    }

    pub fn p_e_plus(&self) -> f64 {
        let last = self.final_step();
        let edges = last.edges.to_f64().unwrap_or(f64::INFINITY);
        if edges == 0.0 {
            0.0
        } else {
            last.e_plus.to_f64().unwrap_or(0.0) / edges
        }
    }

    pub fn triad_fractions(&self) -> [f64; 4] {
        let last = self.final_step();
        let total: BigUint = last.triads.iter().sum();
        if total.is_zero() {
            return [0.0; 4];
        }
        let total = total.to_f64().unwrap_or(f64::INFINITY);
        last.triads
            .clone()
            .map(|t| t.to_f64().unwrap_or(0.0) / total)
    }
}

/// Runs the per-step recurrences and validates them against the closed
/// forms; the two routes must agree exactly in integer arithmetic.
pub fn trace(seed: &SignedGraph, m: usize, scheme: MarkingScheme) -> Result<GrowthTrace, GrowthError> {
    if scheme != MarkingScheme::Canonical {
        return Err(GrowthError::UnsupportedMarking);
    }
    if seed.node_count() == 0 {
        return Err(GrowthError::EmptySeed);
    }
    let profile = seed_profile(seed);
    let counts = marked_count_sequence(&profile, m);
    let n = BigUint::from(profile.n);

    use MarkPair::{Mixed, MinusMinus, PlusPlus};
    let c = |s, p| BigUint::from(profile.classes.get(s, p));
    let src = [
        // New-triad source terms per Table of triad increments:
        // (coefficient of n_+^(i), coefficient of n_-^(i)) for each type.
        (c(Sign::Plus, PlusPlus), c(Sign::Plus, MinusMinus)),
        (
            c(Sign::Plus, Mixed) + c(Sign::Minus, PlusPlus),
            c(Sign::Plus, Mixed) + c(Sign::Minus, MinusMinus),
        ),
        (
            c(Sign::Plus, MinusMinus) + c(Sign::Minus, Mixed),
            c(Sign::Plus, PlusPlus) + c(Sign::Minus, Mixed),
        ),
        (c(Sign::Minus, MinusMinus), c(Sign::Minus, PlusPlus)),
    ];

    let mut steps = Vec::with_capacity(m + 1);
    let mut e_plus = BigUint::from(profile.e_plus);
    let mut e_minus = BigUint::from(profile.e_minus);
    let mut triads = profile.triads.clone().map(BigUint::from);
    let mut nodes = n.clone();
    steps.push(TraceStep {
        step: 0,
        nodes: nodes.clone(),
        n_plus: counts[0].0.clone(),
        n_minus: counts[0].1.clone(),
        edges: &e_plus + &e_minus,
        e_plus: e_plus.clone(),
        e_minus: e_minus.clone(),
        triads: triads.clone(),
    });

    for i in 0..m {
        let (np_i, nm_i) = (&counts[i].0, &counts[i].1);
        e_plus += BigUint::from(profile.e_plus) * &nodes
            + np_i * BigUint::from(profile.n_plus)
            + nm_i * BigUint::from(profile.n_minus);
        e_minus += BigUint::from(profile.e_minus) * &nodes
            + np_i * BigUint::from(profile.n_minus)
            + nm_i * BigUint::from(profile.n_plus);
        // Triads: per new copy the seed triads, plus the join triads.
        for (idx, t) in triads.iter_mut().enumerate() {
            *t += BigUint::from(profile.triads[idx]) * &nodes;
            *t += np_i * &src[idx].0 + nm_i * &src[idx].1;
        }
        nodes *= &n + 1u32;
        steps.push(TraceStep {
            step: i + 1,
            nodes: nodes.clone(),
            n_plus: counts[i + 1].0.clone(),
            n_minus: counts[i + 1].1.clone(),
            edges: &e_plus + &e_minus,
            e_plus: e_plus.clone(),
            e_minus: e_minus.clone(),
            triads: triads.clone(),
        });
    }

    let k1 = BigUint::from(profile.n + 1).pow(m as u32);
    let k2 = &k1 - BigUint::one();
    let k3: BigUint = counts[..m].iter().map(|(_, minus)| minus).sum();
    let closed = closed_totals(&profile, &k1, &k2, &k3);

    let last = steps.last().unwrap();
    if last.nodes != grown_node_count(profile.n as usize, m) {
        return Err(GrowthError::Internal("node count".into()));
    }
    if last.edges != grown_edge_count(profile.n as usize, profile.k as usize, m) {
        return Err(GrowthError::Internal("edge count".into()));
    }
    if last.e_plus != closed.e_plus || last.e_minus != closed.e_minus {
        return Err(GrowthError::Internal(
            "signed edge recurrence disagrees with the closed form".into(),
        ));
    }
    if last.triads != closed.triads {
        return Err(GrowthError::Internal(
            "triad recurrence disagrees with the closed form".into(),
        ));
    }

    Ok(GrowthTrace {
        seed: profile,
        m,
        steps,
        k1,
        k2,
        k3,
    })
}

/// Closed-form totals for `G^(m)` in the `k1/k2/k3` parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedTotals {
    pub e_plus: BigUint,
    pub e_minus: BigUint,
    pub triads: [BigUint; 4],
}

/// Evaluates the closed forms. Written with the identity
/// `a k2 + (b - a) k3 = a (k2 - k3) + b k3` so that all terms stay
/// non-negative (`k3 <= k2` always).
pub(crate) fn closed_totals(
    profile: &SeedProfile,
    k1: &BigUint,
    k2: &BigUint,
    k3: &BigUint,
) -> ClosedTotals {
    use MarkPair::{Mixed, MinusMinus, PlusPlus};
    let c = |s, p| BigUint::from(profile.classes.get(s, p));
    let k2_minus_k3 = k2 - k3;

    let e_plus = BigUint::from(profile.e_plus) * k1
        + BigUint::from(profile.n_plus) * &k2_minus_k3
        + BigUint::from(profile.n_minus) * k3;
    let e_minus = BigUint::from(profile.e_minus) * k1
        + BigUint::from(profile.n_minus) * &k2_minus_k3
        + BigUint::from(profile.n_plus) * k3;

    let triads = [
        BigUint::from(profile.triads[0]) * k1
            + c(Sign::Plus, PlusPlus) * &k2_minus_k3
            + c(Sign::Plus, MinusMinus) * k3,
        BigUint::from(profile.triads[1]) * k1
            + c(Sign::Plus, Mixed) * k2
            + c(Sign::Minus, PlusPlus) * &k2_minus_k3
            + c(Sign::Minus, MinusMinus) * k3,
        BigUint::from(profile.triads[2]) * k1
            + c(Sign::Minus, Mixed) * k2
            + c(Sign::Plus, MinusMinus) * &k2_minus_k3
            + c(Sign::Plus, PlusPlus) * k3,
        BigUint::from(profile.triads[3]) * k1
            + c(Sign::Minus, MinusMinus) * &k2_minus_k3
            + c(Sign::Minus, PlusPlus) * k3,
    ];
    ClosedTotals {
        e_plus,
        e_minus,
        triads,
    }
}
