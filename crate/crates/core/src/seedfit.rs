//! Searching for seed graphs whose grown corona graphs match a target
//! network profile.

use std::collections::HashSet;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::corona::MarkPair;
use crate::graph::{Sign, SignedGraph};
use crate::growth::{self, closed_totals, marked_count_sequence, seed_profile, SeedProfile};
use crate::marking::MarkingScheme;

#[derive(Debug, Error)]
pub enum FitError {
    #[error("invalid fit target: {0}")]
    InvalidTarget(String),
    #[error(transparent)]
    Growth(#[from] growth::GrowthError),
}

/// What to match and where to search.
#[derive(Debug, Clone)]
pub struct FitTarget {
    pub desired_nodes: u64,
    pub p_e_plus: f64,
    pub p_t: [f64; 4],
    /// Componentwise acceptance band around the target fractions.
    pub tolerance: f64,
    pub n_max: usize,
    pub m_max: usize,
}

/// Search knobs; defaults follow the scoring and enumeration conventions
/// used throughout.
#[derive(Debug, Clone)]
pub struct FitOptions {
    /// Weight of the positive-edge fraction in the score.
    pub edge_weight: f64,
    /// Weights of the four triad fractions.
    pub triad_weights: [f64; 4],
    /// Restrict to seeds with no +/- mixed-positive, --/positive,
    /// --/negative edge classes and no all-negative triads.
    pub constrained: bool,
    /// Seeds with at most this many nodes are enumerated exhaustively;
    /// larger ones are searched by randomized hill climbing.
    pub exhaustive_limit: usize,
    pub rng_seed: u64,
    pub random_restarts: usize,
    pub top: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            edge_weight: 1.0,
            triad_weights: [1.0; 4],
            constrained: false,
            exhaustive_limit: 6,
            rng_seed: 1,
            random_restarts: 4_000,
            top: 10,
        }
    }
}

/// Closed-form profile of `G^(m)` for a candidate seed.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictedProfile {
    pub nodes: u64,
    pub edges: u64,
    pub p_e_plus: f64,
    pub p_t: [f64; 4],
}

#[derive(Debug, Clone)]
pub struct Candidate {
    pub seed: SignedGraph,
    pub m: usize,
    pub profile: PredictedProfile,
    pub score: f64,
    pub within_tolerance: bool,
}

#[derive(Debug, Clone)]
pub enum FitOutcome {
    Candidates(Vec<Candidate>),
    /// No `(n, m)` pair puts the grown node count within a factor of two
    /// of the desired count.
    Infeasible { nearest: Option<(usize, usize, u64)> },
}

/// Closed-form totals in the `k1/k2/k3` parameters, evaluated exactly.
/// Must agree with the per-step recurrence trace.
pub fn constrained_triad_forms(profile: &SeedProfile, m: usize) -> growth::ClosedTotals {
    let k1 = BigUint::from(profile.n + 1).pow(m as u32);
    let k2 = &k1 - 1u32;
    let k3: BigUint = marked_count_sequence(profile, m)
        .iter()
        .take(m)
        .map(|(_, minus)| minus)
        .sum();
    closed_totals(profile, &k1, &k2, &k3)
}

fn satisfies_constraint(profile: &SeedProfile) -> bool {
    profile.classes.get(Sign::Plus, MarkPair::Mixed) == 0
        && profile.classes.get(Sign::Plus, MarkPair::MinusMinus) == 0
        && profile.classes.get(Sign::Minus, MarkPair::MinusMinus) == 0
        && profile.triads[3] == 0
}

/// u128 evaluation of the closed forms, fast enough for the enumeration
/// hot loop. `None` on overflow (out of the supported search range).
fn predicted_profile_u128(profile: &SeedProfile, m: usize) -> Option<PredictedProfile> {
    let n = profile.n as u128;
    let k1 = (n + 1).checked_pow(m as u32)?;
    let k2 = k1 - 1;

    // k3 and the final marked counts by the parity recurrence.
    let mut plus = profile.n_plus as u128;
    let mut minus = profile.n_minus as u128;
    let mut k3: u128 = 0;
    for _ in 0..m {
        k3 = k3.checked_add(minus)?;
        let total = plus + minus;
        let (np, nm) = match (profile.n_plus % 2, profile.n_minus % 2) {
            (1, 1) => (minus + n * plus, plus + n * minus),
            (0, 1) => (n * plus, n * minus + total),
            (0, 0) => (plus * (n + 1), minus * (n + 1)),
            (1, 0) => (total + n * plus, n * minus),
            _ => unreachable!(),
        };
        plus = np;
        minus = nm;
    }
    let k23 = k2 - k3;

    let c = |s, p| profile.classes.get(s, p) as u128;
    use MarkPair::{Mixed, MinusMinus, PlusPlus};
    let e_plus = profile.e_plus as u128 * k1 + profile.n_plus as u128 * k23
        + profile.n_minus as u128 * k3;
    let e_minus = profile.e_minus as u128 * k1
        + profile.n_minus as u128 * k23
        + profile.n_plus as u128 * k3;
    let t = [
        profile.triads[0] as u128 * k1
            + c(Sign::Plus, PlusPlus) * k23
            + c(Sign::Plus, MinusMinus) * k3,
        profile.triads[1] as u128 * k1
            + c(Sign::Plus, Mixed) * k2
            + c(Sign::Minus, PlusPlus) * k23
            + c(Sign::Minus, MinusMinus) * k3,
        profile.triads[2] as u128 * k1
            + c(Sign::Minus, Mixed) * k2
            + c(Sign::Plus, MinusMinus) * k23
            + c(Sign::Plus, PlusPlus) * k3,
        profile.triads[3] as u128 * k1
            + c(Sign::Minus, MinusMinus) * k23
            + c(Sign::Minus, PlusPlus) * k3,
    ];

    let edges = e_plus + e_minus;
    let total_t: u128 = t.iter().sum();
    let frac = |a: u128, b: u128| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    Some(PredictedProfile {
        nodes: (n * k1).try_into().ok()?,
        edges: edges.try_into().ok()?,
        p_e_plus: frac(e_plus, edges),
        p_t: t.map(|x| frac(x, total_t)),
    })
}

fn score_profile(p: &PredictedProfile, target: &FitTarget, opts: &FitOptions) -> f64 {
    let mut s = opts.edge_weight * (p.p_e_plus - target.p_e_plus).abs();
    for i in 0..4 {
        s += opts.triad_weights[i] * (p.p_t[i] - target.p_t[i]).abs();
    }
    s
}

fn within_tolerance(p: &PredictedProfile, target: &FitTarget) -> bool {
    (p.p_e_plus - target.p_e_plus).abs() <= target.tolerance
        && (0..4).all(|i| (p.p_t[i] - target.p_t[i]).abs() <= target.tolerance)
}

/// Cheap isomorphism signature: two rounds of sign-aware neighborhood
/// refinement, hashed order-independently. Isomorphic labelings collide;
/// rare unequal collisions are accepted over exact isomorphism cost.
fn iso_signature(g: &SignedGraph) -> u64 {
    let n = g.node_count();
    let mut labels: Vec<u64> = (0..n)
        .map(|u| {
            let d = g.degrees(u).unwrap();
            d.positive << 20 | d.negative
        })
        .collect();
    for _ in 0..2 {
        let mut next = Vec::with_capacity(n);
        for u in 0..n {
            let mut neigh: Vec<(i8, u64)> = g
                .neighbors(u)
                .map(|(v, s)| (s.as_i64() as i8, labels[v]))
                .collect();
            neigh.sort_unstable();
            let mut h = std::collections::hash_map::DefaultHasher::new();
            labels[u].hash(&mut h);
            neigh.hash(&mut h);
            next.push(h.finish());
        }
        labels = next;
    }
    labels.sort_unstable();
    let mut h = std::collections::hash_map::DefaultHasher::new();
    n.hash(&mut h);
    labels.hash(&mut h);
    h.finish()
}

fn pair_list(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in (u + 1)..n {
            pairs.push((u, v));
        }
    }
    pairs
}

/// Decodes a base-3 pair assignment (0 none, 1 positive, 2 negative).
fn graph_from_code(n: usize, pairs: &[(usize, usize)], mut code: u64) -> SignedGraph {
    let mut edges = Vec::new();
    for &(u, v) in pairs {
        match code % 3 {
            1 => edges.push((u, v, Sign::Plus)),
            2 => edges.push((u, v, Sign::Minus)),
            _ => {}
        }
        code /= 3;
    }
    SignedGraph::new(n, edges).expect("enumerated pairs are simple")
}

struct ScoredSeed {
    seed: SignedGraph,
    m: usize,
    score: f64,
}

fn evaluate_seed(
    seed: &SignedGraph,
    m: usize,
    target: &FitTarget,
    opts: &FitOptions,
) -> Option<f64> {
    if !seed.is_connected() {
        return None;
    }
    let profile = seed_profile(seed);
    if opts.constrained && !satisfies_constraint(&profile) {
        return None;
    }
    let predicted = predicted_profile_u128(&profile, m)?;
    Some(score_profile(&predicted, target, opts))
}

fn exhaustive_candidates(
    n: usize,
    m: usize,
    target: &FitTarget,
    opts: &FitOptions,
    keep: usize,
) -> Vec<ScoredSeed> {
    let pairs = pair_list(n);
    let total = 3u64.pow(pairs.len() as u32);
    let chunk = 1u64 << 16;
    let chunks: Vec<u64> = (0..total.div_ceil(chunk)).collect();
    let mut best: Vec<ScoredSeed> = chunks
        .par_iter()
        .map(|&c| {
            let mut local: Vec<ScoredSeed> = Vec::new();
            for code in (c * chunk)..((c + 1) * chunk).min(total) {
                let seed = graph_from_code(n, &pairs, code);
                if let Some(score) = evaluate_seed(&seed, m, target, opts) {
                    local.push(ScoredSeed { seed, m, score });
                    if local.len() > 4 * keep {
                        local.sort_by(|a, b| a.score.partial_cmp(&b.score).unwrap());
                        local.truncate(keep);
                    }
                }
            }
            local.sort_by(|a, b| a.score.partial_cmp(&b.score).unwrap());
            local.truncate(keep);
            local
        })
        .reduce(Vec::new, |mut a, mut b| {
            a.append(&mut b);
            a.sort_by(|x, y| x.score.partial_cmp(&y.score).unwrap());
            a.truncate(keep);
            a
        });
    best.sort_by(|a, b| a.score.partial_cmp(&b.score).unwrap());
    best
}

fn random_candidates(
    n: usize,
    m: usize,
    target: &FitTarget,
    opts: &FitOptions,
    keep: usize,
) -> Vec<ScoredSeed> {
    let pairs = pair_list(n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.rng_seed ^ ((n as u64) << 32) ^ m as u64);
    let mut best: Vec<ScoredSeed> = Vec::new();
    let push = |best: &mut Vec<ScoredSeed>, seed: SignedGraph, score: f64| {
        best.push(ScoredSeed { seed, m, score });
        best.sort_by(|a, b| a.score.partial_cmp(&b.score).unwrap());
        best.truncate(keep);
    };

    for _ in 0..opts.random_restarts {
        // Random assignment biased toward positive edges, like the targets.
        let mut edges: Vec<(usize, usize, Sign)> = Vec::new();
        for &(u, v) in &pairs {
            match rng.gen_range(0..10) {
                4..=8 => edges.push((u, v, Sign::Plus)),
                9 => edges.push((u, v, Sign::Minus)),
                _ => {}
            }
        }
        let mut current = SignedGraph::new(n, edges).expect("sampled pairs are simple");
        let mut current_score = match evaluate_seed(&current, m, target, opts) {
            Some(s) => s,
            None => continue,
        };
        // Hill climb over single-pair mutations.
        for _ in 0..60 {
            let (u, v) = pairs[rng.gen_range(0..pairs.len())];
            let mut edges: Vec<(usize, usize, Sign)> = current
                .edges()
                .filter(|&(a, b, _)| (a, b) != (u, v))
                .collect();
            match rng.gen_range(0..3) {
                1 => edges.push((u, v, Sign::Plus)),
                2 => edges.push((u, v, Sign::Minus)),
                _ => {}
            }
            let mutated = SignedGraph::new(n, edges).expect("mutation stays simple");
            if let Some(score) = evaluate_seed(&mutated, m, target, opts) {
                if score < current_score {
                    current = mutated;
                    current_score = score;
                }
            }
        }
        push(&mut best, current, current_score);
    }
    best
}

/// Ranks candidate seeds for the target profile.
///
/// Candidate `(n, m)` pairs are those whose grown node count lands within
/// a factor of two of the desired count; per pair, seeds are enumerated
/// exhaustively up to `exhaustive_limit` nodes and by seeded hill climbing
/// above. Reported profiles are recomputed through the full trace.
pub fn recommend_seed(target: &FitTarget, opts: &FitOptions) -> Result<FitOutcome, FitError> {
    if target.desired_nodes == 0 {
        return Err(FitError::InvalidTarget("desired node count is zero".into()));
    }
    if target.tolerance <= 0.0 {
        return Err(FitError::InvalidTarget("tolerance must be positive".into()));
    }
    if target.n_max < 1 {
        return Err(FitError::InvalidTarget("n_max must be at least 1".into()));
    }

    let mut feasible: Vec<(usize, usize)> = Vec::new();
    let mut nearest: Option<(usize, usize, u64)> = None;
    for n in 1..=target.n_max {
        for m in 0..=target.m_max {
            let nodes = growth::grown_node_count(n, m);
            let Some(nodes64) = nodes.to_u64() else { break };
            let ratio = nodes64 as f64 / target.desired_nodes as f64;
            let distance = (nodes64 as i128 - target.desired_nodes as i128).unsigned_abs() as u64;
            if nearest.is_none_or(|(_, _, d)| distance < d) {
                nearest = Some((n, m, distance));
            }
            if (0.5..=2.0).contains(&ratio) {
                feasible.push((n, m));
            }
        }
    }
    if feasible.is_empty() {
        return Ok(FitOutcome::Infeasible { nearest });
    }

    let keep = opts.top.max(1) * 3;
    // Full enumeration is 3^(n(n-1)/2) sign patterns; past 6 nodes only
    // randomized search is tractable regardless of the requested limit.
    let exhaustive_limit = opts.exhaustive_limit.min(6);
    let mut scored: Vec<ScoredSeed> = Vec::new();
    for &(n, m) in &feasible {
        let found = if n <= exhaustive_limit {
            exhaustive_candidates(n, m, target, opts, keep)
        } else {
            random_candidates(n, m, target, opts, keep)
        };
        scored.extend(found);
    }
    scored.sort_by(|a, b| a.score.partial_cmp(&b.score).unwrap());

    let mut seen: HashSet<(usize, u64)> = HashSet::new();
    let mut out: Vec<Candidate> = Vec::new();
    for s in scored {
        if out.len() >= opts.top {
            break;
        }
        if !seen.insert((s.m, iso_signature(&s.seed))) {
            continue;
        }
        // Recompute the reported profile through the full trace.
        let trace = growth::trace(&s.seed, s.m, MarkingScheme::Canonical)?;
        let last = trace.final_step();
        let profile = PredictedProfile {
            nodes: last.nodes.to_u64().unwrap_or(u64::MAX),
            edges: last.edges.to_u64().unwrap_or(u64::MAX),
            p_e_plus: trace.p_e_plus(),
            p_t: trace.triad_fractions(),
        };
        let score = score_profile(&profile, target, opts);
        let within = within_tolerance(&profile, target);
        out.push(Candidate {
            seed: s.seed,
            m: s.m,
            profile,
            score,
            within_tolerance: within,
        });
    }
    out.sort_by(|a, b| a.score.partial_cmp(&b.score).unwrap());
    Ok(FitOutcome::Candidates(out))
}
