//! Branch-function Laplacian spectra of grown corona graphs and the
//! algebraic conflict (least signed Laplacian eigenvalue).

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::graph::SignedGraph;
use crate::marking::MarkingVector;
use crate::spectra::{dense_symmetric_eigensolve, eigen_decomposition};

use super::{grow, grown_node_count, GrowthError};

/// Node cap for the dense-oracle fallback of [`algebraic_conflict`].
pub const DEFAULT_ORACLE_NODE_CAP: usize = 1_000;

/// Cap on explicitly enumerated branch values (`2^m` words per source).
const MAX_BRANCH_ENTRIES: u128 = 1 << 22;

/// Both branches of the spectral step function: each Laplacian eigenvalue
/// `x` of the host graph spawns the two roots of
/// `x = f - n - n/(f - (2 d^- + 1))`.
pub fn branch_function(d_minus: u64, n: u64, x: f64) -> (f64, f64) {
    let p = (2 * d_minus + 1) as f64;
    let nf = n as f64;
    let sq = ((p - (x + nf)).powi(2) + 4.0 * nf).sqrt();
    let base = p + x + nf;
    ((base - sq) / 2.0, (base + sq) / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchClause {
    /// `f^m(eta_j)`, multiplicity 1.
    SeedEigenvalue,
    /// `f^i(eta_j + 1)`, multiplicity `n (n+1)^(m-i-1)`.
    InjectedIterated,
    /// `eta_j + 1`, multiplicity `n (n+1)^(m-1)`.
    Injected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchEntry {
    pub value: f64,
    pub multiplicity: BigUint,
    pub clause: BranchClause,
    /// The +/- choices taken through the compositions, oldest first.
    pub branch_word: String,
    /// Index of the source seed eigenvalue (ascending order).
    pub source: usize,
}

/// The complete Laplacian spectrum of `G^(m)` for a seed with constant
/// negative degree and an all-same canonical marking.
#[derive(Debug, Clone)]
pub struct BranchSpectrum {
    pub n: usize,
    pub m: usize,
    pub d_minus: u64,
    pub order: BigUint,
    pub entries: Vec<BranchEntry>,
}

impl BranchSpectrum {
    pub fn total_multiplicity(&self) -> BigUint {
        self.entries.iter().map(|e| &e.multiplicity).sum()
    }

    pub fn min_value(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.value)
            .fold(f64::INFINITY, f64::min)
    }

    /// Values expanded by multiplicity, ascending; `None` when the order
    /// does not fit in memory-sized integers.
    pub fn expanded_values(&self) -> Option<Vec<f64>> {
        let total = self.total_multiplicity().to_usize()?;
        let mut out = Vec::with_capacity(total);
        for e in &self.entries {
            let mult = e.multiplicity.to_usize()?;
            out.extend(std::iter::repeat(e.value).take(mult));
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Some(out)
    }
}

fn check_hypotheses(seed: &SignedGraph) -> Result<u64, GrowthError> {
    if seed.node_count() == 0 {
        return Err(GrowthError::EmptySeed);
    }
    let d_minus = seed.constant_negative_degree().ok_or_else(|| {
        GrowthError::UnsupportedHypothesis(
            "every seed node must have the same negative degree".to_string(),
        )
    })?;
    if MarkingVector::canonical(seed).all_same().is_none() {
        return Err(GrowthError::UnsupportedHypothesis(
            "the canonical marking of the seed must be all-plus or all-minus".to_string(),
        ));
    }
    Ok(d_minus)
}

/// All branch words of `f^depth` applied to `start`.
fn branch_values(start: f64, depth: usize, d_minus: u64, n: u64) -> Vec<(f64, String)> {
    let mut values = vec![(start, String::new())];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(values.len() * 2);
        for (x, word) in values {
            let (lo, hi) = branch_function(d_minus, n, x);
            next.push((lo, format!("{word}-")));
            next.push((hi, format!("{word}+")));
        }
        values = next;
    }
    values
}

/// Laplacian spectrum of `G^(m)` by iterated closed forms.
///
/// Seed eigenvalues come from the dense oracle; the eigenvalue equal to
/// `2 d^-` (whose eigenvector is all-ones) is excluded from the injected
/// clauses. The total multiplicity is checked exactly against `n (n+1)^m`.
pub fn branch_spectrum(seed: &SignedGraph, m: usize) -> Result<BranchSpectrum, GrowthError> {
    let d_minus = check_hypotheses(seed)?;
    let n = seed.node_count();
    let n64 = n as u64;

    let entry_estimate: u128 = (n as u128) << m.min(120);
    if entry_estimate > MAX_BRANCH_ENTRIES {
        return Err(GrowthError::BranchBudget {
            entries: entry_estimate,
            limit: MAX_BRANCH_ENTRIES,
        });
    }

    let eig = eigen_decomposition(&seed.laplacian_matrix())?;
    let special = (2 * d_minus) as f64;
    let excluded = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &v)| (v - special).abs() <= 1e-9 * (1.0 + special))
        .map(|(j, _)| j)
        .next_back()
        .ok_or_else(|| {
            GrowthError::Internal(format!(
                "2d^- = {special} is not among the seed Laplacian eigenvalues"
            ))
        })?;

    let base = BigUint::from(n + 1);
    let mut entries = Vec::new();

    for (j, &eta) in eig.values.iter().enumerate() {
        for (value, word) in branch_values(eta, m, d_minus, n64) {
            entries.push(BranchEntry {
                value,
                multiplicity: BigUint::from(1u32),
                clause: BranchClause::SeedEigenvalue,
                branch_word: word,
                source: j,
            });
        }
    }
    if m >= 1 {
        for i in 1..m {
            let mult = BigUint::from(n) * base.pow((m - i - 1) as u32);
            for (j, &eta) in eig.values.iter().enumerate() {
                if j == excluded {
                    continue;
                }
                for (value, word) in branch_values(eta + 1.0, i, d_minus, n64) {
                    entries.push(BranchEntry {
                        value,
                        multiplicity: mult.clone(),
                        clause: BranchClause::InjectedIterated,
                        branch_word: word,
                        source: j,
                    });
                }
            }
        }
        let mult = BigUint::from(n) * base.pow((m - 1) as u32);
        for (j, &eta) in eig.values.iter().enumerate() {
            if j == excluded {
                continue;
            }
            entries.push(BranchEntry {
                value: eta + 1.0,
                multiplicity: mult.clone(),
                clause: BranchClause::Injected,
                branch_word: String::new(),
                source: j,
            });
        }
    }

    let spectrum = BranchSpectrum {
        n,
        m,
        d_minus,
        order: grown_node_count(n, m),
        entries,
    };
    if spectrum.total_multiplicity() != spectrum.order {
        return Err(GrowthError::Internal(
            "branch multiplicities do not sum to the grown order".into(),
        ));
    }
    Ok(spectrum)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConflictMethod {
    BranchSpectrum,
    Oracle { nodes: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConflictReport {
    pub steps: usize,
    /// Least signed Laplacian eigenvalue of `G^(m)`.
    pub conflict: f64,
    /// Least signed Laplacian eigenvalue of the seed.
    pub seed_conflict: f64,
    /// Whether `conflict(G^(m)) = conflict(G^(0)) + 1` held on this run.
    /// Reported, never assumed.
    pub conjecture_plus_one_holds: bool,
    pub method: ConflictMethod,
}

/// Algebraic conflict of `G^(m)`: via the branch spectrum when the seed
/// satisfies its hypotheses, otherwise via the dense oracle on the
/// explicitly grown graph (within `oracle_node_cap`).
pub fn algebraic_conflict(
    seed: &SignedGraph,
    m: usize,
    oracle_node_cap: usize,
) -> Result<ConflictReport, GrowthError> {
    if seed.node_count() == 0 {
        return Err(GrowthError::EmptySeed);
    }
    let seed_conflict = dense_symmetric_eigensolve(&seed.laplacian_matrix())?
        .min_value()
        .expect("nonempty spectrum");

    let (conflict, method) = match branch_spectrum(seed, m) {
        Ok(spectrum) => (spectrum.min_value(), ConflictMethod::BranchSpectrum),
        Err(GrowthError::UnsupportedHypothesis(_)) => {
            let nodes = grown_node_count(seed.node_count(), m);
            if nodes > BigUint::from(oracle_node_cap) {
                return Err(GrowthError::UnsupportedHypothesis(format!(
                    "seed violates the branch hypotheses and G^({m}) with {nodes} nodes \
                     exceeds the dense-oracle cap of {oracle_node_cap}"
                )));
            }
            let grown = grow(seed, m, oracle_node_cap)?;
            let min = dense_symmetric_eigensolve(&grown.graph.laplacian_matrix())?
                .min_value()
                .expect("nonempty spectrum");
            (
                min,
                ConflictMethod::Oracle {
                    nodes: grown.graph.node_count(),
                },
            )
        }
        Err(other) => return Err(other),
    };

    Ok(ConflictReport {
        steps: m,
        conflict,
        seed_conflict,
        conjecture_plus_one_holds: (conflict - (seed_conflict + 1.0)).abs() <= 1e-7,
        method,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Sign;

    /// 4-cycle of positive edges plus two negative diagonals: constant
    /// negative degree 1, canonical marking all-minus, conflict 2.
    pub(crate) fn diagonal_seed() -> SignedGraph {
        SignedGraph::new(
            4,
            vec![
                (0, 1, Sign::Plus),
                (1, 2, Sign::Plus),
                (2, 3, Sign::Plus),
                (0, 3, Sign::Plus),
                (0, 2, Sign::Minus),
                (1, 3, Sign::Minus),
            ],
        )
        .unwrap()
    }

    fn all_negative_triangle() -> SignedGraph {
        SignedGraph::new(
            3,
            vec![(0, 1, Sign::Minus), (1, 2, Sign::Minus), (0, 2, Sign::Minus)],
        )
        .unwrap()
    }

    #[test]
    fn minus_branch_fixes_twice_negative_degree() {
        // f_-(2 d^-) = 2 d^- for any n and d^-.
        for d_minus in 0..6u64 {
            for n in 1..9u64 {
                let (lo, _) = branch_function(d_minus, n, (2 * d_minus) as f64);
                assert!((lo - (2 * d_minus) as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn diagonal_seed_conflict_is_two_for_all_m() {
        let seed = diagonal_seed();
        for m in 1..=5 {
            let report = algebraic_conflict(&seed, m, DEFAULT_ORACLE_NODE_CAP).unwrap();
            assert_eq!(report.method, ConflictMethod::BranchSpectrum);
            assert!(
                (report.conflict - 2.0).abs() < 1e-9,
                "m={m}: conflict {}",
                report.conflict
            );
            // The fixed point beats seed_conflict + 1 here.
            assert!(!report.conjecture_plus_one_holds);
        }
    }

    #[test]
    fn multiplicities_sum_to_the_grown_order() {
        let seed = all_negative_triangle();
        for m in 0..=6 {
            let spectrum = branch_spectrum(&seed, m).unwrap();
            assert_eq!(spectrum.total_multiplicity(), grown_node_count(3, m));
        }
    }

    #[test]
    fn one_step_matches_the_quadratic_closed_form() {
        // At m = 1 the branch spectrum is the equal-negative-degree
        // closed form applied to (seed, seed).
        use crate::spectra::{laplacian_equal_negdeg_spectrum, multiset_equals};
        let seed = diagonal_seed();
        let mu = MarkingVector::canonical(&seed);
        let branch = branch_spectrum(&seed, 1).unwrap();
        let quad = laplacian_equal_negdeg_spectrum(&seed, &mu, &seed, &mu).unwrap();
        assert!(multiset_equals(
            &branch.expanded_values().unwrap(),
            &quad.expanded_values(),
            1e-9
        ));
    }

    #[test]
    fn branch_spectrum_matches_oracle_on_grown_graphs() {
        use crate::spectra::multiset_equals;
        for seed in [all_negative_triangle(), diagonal_seed()] {
            for m in 1..=2 {
                let spectrum = branch_spectrum(&seed, m).unwrap();
                let grown = grow(&seed, m, 10_000).unwrap();
                let oracle = dense_symmetric_eigensolve(&grown.graph.laplacian_matrix()).unwrap();
                assert!(
                    multiset_equals(
                        &spectrum.expanded_values().unwrap(),
                        &oracle.expanded_values(),
                        1e-7
                    ),
                    "mismatch for m={m}"
                );
            }
        }
    }

    #[test]
    fn unbalanced_triangle_follows_plus_one() {
        // Seed conflict 1; grown conflict 2 at every checked m.
        let seed = all_negative_triangle();
        for m in 1..=3 {
            let report = algebraic_conflict(&seed, m, DEFAULT_ORACLE_NODE_CAP).unwrap();
            assert!((report.seed_conflict - 1.0).abs() < 1e-9);
            assert!((report.conflict - 2.0).abs() < 1e-7);
            assert!(report.conjecture_plus_one_holds);
        }
    }

    #[test]
    fn balanced_all_positive_seed_keeps_conflict_zero() {
        // d^- = 0 behaves as unsigned: products stay balanced.
        let seed = SignedGraph::new(3, vec![(0, 1, Sign::Plus), (1, 2, Sign::Plus)]).unwrap();
        for m in 1..=2 {
            let report = algebraic_conflict(&seed, m, DEFAULT_ORACLE_NODE_CAP).unwrap();
            assert!(report.conflict.abs() < 1e-9);
            let grown = grow(&seed, m, 10_000).unwrap();
            assert!(grown.graph.is_balanced());
        }
    }

    #[test]
    fn oracle_fallback_for_hypothesis_violating_seeds() {
        // Mixed canonical marking: path with one negative edge.
        let seed = SignedGraph::new(3, vec![(0, 1, Sign::Minus), (1, 2, Sign::Plus)]).unwrap();
        let report = algebraic_conflict(&seed, 1, DEFAULT_ORACLE_NODE_CAP).unwrap();
        assert!(matches!(report.method, ConflictMethod::Oracle { nodes: 12 }));
        // The seed is balanced (a tree), and so is the grown graph? No:
        // the product adds triads; the oracle answers either way. Balance
        // here: canonical marking (-,-,+) makes the positive edge (1,2)
        // oppositely marked, an unbalancing type, so conflict > 0.
        assert!(report.conflict > 1e-6);
    }
}
