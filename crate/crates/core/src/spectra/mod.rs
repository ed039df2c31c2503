//! Spectra of corona products: closed-form eigenpairs plus a dense Jacobi
//! oracle for verification.
//!
//! The closed forms factor the product spectrum through the factor spectra.
//! Their eigenvector ansatz is only consistent when the `G2` marking vector
//! is itself an eigenvector of the relevant `G2` matrix (all-plus and
//! all-minus markings always are, by net-regularity resp. the constant
//! negative degree). The quadratic operations check that condition exactly
//! in integer arithmetic and refuse otherwise; the secular operation
//! validates every candidate root against the assembled product and emits
//! only the candidates that verify.

mod jacobi;
mod secular;

pub use jacobi::{eigen_decomposition, EigenDecomposition};

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::corona::{corona_product, CoronaError, CoronaLayout};
use crate::graph::SignedGraph;
use crate::marking::MarkingVector;
use crate::matrix::SymmetricMatrix;

#[derive(Debug, Error)]
pub enum SpectraError {
    #[error("cannot decompose an empty matrix")]
    EmptyMatrix,
    #[error(
        "Jacobi iteration did not converge for order {order} after {sweeps} sweeps \
         (off-diagonal norm {off_norm:.3e}, threshold {threshold:.3e})"
    )]
    NonConvergence {
        order: usize,
        sweeps: usize,
        off_norm: f64,
        threshold: f64,
    },
    #[error("unsupported hypothesis: {0}")]
    UnsupportedHypothesis(String),
    #[error("failed to bracket a secular root for lambda={lambda} in interval {interval}")]
    BracketFailure { lambda: f64, interval: usize },
    #[error(transparent)]
    Corona(#[from] CoronaError),
    #[error("internal spectral inconsistency: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    Adjacency,
    Laplacian,
    Signless,
    General,
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            MatrixKind::Adjacency => "adjacency",
            MatrixKind::Laplacian => "laplacian",
            MatrixKind::Signless => "signless",
            MatrixKind::General => "general",
        };
        write!(f, "{name}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchSign {
    Plus,
    Minus,
}

/// Which clause of a closed form produced an entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Oracle,
    /// A quadratic-branch eigenvalue seeded by factor eigenvalue `source`.
    QuadraticBranch { sign: BranchSign, source: usize },
    /// A copied `G2` eigenvalue (index after excluding the all-ones
    /// direction), carried by vectors supported on the copies.
    CopyEigenvector { source: usize },
    /// A validated root of the secular equation for factor eigenvalue
    /// `source`, found in the given pole interval.
    SecularRoot { source: usize, interval: usize },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Oracle => write!(f, "oracle"),
            Provenance::QuadraticBranch { sign, source } => {
                let s = if *sign == BranchSign::Plus { '+' } else { '-' };
                write!(f, "quadratic{s}[i={source}]")
            }
            Provenance::CopyEigenvector { source } => write!(f, "copy-eigen[j={source}]"),
            Provenance::SecularRoot { source, interval } => {
                write!(f, "secular[i={source},interval={interval}]")
            }
        }
    }
}

/// One eigenvalue with its multiplicity and any constructed eigenvectors
/// (at most `multiplicity` of them).
#[derive(Debug, Clone)]
pub struct SpectralEntry {
    pub value: f64,
    pub multiplicity: usize,
    pub vectors: Vec<Vec<f64>>,
    pub provenance: Provenance,
}

/// A (possibly partial) spectrum with provenance.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub matrix_kind: MatrixKind,
    pub order: usize,
    pub entries: Vec<SpectralEntry>,
    /// True when the emitted multiplicities account for the whole order.
    pub complete: bool,
    /// Eigenvalues of the order not covered by `entries`.
    pub residual_multiplicity: usize,
    pub warnings: Vec<String>,
}

impl SpectrumReport {
    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// Values expanded by multiplicity, ascending.
    pub fn expanded_values(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.total_multiplicity());
        for e in &self.entries {
            out.extend(std::iter::repeat(e.value).take(e.multiplicity));
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }

    pub fn min_value(&self) -> Option<f64> {
        self.entries
            .iter()
            .map(|e| e.value)
            .min_by(|a, b| a.partial_cmp(b).unwrap())
    }

    fn finalize(mut self) -> SpectrumReport {
        let total = self.total_multiplicity();
        self.complete = total == self.order;
        self.residual_multiplicity = self.order - total;
        self
    }
}

/// Multiplicity-aware multiset equality by greedy pairing of the sorted
/// lists; the single comparison primitive for all spectral tests.
pub fn multiset_equals(a: &[f64], b: &[f64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= tol)
}

/// Greedy check that `sub` embeds into `sup` within `tol`.
pub fn multiset_subset(sub: &[f64], sup: &[f64], tol: f64) -> bool {
    let mut sub = sub.to_vec();
    let mut sup = sup.to_vec();
    sub.sort_by(|x, y| x.partial_cmp(y).unwrap());
    sup.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut j = 0;
    'outer: for x in sub {
        while j < sup.len() {
            if (sup[j] - x).abs() <= tol {
                j += 1;
                continue 'outer;
            }
            if sup[j] > x + tol {
                return false;
            }
            j += 1;
        }
        return false;
    }
    true
}

fn unit_normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

/// Full spectrum of any symmetric matrix via the Jacobi oracle.
pub fn dense_symmetric_eigensolve(m: &SymmetricMatrix) -> Result<SpectrumReport, SpectraError> {
    let eig = eigen_decomposition(m)?;
    let entries = eig
        .values
        .iter()
        .zip(eig.vectors)
        .map(|(&value, vector)| SpectralEntry {
            value,
            multiplicity: 1,
            vectors: vec![vector],
            provenance: Provenance::Oracle,
        })
        .collect();
    Ok(SpectrumReport {
        matrix_kind: MatrixKind::General,
        order: m.order(),
        entries,
        complete: false,
        residual_multiplicity: 0,
        warnings: Vec::new(),
    }
    .finalize())
}

/// Oracle spectrum of a graph matrix of the requested kind.
pub fn oracle_spectrum(g: &SignedGraph, kind: MatrixKind) -> Result<SpectrumReport, SpectraError> {
    let m = match kind {
        MatrixKind::Adjacency => g.adjacency_matrix(),
        MatrixKind::Laplacian => g.laplacian_matrix(),
        MatrixKind::Signless => g.signless_laplacian_matrix(),
        MatrixKind::General => g.adjacency_matrix(),
    };
    let mut report = dense_symmetric_eigensolve(&m)?;
    report.matrix_kind = kind;
    Ok(report)
}

fn check_factor_markings(
    g1: &SignedGraph,
    mu1: &MarkingVector,
    g2: &SignedGraph,
    mu2: &MarkingVector,
) -> Result<(), SpectraError> {
    if mu1.len() != g1.node_count() {
        return Err(CoronaError::MarkingMismatch {
            side: "g1",
            marking: mu1.len(),
            nodes: g1.node_count(),
        }
        .into());
    }
    if mu2.len() != g2.node_count() {
        return Err(CoronaError::MarkingMismatch {
            side: "g2",
            marking: mu2.len(),
            nodes: g2.node_count(),
        }
        .into());
    }
    if g1.node_count() == 0 {
        return Err(SpectraError::EmptyMatrix);
    }
    if g2.node_count() == 0 {
        return Err(CoronaError::EmptySecondFactor.into());
    }
    Ok(())
}

/// Is `mu` an eigenvector of the signed adjacency of `g` for integer
/// eigenvalue `d`? Exact integer arithmetic.
fn marking_is_adjacency_eigenvector(g: &SignedGraph, mu: &MarkingVector, d: i64) -> bool {
    (0..g.node_count()).all(|x| {
        let s: i64 = g
            .neighbors(x)
            .map(|(j, sign)| sign.as_i64() * mu.get(j).as_i64())
            .sum();
        s == d * mu.get(x).as_i64()
    })
}

/// Is `mu` a signed Laplacian eigenvector of `g` for eigenvalue `2 d^-`?
/// Equivalent to `(A mu)_x = (d+_x - d-_x) mu_x` at every node.
fn marking_is_laplacian_eigenvector(g: &SignedGraph, mu: &MarkingVector) -> bool {
    (0..g.node_count()).all(|x| {
        let s: i64 = g
            .neighbors(x)
            .map(|(j, sign)| sign.as_i64() * mu.get(j).as_i64())
            .sum();
        let d = g.degrees(x).unwrap();
        s == d.net() * mu.get(x).as_i64()
    })
}

/// Orthonormal basis of the `special`-eigenspace of `eig` with the all-ones
/// direction removed, plus the remaining eigenpairs unchanged. Returns
/// `order - 1` pairs.
fn copy_pairs_excluding_ones(
    eig: &EigenDecomposition,
    special: f64,
) -> Result<Vec<(f64, Vec<f64>)>, SpectraError> {
    let k = eig.order();
    let group: Vec<usize> = (0..k)
        .filter(|&j| (eig.values[j] - special).abs() <= 1e-7 * (1.0 + special.abs()))
        .collect();
    if group.is_empty() {
        return Err(SpectraError::Internal(format!(
            "expected eigenvalue {special} in the factor spectrum"
        )));
    }
    // Projection of the all-ones vector onto the group span.
    let mut ones_dir = vec![0.0; k];
    for &j in &group {
        let coeff: f64 = eig.vectors[j].iter().sum();
        for (o, v) in ones_dir.iter_mut().zip(&eig.vectors[j]) {
            *o += coeff * v;
        }
    }
    unit_normalize(&mut ones_dir);

    let mut basis: Vec<Vec<f64>> = vec![ones_dir];
    let mut out: Vec<(f64, Vec<f64>)> = Vec::with_capacity(k - 1);
    for &j in &group {
        let mut w = eig.vectors[j].clone();
        for b in &basis {
            let dot: f64 = w.iter().zip(b).map(|(a, c)| a * c).sum();
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= dot * bi;
            }
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for x in w.iter_mut() {
                *x /= norm;
            }
            basis.push(w.clone());
            out.push((special, w));
        }
    }
    if out.len() + 1 != group.len() {
        return Err(SpectraError::Internal(
            "all-ones direction missing from the expected eigenspace".into(),
        ));
    }
    for j in 0..k {
        if !group.contains(&j) {
            out.push((eig.values[j], eig.vectors[j].clone()));
        }
    }
    Ok(out)
}

/// `[0; Y (x) e_i]` for every `i`, under [`CoronaLayout`].
fn copy_supported_vectors(layout: CoronaLayout, y: &[f64]) -> Vec<Vec<f64>> {
    (0..layout.n)
        .map(|i| {
            let mut z = vec![0.0; layout.total_nodes()];
            for (jj, &yj) in y.iter().enumerate() {
                z[layout.copy_node(i, jj)] = yj;
            }
            z
        })
        .collect()
}

/// Adjacency eigenpairs of `G1 o G2` for net-regular `G2`.
///
/// Emits the two quadratic branches per `G1` eigenvalue; when `mu2` is
/// all-plus or all-minus the copied `G2` eigenvalues complete the spectrum.
pub fn adjacency_spectrum_corona(
    g1: &SignedGraph,
    mu1: &MarkingVector,
    g2: &SignedGraph,
    mu2: &MarkingVector,
) -> Result<SpectrumReport, SpectraError> {
    check_factor_markings(g1, mu1, g2, mu2)?;
    let n = g1.node_count();
    let k = g2.node_count();
    let d = g2.net_regularity().ok_or_else(|| {
        SpectraError::UnsupportedHypothesis("G2 must be net-regular".to_string())
    })?;
    if !marking_is_adjacency_eigenvector(g2, mu2, d) {
        return Err(SpectraError::UnsupportedHypothesis(
            "the G2 marking must be an adjacency eigenvector for the net-degree \
             (all-plus and all-minus markings always are)"
                .to_string(),
        ));
    }

    let layout = CoronaLayout::new(n, k);
    let mut report = SpectrumReport {
        matrix_kind: MatrixKind::Adjacency,
        order: layout.total_nodes(),
        entries: Vec::new(),
        complete: false,
        residual_multiplicity: 0,
        warnings: Vec::new(),
    };

    let eig1 = eigen_decomposition(&g1.adjacency_matrix())?;
    let df = d as f64;
    for (i, (&lambda1, x)) in eig1.values.iter().zip(&eig1.vectors).enumerate() {
        let sq = ((df - lambda1).powi(2) + 4.0 * k as f64).sqrt();
        for (sign, lambda) in [
            (BranchSign::Plus, (df + lambda1 + sq) / 2.0),
            (BranchSign::Minus, (df + lambda1 - sq) / 2.0),
        ] {
            let vectors = if (lambda - df).abs() <= 1e-9 * (1.0 + lambda.abs()) {
                report.warnings.push(format!(
                    "eigenvector formula pole at lambda = net-degree for source {i}; vector omitted"
                ));
                Vec::new()
            } else {
                let mut z = vec![0.0; layout.total_nodes()];
                for (ii, &xi) in x.iter().enumerate() {
                    z[ii] = xi;
                }
                for j in 0..k {
                    let coeff = mu2.get(j).as_f64() / (lambda - df);
                    for (ii, &xi) in x.iter().enumerate() {
                        z[layout.copy_node(ii, j)] = coeff * mu1.get(ii).as_f64() * xi;
                    }
                }
                unit_normalize(&mut z);
                vec![z]
            };
            report.entries.push(SpectralEntry {
                value: lambda,
                multiplicity: 1,
                vectors,
                provenance: Provenance::QuadraticBranch { sign, source: i },
            });
        }
    }

    if mu2.all_same().is_some() {
        let eig2 = eigen_decomposition(&g2.adjacency_matrix())?;
        for (j, (eta, y)) in copy_pairs_excluding_ones(&eig2, df)?.into_iter().enumerate() {
            report.entries.push(SpectralEntry {
                value: eta,
                multiplicity: n,
                vectors: copy_supported_vectors(layout, &y),
                provenance: Provenance::CopyEigenvector { source: j },
            });
        }
    }
    Ok(report.finalize())
}

/// Signed Laplacian eigenpairs of `G1 o G2` when every `G2` node has the
/// same negative degree.
pub fn laplacian_equal_negdeg_spectrum(
    g1: &SignedGraph,
    mu1: &MarkingVector,
    g2: &SignedGraph,
    mu2: &MarkingVector,
) -> Result<SpectrumReport, SpectraError> {
    check_factor_markings(g1, mu1, g2, mu2)?;
    let n = g1.node_count();
    let k = g2.node_count();
    let d_minus = g2.constant_negative_degree().ok_or_else(|| {
        SpectraError::UnsupportedHypothesis(
            "every node of G2 must have the same negative degree".to_string(),
        )
    })?;
    if !marking_is_laplacian_eigenvector(g2, mu2) {
        return Err(SpectraError::UnsupportedHypothesis(
            "the G2 marking must be a signed Laplacian eigenvector for 2d^- \
             (all-plus and all-minus markings always are)"
                .to_string(),
        ));
    }

    let layout = CoronaLayout::new(n, k);
    let mut report = SpectrumReport {
        matrix_kind: MatrixKind::Laplacian,
        order: layout.total_nodes(),
        entries: Vec::new(),
        complete: false,
        residual_multiplicity: 0,
        warnings: Vec::new(),
    };

    let pole = (2 * d_minus + 1) as f64;
    let kf = k as f64;
    let eig1 = eigen_decomposition(&g1.laplacian_matrix())?;
    for (i, (&lambda1, x)) in eig1.values.iter().zip(&eig1.vectors).enumerate() {
        let sq = ((pole - (lambda1 + kf)).powi(2) + 4.0 * kf).sqrt();
        for (sign, lambda) in [
            (BranchSign::Plus, (pole + lambda1 + kf + sq) / 2.0),
            (BranchSign::Minus, (pole + lambda1 + kf - sq) / 2.0),
        ] {
            let vectors = if (lambda - pole).abs() <= 1e-9 * (1.0 + lambda.abs()) {
                report.warnings.push(format!(
                    "eigenvector formula pole at lambda = 2d^- + 1 for source {i}; vector omitted"
                ));
                Vec::new()
            } else {
                let mut z = vec![0.0; layout.total_nodes()];
                for (ii, &xi) in x.iter().enumerate() {
                    z[ii] = xi;
                }
                for j in 0..k {
                    let coeff = -mu2.get(j).as_f64() / (lambda - pole);
                    for (ii, &xi) in x.iter().enumerate() {
                        z[layout.copy_node(ii, j)] = coeff * mu1.get(ii).as_f64() * xi;
                    }
                }
                unit_normalize(&mut z);
                vec![z]
            };
            report.entries.push(SpectralEntry {
                value: lambda,
                multiplicity: 1,
                vectors,
                provenance: Provenance::QuadraticBranch { sign, source: i },
            });
        }
    }

    if mu2.all_same().is_some() {
        let eig2 = eigen_decomposition(&g2.laplacian_matrix())?;
        let special = (2 * d_minus) as f64;
        for (j, (eta, y)) in copy_pairs_excluding_ones(&eig2, special)?
            .into_iter()
            .enumerate()
        {
            report.entries.push(SpectralEntry {
                value: eta + 1.0,
                multiplicity: n,
                vectors: copy_supported_vectors(layout, &y),
                provenance: Provenance::CopyEigenvector { source: j },
            });
        }
    }
    Ok(report.finalize())
}

/// Signed Laplacian eigenpairs of `G1 o G2` from the secular equation, one
/// bisected root per pole interval per `G1` eigenvalue.
///
/// Every candidate root is validated against the assembled product with the
/// constructed eigenvector; candidates whose residual exceeds the report
/// tolerance are dropped and counted in a warning. The report is complete
/// only when the validated roots cover the whole order, which requires all
/// `G2` negative degrees distinct.
pub fn laplacian_secular_spectrum(
    g1: &SignedGraph,
    mu1: &MarkingVector,
    g2: &SignedGraph,
    mu2: &MarkingVector,
) -> Result<SpectrumReport, SpectraError> {
    check_factor_markings(g1, mu1, g2, mu2)?;
    let n = g1.node_count();
    let k = g2.node_count();
    let layout = CoronaLayout::new(n, k);

    let mut pole_mults: BTreeMap<u64, usize> = BTreeMap::new();
    for j in 0..k {
        *pole_mults
            .entry(g2.degrees(j).unwrap().negative)
            .or_insert(0) += 1;
    }
    let poles: Vec<(f64, usize)> = pole_mults
        .iter()
        .map(|(&d, &m)| ((2 * d + 1) as f64, m))
        .collect();

    let product = corona_product(g1, mu1, g2, mu2)?;
    let eig1 = eigen_decomposition(&g1.laplacian_matrix())?;

    let mut report = SpectrumReport {
        matrix_kind: MatrixKind::Laplacian,
        order: layout.total_nodes(),
        entries: Vec::new(),
        complete: false,
        residual_multiplicity: 0,
        warnings: Vec::new(),
    };
    let mut rejected = 0usize;
    let mut candidates = 0usize;

    for (i, (&lambda1, x)) in eig1.values.iter().zip(&eig1.vectors).enumerate() {
        let roots = secular_roots(lambda1, k, &poles)?;
        candidates += roots.len();
        for (interval, &root) in roots.iter().enumerate() {
            if poles
                .iter()
                .any(|&(p, _)| (root - p).abs() <= 1e-9 * (1.0 + root.abs()))
            {
                report.warnings.push(format!(
                    "secular root at a pole for source {i}, interval {interval}; dropped"
                ));
                rejected += 1;
                continue;
            }
            let mut z = vec![0.0; layout.total_nodes()];
            for (ii, &xi) in x.iter().enumerate() {
                z[ii] = xi;
            }
            for j in 0..k {
                let pole = (2 * g2.degrees(j).unwrap().negative + 1) as f64;
                let coeff = -mu2.get(j).as_f64() / (root - pole);
                for (ii, &xi) in x.iter().enumerate() {
                    z[layout.copy_node(ii, j)] = coeff * mu1.get(ii).as_f64() * xi;
                }
            }
            unit_normalize(&mut z);
            let lz = laplacian_apply(&product, &z);
            let scale = z.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let residual = lz
                .iter()
                .zip(&z)
                .map(|(a, b)| (a - root * b).abs())
                .fold(0.0, f64::max);
            if residual <= 1e-8 * (1.0 + root.abs()) * scale {
                report.entries.push(SpectralEntry {
                    value: root,
                    multiplicity: 1,
                    vectors: vec![z],
                    provenance: Provenance::SecularRoot {
                        source: i,
                        interval,
                    },
                });
            } else {
                rejected += 1;
            }
        }
    }
    if rejected > 0 {
        report.warnings.push(format!(
            "{rejected} of {candidates} candidate secular roots are not eigenpairs of the \
             product under this marking and were omitted"
        ));
    }
    Ok(report.finalize())
}

/// `y = L(g) x` computed from the adjacency lists.
pub fn laplacian_apply(g: &SignedGraph, x: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; g.node_count()];
    for u in 0..g.node_count() {
        let mut acc = g.degrees(u).unwrap().total() as f64 * x[u];
        for (v, s) in g.neighbors(u) {
            acc -= s.as_f64() * x[v];
        }
        y[u] = acc;
    }
    y
}

fn delegate_signless(
    g1: &SignedGraph,
    mu1: &MarkingVector,
    g2: &SignedGraph,
    mu2: &MarkingVector,
    op: fn(
        &SignedGraph,
        &MarkingVector,
        &SignedGraph,
        &MarkingVector,
    ) -> Result<SpectrumReport, SpectraError>,
) -> Result<SpectrumReport, SpectraError> {
    // Q(G) = L(G-bar) with all edge signs flipped; flipping the G1 marking
    // keeps the join-edge signs of the flipped product consistent, so the
    // delegated pairs are exact signless eigenpairs.
    let g1f = g1.flip_signs();
    let g2f = g2.flip_signs();
    let mu1f = mu1.negated();
    let mut report = op(&g1f, &mu1f, &g2f, mu2)?;
    report.matrix_kind = MatrixKind::Signless;
    Ok(report)
}

/// Signless analogue of [`laplacian_equal_negdeg_spectrum`]: requires every
/// `G2` node to share one positive degree, with poles `2 d^+ + 1`.
pub fn signless_equal_posdeg_spectrum(
    g1: &SignedGraph,
    mu1: &MarkingVector,
    g2: &SignedGraph,
    mu2: &MarkingVector,
) -> Result<SpectrumReport, SpectraError> {
    delegate_signless(g1, mu1, g2, mu2, laplacian_equal_negdeg_spectrum)
}

/// Signless analogue of [`laplacian_secular_spectrum`] with poles
/// `2 d_j^+ + 1`.
pub fn signless_secular_spectrum(
    g1: &SignedGraph,
    mu1: &MarkingVector,
    g2: &SignedGraph,
    mu2: &MarkingVector,
) -> Result<SpectrumReport, SpectraError> {
    delegate_signless(g1, mu1, g2, mu2, laplacian_secular_spectrum)
}

pub(crate) use secular::secular_roots;
