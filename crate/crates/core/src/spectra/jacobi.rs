//! Cyclic Jacobi eigensolver for dense real symmetric matrices.

use crate::matrix::SymmetricMatrix;

use super::SpectraError;

/// A full eigendecomposition: `values[i]` ascending with `vectors[i]` the
/// matching unit eigenvector.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-12;
/// Exactly degenerate eigenvalue clusters (common in grown corona graphs)
/// can stall the sweep slightly above the primary threshold. The run is
/// still accepted below this bound: by Weyl's inequality the eigenvalue
/// error is at most the remaining off-diagonal norm, orders of magnitude
/// under every tolerance used downstream.
const STAGNATION_TOL: f64 = 1e-10;

/// Diagonalizes by cyclic Jacobi rotations. Converged when the off-diagonal
/// Frobenius norm drops below `1e-12` times the Frobenius norm of the input
/// (or, after the sweep cap, below the absolute stagnation bound).
pub fn eigen_decomposition(m: &SymmetricMatrix) -> Result<EigenDecomposition, SpectraError> {
    let n = m.order();
    if n == 0 {
        return Err(SpectraError::EmptyMatrix);
    }
    let mut a: Vec<f64> = m.as_slice().to_vec();
    let mut v: Vec<f64> = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let frob = m.frobenius_norm();
    let tol = OFF_DIAGONAL_TOL * frob;

    let off_norm = |a: &[f64]| {
        let mut s = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                let x = a[p * n + q];
                s += 2.0 * x * x;
            }
        }
        s.sqrt()
    };

    let mut converged = off_norm(&a) <= tol;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for i in 0..n {
                    if i != p && i != q {
                        let aip = a[i * n + p];
                        let aiq = a[i * n + q];
                        a[i * n + p] = c * aip - s * aiq;
                        a[i * n + q] = s * aip + c * aiq;
                        a[p * n + i] = a[i * n + p];
                        a[q * n + i] = a[i * n + q];
                    }
                }
                for i in 0..n {
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = c * vip - s * viq;
                    v[i * n + q] = s * vip + c * viq;
                }
            }
        }
        sweeps += 1;
        converged = off_norm(&a) <= tol;
    }
    if !converged {
        let off = off_norm(&a);
        if off > STAGNATION_TOL * (1.0 + frob) {
            return Err(SpectraError::NonConvergence {
                order: n,
                sweeps: MAX_SWEEPS,
                off_norm: off,
                threshold: tol,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].partial_cmp(&a[j * n + j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&col| (0..n).map(|row| v[row * n + col]).collect())
        .collect();
    Ok(EigenDecomposition { values, vectors })
}

impl EigenDecomposition {
    pub fn order(&self) -> usize {
        self.values.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Sign, SignedGraph};

    fn residual(m: &SymmetricMatrix, value: f64, vector: &[f64]) -> f64 {
        m.apply(vector)
            .iter()
            .zip(vector)
            .map(|(mx, x)| (mx - value * x).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn positive_k2_adjacency() {
        let g = SignedGraph::new(2, vec![(0, 1, Sign::Plus)]).unwrap();
        let eig = eigen_decomposition(&g.adjacency_matrix()).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-12);
        assert!((eig.values[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn positive_triangle_adjacency() {
        // Characteristic polynomial (x + 1)^2 (x - 2): spectrum {-1, -1, 2}.
        let g = SignedGraph::new(
            3,
            vec![(0, 1, Sign::Plus), (1, 2, Sign::Plus), (0, 2, Sign::Plus)],
        )
        .unwrap();
        let eig = eigen_decomposition(&g.adjacency_matrix()).unwrap();
        let expected = [-1.0, -1.0, 2.0];
        for (got, want) in eig.values.iter().zip(expected) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_matrix() {
        let eig = eigen_decomposition(&SymmetricMatrix::zero(3)).unwrap();
        assert_eq!(eig.values, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn empty_matrix_is_an_error() {
        assert!(matches!(
            eigen_decomposition(&SymmetricMatrix::zero(0)),
            Err(SpectraError::EmptyMatrix)
        ));
    }

    #[test]
    fn negative_k2_laplacian() {
        // L = [[1, 1], [1, 1]]: eigenvalues {0, 2}.
        let g = SignedGraph::new(2, vec![(0, 1, Sign::Minus)]).unwrap();
        let eig = eigen_decomposition(&g.laplacian_matrix()).unwrap();
        assert!(eig.values[0].abs() < 1e-12);
        assert!((eig.values[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn all_negative_triangle_least_laplacian_eigenvalue() {
        // L = I + J: spectrum {1, 1, 4}; strictly positive, so unbalanced.
        let g = SignedGraph::new(
            3,
            vec![(0, 1, Sign::Minus), (1, 2, Sign::Minus), (0, 2, Sign::Minus)],
        )
        .unwrap();
        let eig = eigen_decomposition(&g.laplacian_matrix()).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-10);
        assert!((eig.values[2] - 4.0).abs() < 1e-10);
        assert!(!g.is_balanced());
    }

    #[test]
    fn reconstruction_and_orthonormality_random_200() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for &n in &[5usize, 40, 200] {
            let mut m = SymmetricMatrix::zero(n);
            for i in 0..n {
                for j in i..n {
                    m.set_sym(i, j, rng.gen_range(-1.0..1.0));
                }
            }
            let eig = eigen_decomposition(&m).unwrap();
            // Residuals per eigenpair.
            for (value, vector) in eig.values.iter().zip(&eig.vectors) {
                assert!(residual(&m, *value, vector) < 1e-8 * (1.0 + value.abs()));
            }
            // Orthonormality.
            for i in 0..n.min(20) {
                for j in i..n.min(20) {
                    let dot: f64 = eig.vectors[i]
                        .iter()
                        .zip(&eig.vectors[j])
                        .map(|(a, b)| a * b)
                        .sum();
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - expected).abs() < 1e-8);
                }
            }
            // Max-norm reconstruction error.
            let mut recon = SymmetricMatrix::zero(n);
            for (value, vector) in eig.values.iter().zip(&eig.vectors) {
                for i in 0..n {
                    for j in i..n {
                        recon.add_sym(i, j, value * vector[i] * vector[j]);
                    }
                }
            }
            assert!(recon.max_abs_diff(&m) < 1e-8);
        }
    }
}
