//! Dense symmetric matrices and the standard graph matrices A, L = D - A,
//! Q = D + A.

use crate::graph::SignedGraph;

/// Dense real symmetric matrix; symmetry is enforced by the setter.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    order: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zero(order: usize) -> SymmetricMatrix {
        SymmetricMatrix {
            order,
            data: vec![0.0; order * order],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.order + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set_sym(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.order + j] = value;
        self.data[j * self.order + i] = value;
    }

    pub fn add_sym(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.order + j] += value;
        if i != j {
            self.data[j * self.order + i] += value;
        }
    }

    pub(crate) fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `y = M x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.order);
        let mut y = vec![0.0; self.order];
        for i in 0..self.order {
            let row = &self.data[i * self.order..(i + 1) * self.order];
            y[i] = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
        y
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.apply(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn max_abs_diff(&self, other: &SymmetricMatrix) -> f64 {
        assert_eq!(self.order, other.order);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl SignedGraph {
    /// Signed adjacency matrix: `a_ij` is the edge sign, 0 off the edges.
    pub fn adjacency_matrix(&self) -> SymmetricMatrix {
        let mut m = SymmetricMatrix::zero(self.node_count());
        for (u, v, s) in self.edges() {
            m.set_sym(u, v, s.as_f64());
        }
        m
    }

    /// Signed Laplacian `L = D - A` with `D` the total-degree diagonal.
    pub fn laplacian_matrix(&self) -> SymmetricMatrix {
        let mut m = SymmetricMatrix::zero(self.node_count());
        for (u, v, s) in self.edges() {
            m.set_sym(u, v, -s.as_f64());
            m.add_sym(u, u, 1.0);
            m.add_sym(v, v, 1.0);
        }
        m
    }

    /// Signless Laplacian `Q = D + A`.
    pub fn signless_laplacian_matrix(&self) -> SymmetricMatrix {
        let mut m = SymmetricMatrix::zero(self.node_count());
        for (u, v, s) in self.edges() {
            m.set_sym(u, v, s.as_f64());
            m.add_sym(u, u, 1.0);
            m.add_sym(v, v, 1.0);
        }
        m
    }
}
