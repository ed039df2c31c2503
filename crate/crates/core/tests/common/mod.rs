//! Shared helpers for the integration suites: exhaustive enumeration of
//! small signed graphs, independent brute-force oracles, and the block
//! matrix assembled straight from the Kronecker form.

#![allow(dead_code)]

use corona_core::corona::CoronaLayout;
use corona_core::{MarkingVector, Sign, SignedGraph, SymmetricMatrix};
use rand::Rng;

pub fn pair_list(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            pairs.push((u, v));
        }
    }
    pairs
}

/// Decodes one of the `3^(n(n-1)/2)` signed graphs on `n` labeled nodes.
pub fn graph_from_code(n: usize, pairs: &[(usize, usize)], mut code: u64) -> SignedGraph {
    let mut edges = Vec::new();
    for &(u, v) in pairs {
        match code % 3 {
            1 => edges.push((u, v, Sign::Plus)),
            2 => edges.push((u, v, Sign::Minus)),
            _ => {}
        }
        code /= 3;
    }
    SignedGraph::new(n, edges).unwrap()
}

pub fn signed_graph_count(n: usize) -> u64 {
    3u64.pow((n * (n - 1) / 2) as u32)
}

/// Every signed graph on exactly `n` labeled nodes.
pub fn all_signed_graphs(n: usize) -> impl Iterator<Item = SignedGraph> {
    let pairs = pair_list(n);
    (0..signed_graph_count(n)).map(move |code| graph_from_code(n, &pairs, code))
}

pub fn all_connected_signed_graphs(n: usize) -> Vec<SignedGraph> {
    all_signed_graphs(n).filter(|g| g.is_connected()).collect()
}

pub fn random_signed_graph<R: Rng>(
    rng: &mut R,
    n: usize,
    edge_prob: f64,
    neg_prob: f64,
) -> SignedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(edge_prob) {
                let sign = if rng.gen_bool(neg_prob) {
                    Sign::Minus
                } else {
                    Sign::Plus
                };
                edges.push((u, v, sign));
            }
        }
    }
    SignedGraph::new(n, edges).unwrap()
}

pub fn random_marking<R: Rng>(rng: &mut R, n: usize) -> MarkingVector {
    MarkingVector::explicit(
        (0..n)
            .map(|_| if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus })
            .collect(),
    )
}

/// Balance by exhaustive 2-coloring of each component: positive edges must
/// stay inside a side, negative edges must cross. Independent of the
/// library's switching walk.
pub fn brute_force_balance(g: &SignedGraph) -> bool {
    let n = g.node_count();
    let mut component = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for root in 0..n {
        if component[root] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut stack = vec![root];
        let mut members = Vec::new();
        component[root] = id;
        while let Some(u) = stack.pop() {
            members.push(u);
            for (v, _) in g.neighbors(u) {
                if component[v] == usize::MAX {
                    component[v] = id;
                    stack.push(v);
                }
            }
        }
        comps.push(members);
    }
    'comp: for members in comps {
        let size = members.len();
        'coloring: for mask in 0..(1u64 << (size - 1)) {
            // First member fixed on side +.
            let side = |u: usize| {
                let idx = members.iter().position(|&m| m == u).unwrap();
                idx == 0 || (mask >> (idx - 1)) & 1 == 0
            };
            for &u in &members {
                for (v, s) in g.neighbors(u) {
                    if members.contains(&v) {
                        let same = side(u) == side(v);
                        if s.is_positive() != same {
                            continue 'coloring;
                        }
                    }
                }
            }
            continue 'comp;
        }
        return false;
    }
    true
}

/// Cubic triangle census over all node triples.
pub fn brute_force_triads(g: &SignedGraph) -> [u64; 4] {
    let n = g.node_count();
    let mut counts = [0u64; 4];
    for a in 0..n {
        for b in (a + 1)..n {
            let Some(sab) = g.sign_of(a, b) else { continue };
            for c in (b + 1)..n {
                let (Some(sac), Some(sbc)) = (g.sign_of(a, c), g.sign_of(b, c)) else {
                    continue;
                };
                let negatives = [sab, sac, sbc].iter().filter(|s| !s.is_positive()).count();
                counts[negatives] += 1;
            }
        }
    }
    counts
}

fn kron_into(
    out: &mut SymmetricMatrix,
    row0: usize,
    col0: usize,
    a: &[Vec<f64>],
    b_identity: usize,
) {
    for (i, row) in a.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v != 0.0 {
                for t in 0..b_identity {
                    out.set_sym(row0 + i * b_identity + t, col0 + j * b_identity + t, v);
                }
            }
        }
    }
}

fn dense_rows(m: &SymmetricMatrix) -> Vec<Vec<f64>> {
    (0..m.order())
        .map(|i| (0..m.order()).map(|j| m.get(i, j)).collect())
        .collect()
}

/// The block adjacency of the corona product assembled independently:
/// `[[A(G1), mu2 (x) diag(mu1)], [.., A(G2) (x) I_n]]`.
pub fn block_adjacency(
    g1: &SignedGraph,
    mu1: &MarkingVector,
    g2: &SignedGraph,
    mu2: &MarkingVector,
) -> SymmetricMatrix {
    let n = g1.node_count();
    let k = g2.node_count();
    let layout = CoronaLayout::new(n, k);
    let mut out = SymmetricMatrix::zero(layout.total_nodes());
    let a1 = dense_rows(&g1.adjacency_matrix());
    for i in 0..n {
        for j in 0..n {
            if a1[i][j] != 0.0 {
                out.set_sym(i, j, a1[i][j]);
            }
        }
    }
    // Top-right block: entry (i, n + j n + i) = mu2(v_j) mu1(u_i).
    for i in 0..n {
        for j in 0..k {
            out.set_sym(
                i,
                n + j * n + i,
                mu2.get(j).as_f64() * mu1.get(i).as_f64(),
            );
        }
    }
    let a2 = dense_rows(&g2.adjacency_matrix());
    kron_into(&mut out, n, n, &a2, n);
    out
}

/// The block signed Laplacian of the corona product:
/// `[[L(G1) + k I, -mu2 (x) diag(mu1)], [.., (L(G2) + I) (x) I_n]]`.
pub fn block_laplacian(
    g1: &SignedGraph,
    mu1: &MarkingVector,
    g2: &SignedGraph,
    mu2: &MarkingVector,
) -> SymmetricMatrix {
    let n = g1.node_count();
    let k = g2.node_count();
    let layout = CoronaLayout::new(n, k);
    let mut out = SymmetricMatrix::zero(layout.total_nodes());
    let l1 = dense_rows(&g1.laplacian_matrix());
    for i in 0..n {
        for j in 0..n {
            let v = l1[i][j] + if i == j { k as f64 } else { 0.0 };
            if v != 0.0 {
                out.set_sym(i, j, v);
            }
        }
    }
    for i in 0..n {
        for j in 0..k {
            out.set_sym(
                i,
                n + j * n + i,
                -mu2.get(j).as_f64() * mu1.get(i).as_f64(),
            );
        }
    }
    let mut l2 = dense_rows(&g2.laplacian_matrix());
    for (j, row) in l2.iter_mut().enumerate() {
        row[j] += 1.0;
    }
    kron_into(&mut out, n, n, &l2, n);
    out
}

/// Canonical marked-node counts measured directly on a graph.
pub fn measured_marked_counts(g: &SignedGraph) -> (u64, u64) {
    let mu = MarkingVector::canonical(g);
    (mu.plus_count(), mu.minus_count())
}
