//! Parsing real signed-network edge lists and profiling graphs.
//!
//! Input lines are `from to sign` (whitespace- or comma-separated, extra
//! trailing fields ignored), where `sign` may be any nonzero number whose
//! sign is taken. Directed/duplicate pairs collapse to one undirected edge.

use std::collections::HashMap;
use std::io::BufRead;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Sign, SignedGraph};
use crate::spectra;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Resolution rule for a node pair reported with both signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConflictRule {
    /// A disputed pair resolves to distrust.
    #[default]
    Negative,
    Positive,
    /// Drop the pair entirely.
    Drop,
}

/// A parsed graph plus collapse accounting.
#[derive(Debug, Clone)]
pub struct ParseReport {
    pub graph: SignedGraph,
    /// External labels indexed by dense node id.
    pub labels: Vec<String>,
    /// Pairs that were reported with both signs.
    pub sign_conflicts: u64,
    pub self_loops_dropped: u64,
    /// Repeated or reciprocal reports of an already-seen pair.
    pub duplicates_collapsed: u64,
    pub zero_weight_dropped: u64,
}

pub fn parse_signed_edge_list<R: BufRead>(
    reader: R,
    rule: ConflictRule,
) -> Result<ParseReport, IngestError> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut pair_signs: HashMap<(usize, usize), (Sign, bool)> = HashMap::new();
    let mut order: Vec<(usize, usize)> = Vec::new();
    let mut sign_conflicts = 0u64;
    let mut self_loops_dropped = 0u64;
    let mut duplicates_collapsed = 0u64;
    let mut zero_weight_dropped = 0u64;

    let intern = |ids: &mut HashMap<String, usize>, labels: &mut Vec<String>, key: &str| {
        if let Some(&id) = ids.get(key) {
            id
        } else {
            let id = labels.len();
            ids.insert(key.to_string(), id);
            labels.push(key.to_string());
            id
        }
    };

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut fields = trimmed.split(|c: char| c == ',' || c.is_whitespace());
        let mut next_field = || fields.by_ref().find(|f| !f.is_empty());
        let from = next_field().ok_or_else(|| IngestError::Parse {
            line: line_no,
            message: "missing source field".into(),
        })?;
        let to = next_field().ok_or_else(|| IngestError::Parse {
            line: line_no,
            message: "missing target field".into(),
        })?;
        let weight_text = next_field().ok_or_else(|| IngestError::Parse {
            line: line_no,
            message: "missing sign/weight field".into(),
        })?;
        let weight: f64 = weight_text.parse().map_err(|_| IngestError::Parse {
            line: line_no,
            message: format!("invalid sign/weight {weight_text:?}"),
        })?;

        if weight == 0.0 {
            zero_weight_dropped += 1;
            continue;
        }
        let sign = if weight > 0.0 { Sign::Plus } else { Sign::Minus };
        let a = intern(&mut ids, &mut labels, from);
        let b = intern(&mut ids, &mut labels, to);
        if a == b {
            self_loops_dropped += 1;
            continue;
        }
        let key = (a.min(b), a.max(b));
        match pair_signs.get_mut(&key) {
            None => {
                pair_signs.insert(key, (sign, false));
                order.push(key);
            }
            Some((existing, conflicted)) => {
                duplicates_collapsed += 1;
                if *existing != sign && !*conflicted {
                    *conflicted = true;
                    sign_conflicts += 1;
                }
            }
        }
    }

    // Dense ids follow sorted label order (numeric when every label is a
    // number) so that serializing and re-parsing is a fixed point.
    let mut sorted: Vec<usize> = (0..labels.len()).collect();
    if labels.iter().all(|l| l.parse::<u64>().is_ok()) {
        sorted.sort_by_key(|&i| labels[i].parse::<u64>().unwrap());
    } else {
        sorted.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
    }
    let mut remap = vec![0usize; labels.len()];
    for (new_id, &old_id) in sorted.iter().enumerate() {
        remap[old_id] = new_id;
    }
    let labels: Vec<String> = sorted.iter().map(|&i| labels[i].clone()).collect();

    let mut edges: Vec<(usize, usize, Sign)> = Vec::with_capacity(order.len());
    for key in order {
        let (sign, conflicted) = pair_signs[&key];
        let resolved = if conflicted {
            match rule {
                ConflictRule::Negative => Some(Sign::Minus),
                ConflictRule::Positive => Some(Sign::Plus),
                ConflictRule::Drop => None,
            }
        } else {
            Some(sign)
        };
        if let Some(s) = resolved {
            edges.push((remap[key.0], remap[key.1], s));
        }
    }

    let graph = SignedGraph::new(labels.len(), edges).expect("collapsed pairs are simple");
    Ok(ParseReport {
        graph,
        labels,
        sign_conflicts,
        self_loops_dropped,
        duplicates_collapsed,
        zero_weight_dropped,
    })
}

/// Exact triangle counts by number of negative edges.
///
/// Edge-iterator census: for each edge `(u, v)` the sorted adjacency rows
/// are intersected and only third nodes above `v` are counted, so every
/// triangle is counted exactly once.
pub fn triad_census(g: &SignedGraph) -> [u64; 4] {
    let count_edge = |&(u, v, s): &(usize, usize, Sign)| {
        let mut counts = [0u64; 4];
        let row_u = g.adjacency_row(u);
        let row_v = g.adjacency_row(v);
        let (mut i, mut j) = (0, 0);
        while i < row_u.len() && j < row_v.len() {
            let (wu, su) = row_u[i];
            let (wv, sv) = row_v[j];
            if wu < wv {
                i += 1;
            } else if wv < wu {
                j += 1;
            } else {
                if wu as usize > v {
                    let negatives = [s, su, sv].iter().filter(|t| !t.is_positive()).count();
                    counts[negatives] += 1;
                }
                i += 1;
                j += 1;
            }
        }
        counts
    };

    let edges: Vec<(usize, usize, Sign)> = g.edges().collect();
    let add = |mut a: [u64; 4], b: [u64; 4]| {
        for i in 0..4 {
            a[i] += b[i];
        }
        a
    };
    if edges.len() >= 4096 {
        edges
            .par_iter()
            .map(count_edge)
            .reduce(|| [0u64; 4], add)
    } else {
        edges.iter().map(count_edge).fold([0u64; 4], add)
    }
}

/// The row shape of a real-network statistics table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkProfile {
    pub label: String,
    pub nodes: u64,
    pub edges: u64,
    pub positive_edges: u64,
    pub negative_edges: u64,
    /// Fraction of positive edges; 0 for an edgeless graph.
    pub p_e_plus: f64,
    pub triads: [u64; 4],
    /// Triad fractions; all zero for a triangle-free graph.
    pub p_t: [f64; 4],
    pub balanced: bool,
    /// Least signed Laplacian eigenvalue, when the graph is within the
    /// spectral budget.
    pub algebraic_conflict: Option<f64>,
}

/// Node-count cap for computing the algebraic conflict of a profiled graph.
pub const DEFAULT_SPECTRAL_BUDGET: usize = 300;

pub fn network_profile(g: &SignedGraph, label: &str, spectral_budget: usize) -> NetworkProfile {
    let edges = g.edge_count() as u64;
    let positive_edges = g.positive_edge_count();
    let triads = triad_census(g);
    let total_triads: u64 = triads.iter().sum();
    let p_t = if total_triads == 0 {
        [0.0; 4]
    } else {
        triads.map(|t| t as f64 / total_triads as f64)
    };
    let algebraic_conflict = if g.node_count() >= 1 && g.node_count() <= spectral_budget {
        spectra::dense_symmetric_eigensolve(&g.laplacian_matrix())
            .ok()
            .and_then(|report| report.min_value())
    } else {
        None
    };
    NetworkProfile {
        label: label.to_string(),
        nodes: g.node_count() as u64,
        edges,
        positive_edges,
        negative_edges: edges - positive_edges,
        p_e_plus: if edges == 0 {
            0.0
        } else {
            positive_edges as f64 / edges as f64
        },
        triads,
        p_t,
        balanced: g.is_balanced(),
        algebraic_conflict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reciprocal_reports_collapse() {
        let report =
            parse_signed_edge_list("1 2 1\n2 1 1\n".as_bytes(), ConflictRule::Negative).unwrap();
        assert_eq!(report.graph.edge_count(), 1);
        assert_eq!(report.graph.positive_edge_count(), 1);
        assert_eq!(report.sign_conflicts, 0);
        assert_eq!(report.duplicates_collapsed, 1);
    }

    #[test]
    fn conflicting_signs_resolve_to_negative() {
        let report =
            parse_signed_edge_list("1 2 1\n2 1 -1\n".as_bytes(), ConflictRule::Negative).unwrap();
        assert_eq!(report.graph.edge_count(), 1);
        assert_eq!(report.graph.negative_edge_count(), 1);
        assert_eq!(report.sign_conflicts, 1);
    }

    #[test]
    fn conflict_rule_variants() {
        let input = "1 2 1\n2 1 -1\n";
        let pos = parse_signed_edge_list(input.as_bytes(), ConflictRule::Positive).unwrap();
        assert_eq!(pos.graph.positive_edge_count(), 1);
        let drop = parse_signed_edge_list(input.as_bytes(), ConflictRule::Drop).unwrap();
        assert_eq!(drop.graph.edge_count(), 0);
    }

    #[test]
    fn self_loops_dropped() {
        let report = parse_signed_edge_list("1 1 1\n".as_bytes(), ConflictRule::Negative).unwrap();
        assert_eq!(report.graph.edge_count(), 0);
        assert_eq!(report.self_loops_dropped, 1);
    }

    #[test]
    fn weighted_csv_input() {
        // Rating-style rows: sign of the weight, zero weight dropped.
        let input = "7188,1,10,1407470400\n430,1,-5,1376539200\n3,4,0,0\n";
        let report = parse_signed_edge_list(input.as_bytes(), ConflictRule::Negative).unwrap();
        assert_eq!(report.graph.edge_count(), 2);
        assert_eq!(report.graph.positive_edge_count(), 1);
        assert_eq!(report.zero_weight_dropped, 1);
    }

    #[test]
    fn malformed_line_reports_position() {
        let err =
            parse_signed_edge_list("1 2 1\n1 x\n".as_bytes(), ConflictRule::Negative).unwrap_err();
        match err {
            IngestError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_input_empty_graph() {
        let report = parse_signed_edge_list("".as_bytes(), ConflictRule::Negative).unwrap();
        assert_eq!(report.graph.node_count(), 0);
        assert_eq!(report.graph.edge_count(), 0);
    }

    #[test]
    fn census_of_triads() {
        let pos_triangle = SignedGraph::new(
            3,
            vec![(0, 1, Sign::Plus), (1, 2, Sign::Plus), (0, 2, Sign::Plus)],
        )
        .unwrap();
        assert_eq!(triad_census(&pos_triangle), [1, 0, 0, 0]);
        let t2 = SignedGraph::new(
            3,
            vec![(0, 1, Sign::Plus), (1, 2, Sign::Minus), (0, 2, Sign::Minus)],
        )
        .unwrap();
        assert_eq!(triad_census(&t2), [0, 0, 1, 0]);
    }

    #[test]
    fn profile_of_empty_graph() {
        let profile = network_profile(&SignedGraph::edgeless(0), "empty", 100);
        assert_eq!(profile.nodes, 0);
        assert_eq!(profile.edges, 0);
        assert_eq!(profile.p_t, [0.0; 4]);
        assert!(profile.balanced);
        assert_eq!(profile.algebraic_conflict, None);
    }
}
