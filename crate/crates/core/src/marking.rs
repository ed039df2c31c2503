//! Node markings derived from edge signs.
//!
//! The canonical marking of a node is the product of its incident edge
//! signs; the plurality marking is negative only when negative edges are in
//! strict majority at that node.

use crate::graph::{Sign, SignedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkingScheme {
    Canonical,
    Plurality,
    Explicit,
}

/// A per-node sign vector together with the scheme that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkingVector {
    values: Vec<Sign>,
    scheme: MarkingScheme,
}

impl MarkingVector {
    /// Canonical marking: the product of the incident edge signs, so a node
    /// is positive exactly when its negative degree is even. Degree-0 nodes
    /// get `+` (empty product).
    pub fn canonical(g: &SignedGraph) -> MarkingVector {
        let values = (0..g.node_count())
            .map(|u| Sign::from_negative_parity(g.degrees(u).unwrap().negative))
            .collect();
        MarkingVector {
            values,
            scheme: MarkingScheme::Canonical,
        }
    }

    /// Plurality marking: `-` only when `d-(v) > d+(v)`; ties are `+`.
    pub fn plurality(g: &SignedGraph) -> MarkingVector {
        let values = (0..g.node_count())
            .map(|u| {
                let d = g.degrees(u).unwrap();
                if d.negative > d.positive {
                    Sign::Minus
                } else {
                    Sign::Plus
                }
            })
            .collect();
        MarkingVector {
            values,
            scheme: MarkingScheme::Plurality,
        }
    }

    pub fn explicit(values: Vec<Sign>) -> MarkingVector {
        MarkingVector {
            values,
            scheme: MarkingScheme::Explicit,
        }
    }

    pub fn all_plus(len: usize) -> MarkingVector {
        MarkingVector::explicit(vec![Sign::Plus; len])
    }

    pub fn all_minus(len: usize) -> MarkingVector {
        MarkingVector::explicit(vec![Sign::Minus; len])
    }

    pub fn of_scheme(g: &SignedGraph, scheme: MarkingScheme) -> MarkingVector {
        match scheme {
            MarkingScheme::Canonical => MarkingVector::canonical(g),
            MarkingScheme::Plurality => MarkingVector::plurality(g),
            MarkingScheme::Explicit => panic!("explicit markings need a value vector"),
        }
    }

    pub fn scheme(&self) -> MarkingScheme {
        self.scheme
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, u: usize) -> Sign {
        self.values[u]
    }

    pub fn iter(&self) -> impl Iterator<Item = Sign> + '_ {
        self.values.iter().copied()
    }

    pub fn plus_count(&self) -> u64 {
        self.values.iter().filter(|s| s.is_positive()).count() as u64
    }

    pub fn minus_count(&self) -> u64 {
        self.len() as u64 - self.plus_count()
    }

    /// `Some(sign)` if every node carries the same marking, `None` otherwise
    /// (and for the empty vector).
    pub fn all_same(&self) -> Option<Sign> {
        let first = *self.values.first()?;
        self.values
            .iter()
            .all(|&s| s == first)
            .then_some(first)
    }

    /// Flips every marking; the result is tagged explicit.
    pub fn negated(&self) -> MarkingVector {
        MarkingVector::explicit(self.values.iter().map(|&s| -s).collect())
    }
}
