//! Labeled and unlabeled enumeration at small orders.
//!
//! A labeled graph on `n` vertices is indexed by a bitmask over the vertex
//! pairs in row-major order `(0,1), (0,2), ..., (n-2,n-1)`; bit 0 is the first
//! pair. Isomorphism classes are generated by extending every class of order
//! `n - 1` with one new vertex in all `2^(n-1)` ways and deduplicating by
//! canonical form.

use std::collections::BTreeSet;
use std::ops::Range;

use rayon::prelude::*;

use super::canon::{canonical_form, canonical_graph};
use super::Graph;
use crate::error::{check_order, Result};

/// Largest order for exhaustive enumeration.
pub const ENUM_MAX_ORDER: usize = 8;

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

pub fn labeled_graph_count(n: usize) -> Result<u64> {
    check_order("labeled enumeration", n, 1, ENUM_MAX_ORDER)?;
    Ok(1u64 << pair_count(n))
}

/// The labeled graph with the given pair bitmask.
pub fn labeled_graph(n: usize, mask: u64) -> Result<Graph> {
    check_order("labeled graph", n, 0, 11)?;
    let mut rows = vec![0u64; n];
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> bit & 1 == 1 {
                rows[u] |= 1 << v;
                rows[v] |= 1 << u;
            }
            bit += 1;
        }
    }
    Ok(Graph { n, rows })
}

/// A contiguous slice of the labeled index space of one order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledRange {
    pub n: usize,
    pub indices: Range<u64>,
}

impl LabeledRange {
    /// Splits into at most `parts` contiguous, non-empty, disjoint ranges covering `self`.
    pub fn partition(&self, parts: usize) -> Vec<LabeledRange> {
        let len = self.indices.end - self.indices.start;
        let parts = (parts.max(1) as u64).min(len.max(1));
        let chunk = len.div_ceil(parts);
        (0..parts)
            .map(|k| {
                let lo = self.indices.start + k * chunk;
                let hi = (lo + chunk).min(self.indices.end);
                LabeledRange { n: self.n, indices: lo..hi }
            })
            .filter(|r| !r.indices.is_empty() || len == 0)
            .collect()
    }
}

impl IntoIterator for LabeledRange {
    type Item = Graph;
    type IntoIter = Box<dyn Iterator<Item = Graph> + Send>;

    fn into_iter(self) -> Self::IntoIter {
        let n = self.n;
        Box::new(self.indices.map(move |m| labeled_graph(n, m).expect("order checked at construction")))
    }
}

/// Every labeled graph of order `n`, in bitmask order.
pub fn enumerate_labeled_graphs(n: usize) -> Result<LabeledRange> {
    let count = labeled_graph_count(n)?;
    Ok(LabeledRange { n, indices: 0..count })
}

fn classes_all(n: usize) -> Vec<Graph> {
    if n <= 1 {
        return vec![Graph::empty(n).expect("small order")];
    }
    let smaller = classes_all(n - 1);
    let found: BTreeSet<(Vec<u8>, Graph)> = smaller
        .par_iter()
        .flat_map_iter(|h| {
            (0u64..1 << (n - 1)).map(move |nbrs| {
                let mut rows: Vec<u64> = h.rows.iter().enumerate().map(|(v, &r)| r | (nbrs >> v & 1) << (n - 1)).collect();
                rows.push(nbrs);
                let g = Graph { n, rows };
                let c = canonical_graph(&g).expect("order within canonical bound");
                (canonical_form(&c).expect("order within canonical bound").0, c)
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    found.into_iter().map(|(_, g)| g).collect()
}

/// One canonical representative per isomorphism class of order `n`, sorted by
/// canonical form.
pub fn enumerate_graph_classes(n: usize, connected_only: bool) -> Result<Vec<Graph>> {
    check_order("class enumeration", n, 1, ENUM_MAX_ORDER)?;
    let mut classes = classes_all(n);
    if connected_only {
        classes.retain(Graph::is_connected);
    }
    Ok(classes)
}
