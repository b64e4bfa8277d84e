//! Presence and cooccurrence statistics over observation units.
//!
//! Presence is binary per unit: a term either appears in a unit or it does
//! not, and repeated occurrences within one unit do not add weight. The
//! cooccurrence matrix is symmetric with an empty diagonal and is stored
//! sparsely; building it never materializes an N x N table.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::corpus::{ObservationSet, TermId};

/// Per-term sorted lists of the units each term appears in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresenceMatrix {
    unit_count: usize,
    units_of: Vec<Vec<u32>>,
}

impl PresenceMatrix {
    pub fn build(obs: &ObservationSet) -> Self {
        let mut units_of = vec![Vec::new(); obs.vocabulary.len()];
        for (u, unit) in obs.units.iter().enumerate() {
            let u = u as u32;
            for &term in unit {
                let list: &mut Vec<u32> = &mut units_of[term.index()];
                // Units are visited in ascending order, so presence lists
                // stay sorted; repeats within a unit collapse here.
                if list.last() != Some(&u) {
                    list.push(u);
                }
            }
        }
        Self {
            unit_count: obs.units.len(),
            units_of,
        }
    }

    /// Total number of observation units, `D`.
    pub fn unit_count(&self) -> usize {
        self.unit_count
    }

    pub fn n_terms(&self) -> usize {
        self.units_of.len()
    }

    /// Number of units containing the term, `n_t`.
    pub fn unit_freq(&self, t: TermId) -> u32 {
        self.units_of[t.index()].len() as u32
    }

    /// Sorted unit ids the term appears in.
    pub fn units_of(&self, t: TermId) -> &[u32] {
        &self.units_of[t.index()]
    }
}

/// Sparse symmetric cooccurrence counts: `count(a, b)` is the number of
/// units containing both `a` and `b`, for `a != b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CooccurrenceMatrix {
    unit_count: usize,
    /// Row per term, sorted by neighbor id; both `(a, b)` and `(b, a)` are
    /// stored so row lookups are direct.
    rows: Vec<Vec<(TermId, u32)>>,
    /// Row sums: total cooccurrence mass per term.
    totals: Vec<u64>,
}

impl CooccurrenceMatrix {
    /// Accumulates distinct within-unit pairs across all units.
    pub fn build(obs: &ObservationSet) -> Self {
        let n_terms = obs.vocabulary.len();
        // Pair counting per unit is independent; the per-thread maps merge
        // by addition, so thread scheduling cannot change the result.
        let pair_counts: HashMap<(u32, u32), u32> = obs
            .units
            .par_iter()
            .fold(HashMap::new, |mut acc: HashMap<(u32, u32), u32>, unit| {
                let mut distinct: Vec<u32> = unit.iter().map(|t| t.0).collect();
                distinct.sort_unstable();
                distinct.dedup();
                for (i, &a) in distinct.iter().enumerate() {
                    for &b in &distinct[i + 1..] {
                        *acc.entry((a, b)).or_insert(0) += 1;
                    }
                }
                acc
            })
            .reduce(HashMap::new, |mut left, right| {
                for (pair, c) in right {
                    *left.entry(pair).or_insert(0) += c;
                }
                left
            });
        let mut triples: Vec<(u32, u32, u32)> = pair_counts
            .into_iter()
            .map(|((a, b), c)| (a, b, c))
            .collect();
        triples.sort_unstable();
        Self::from_sorted_triples(obs.units.len(), n_terms, &triples)
    }

    /// Builds the matrix from upper-triangle triples `(a, b, count)` with
    /// `a < b`, sorted, deduplicated, and in range. The caller owns
    /// validation; this holds for `build` output and for cache payloads
    /// that have passed format checks.
    pub fn from_sorted_triples(
        unit_count: usize,
        n_terms: usize,
        triples: &[(u32, u32, u32)],
    ) -> Self {
        let mut rows: Vec<Vec<(TermId, u32)>> = vec![Vec::new(); n_terms];
        for &(a, b, c) in triples {
            debug_assert!(a < b && (b as usize) < n_terms && c > 0);
            rows[a as usize].push((TermId(b), c));
            rows[b as usize].push((TermId(a), c));
        }
        for row in &mut rows {
            row.sort_unstable_by_key(|&(t, _)| t);
        }
        let totals = rows
            .iter()
            .map(|row| row.iter().map(|&(_, c)| c as u64).sum())
            .collect();
        Self {
            unit_count,
            rows,
            totals,
        }
    }

    pub fn unit_count(&self) -> usize {
        self.unit_count
    }

    pub fn n_terms(&self) -> usize {
        self.rows.len()
    }

    /// Cooccurrence count for an unordered pair; zero when the terms never
    /// share a unit. `a == b` has no defined count.
    pub fn count(&self, a: TermId, b: TermId) -> u32 {
        debug_assert_ne!(a, b);
        self.rows[a.index()]
            .binary_search_by_key(&b, |&(t, _)| t)
            .map(|i| self.rows[a.index()][i].1)
            .unwrap_or(0)
    }

    /// All neighbors of `t` with nonzero cooccurrence, ascending by id.
    pub fn row(&self, t: TermId) -> &[(TermId, u32)] {
        &self.rows[t.index()]
    }

    /// Sum of the term's row, the normalizer of its cooccurrence
    /// distribution.
    pub fn row_total(&self, t: TermId) -> u64 {
        self.totals[t.index()]
    }

    /// Upper-triangle triples `(a, b, count)`, `a < b`, sorted. This is the
    /// canonical serialized form.
    pub fn triples(&self) -> impl Iterator<Item = (u32, u32, u32)> + '_ {
        self.rows.iter().enumerate().flat_map(|(a, row)| {
            let a = a as u32;
            row.iter()
                .filter(move |&&(b, _)| b.0 > a)
                .map(move |&(b, c)| (a, b.0, c))
        })
    }
}

/// A term's normalized distribution over related terms. Entries carry
/// strictly positive probability and sum to one; the distribution is empty
/// when the term has no positively weighted relations, in which case its
/// entropy is undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    owner: TermId,
    entries: Vec<(TermId, f64)>,
}

impl Distribution {
    /// Normalizes nonnegative weights into probabilities. Zero-weight
    /// entries are dropped; negative or non-finite weights are a caller
    /// bug.
    pub fn from_weights(owner: TermId, weights: impl IntoIterator<Item = (TermId, f64)>) -> Self {
        let mut entries: Vec<(TermId, f64)> = weights
            .into_iter()
            .inspect(|&(t, w)| {
                assert!(
                    w.is_finite() && w >= 0.0,
                    "invalid relation weight {w} for term pair ({}, {})",
                    owner.0,
                    t.0
                );
            })
            .filter(|&(_, w)| w > 0.0)
            .collect();
        let total: f64 = entries.iter().map(|&(_, w)| w).sum();
        for entry in &mut entries {
            entry.1 /= total;
        }
        Self { owner, entries }
    }

    pub fn owner(&self) -> TermId {
        self.owner
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// `(term, probability)` pairs in insertion order.
    pub fn entries(&self) -> &[(TermId, f64)] {
        &self.entries
    }

    pub fn probability(&self, t: TermId) -> f64 {
        self.entries
            .iter()
            .find(|&&(e, _)| e == t)
            .map(|&(_, p)| p)
            .unwrap_or(0.0)
    }

    /// Shannon entropy in bits, `None` for an empty distribution.
    pub fn entropy_bits(&self) -> Option<f64> {
        if self.entries.is_empty() {
            return None;
        }
        let mut h = 0.0;
        for &(_, p) in &self.entries {
            h -= p * p.log2();
        }
        Some(h)
    }
}
