//! Term specificity scores.
//!
//! Three estimators reduce a term's relation distribution to a Shannon
//! entropy in bits — over cooccurrence counts, over positive presence
//! covariances, and over pairwise mutual information — and a TF-IDF
//! baseline scores terms directly. Entropy-of-cooccurrence and
//! entropy-of-covariance mark *low* values as specific (a specific term
//! keeps a small, predictable company); entropy-of-MI and TF-IDF mark
//! *high* values as specific.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::cooccur::{CooccurrenceMatrix, Distribution, PresenceMatrix};
use crate::corpus::{TermId, Vocabulary};
use crate::error::{Error, Result};

/// Rounding slack for the mutual-information sum: a float result below
/// zero by more than this is an internal error, not noise.
const MI_UNDERFLOW_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    CooccEntropy,
    CovEntropy,
    MiEntropy,
    TfIdf,
}

/// Which end of a method's score scale marks a specific term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Lower scores are more specific; ranking sorts ascending.
    AscendingSpecific,
    /// Higher scores are more specific; ranking sorts descending.
    DescendingSpecific,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::CooccEntropy,
        Method::CovEntropy,
        Method::MiEntropy,
        Method::TfIdf,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::CooccEntropy => "coocc_entropy",
            Method::CovEntropy => "cov_entropy",
            Method::MiEntropy => "mi_entropy",
            Method::TfIdf => "tfidf",
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            Method::CooccEntropy | Method::CovEntropy => Direction::AscendingSpecific,
            Method::MiEntropy | Method::TfIdf => Direction::DescendingSpecific,
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coocc_entropy" => Ok(Method::CooccEntropy),
            "cov_entropy" => Ok(Method::CovEntropy),
            "mi_entropy" => Ok(Method::MiEntropy),
            "tfidf" => Ok(Method::TfIdf),
            other => Err(Error::InvalidParameter(format!(
                "unknown method {other:?} (expected coocc_entropy, cov_entropy, mi_entropy, or tfidf)"
            ))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Neighbor set the mutual-information distribution runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MiScope {
    /// Every other vocabulary term, cooccurring or not.
    All,
    /// Only terms sharing at least one unit with the owner.
    Cooccurring,
}

impl MiScope {
    pub fn as_str(self) -> &'static str {
        match self {
            MiScope::All => "all",
            MiScope::Cooccurring => "cooccurring",
        }
    }
}

impl std::str::FromStr for MiScope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(MiScope::All),
            "cooccurring" => Ok(MiScope::Cooccurring),
            other => Err(Error::InvalidParameter(format!(
                "unknown MI scope {other:?} (expected all or cooccurring)"
            ))),
        }
    }
}

/// Binary presence counts for one term pair: out of `d` units, `n_a`
/// contain the first term, `n_b` the second, `n_ab` both.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairStats {
    pub d: u64,
    pub n_a: u64,
    pub n_b: u64,
    pub n_ab: u64,
}

impl PairStats {
    fn check(&self) {
        assert!(
            self.d > 0
                && self.n_a <= self.d
                && self.n_b <= self.d
                && self.n_ab <= self.n_a.min(self.n_b)
                && self.n_a + self.n_b <= self.d + self.n_ab,
            "inconsistent pair counts: {self:?}"
        );
    }

    /// Covariance of the two presence indicators: `n_ab/D - (n_a/D)(n_b/D)`.
    pub fn covariance(&self) -> f64 {
        self.check();
        let d = self.d as f64;
        self.n_ab as f64 / d - (self.n_a as f64 / d) * (self.n_b as f64 / d)
    }

    /// Exact sign test: covariance is positive iff `n_ab * D > n_a * n_b`.
    /// Integer arithmetic keeps pairs that land exactly on zero out of the
    /// positive set regardless of float rounding.
    pub fn has_positive_covariance(&self) -> bool {
        self.check();
        (self.n_ab as u128) * (self.d as u128) > (self.n_a as u128) * (self.n_b as u128)
    }

    /// Covariance numerator `n_ab * D - n_a * n_b`. Covariances share the
    /// denominator `D^2`, so these integers are exactly proportional to the
    /// covariances and normalize to the same distribution.
    pub fn covariance_numerator(&self) -> i128 {
        self.check();
        (self.n_ab as i128) * (self.d as i128) - (self.n_a as i128) * (self.n_b as i128)
    }

    /// Mutual information in bits between the two presence indicators,
    /// from the four-cell joint (both, first only, second only, neither).
    /// A constant indicator yields zero. Never negative: tiny negative
    /// rounding residue clamps to zero, anything larger panics.
    pub fn mutual_information_bits(&self) -> f64 {
        self.check();
        if self.n_a == 0 || self.n_b == 0 || self.n_a == self.d || self.n_b == self.d {
            return 0.0;
        }
        let d = self.d as f64;
        let n_a = self.n_a as f64;
        let n_b = self.n_b as f64;
        let n_ab = self.n_ab as f64;
        // (joint count, row marginal, column marginal) per cell.
        let cells = [
            (n_ab, n_a, n_b),
            (n_a - n_ab, n_a, d - n_b),
            (n_b - n_ab, d - n_a, n_b),
            (d - n_a - n_b + n_ab, d - n_a, d - n_b),
        ];
        let mut mi = 0.0;
        for (joint, row, col) in cells {
            if joint > 0.0 {
                mi += (joint / d) * ((joint * d) / (row * col)).log2();
            }
        }
        if mi < 0.0 {
            assert!(
                mi >= -MI_UNDERFLOW_TOLERANCE,
                "mutual information underflow: {mi}"
            );
            mi = 0.0;
        }
        mi
    }
}

/// Specificity scores for every vocabulary term under one method. Index
/// position is the term id; `None` marks a term whose score is undefined
/// (an empty relation distribution).
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    pub method: Method,
    pub scores: Vec<Option<f64>>,
}

impl ScoreTable {
    pub fn score(&self, t: TermId) -> Option<f64> {
        self.scores[t.index()]
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// Computes specificity scores from presence and cooccurrence statistics.
pub struct Scorer<'a> {
    vocabulary: &'a Vocabulary,
    presence: &'a PresenceMatrix,
    cooccurrence: &'a CooccurrenceMatrix,
}

impl<'a> Scorer<'a> {
    pub fn new(
        vocabulary: &'a Vocabulary,
        presence: &'a PresenceMatrix,
        cooccurrence: &'a CooccurrenceMatrix,
    ) -> Result<Self> {
        if presence.n_terms() != vocabulary.len() || cooccurrence.n_terms() != vocabulary.len() {
            return Err(Error::InvalidParameter(
                "presence, cooccurrence, and vocabulary sizes disagree".into(),
            ));
        }
        if presence.unit_count() != cooccurrence.unit_count() {
            return Err(Error::InvalidParameter(
                "presence and cooccurrence unit counts disagree".into(),
            ));
        }
        if presence.unit_count() == 0 {
            return Err(Error::InvalidParameter("no observation units".into()));
        }
        Ok(Self {
            vocabulary,
            presence,
            cooccurrence,
        })
    }

    fn pair(&self, a: TermId, b: TermId) -> PairStats {
        PairStats {
            d: self.presence.unit_count() as u64,
            n_a: self.presence.unit_freq(a) as u64,
            n_b: self.presence.unit_freq(b) as u64,
            n_ab: self.cooccurrence.count(a, b) as u64,
        }
    }

    /// Distribution over cooccurring neighbors weighted by shared-unit
    /// counts.
    pub fn cooccurrence_distribution(&self, t: TermId) -> Distribution {
        Distribution::from_weights(
            t,
            self.cooccurrence
                .row(t)
                .iter()
                .map(|&(s, c)| (s, c as f64)),
        )
    }

    /// Distribution over neighbors with strictly positive presence
    /// covariance, weighted by covariance. Non-cooccurring pairs always
    /// have negative covariance, so only the sparse row is scanned.
    pub fn covariance_distribution(&self, t: TermId) -> Distribution {
        let weights: Vec<(TermId, f64)> = self
            .cooccurrence
            .row(t)
            .iter()
            .filter_map(|&(s, _)| {
                let stats = self.pair(t, s);
                if stats.has_positive_covariance() {
                    Some((s, stats.covariance_numerator() as f64))
                } else {
                    None
                }
            })
            .collect();
        Distribution::from_weights(t, weights)
    }

    /// Distribution over neighbors weighted by pairwise mutual
    /// information.
    pub fn mi_distribution(&self, t: TermId, scope: MiScope) -> Distribution {
        match scope {
            MiScope::Cooccurring => Distribution::from_weights(
                t,
                self.cooccurrence
                    .row(t)
                    .iter()
                    .map(|&(s, _)| (s, self.pair(t, s).mutual_information_bits())),
            ),
            MiScope::All => {
                let d = self.presence.unit_count() as u64;
                let n_t = self.presence.unit_freq(t) as u64;
                // For a non-cooccurring neighbor the pair stats are
                // (d, n_t, n_s, 0): MI depends only on n_s, so one
                // evaluation per distinct frequency covers them all.
                let mut absent_mi: HashMap<u32, f64> = HashMap::new();
                let weights: Vec<(TermId, f64)> = self
                    .vocabulary
                    .ids()
                    .filter(|&s| s != t)
                    .map(|s| {
                        let n_ab = self.cooccurrence.count(t, s);
                        let mi = if n_ab > 0 {
                            self.pair(t, s).mutual_information_bits()
                        } else {
                            let n_s = self.presence.unit_freq(s);
                            *absent_mi.entry(n_s).or_insert_with(|| {
                                PairStats {
                                    d,
                                    n_a: n_t,
                                    n_b: n_s as u64,
                                    n_ab: 0,
                                }
                                .mutual_information_bits()
                            })
                        };
                        (s, mi)
                    })
                    .collect();
                Distribution::from_weights(t, weights)
            }
        }
    }

    pub fn cooccurrence_entropy(&self, t: TermId) -> Option<f64> {
        self.cooccurrence_distribution(t).entropy_bits()
    }

    pub fn covariance_entropy(&self, t: TermId) -> Option<f64> {
        self.covariance_distribution(t).entropy_bits()
    }

    pub fn mi_entropy(&self, t: TermId, scope: MiScope) -> Option<f64> {
        self.mi_distribution(t, scope).entropy_bits()
    }

    /// TF-IDF baseline: total occurrence count times `log2(D / n_t)`.
    pub fn tfidf(&self, t: TermId) -> Option<f64> {
        let n_t = self.presence.unit_freq(t);
        if n_t == 0 {
            return None;
        }
        let d = self.presence.unit_count() as f64;
        Some(self.vocabulary.corpus_freq(t) as f64 * (d / n_t as f64).log2())
    }

    /// Scores every term under one method. Terms are scored independently
    /// in parallel; output order is term-id order.
    pub fn score_table(&self, method: Method, mi_scope: MiScope) -> ScoreTable
    where
        Self: Sync,
    {
        let scores: Vec<Option<f64>> = (0..self.vocabulary.len() as u32)
            .into_par_iter()
            .map(|i| {
                let t = TermId(i);
                match method {
                    Method::CooccEntropy => self.cooccurrence_entropy(t),
                    Method::CovEntropy => self.covariance_entropy(t),
                    Method::MiEntropy => self.mi_entropy(t, mi_scope),
                    Method::TfIdf => self.tfidf(t),
                }
            })
            .collect();
        ScoreTable { method, scores }
    }
}
