//! Corpus statistics for term specificity.
//!
//! A corpus is split into observation units (sentences, paragraphs, or
//! documents) and each term's relations to other terms are summarized as a
//! probability distribution — over cooccurrence counts, positive presence
//! covariances, or pairwise mutual information. The Shannon entropy of
//! that distribution scores how specific the term is: terms that keep
//! narrow, predictable company sit at one end of the scale, diffuse
//! general terms at the other. A TF-IDF baseline, ranking utilities,
//! golden-label metrics, and a cross-validated threshold classifier round
//! out the pipeline, with binary caches so the expensive counting step
//! runs once.
//!
//! ```
//! use termspec::{
//!     CooccurrenceMatrix, Granularity, MiScope, ObservationSet, PresenceMatrix, Scorer,
//! };
//!
//! let units = vec![
//!     vec!["svm".to_string(), "kernel".to_string()],
//!     vec!["svm".to_string(), "kernel".to_string(), "model".to_string()],
//!     vec!["model".to_string(), "data".to_string()],
//! ];
//! let obs = ObservationSet::from_token_units(units, Granularity::Sentence, 1).unwrap();
//! let presence = PresenceMatrix::build(&obs);
//! let cooc = CooccurrenceMatrix::build(&obs);
//! let scorer = Scorer::new(&obs.vocabulary, &presence, &cooc).unwrap();
//! // "data" keeps a single companion ("model"): zero entropy, maximally
//! // specific under the cooccurrence estimator.
//! let data = obs.vocabulary.id("data").unwrap();
//! assert_eq!(scorer.cooccurrence_entropy(data), Some(0.0));
//! let svm = obs.vocabulary.id("svm").unwrap();
//! assert!(scorer.cooccurrence_entropy(svm) > Some(0.9));
//! assert!(scorer.mi_entropy(svm, MiScope::Cooccurring).is_some());
//! ```

pub mod cache;
pub mod cooccur;
pub mod corpus;
pub mod error;
pub mod estimators;
pub mod eval;

pub use cooccur::{CooccurrenceMatrix, Distribution, PresenceMatrix};
pub use corpus::{
    segment_terms, tokenize, CorpusFormat, Document, DocumentSet, Granularity, ObservationSet,
    PhraseLexicon, TermId, TokenizerOptions, Vocabulary,
};
pub use error::{Error, Result};
pub use estimators::{Direction, Method, MiScope, PairStats, ScoreTable, Scorer};
pub use eval::{
    cross_validate, fit_threshold, precision_at_n, rank_shift, rank_terms, score_table_tsv,
    shift_table_tsv, CrossValidationReport, FoldOutcome, GoldenLabels, RankedList, ShiftRow,
    ThresholdModel,
};
