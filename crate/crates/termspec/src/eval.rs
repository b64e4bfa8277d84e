//! Ranking and evaluation: turning score tables into ranked lists,
//! comparing rankings against golden labels, and fitting/cross-validating
//! a one-dimensional threshold classifier on specificity scores.

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{TermId, Vocabulary};
use crate::error::{Error, Result};
use crate::estimators::{Direction, Method, ScoreTable};

/// A full ordering of the vocabulary under one method. Rank 1 is the most
/// specific term. Terms with undefined scores sort after every scored term
/// (in term-string order), so every term holds exactly one rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedList {
    pub method: Method,
    order: Vec<TermId>,
    rank_of: Vec<u32>,
    defined: usize,
}

impl RankedList {
    /// Terms from rank 1 to rank N.
    pub fn order(&self) -> &[TermId] {
        &self.order
    }

    /// 1-based rank of a term.
    pub fn rank(&self, t: TermId) -> u32 {
        self.rank_of[t.index()]
    }

    /// Number of terms with a defined score; these occupy ranks
    /// `1..=defined_count`.
    pub fn defined_count(&self) -> usize {
        self.defined
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// Ranks all terms under the table's method. Score ties and undefined
/// scores break by term string, so the ordering is total and reproducible.
pub fn rank_terms(table: &ScoreTable, vocabulary: &Vocabulary) -> RankedList {
    assert_eq!(
        table.len(),
        vocabulary.len(),
        "score table and vocabulary sizes disagree"
    );
    let direction = table.method.direction();
    let mut order: Vec<TermId> = vocabulary.ids().collect();
    order.sort_by(|&x, &y| {
        match (table.score(x), table.score(y)) {
            (Some(sx), Some(sy)) => {
                let by_score = match direction {
                    Direction::AscendingSpecific => sx.partial_cmp(&sy),
                    Direction::DescendingSpecific => sy.partial_cmp(&sx),
                }
                .expect("scores are never NaN");
                by_score.then_with(|| vocabulary.term(x).cmp(vocabulary.term(y)))
            }
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => vocabulary.term(x).cmp(vocabulary.term(y)),
        }
    });
    let mut rank_of = vec![0u32; order.len()];
    for (i, &t) in order.iter().enumerate() {
        rank_of[t.index()] = (i + 1) as u32;
    }
    let defined = table.scores.iter().filter(|s| s.is_some()).count();
    RankedList {
        method: table.method,
        order,
        rank_of,
        defined,
    }
}

/// Serializes a ranked score table as TSV: `term`, `method`, `score`,
/// `rank`, one row per term in rank order. Undefined scores are written as
/// `NaN` (they still carry trailing ranks).
pub fn score_table_tsv(table: &ScoreTable, ranked: &RankedList, vocabulary: &Vocabulary) -> String {
    let mut out = String::from("term\tmethod\tscore\trank\n");
    for (i, &t) in ranked.order().iter().enumerate() {
        let score = match table.score(t) {
            Some(s) => format_score(s),
            None => "NaN".to_string(),
        };
        out.push_str(vocabulary.term(t));
        out.push('\t');
        out.push_str(table.method.as_str());
        out.push('\t');
        out.push_str(&score);
        out.push('\t');
        out.push_str(&(i + 1).to_string());
        out.push('\n');
    }
    out
}

/// Shortest-round-trip decimal form; reparsing yields the identical f64.
pub fn format_score(s: f64) -> String {
    format!("{s}")
}

/// Binary golden labels for a set of terms, in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenLabels {
    terms: Vec<String>,
    labels: std::collections::HashMap<String, bool>,
}

impl GoldenLabels {
    /// Reads a TSV of `term<TAB>label` rows, label `1` (specific) or `0`.
    /// Blank lines are skipped; duplicate terms are an error.
    pub fn from_file(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let content = String::from_utf8(bytes).map_err(|_| Error::InvalidUtf8 {
            path: path.to_path_buf(),
        })?;
        let mut terms = Vec::new();
        let mut labels = std::collections::HashMap::new();
        for (idx, line) in content.lines().enumerate() {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let malformed = |reason: &str| Error::MalformedGold {
                path: path.to_path_buf(),
                line: lineno,
                reason: reason.to_string(),
            };
            let (term, label) = line
                .split_once('\t')
                .ok_or_else(|| malformed("expected term<TAB>label"))?;
            if term.is_empty() {
                return Err(malformed("empty term"));
            }
            let label = match label.trim() {
                "0" => false,
                "1" => true,
                _ => return Err(malformed("label must be 0 or 1")),
            };
            if labels.insert(term.to_string(), label).is_some() {
                return Err(malformed("duplicate term"));
            }
            terms.push(term.to_string());
        }
        if terms.is_empty() {
            return Err(Error::MalformedGold {
                path: path.to_path_buf(),
                line: 0,
                reason: "no labels".to_string(),
            });
        }
        Ok(Self { terms, labels })
    }

    pub fn from_pairs(pairs: Vec<(String, bool)>) -> Result<Self> {
        let mut terms = Vec::new();
        let mut labels = std::collections::HashMap::new();
        for (term, label) in pairs {
            if labels.insert(term.clone(), label).is_some() {
                return Err(Error::InvalidParameter(format!(
                    "duplicate golden term {term:?}"
                )));
            }
            terms.push(term);
        }
        Ok(Self { terms, labels })
    }

    pub fn get(&self, term: &str) -> Option<bool> {
        self.labels.get(term).copied()
    }

    /// Labeled terms in file order.
    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Fraction of the top `n` ranked terms whose golden label is specific.
/// Every term in the top `n` must be labeled; an unlabeled one is an
/// error, not a zero.
pub fn precision_at_n(
    ranked: &RankedList,
    vocabulary: &Vocabulary,
    gold: &GoldenLabels,
    n: usize,
) -> Result<f64> {
    if n == 0 || n > ranked.len() {
        return Err(Error::RankCutoffOutOfRange {
            n,
            max: ranked.len(),
        });
    }
    let mut hits = 0usize;
    for &t in &ranked.order()[..n] {
        let term = vocabulary.term(t);
        match gold.get(term) {
            Some(true) => hits += 1,
            Some(false) => {}
            None => {
                return Err(Error::UnlabeledTerm {
                    term: term.to_string(),
                })
            }
        }
    }
    Ok(hits as f64 / n as f64)
}

/// One row of a rank-shift table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftRow {
    pub term: String,
    /// `rank_under_a - rank_under_b`: positive means the term ranks better
    /// (closer to 1) under method `b`.
    pub shift: i64,
    pub label: Option<bool>,
}

/// Per-term rank movement between two rankings of the same vocabulary,
/// sorted by descending shift (term string breaks ties). `top_k` keeps
/// only the first rows; unlabeled terms are kept and marked.
pub fn rank_shift(
    ranked_a: &RankedList,
    ranked_b: &RankedList,
    vocabulary: &Vocabulary,
    gold: &GoldenLabels,
    top_k: Option<usize>,
) -> Result<Vec<ShiftRow>> {
    if ranked_a.len() != ranked_b.len() || ranked_a.len() != vocabulary.len() {
        return Err(Error::MismatchedTermSets);
    }
    let mut rows: Vec<ShiftRow> = vocabulary
        .ids()
        .map(|t| ShiftRow {
            term: vocabulary.term(t).to_string(),
            shift: ranked_a.rank(t) as i64 - ranked_b.rank(t) as i64,
            label: gold.get(vocabulary.term(t)),
        })
        .collect();
    rows.sort_by(|x, y| y.shift.cmp(&x.shift).then_with(|| x.term.cmp(&y.term)));
    if let Some(k) = top_k {
        rows.truncate(k);
    }
    Ok(rows)
}

/// Serializes shift rows as TSV with a sign-convention comment. The label
/// column shows `1`/`0`, or `?` for unlabeled terms.
pub fn shift_table_tsv(rows: &[ShiftRow], method_a: Method, method_b: Method) -> String {
    let mut out = format!(
        "# rank shift {a} -> {b}: positive = ranked better (closer to 1) under {b}\n\
         term\tincrease_under_{b}\tgolden\n",
        a = method_a.as_str(),
        b = method_b.as_str(),
    );
    for row in rows {
        let label = match row.label {
            Some(true) => "1",
            Some(false) => "0",
            None => "?",
        };
        out.push_str(&format!("{}\t{}\t{}\n", row.term, row.shift, label));
    }
    out
}

/// A one-dimensional threshold classifier: predicts the positive class on
/// one side of a cut point.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdModel {
    pub threshold: f64,
    /// Predict positive when the score is strictly above the threshold
    /// (below, when false).
    pub positive_above: bool,
    pub train_accuracy: f64,
    /// Distance from the threshold to the nearest training score.
    pub margin: f64,
}

impl ThresholdModel {
    pub fn predict(&self, score: f64) -> bool {
        if self.positive_above {
            score > self.threshold
        } else {
            score < self.threshold
        }
    }
}

/// Fits the maximum-margin threshold: the candidate cut maximizing
/// training accuracy, then margin. Candidates are the midpoints between
/// consecutive distinct scores plus one point below the minimum and one
/// above the maximum (the two constant classifiers), so the threshold is
/// always finite. Remaining ties prefer the smaller threshold, then
/// positive-above.
pub fn fit_threshold(scores: &[f64], labels: &[bool]) -> Result<ThresholdModel> {
    if scores.len() != labels.len() {
        return Err(Error::InvalidParameter(
            "scores and labels lengths disagree".into(),
        ));
    }
    if scores.is_empty() {
        return Err(Error::InvalidParameter("no training examples".into()));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::InvalidParameter(
            "non-finite score in training data".into(),
        ));
    }
    let positives = labels.iter().filter(|&&l| l).count();
    if positives == 0 || positives == labels.len() {
        return Err(Error::SingleClass);
    }
    let mut distinct = scores.to_vec();
    distinct.sort_by(|a, b| a.partial_cmp(b).expect("finite scores"));
    distinct.dedup();
    let mut candidates = Vec::with_capacity(distinct.len() + 1);
    candidates.push(distinct[0] - 1.0);
    for pair in distinct.windows(2) {
        candidates.push(pair[0] / 2.0 + pair[1] / 2.0);
    }
    candidates.push(distinct[distinct.len() - 1] + 1.0);

    let mut best: Option<ThresholdModel> = None;
    for &threshold in &candidates {
        for positive_above in [true, false] {
            let correct = scores
                .iter()
                .zip(labels)
                .filter(|&(&s, &l)| {
                    let predicted = if positive_above {
                        s > threshold
                    } else {
                        s < threshold
                    };
                    predicted == l
                })
                .count();
            let candidate = ThresholdModel {
                threshold,
                positive_above,
                train_accuracy: correct as f64 / scores.len() as f64,
                margin: scores
                    .iter()
                    .map(|s| (s - threshold).abs())
                    .fold(f64::INFINITY, f64::min),
            };
            if is_better(&candidate, best.as_ref()) {
                best = Some(candidate);
            }
        }
    }
    Ok(best.expect("candidate set is non-empty"))
}

fn is_better(new: &ThresholdModel, current: Option<&ThresholdModel>) -> bool {
    let Some(cur) = current else {
        return true;
    };
    if new.train_accuracy != cur.train_accuracy {
        return new.train_accuracy > cur.train_accuracy;
    }
    if new.margin != cur.margin {
        return new.margin > cur.margin;
    }
    if new.threshold != cur.threshold {
        return new.threshold < cur.threshold;
    }
    new.positive_above && !cur.positive_above
}

/// Result of one cross-validation fold. A fold whose training split holds
/// a single class cannot be fit; that is recorded, not fatal.
#[derive(Debug, Clone, PartialEq)]
pub enum FoldOutcome {
    Evaluated {
        model: ThresholdModel,
        accuracy: f64,
        test_size: usize,
    },
    TrainingSingleClass {
        test_size: usize,
    },
}

impl FoldOutcome {
    pub fn test_size(&self) -> usize {
        match *self {
            FoldOutcome::Evaluated { test_size, .. } => test_size,
            FoldOutcome::TrainingSingleClass { test_size } => test_size,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossValidationReport {
    pub k: usize,
    pub seed: u64,
    pub folds: Vec<FoldOutcome>,
    /// Mean test accuracy over evaluated folds; `None` if no fold could be
    /// evaluated.
    pub mean_accuracy: Option<f64>,
    /// Sample standard deviation over evaluated folds; needs at least two.
    pub accuracy_stddev: Option<f64>,
}

impl CrossValidationReport {
    pub fn evaluated_folds(&self) -> usize {
        self.folds
            .iter()
            .filter(|f| matches!(f, FoldOutcome::Evaluated { .. }))
            .count()
    }
}

/// Seeded k-fold cross-validation of the threshold classifier. Examples
/// are shuffled once with a ChaCha8 stream seeded from `seed`, then dealt
/// round-robin into `k` folds, so the partition depends only on the seed
/// and the example order.
pub fn cross_validate(
    scores: &[f64],
    labels: &[bool],
    k: usize,
    seed: u64,
) -> Result<CrossValidationReport> {
    if scores.len() != labels.len() {
        return Err(Error::InvalidParameter(
            "scores and labels lengths disagree".into(),
        ));
    }
    let n = scores.len();
    if k < 2 || k > n {
        return Err(Error::InvalidFolds { k, examples: n });
    }
    let positives = labels.iter().filter(|&&l| l).count();
    if positives == 0 || positives == n {
        return Err(Error::SingleClass);
    }
    let mut indices: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    indices.shuffle(&mut rng);

    let mut folds = Vec::with_capacity(k);
    let mut accuracies = Vec::with_capacity(k);
    for fold in 0..k {
        let mut train_scores = Vec::with_capacity(n);
        let mut train_labels = Vec::with_capacity(n);
        let mut test = Vec::new();
        for (position, &example) in indices.iter().enumerate() {
            if position % k == fold {
                test.push(example);
            } else {
                train_scores.push(scores[example]);
                train_labels.push(labels[example]);
            }
        }
        match fit_threshold(&train_scores, &train_labels) {
            Ok(model) => {
                let correct = test
                    .iter()
                    .filter(|&&i| model.predict(scores[i]) == labels[i])
                    .count();
                let accuracy = correct as f64 / test.len() as f64;
                accuracies.push(accuracy);
                folds.push(FoldOutcome::Evaluated {
                    model,
                    accuracy,
                    test_size: test.len(),
                });
            }
            Err(Error::SingleClass) => folds.push(FoldOutcome::TrainingSingleClass {
                test_size: test.len(),
            }),
            Err(e) => return Err(e),
        }
    }
    let mean_accuracy = if accuracies.is_empty() {
        None
    } else {
        Some(accuracies.iter().sum::<f64>() / accuracies.len() as f64)
    };
    let accuracy_stddev = mean_accuracy.filter(|_| accuracies.len() >= 2).map(|mean| {
        let var = accuracies.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>()
            / (accuracies.len() - 1) as f64;
        var.sqrt()
    });
    Ok(CrossValidationReport {
        k,
        seed,
        folds,
        mean_accuracy,
        accuracy_stddev,
    })
}
