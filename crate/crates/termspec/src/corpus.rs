//! Corpus ingestion: loading documents, tokenizing, recognizing multi-word
//! terms from a phrase lexicon, and partitioning the text into observation
//! units.
//!
//! An observation unit (a sentence, paragraph, or whole document) is the
//! granularity at which term presence is counted downstream. Building an
//! [`ObservationSet`] is deterministic: identical input bytes and options
//! produce identical term ids, unit order, and counts.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Dense numeric id of a vocabulary term. Ids are assigned by ascending
/// term string, so they are stable for a given corpus and options.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermId(pub u32);

impl TermId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One input document.
#[derive(Debug, Clone)]
pub struct Document {
    pub id: String,
    pub text: String,
}

/// An ordered set of documents with unique ids, sorted by id.
#[derive(Debug, Clone)]
pub struct DocumentSet {
    docs: Vec<Document>,
}

/// On-disk corpus layout accepted by [`DocumentSet::load`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    /// A directory of UTF-8 `.txt` files, one document per file; the doc id
    /// is the file name without its extension.
    TxtDir,
    /// A JSONL file with one `{"id": ..., "text": ...}` object per line.
    Jsonl,
}

impl DocumentSet {
    /// Loads a corpus from disk. Documents are sorted lexicographically by
    /// id, and duplicate ids are an error.
    pub fn load(path: &Path, format: CorpusFormat) -> Result<Self> {
        let docs = match format {
            CorpusFormat::TxtDir => load_txt_dir(path)?,
            CorpusFormat::Jsonl => load_jsonl(path)?,
        };
        if docs.is_empty() {
            return Err(Error::NoDocuments {
                path: path.to_path_buf(),
            });
        }
        Ok(Self::from_documents(docs)?)
    }

    /// Builds a set from in-memory documents, enforcing unique non-empty ids
    /// and sorting by id.
    pub fn from_documents(mut docs: Vec<Document>) -> Result<Self> {
        for doc in &docs {
            if doc.id.is_empty() {
                return Err(Error::InvalidParameter("empty document id".into()));
            }
        }
        docs.sort_by(|a, b| a.id.cmp(&b.id));
        for pair in docs.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(Error::DuplicateDocId {
                    id: pair[0].id.clone(),
                    line: None,
                });
            }
        }
        Ok(Self { docs })
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Document> {
        self.docs.iter()
    }
}

fn load_txt_dir(path: &Path) -> Result<Vec<Document>> {
    let entries = fs::read_dir(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut docs = Vec::new();
    let mut seen = HashMap::new();
    for entry in entries {
        let entry = entry.map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let file = entry.path();
        if !file.is_file() || file.extension().and_then(|e| e.to_str()) != Some("txt") {
            continue;
        }
        let id = file
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or_default()
            .to_string();
        if id.is_empty() {
            continue;
        }
        if seen.insert(id.clone(), ()).is_some() {
            return Err(Error::DuplicateDocId { id, line: None });
        }
        let bytes = fs::read(&file).map_err(|source| Error::Io {
            path: file.clone(),
            source,
        })?;
        let text = String::from_utf8(bytes).map_err(|_| Error::InvalidUtf8 { path: file.clone() })?;
        docs.push(Document { id, text });
    }
    Ok(docs)
}

fn load_jsonl(path: &Path) -> Result<Vec<Document>> {
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let content = String::from_utf8(bytes).map_err(|_| Error::InvalidUtf8 {
        path: path.to_path_buf(),
    })?;
    let mut docs = Vec::new();
    let mut first_line = HashMap::new();
    for (idx, line) in content.lines().enumerate() {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let (id, text) = parse_jsonl_record(line).map_err(|reason| Error::MalformedJsonl {
            path: path.to_path_buf(),
            line: lineno,
            reason,
        })?;
        if first_line.insert(id.clone(), lineno).is_some() {
            return Err(Error::DuplicateDocId {
                id,
                line: Some(lineno),
            });
        }
        docs.push(Document { id, text });
    }
    Ok(docs)
}

/// Parses one JSONL object with string fields "id" and "text". Extra
/// fields are ignored.
fn parse_jsonl_record(line: &str) -> std::result::Result<(String, String), String> {
    let value: serde_json::Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
    let obj = value.as_object().ok_or("expected a JSON object")?;
    let id = obj
        .get("id")
        .and_then(|v| v.as_str())
        .ok_or("missing string field \"id\"")?;
    if id.is_empty() {
        return Err("empty \"id\"".into());
    }
    let text = obj
        .get("text")
        .and_then(|v| v.as_str())
        .ok_or("missing string field \"text\"")?;
    Ok((id.to_string(), text.to_string()))
}

/// Tokenizer switches. Defaults match the term forms the scoring methods
/// are usually run with: lowercased text with digit runs collapsed to "NUM".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizerOptions {
    pub lowercase: bool,
    /// Replace digit-only tokens with the literal token "NUM".
    pub num_placeholder: bool,
    /// Tokens shorter than this many characters are dropped (applied after
    /// the NUM replacement).
    pub min_token_len: usize,
}

impl Default for TokenizerOptions {
    fn default() -> Self {
        Self {
            lowercase: true,
            num_placeholder: true,
            min_token_len: 1,
        }
    }
}

impl TokenizerOptions {
    pub fn validate(&self) -> Result<()> {
        if self.min_token_len < 1 {
            return Err(Error::InvalidParameter("min_token_len must be >= 1".into()));
        }
        Ok(())
    }
}

/// Splits text into tokens: maximal runs of alphanumeric characters, with
/// the normalizations selected in `opts`.
pub fn tokenize(text: &str, opts: &TokenizerOptions) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for c in text.chars() {
        if c.is_alphanumeric() {
            if opts.lowercase {
                current.extend(c.to_lowercase());
            } else {
                current.push(c);
            }
        } else if !current.is_empty() {
            push_token(&mut tokens, std::mem::take(&mut current), opts);
        }
    }
    if !current.is_empty() {
        push_token(&mut tokens, current, opts);
    }
    tokens
}

fn push_token(tokens: &mut Vec<String>, token: String, opts: &TokenizerOptions) {
    let token = if opts.num_placeholder && token.chars().all(|c| c.is_ascii_digit()) {
        "NUM".to_string()
    } else {
        token
    };
    if token.chars().count() >= opts.min_token_len {
        tokens.push(token);
    }
}

/// A set of multi-word phrases used to merge token runs into single terms.
///
/// Matching is greedy longest-match left-to-right over the token stream;
/// consumed tokens are not reused. An empty lexicon leaves the token
/// sequence unchanged (unigram mode).
#[derive(Debug, Clone, Default)]
pub struct PhraseLexicon {
    /// Phrases keyed by first token; each bucket sorted by descending length
    /// so the greedy matcher can take the first hit.
    by_head: HashMap<String, Vec<Vec<String>>>,
    max_len: usize,
}

impl PhraseLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a lexicon from token sequences. Empty phrases are rejected;
    /// duplicates collapse (the lexicon is a set).
    pub fn from_phrases<I, S>(phrases: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<S>>,
        S: Into<String>,
    {
        let mut lex = Self::new();
        for phrase in phrases {
            let tokens: Vec<String> = phrase.into_iter().map(Into::into).collect();
            lex.insert(tokens)?;
        }
        Ok(lex)
    }

    /// Reads a lexicon file: one phrase per line, tokens separated by
    /// whitespace. Blank lines are skipped.
    pub fn from_file(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let content = String::from_utf8(bytes).map_err(|_| Error::InvalidUtf8 {
            path: path.to_path_buf(),
        })?;
        let mut lex = Self::new();
        for line in content.lines() {
            let tokens: Vec<String> = line.split_whitespace().map(str::to_string).collect();
            if !tokens.is_empty() {
                lex.insert(tokens)?;
            }
        }
        Ok(lex)
    }

    fn insert(&mut self, tokens: Vec<String>) -> Result<()> {
        if tokens.is_empty() || tokens.iter().any(|t| t.is_empty()) {
            return Err(Error::InvalidParameter("empty phrase in lexicon".into()));
        }
        self.max_len = self.max_len.max(tokens.len());
        let bucket = self.by_head.entry(tokens[0].clone()).or_default();
        if !bucket.contains(&tokens) {
            bucket.push(tokens);
            bucket.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.by_head.is_empty()
    }

    pub fn len(&self) -> usize {
        self.by_head.values().map(Vec::len).sum()
    }

    /// Re-tokenizes every phrase with the given options so lexicon entries
    /// live in the same normal form as corpus tokens. Phrases that
    /// normalize to nothing are dropped.
    pub fn normalized(&self, opts: &TokenizerOptions) -> Self {
        let mut lex = Self::new();
        for bucket in self.by_head.values() {
            for phrase in bucket {
                let joined = phrase.join(" ");
                let tokens = tokenize(&joined, opts);
                if !tokens.is_empty() {
                    // Normalized tokens are never empty strings.
                    lex.insert(tokens).expect("normalized phrase is non-empty");
                }
            }
        }
        lex
    }

    /// Longest phrase starting with `tokens[start]` that matches in full,
    /// if any.
    fn longest_match(&self, tokens: &[String], start: usize) -> Option<usize> {
        let bucket = self.by_head.get(&tokens[start])?;
        for phrase in bucket {
            let end = start + phrase.len();
            if end <= tokens.len() && tokens[start..end] == phrase[..] {
                return Some(phrase.len());
            }
        }
        None
    }
}

/// Merges tokens into terms by greedy longest-match against the lexicon.
/// Multi-word matches are emitted as a single term with tokens joined by
/// single spaces.
pub fn segment_terms(tokens: &[String], lexicon: &PhraseLexicon) -> Vec<String> {
    if lexicon.is_empty() {
        return tokens.to_vec();
    }
    let mut terms = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        match lexicon.longest_match(tokens, i) {
            Some(len) if len > 1 => {
                terms.push(tokens[i..i + len].join(" "));
                i += len;
            }
            _ => {
                terms.push(tokens[i].clone());
                i += 1;
            }
        }
    }
    terms
}

/// How the corpus is discretized into observation units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Granularity {
    Sentence,
    Paragraph,
    Document,
}

impl Granularity {
    pub fn as_str(self) -> &'static str {
        match self {
            Granularity::Sentence => "sentence",
            Granularity::Paragraph => "paragraph",
            Granularity::Document => "document",
        }
    }
}

impl std::str::FromStr for Granularity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sentence" => Ok(Granularity::Sentence),
            "paragraph" => Ok(Granularity::Paragraph),
            "document" => Ok(Granularity::Document),
            other => Err(Error::InvalidParameter(format!(
                "unknown granularity {other:?} (expected sentence, paragraph, or document)"
            ))),
        }
    }
}

/// The retained term inventory: term strings, their ids, and per-term
/// frequency counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, TermId>,
    /// Number of units containing the term at least once (n_t).
    unit_freq: Vec<u32>,
    /// Total occurrence count across all units.
    corpus_freq: Vec<u64>,
}

impl Vocabulary {
    pub(crate) fn from_parts(terms: Vec<String>, unit_freq: Vec<u32>, corpus_freq: Vec<u64>) -> Self {
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), TermId(i as u32)))
            .collect();
        Self {
            terms,
            index,
            unit_freq,
            corpus_freq,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn id(&self, term: &str) -> Option<TermId> {
        self.index.get(term).copied()
    }

    pub fn term(&self, id: TermId) -> &str {
        &self.terms[id.index()]
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn unit_freq(&self, id: TermId) -> u32 {
        self.unit_freq[id.index()]
    }

    pub fn corpus_freq(&self, id: TermId) -> u64 {
        self.corpus_freq[id.index()]
    }

    pub fn ids(&self) -> impl Iterator<Item = TermId> {
        (0..self.terms.len() as u32).map(TermId)
    }

    /// Vocabulary term closest to `query` by edit distance, used for
    /// "did you mean" suggestions. Ties break lexicographically.
    pub fn nearest_term(&self, query: &str) -> Option<&str> {
        self.terms
            .iter()
            .map(|t| (edit_distance(query, t), t))
            .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(b.1)))
            .map(|(_, t)| t.as_str())
    }
}

/// Levenshtein distance over characters.
fn edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// The discretized corpus: ordered term-id multisets, one per observation
/// unit, plus the vocabulary they index into.
///
/// Units that end up empty (all their terms below the frequency threshold)
/// are retained so the unit total `D` matches the raw segment count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservationSet {
    pub units: Vec<Vec<TermId>>,
    pub granularity: Granularity,
    pub vocabulary: Vocabulary,
}

impl ObservationSet {
    /// Tokenizes, segments, and thresholds a document set into observation
    /// units.
    ///
    /// The phrase lexicon is normalized through the same tokenizer options
    /// before matching. Terms occurring in fewer than `min_unit_freq` units
    /// are dropped from the vocabulary and from every unit.
    pub fn build(
        docs: &DocumentSet,
        granularity: Granularity,
        opts: &TokenizerOptions,
        lexicon: &PhraseLexicon,
        min_unit_freq: u32,
    ) -> Result<Self> {
        opts.validate()?;
        if min_unit_freq < 1 {
            return Err(Error::InvalidParameter("min_unit_freq must be >= 1".into()));
        }
        let lexicon = lexicon.normalized(opts);
        // Per-document work is independent; merge order is fixed afterward
        // by document order and sorted term strings.
        let per_doc: Vec<Vec<Vec<String>>> = docs
            .docs
            .par_iter()
            .map(|doc| {
                split_units(&doc.text, granularity)
                    .into_iter()
                    .map(|segment| segment_terms(&tokenize(segment, opts), &lexicon))
                    .collect()
            })
            .collect();
        let token_units: Vec<Vec<String>> = per_doc.into_iter().flatten().collect();
        Self::from_token_units(token_units, granularity, min_unit_freq)
    }

    /// Builds an observation set from already-tokenized units. Useful for
    /// callers with their own preprocessing and for synthetic corpora.
    pub fn from_token_units(
        token_units: Vec<Vec<String>>,
        granularity: Granularity,
        min_unit_freq: u32,
    ) -> Result<Self> {
        if min_unit_freq < 1 {
            return Err(Error::InvalidParameter("min_unit_freq must be >= 1".into()));
        }
        let mut unit_freq: HashMap<&str, u32> = HashMap::new();
        let mut corpus_freq: HashMap<&str, u64> = HashMap::new();
        for unit in &token_units {
            let mut seen_in_unit: Vec<&str> = Vec::new();
            for term in unit {
                *corpus_freq.entry(term.as_str()).or_insert(0) += 1;
                if !seen_in_unit.contains(&term.as_str()) {
                    seen_in_unit.push(term.as_str());
                    *unit_freq.entry(term.as_str()).or_insert(0) += 1;
                }
            }
        }
        let mut retained: Vec<&str> = unit_freq
            .iter()
            .filter(|&(_, &f)| f >= min_unit_freq)
            .map(|(&t, _)| t)
            .collect();
        retained.sort_unstable();
        let terms: Vec<String> = retained.iter().map(|t| t.to_string()).collect();
        let uf: Vec<u32> = retained.iter().map(|t| unit_freq[t]).collect();
        let cf: Vec<u64> = retained.iter().map(|t| corpus_freq[t]).collect();
        let vocabulary = Vocabulary::from_parts(terms, uf, cf);
        let units: Vec<Vec<TermId>> = token_units
            .iter()
            .map(|unit| {
                unit.iter()
                    .filter_map(|term| vocabulary.id(term))
                    .collect()
            })
            .collect();
        Ok(Self {
            units,
            granularity,
            vocabulary,
        })
    }

    /// Number of observation units, the `D` of the presence statistics.
    pub fn unit_count(&self) -> usize {
        self.units.len()
    }
}

/// Splits a document into raw unit texts for the given granularity.
///
/// Sentence and paragraph splitting are simple punctuation/blank-line
/// heuristics. Whitespace-only segments are discarded, but a document that
/// produces no segments still contributes one empty unit so document counts
/// stay comparable across granularities.
fn split_units(text: &str, granularity: Granularity) -> Vec<&str> {
    let segments: Vec<&str> = match granularity {
        Granularity::Document => vec![text],
        Granularity::Paragraph => split_paragraphs(text),
        Granularity::Sentence => split_sentences(text),
    };
    let non_blank: Vec<&str> = segments
        .into_iter()
        .filter(|s| !s.trim().is_empty())
        .collect();
    if non_blank.is_empty() {
        vec![""]
    } else {
        non_blank
    }
}

/// Sentence boundary: one of `.?!` followed by whitespace.
fn split_sentences(text: &str) -> Vec<&str> {
    let mut sentences = Vec::new();
    let mut start = 0;
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if matches!(c, '.' | '?' | '!') {
            if let Some(&(next_i, next_c)) = chars.peek() {
                if next_c.is_whitespace() {
                    sentences.push(&text[start..next_i]);
                    start = next_i;
                }
            }
        }
        let _ = i;
    }
    if start < text.len() {
        sentences.push(&text[start..]);
    }
    sentences
}

/// Paragraph boundary: one or more blank (whitespace-only) lines.
fn split_paragraphs(text: &str) -> Vec<&str> {
    let mut paragraphs = Vec::new();
    let mut start = None;
    let mut end = 0;
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        if line.trim().is_empty() {
            if let Some(s) = start.take() {
                paragraphs.push(&text[s..end]);
            }
        } else if start.is_none() {
            start = Some(offset);
        }
        offset += line.len();
        if start.is_some() {
            end = offset;
        }
    }
    if let Some(s) = start {
        paragraphs.push(&text[s..end]);
    }
    paragraphs
}
