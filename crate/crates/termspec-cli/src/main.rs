//! `termspec`: build a term-specificity index from a corpus, score and
//! rank its vocabulary, and evaluate rankings against golden labels.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error (unreadable or
//! malformed inputs, inconsistent index files, invalid analysis
//! parameters), 3 internal invariant violation.

use std::panic::AssertUnwindSafe;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use termspec::cache;
use termspec::corpus::DocumentSet;
use termspec::error::Error;
use termspec::eval::FoldOutcome;
use termspec::{
    cross_validate, precision_at_n, rank_shift, rank_terms, score_table_tsv, shift_table_tsv,
    CooccurrenceMatrix, CorpusFormat, Granularity, GoldenLabels, Method, MiScope, ObservationSet,
    PhraseLexicon, PresenceMatrix, RankedList, ScoreTable, Scorer, TermId, TokenizerOptions,
};

#[derive(Parser)]
#[command(
    name = "termspec",
    version,
    about = "Term specificity from corpus statistics: entropy-based scores, ranking, and evaluation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tokenize a corpus into observation units and cache the presence and
    /// cooccurrence statistics.
    Build(BuildArgs),
    /// Score the vocabulary under one or more methods and write ranked
    /// score tables.
    Score(ScoreArgs),
    /// Print the most specific terms under one method.
    Rank(RankArgs),
    /// Print one term's relation histogram (neighbors, counts, weights).
    Hist(HistArgs),
    /// Compare two methods' rankings term by term against golden labels.
    Shift(ShiftArgs),
    /// Precision at a rank cutoff against golden labels.
    Eval(EvalArgs),
    /// Cross-validate a score threshold classifier on golden labels.
    Xval(XvalArgs),
}

#[derive(Args)]
struct BuildArgs {
    /// Corpus location: a directory of .txt files, or a JSONL file with
    /// {"id", "text"} records.
    #[arg(long)]
    corpus: PathBuf,
    /// Corpus layout.
    #[arg(long, default_value = "txt-dir", value_parser = parse_format)]
    format: CorpusFormat,
    /// Observation unit: sentence, paragraph, or document.
    #[arg(long, default_value = "sentence", value_parser = parse_granularity)]
    granularity: Granularity,
    /// Multi-word term lexicon: one phrase per line, tokens separated by
    /// whitespace.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Drop terms that appear in fewer than this many units.
    #[arg(long, default_value_t = 2)]
    min_unit_freq: u32,
    /// Keep original letter case.
    #[arg(long)]
    no_lowercase: bool,
    /// Keep digit-only tokens instead of collapsing them to "NUM".
    #[arg(long)]
    keep_numbers: bool,
    /// Drop tokens shorter than this many characters.
    #[arg(long, default_value_t = 1)]
    min_token_len: usize,
    /// Index directory to create or overwrite.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ScoreArgs {
    /// Index directory produced by `build`.
    #[arg(long)]
    index: PathBuf,
    /// Methods to score: any of coocc_entropy, cov_entropy, mi_entropy,
    /// tfidf, or "all".
    #[arg(long, value_delimiter = ',', default_value = "all", value_parser = parse_method_selector)]
    methods: Vec<MethodSelector>,
    /// Neighbor scope for mi_entropy.
    #[arg(long, default_value = "cooccurring", value_parser = parse_mi_scope)]
    mi_scope: MiScope,
    /// Output directory for score tables (default: the index directory).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RankArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long, value_parser = parse_method)]
    method: Method,
    /// Neighbor scope for mi_entropy.
    #[arg(long, default_value = "cooccurring", value_parser = parse_mi_scope)]
    mi_scope: MiScope,
    /// Number of rows to print.
    #[arg(long, default_value_t = 20)]
    top_n: usize,
}

#[derive(Args)]
struct HistArgs {
    #[arg(long)]
    index: PathBuf,
    /// Vocabulary term (multi-word terms keep their internal spaces).
    #[arg(long)]
    term: String,
    /// Relation to histogram: coocc, cov, or mi.
    #[arg(long, default_value = "coocc", value_parser = parse_relation)]
    relation: Relation,
    /// Neighbor scope for the mi relation.
    #[arg(long, default_value = "cooccurring", value_parser = parse_mi_scope)]
    mi_scope: MiScope,
    /// Also write hist_<term>_<relation>.tsv into this directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ShiftArgs {
    #[arg(long)]
    index: PathBuf,
    /// Baseline method (its ranks are the starting point).
    #[arg(long, value_parser = parse_method)]
    method_a: Method,
    /// Comparison method (positive shift = better rank here).
    #[arg(long, value_parser = parse_method)]
    method_b: Method,
    /// Golden labels TSV: term<TAB>0|1.
    #[arg(long)]
    gold: PathBuf,
    /// Keep only the rows with the largest shifts.
    #[arg(long)]
    top_n: Option<usize>,
    #[arg(long, default_value = "cooccurring", value_parser = parse_mi_scope)]
    mi_scope: MiScope,
    /// Also write shift_<a>_vs_<b>.tsv into this directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long, value_parser = parse_method)]
    method: Method,
    /// Golden labels TSV: term<TAB>0|1.
    #[arg(long)]
    gold: PathBuf,
    /// Rank cutoff for precision.
    #[arg(long)]
    at: usize,
    #[arg(long, default_value = "cooccurring", value_parser = parse_mi_scope)]
    mi_scope: MiScope,
}

#[derive(Args)]
struct XvalArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long, value_parser = parse_method)]
    method: Method,
    /// Golden labels TSV: term<TAB>0|1.
    #[arg(long)]
    gold: PathBuf,
    /// Number of folds.
    #[arg(long, default_value_t = 30)]
    folds: usize,
    /// Shuffle seed; the fold split is a pure function of it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "cooccurring", value_parser = parse_mi_scope)]
    mi_scope: MiScope,
    /// Also write xval_<method>.tsv (per-fold results) into this directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Relation {
    Coocc,
    Cov,
    Mi,
}

impl Relation {
    fn as_str(self) -> &'static str {
        match self {
            Relation::Coocc => "coocc",
            Relation::Cov => "cov",
            Relation::Mi => "mi",
        }
    }
}

#[derive(Clone, Copy)]
enum MethodSelector {
    All,
    One(Method),
}

fn parse_format(s: &str) -> Result<CorpusFormat, String> {
    match s {
        "txt-dir" => Ok(CorpusFormat::TxtDir),
        "jsonl" => Ok(CorpusFormat::Jsonl),
        _ => Err("expected txt-dir or jsonl".to_string()),
    }
}

fn parse_granularity(s: &str) -> Result<Granularity, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mi_scope(s: &str) -> Result<MiScope, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_method_selector(s: &str) -> Result<MethodSelector, String> {
    if s.is_empty() {
        Err("no methods requested".to_string())
    } else if s == "all" {
        Ok(MethodSelector::All)
    } else {
        parse_method(s).map(MethodSelector::One)
    }
}

fn parse_relation(s: &str) -> Result<Relation, String> {
    match s {
        "coocc" => Ok(Relation::Coocc),
        "cov" => Ok(Relation::Cov),
        "mi" => Ok(Relation::Mi),
        _ => Err("expected coocc, cov, or mi".to_string()),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match std::panic::catch_unwind(AssertUnwindSafe(|| run(cli))) {
        Ok(Ok(())) => {}
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
        Err(_) => {
            // The panic payload and location were already printed by the
            // default hook.
            eprintln!("internal error: invariant violated; the index may be inconsistent or this is a bug");
            std::process::exit(3);
        }
    }
}

fn run(cli: Cli) -> termspec::Result<()> {
    match cli.command {
        Command::Build(args) => cmd_build(args),
        Command::Score(args) => cmd_score(args),
        Command::Rank(args) => cmd_rank(args),
        Command::Hist(args) => cmd_hist(args),
        Command::Shift(args) => cmd_shift(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Xval(args) => cmd_xval(args),
    }
}

/// Parameter echo written next to the caches; rebuilding with the same
/// configuration reproduces the index byte for byte.
#[derive(Serialize)]
struct BuildConfig {
    corpus: String,
    format: &'static str,
    granularity: &'static str,
    lexicon: Option<String>,
    min_unit_freq: u32,
    lowercase: bool,
    num_placeholder: bool,
    min_token_len: usize,
    units: usize,
    terms: usize,
    cooccurring_pairs: usize,
}

fn cmd_build(args: BuildArgs) -> termspec::Result<()> {
    let opts = TokenizerOptions {
        lowercase: !args.no_lowercase,
        num_placeholder: !args.keep_numbers,
        min_token_len: args.min_token_len,
    };
    let lexicon = match &args.lexicon {
        Some(path) => PhraseLexicon::from_file(path)?,
        None => PhraseLexicon::new(),
    };
    let docs = DocumentSet::load(&args.corpus, args.format)?;
    let obs = ObservationSet::build(&docs, args.granularity, &opts, &lexicon, args.min_unit_freq)?;
    let cooc = CooccurrenceMatrix::build(&obs);
    let pairs = cooc.triples().count();

    // Everything is computed; only now touch the output directory.
    std::fs::create_dir_all(&args.out).map_err(|source| Error::Io {
        path: args.out.clone(),
        source,
    })?;
    cache::write_observations(&args.out.join("observations.bin"), &obs)?;
    cache::write_cooccurrence(&args.out.join("cooccurrence.bin"), &cooc)?;

    let stats = format!(
        "metric\tvalue\nunits\t{}\nterms\t{}\ncooccurring_pairs\t{}\ngranularity\t{}\n",
        obs.unit_count(),
        obs.vocabulary.len(),
        pairs,
        obs.granularity.as_str(),
    );
    cache::write_atomic(&args.out.join("stats.tsv"), stats.as_bytes())?;

    let config = BuildConfig {
        corpus: args.corpus.display().to_string(),
        format: match args.format {
            CorpusFormat::TxtDir => "txt-dir",
            CorpusFormat::Jsonl => "jsonl",
        },
        granularity: args.granularity.as_str(),
        lexicon: args.lexicon.as_ref().map(|p| p.display().to_string()),
        min_unit_freq: args.min_unit_freq,
        lowercase: opts.lowercase,
        num_placeholder: opts.num_placeholder,
        min_token_len: opts.min_token_len,
        units: obs.unit_count(),
        terms: obs.vocabulary.len(),
        cooccurring_pairs: pairs,
    };
    let mut config_json =
        serde_json::to_string_pretty(&config).expect("config serialization cannot fail");
    config_json.push('\n');
    cache::write_atomic(&args.out.join("config.json"), config_json.as_bytes())?;

    println!(
        "built index {}: {} units, {} terms, {} cooccurring pairs",
        args.out.display(),
        obs.unit_count(),
        obs.vocabulary.len(),
        pairs
    );
    Ok(())
}

/// An index loaded back from disk, with the files cross-checked against
/// each other.
struct Index {
    obs: ObservationSet,
    presence: PresenceMatrix,
    cooc: CooccurrenceMatrix,
}

impl Index {
    fn load(dir: &Path) -> termspec::Result<Self> {
        let obs = cache::read_observations(&dir.join("observations.bin"))?;
        let cooc_path = dir.join("cooccurrence.bin");
        let cooc = cache::read_cooccurrence(&cooc_path)?;
        let presence = PresenceMatrix::build(&obs);
        let mismatch = |reason: String| Error::CacheFormat {
            path: cooc_path.clone(),
            reason,
        };
        if cooc.n_terms() != obs.vocabulary.len() {
            return Err(mismatch(format!(
                "term count {} does not match the observation cache ({})",
                cooc.n_terms(),
                obs.vocabulary.len()
            )));
        }
        if cooc.unit_count() != obs.unit_count() {
            return Err(mismatch(format!(
                "unit count {} does not match the observation cache ({})",
                cooc.unit_count(),
                obs.unit_count()
            )));
        }
        for (a, b, c) in cooc.triples() {
            let bound = presence
                .unit_freq(TermId(a))
                .min(presence.unit_freq(TermId(b)));
            if c > bound {
                return Err(mismatch(format!(
                    "pair ({a}, {b}) count {c} exceeds unit frequency {bound}"
                )));
            }
        }
        Ok(Self {
            obs,
            presence,
            cooc,
        })
    }

    fn scorer(&self) -> termspec::Result<Scorer<'_>> {
        Scorer::new(&self.obs.vocabulary, &self.presence, &self.cooc)
    }

    fn table(&self, method: Method, mi_scope: MiScope) -> termspec::Result<ScoreTable> {
        Ok(self.scorer()?.score_table(method, mi_scope))
    }

    fn ranked(&self, method: Method, mi_scope: MiScope) -> termspec::Result<(ScoreTable, RankedList)> {
        let table = self.table(method, mi_scope)?;
        let ranked = rank_terms(&table, &self.obs.vocabulary);
        Ok((table, ranked))
    }
}

fn resolve_methods(selectors: &[MethodSelector]) -> Vec<Method> {
    if selectors
        .iter()
        .any(|s| matches!(s, MethodSelector::All))
    {
        return Method::ALL.to_vec();
    }
    // Canonical order, duplicates collapsed.
    Method::ALL
        .into_iter()
        .filter(|m| {
            selectors
                .iter()
                .any(|s| matches!(s, MethodSelector::One(x) if x == m))
        })
        .collect()
}

fn cmd_score(args: ScoreArgs) -> termspec::Result<()> {
    let index = Index::load(&args.index)?;
    let methods = resolve_methods(&args.methods);
    let out_dir = args.out.as_deref().unwrap_or(&args.index);
    std::fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    for method in methods {
        let (table, ranked) = index.ranked(method, args.mi_scope)?;
        let tsv = score_table_tsv(&table, &ranked, &index.obs.vocabulary);
        let path = out_dir.join(format!("score_{}.tsv", method.as_str()));
        cache::write_atomic(&path, tsv.as_bytes())?;
        println!(
            "{}: {} terms scored ({} defined), wrote {}",
            method.as_str(),
            ranked.len(),
            ranked.defined_count(),
            path.display()
        );
    }
    Ok(())
}

fn cmd_rank(args: RankArgs) -> termspec::Result<()> {
    let index = Index::load(&args.index)?;
    let (table, ranked) = index.ranked(args.method, args.mi_scope)?;
    let tsv = score_table_tsv(&table, &ranked, &index.obs.vocabulary);
    let keep = args.top_n.min(ranked.len());
    // Header plus the first `keep` rows.
    for line in tsv.lines().take(keep + 1) {
        println!("{line}");
    }
    Ok(())
}

fn sanitize_for_filename(term: &str) -> String {
    term.chars()
        .map(|c| if c.is_alphanumeric() { c } else { '_' })
        .collect()
}

fn cmd_hist(args: HistArgs) -> termspec::Result<()> {
    let index = Index::load(&args.index)?;
    let vocab = &index.obs.vocabulary;
    let t = vocab.id(&args.term).ok_or_else(|| Error::UnknownTerm {
        term: args.term.clone(),
        suggestion: vocab.nearest_term(&args.term).map(str::to_string),
    })?;
    let scorer = index.scorer()?;
    let dist = match args.relation {
        Relation::Coocc => scorer.cooccurrence_distribution(t),
        Relation::Cov => scorer.covariance_distribution(t),
        Relation::Mi => scorer.mi_distribution(t, args.mi_scope),
    };
    let entropy = match dist.entropy_bits() {
        Some(h) => termspec::eval::format_score(h),
        None => "NaN".to_string(),
    };
    let mut rows: Vec<(&str, u32, f64)> = dist
        .entries()
        .iter()
        .map(|&(s, w)| (vocab.term(s), index.cooc.count(t, s), w))
        .collect();
    rows.sort_by(|x, y| y.1.cmp(&x.1).then_with(|| x.0.cmp(y.0)));
    let mut tsv = format!(
        "# term: {}, relation: {}, neighbors: {}, entropy_bits: {}\nneighbor\tcount\tweight\n",
        args.term,
        args.relation.as_str(),
        rows.len(),
        entropy,
    );
    for (neighbor, count, weight) in rows {
        tsv.push_str(&format!(
            "{neighbor}\t{count}\t{}\n",
            termspec::eval::format_score(weight)
        ));
    }
    print!("{tsv}");
    if let Some(out) = &args.out {
        std::fs::create_dir_all(out).map_err(|source| Error::Io {
            path: out.clone(),
            source,
        })?;
        let path = out.join(format!(
            "hist_{}_{}.tsv",
            sanitize_for_filename(&args.term),
            args.relation.as_str()
        ));
        cache::write_atomic(&path, tsv.as_bytes())?;
    }
    Ok(())
}

fn cmd_shift(args: ShiftArgs) -> termspec::Result<()> {
    let index = Index::load(&args.index)?;
    let gold = GoldenLabels::from_file(&args.gold)?;
    let (_, ranked_a) = index.ranked(args.method_a, args.mi_scope)?;
    let (_, ranked_b) = index.ranked(args.method_b, args.mi_scope)?;
    let rows = rank_shift(
        &ranked_a,
        &ranked_b,
        &index.obs.vocabulary,
        &gold,
        args.top_n,
    )?;
    let tsv = shift_table_tsv(&rows, args.method_a, args.method_b);
    print!("{tsv}");
    if let Some(out) = &args.out {
        std::fs::create_dir_all(out).map_err(|source| Error::Io {
            path: out.clone(),
            source,
        })?;
        let path = out.join(format!(
            "shift_{}_vs_{}.tsv",
            args.method_a.as_str(),
            args.method_b.as_str()
        ));
        cache::write_atomic(&path, tsv.as_bytes())?;
    }
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> termspec::Result<()> {
    let index = Index::load(&args.index)?;
    let gold = GoldenLabels::from_file(&args.gold)?;
    let (_, ranked) = index.ranked(args.method, args.mi_scope)?;
    let precision = precision_at_n(&ranked, &index.obs.vocabulary, &gold, args.at)?;
    let hits = (precision * args.at as f64).round() as usize;
    println!(
        "precision@{} under {}: {} ({}/{} specific)",
        args.at,
        args.method.as_str(),
        termspec::eval::format_score(precision),
        hits,
        args.at
    );
    Ok(())
}

fn cmd_xval(args: XvalArgs) -> termspec::Result<()> {
    let index = Index::load(&args.index)?;
    let vocab = &index.obs.vocabulary;
    let gold = GoldenLabels::from_file(&args.gold)?;
    let (table, _) = index.ranked(args.method, args.mi_scope)?;
    let mut scores = Vec::with_capacity(gold.len());
    let mut labels = Vec::with_capacity(gold.len());
    let mut undefined = 0usize;
    for term in gold.terms() {
        let t = vocab.id(term).ok_or_else(|| Error::UnknownTerm {
            term: term.clone(),
            suggestion: vocab.nearest_term(term).map(str::to_string),
        })?;
        match table.score(t) {
            Some(s) => {
                scores.push(s);
                labels.push(gold.get(term).expect("term comes from the gold set"));
            }
            // A term with no defined score cannot sit on either side of a
            // threshold; it is left out and reported.
            None => undefined += 1,
        }
    }
    let report = cross_validate(&scores, &labels, args.folds, args.seed)?;
    println!("method: {}", args.method.as_str());
    println!(
        "examples: {} labeled terms ({} excluded: undefined score)",
        scores.len(),
        undefined
    );
    println!(
        "folds: {} ({} evaluated), seed {}",
        report.k,
        report.evaluated_folds(),
        report.seed
    );
    match report.mean_accuracy {
        Some(mean) => println!("mean accuracy: {}", termspec::eval::format_score(mean)),
        None => println!("mean accuracy: NaN (no fold could be evaluated)"),
    }
    match report.accuracy_stddev {
        Some(sd) => println!("accuracy stddev: {}", termspec::eval::format_score(sd)),
        None => println!("accuracy stddev: NaN"),
    }
    if let Some(out) = &args.out {
        std::fs::create_dir_all(out).map_err(|source| Error::Io {
            path: out.clone(),
            source,
        })?;
        let mut tsv = String::from(
            "fold\toutcome\ttest_size\taccuracy\tthreshold\tpositive_above\ttrain_accuracy\n",
        );
        for (i, fold) in report.folds.iter().enumerate() {
            match fold {
                FoldOutcome::Evaluated {
                    model,
                    accuracy,
                    test_size,
                } => {
                    tsv.push_str(&format!(
                        "{}\tevaluated\t{}\t{}\t{}\t{}\t{}\n",
                        i,
                        test_size,
                        termspec::eval::format_score(*accuracy),
                        termspec::eval::format_score(model.threshold),
                        model.positive_above,
                        termspec::eval::format_score(model.train_accuracy),
                    ));
                }
                FoldOutcome::TrainingSingleClass { test_size } => {
                    tsv.push_str(&format!(
                        "{i}\ttraining_single_class\t{test_size}\tNaN\tNaN\t\tNaN\n"
                    ));
                }
            }
        }
        let path = out.join(format!("xval_{}.tsv", args.method.as_str()));
        cache::write_atomic(&path, tsv.as_bytes())?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
