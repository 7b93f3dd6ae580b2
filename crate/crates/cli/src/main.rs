//! Command-line frontend: train models over labeled corpora, classify
//! documents, evaluate against held-out labels, and mine transaction
//! files directly.
//!
//! Exit codes: 0 success, 1 user or data error, 2 internal invariant
//! violation. Output is byte-deterministic for fixed inputs and flags
//! except `mine --bench` timings.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use ctxcat::{
    evaluate, load_labeled_corpus, load_model, mine, parse_stopword_list, predict, save_model,
    train_model, Algorithm, ClassifyError, ContextModelF64, CorpusError, Document, EvalError,
    Fraction, FrequentItemsetSet, MiningError, MiningParams, ModelError,
    TokenConfig, TrainError, TransactionDatabase,
};

#[derive(Parser)]
#[command(
    name = "ctxcat",
    version,
    about = "Context-aware text categorization via frequent-itemset mining"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a model from a labeled corpus directory
    Train(TrainArgs),
    /// Assign contexts to documents using a trained model
    Classify(ClassifyArgs),
    /// Score a model against a labeled test directory
    Evaluate(EvaluateArgs),
    /// Mine frequent itemsets from a transaction file
    Mine(MineArgs),
}

#[derive(Args)]
struct MiningOpts {
    /// Mining algorithm: apriori, msapriori, rsapriori, or diffset
    #[arg(long, default_value = "apriori")]
    algorithm: Algorithm,
    /// Minimum support as a decimal or n/d fraction
    #[arg(long, default_value = "0.05")]
    min_support: Fraction,
    /// Looser support floor for rare itemsets (rsapriori)
    #[arg(long, default_value = "0.03")]
    rare_min_support: Fraction,
    /// Relative support threshold for rare itemsets (rsapriori)
    #[arg(long, default_value = "0.6")]
    relative_support: Fraction,
    /// Fraction of an item's own support used as its minimum (msapriori)
    #[arg(long, default_value = "0.5")]
    mis_beta: Fraction,
    /// Lower bound on per-item minimum support (msapriori)
    #[arg(long, default_value = "0.03")]
    mis_floor: Fraction,
    /// Drop itemsets larger than this many items
    #[arg(long)]
    max_itemset_size: Option<usize>,
}

impl MiningOpts {
    fn params(&self) -> MiningParams {
        MiningParams {
            algorithm: self.algorithm,
            min_support: self.min_support,
            rare_min_support: self.rare_min_support,
            relative_support: self.relative_support,
            mis_beta: self.mis_beta,
            mis_floor: self.mis_floor,
            max_itemset_size: self.max_itemset_size,
        }
    }
}

#[derive(Args)]
struct TrainArgs {
    /// Corpus root: one subdirectory per context, one file per document
    #[arg(long)]
    corpus: PathBuf,
    /// Where to write the trained model
    #[arg(long)]
    model: PathBuf,
    #[command(flatten)]
    mining: MiningOpts,
    /// Tokens shorter than this many characters are dropped
    #[arg(long, default_value_t = 2)]
    min_token_len: usize,
    /// Stopword file (whitespace-separated terms, `#` comments);
    /// defaults to the built-in English list
    #[arg(long)]
    stopwords: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Trained model file
    #[arg(long)]
    model: PathBuf,
    /// Print the full context ranking instead of only the winner
    #[arg(long)]
    ranking: bool,
    /// Documents to classify
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Trained model file
    #[arg(long)]
    model: PathBuf,
    /// Labeled test directory in corpus layout
    #[arg(long)]
    test: PathBuf,
    /// Also write a tab-delimited report to this file
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MineArgs {
    /// Transaction file: one whitespace-separated itemset per line,
    /// `#` starts a comment
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    mining: MiningOpts,
    /// Time all four algorithms on the input and cross-check
    /// apriori against diffset
    #[arg(long)]
    bench: bool,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Train(#[from] TrainError),
    #[error("model: {0}")]
    Model(#[from] ModelError),
    #[error(transparent)]
    Mining(#[from] MiningError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("{path}:{line}: {msg}")]
    InputLine { path: PathBuf, line: usize, msg: String },
    #[error("benchmark cross-check failed: apriori and diffset disagree")]
    BenchMismatch,
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::BenchMismatch => 2,
            _ => 1,
        }
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Train(args) => cmd_train(&args),
        Command::Classify(args) => cmd_classify(&args),
        Command::Evaluate(args) => cmd_evaluate(&args),
        Command::Mine(args) => cmd_mine(&args),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn cmd_train(args: &TrainArgs) -> Result<(), CliError> {
    let stopwords = match &args.stopwords {
        Some(path) => parse_stopword_list(&read_text(path)?),
        None => TokenConfig::default().stopwords,
    };
    let token = TokenConfig::new(args.min_token_len, stopwords);
    let mut corpus = load_labeled_corpus(&args.corpus)?;
    corpus.preprocess(&token);
    let model = train_model::<f64>(&corpus, &args.mining.params(), &token)?;
    let bytes = save_model(&model)?;

    // temp file + rename so a failure never leaves a partial model
    let dir = args.model.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))
        .map_err(|source| CliError::Io { path: args.model.clone(), source })?;
    tmp.write_all(bytes.as_bytes())
        .map_err(|source| CliError::Io { path: args.model.clone(), source })?;
    tmp.persist(&args.model)
        .map_err(|e| CliError::Io { path: args.model.clone(), source: e.error })?;

    for (context, table) in model.contexts.iter().zip(&model.tables) {
        println!("{context}\t{} features", table.entries.len());
    }
    log::info!("model written to {}", args.model.display());
    Ok(())
}

fn cmd_classify(args: &ClassifyArgs) -> Result<(), CliError> {
    let model: ContextModelF64 = load_model(&read_file(&args.model)?)?;
    let mut out = String::new();
    for input in &args.inputs {
        let text = read_text(input)?;
        let doc = Document::preprocessed(input.display().to_string(), text, &model.token);
        match predict(&doc, &model) {
            Ok(p) => {
                let lines: &[(String, f64)] =
                    if args.ranking { &p.ranking } else { &p.ranking[..1] };
                for (i, (context, score)) in lines.iter().enumerate() {
                    out.push_str(&format!("{}\t{context}\t{score}", input.display()));
                    if i == 0 && p.tied {
                        out.push_str("\ttie");
                    }
                    out.push('\n');
                }
            }
            Err(ClassifyError::NoFeatures) => {
                out.push_str(&format!("{}\tUNCLASSIFIABLE\t0\n", input.display()));
            }
            Err(e) => return Err(e.into()),
        }
    }
    print!("{out}");
    Ok(())
}

fn cmd_evaluate(args: &EvaluateArgs) -> Result<(), CliError> {
    let model: ContextModelF64 = load_model(&read_file(&args.model)?)?;
    let mut test = load_labeled_corpus(&args.test)?;
    test.preprocess(&model.token);
    let report = evaluate(&model, &test)?;
    print!("{}", report.to_text_table());
    if let Some(out) = &args.out {
        write_file(out, &report.to_delimited())?;
    }
    Ok(())
}

fn load_transactions(path: &Path) -> Result<TransactionDatabase, CliError> {
    let bytes = read_file(path)?;
    let mut db = TransactionDatabase::new();
    for (i, raw) in bytes.split(|&b| b == b'\n').enumerate() {
        let line = std::str::from_utf8(raw).map_err(|_| CliError::InputLine {
            path: path.to_path_buf(),
            line: i + 1,
            msg: "invalid utf-8".into(),
        })?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        db.push_sentence(line.split_whitespace());
    }
    Ok(db)
}

fn itemset_lines(fis: &FrequentItemsetSet, db: &TransactionDatabase) -> String {
    let mut rows: Vec<(usize, Vec<&str>, usize)> = fis
        .itemsets()
        .iter()
        .map(|s| {
            let mut terms: Vec<&str> = s.items.iter().map(|&i| db.term(i)).collect();
            terms.sort_unstable();
            (s.items.len(), terms, s.support_count)
        })
        .collect();
    rows.sort();
    let mut out = String::new();
    for (_, terms, count) in rows {
        out.push_str(&format!("{count}\t{}\n", terms.join(" ")));
    }
    out
}

fn cmd_mine(args: &MineArgs) -> Result<(), CliError> {
    let db = load_transactions(&args.input)?;
    let params = args.mining.params();
    if !args.bench {
        let fis = mine(&db, &params)?;
        print!("{}", itemset_lines(&fis, &db));
        return Ok(());
    }

    let mut apriori = None;
    let mut diffset = None;
    for algorithm in Algorithm::ALL {
        let run = MiningParams { algorithm, ..params.clone() };
        let start = Instant::now();
        let fis = mine(&db, &run)?;
        let elapsed = start.elapsed();
        println!(
            "{}\t{} itemsets\t{:.2} ms",
            algorithm,
            fis.len(),
            elapsed.as_secs_f64() * 1e3
        );
        match algorithm {
            Algorithm::Apriori => apriori = Some(fis),
            Algorithm::Diffset => diffset = Some(fis),
            _ => {}
        }
    }
    if apriori == diffset {
        println!("apriori/diffset: EQUAL");
        Ok(())
    } else {
        println!("apriori/diffset: UNEQUAL");
        Err(CliError::BenchMismatch)
    }
}
