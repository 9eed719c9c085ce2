mod format;

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use morphotok::eval::{
    build_eval_set, corpus_stats, count_corpus_threaded, evaluate, format_comparison,
    records_text, root_preservation, stratified_sample, throughput_bench, BpeAdapter,
    CorpusCounts, EvalOptions, ExternAdapter, FertilityReport, MorphoAdapter, StrataSpec,
    TokenizerAdapter,
};
use morphotok::pack::validate_pack;
use morphotok::{
    load_language_pack, train_bpe, BpeModel, LanguagePack, Normalization, Tokenizer,
    TokenizerConfig, UnknownPolicy, VocabBuildConfig, Vocabulary,
};

#[derive(Parser)]
#[command(name = "morphotok", version, about = "Morphological tokenizer toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a language pack and list every violation.
    ValidatePack(PackArg),
    /// Build a three-phase vocabulary from a pack and a corpus.
    BuildVocab(BuildVocabArgs),
    /// Tokenize text line by line.
    Tokenize(TokenizeArgs),
    /// Rebuild text from `tokenize` output.
    Detokenize(IoArgs),
    /// Map text lines to space-separated token ids.
    Encode(EncodeArgs),
    /// Map id lines back to text.
    Decode(EncodeArgs),
    /// Train the BPE baseline on a corpus.
    TrainBpe(TrainBpeArgs),
    /// Corpus frequency statistics.
    Stats(StatsArgs),
    /// Fertility comparison of one or more tokenizers.
    Eval(EvalArgs),
    /// Single-threaded throughput of one or more tokenizers.
    Bench(BenchArgs),
}

#[derive(Args)]
struct PackArg {
    /// Language pack directory.
    #[arg(long, env = "VERCHOL_PACK_DIR")]
    pack: Option<PathBuf>,
}

#[derive(Args)]
struct IoArgs {
    /// Input file; standard input when absent.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct TokenizerArgs {
    #[command(flatten)]
    pack: PackArg,
    #[arg(long)]
    vocab: PathBuf,
    #[arg(long, default_value_t = 6)]
    max_affix_chain: usize,
    /// grapheme_tokens or single_unknown.
    #[arg(long, default_value = "grapheme_tokens")]
    unknown_policy: String,
}

#[derive(Args)]
struct TokenizeArgs {
    #[command(flatten)]
    tok: TokenizerArgs,
    #[command(flatten)]
    io: IoArgs,
    /// Print `surface/T<tier>/<category>` per token.
    #[arg(long)]
    annotate: bool,
}

#[derive(Args)]
struct EncodeArgs {
    #[command(flatten)]
    tok: TokenizerArgs,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct CorpusArgs {
    /// Corpus text file; standard input when absent.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Read `word<TAB>count` lines instead of raw text.
    #[arg(long, conflicts_with = "corpus")]
    counts: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args)]
struct BuildVocabArgs {
    #[command(flatten)]
    pack: PackArg,
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    target_size: usize,
    #[arg(long, default_value_t = 3)]
    min_freq_phase2: u64,
    #[arg(long, default_value_t = 3)]
    min_freq_phase3: u64,
    #[arg(long, default_value_t = 3)]
    max_generated_affixes: usize,
}

#[derive(Args)]
struct TrainBpeArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long)]
    vocab_size: usize,
    #[arg(long)]
    out: PathBuf,
    /// NFC, NFD, NFKC or none.
    #[arg(long, default_value = "NFC")]
    normalization: String,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Comma-separated bands, e.g. `100+,10-99,5-9,3-4,2,1`.
    #[arg(long)]
    strata: Option<String>,
    #[arg(long, default_value = "NFC")]
    normalization: String,
    /// Also report mean grapheme length of the types with at least this frequency.
    #[arg(long)]
    eval_min_freq: Option<u64>,
    /// Write `key<TAB>value` records here.
    #[arg(long)]
    records: Option<PathBuf>,
    /// Write the word counts as `word<TAB>count`.
    #[arg(long)]
    counts_out: Option<PathBuf>,
    /// Write the evaluation set (one word per line).
    #[arg(long, requires = "eval_min_freq")]
    eval_set_out: Option<PathBuf>,
}

#[derive(Args)]
struct WordsArgs {
    /// One word per line.
    #[arg(long)]
    words: Option<PathBuf>,
    /// Build the word list from a corpus instead.
    #[arg(long, conflicts_with = "words")]
    corpus: Option<PathBuf>,
    #[arg(long, conflicts_with_all = ["words", "corpus"])]
    counts: Option<PathBuf>,
    /// Types with at least this frequency (corpus input).
    #[arg(long, default_value_t = 3)]
    min_freq: u64,
    /// Stratified sample of this many types per stratum (corpus input).
    #[arg(long)]
    per_stratum: Option<usize>,
    /// Inclusive rare band, `lo-hi`.
    #[arg(long, default_value = "2-5")]
    rare_band: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "NFC")]
    normalization: String,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    words: WordsArgs,
    /// `morpho`, `morpho:<pack>,<vocab>`, `bpe:<model>` or `extern:<command>`.
    #[arg(long = "tokenizer", required = true)]
    tokenizers: Vec<String>,
    /// Pack for a bare `morpho` spec.
    #[arg(long, env = "VERCHOL_PACK_DIR")]
    pack: Option<PathBuf>,
    /// Vocabulary for a bare `morpho` spec.
    #[arg(long)]
    vocab: Option<PathBuf>,
    /// Weight words by corpus frequency (corpus input only).
    #[arg(long)]
    weighted: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long)]
    records: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    words: WordsArgs,
    #[arg(long = "tokenizer", required = true)]
    tokenizers: Vec<String>,
    #[arg(long, env = "VERCHOL_PACK_DIR")]
    pack: Option<PathBuf>,
    #[arg(long)]
    vocab: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    repetitions: usize,
}

enum Failure {
    Usage(String),
    Data(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Data(e)
    }
}

impl From<morphotok::Error> for Failure {
    fn from(e: morphotok::Error) -> Self {
        Failure::Data(e.into())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Data(e.into())
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            if is_broken_pipe(&e) {
                return ExitCode::SUCCESS;
            }
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<io::Error>()
            .is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
    })
}

fn run(command: Command) -> CliResult {
    match command {
        Command::ValidatePack(a) => validate(a),
        Command::BuildVocab(a) => build_vocab(a),
        Command::Tokenize(a) => tokenize(a),
        Command::Detokenize(a) => detokenize(a),
        Command::Encode(a) => encode(a),
        Command::Decode(a) => decode(a),
        Command::TrainBpe(a) => train(a),
        Command::Stats(a) => stats(a),
        Command::Eval(a) => eval(a),
        Command::Bench(a) => bench(a),
    }
}

fn pack_dir(arg: &PackArg) -> CliResult<&Path> {
    arg.pack
        .as_deref()
        .ok_or_else(|| Failure::Usage("no pack given: use --pack or set VERCHOL_PACK_DIR".into()))
}

fn load_pack(dir: &Path) -> CliResult<LanguagePack> {
    load_language_pack(dir)
        .with_context(|| format!("loading pack {}", dir.display()))
        .map_err(Failure::Data)
}

fn parse_norm(s: &str) -> CliResult<Normalization> {
    s.parse().map_err(Failure::Usage)
}

fn open_input(path: Option<&Path>) -> CliResult<Box<dyn BufRead>> {
    Ok(match path {
        Some(p) => Box::new(BufReader::new(
            File::open(p).with_context(|| format!("opening {}", p.display()))?,
        )),
        None => Box::new(BufReader::new(io::stdin())),
    })
}

fn stdout() -> BufWriter<io::StdoutLock<'static>> {
    BufWriter::new(io::stdout().lock())
}

/// Calls `f` with each line's content and whether a newline followed it.
/// Invalid UTF-8 is reported with its line number.
fn for_each_line(mut input: impl BufRead, mut f: impl FnMut(&str, bool) -> CliResult) -> CliResult {
    let mut buf = Vec::new();
    let mut number = 0usize;
    loop {
        buf.clear();
        if input.read_until(b'\n', &mut buf)? == 0 {
            return Ok(());
        }
        number += 1;
        let newline = buf.last() == Some(&b'\n');
        if newline {
            buf.pop();
        }
        let line = std::str::from_utf8(&buf)
            .map_err(|e| anyhow!("line {number}: invalid UTF-8 at column {}", e.valid_up_to() + 1))?;
        f(line, newline)?;
    }
}

fn load_tokenizer(args: &TokenizerArgs) -> CliResult<Tokenizer> {
    let pack = load_pack(pack_dir(&args.pack)?)?;
    let policy: UnknownPolicy = args.unknown_policy.parse().map_err(Failure::Usage)?;
    let vocab = Vocabulary::load(&args.vocab)?;
    let config = TokenizerConfig {
        max_affix_chain: args.max_affix_chain,
        unknown_policy: policy,
    };
    Ok(Tokenizer::new(pack, vocab, config)?)
}

fn validate(a: PackArg) -> CliResult {
    let dir = pack_dir(&a)?;
    let pack = load_pack(dir)?;
    let report = validate_pack(&pack);
    let mut out = stdout();
    if report.is_empty() {
        writeln!(
            out,
            "ok: {} ({} roots, {} affixes, {} verb chains, {} syllable patterns, {} script entries)",
            pack.language_id,
            pack.roots.len(),
            pack.affixes.len(),
            pack.verb_chains.len(),
            pack.syllable_patterns.len(),
            pack.script.entries().len()
        )?;
        out.flush()?;
        return Ok(());
    }
    write!(out, "{report}")?;
    out.flush()?;
    Err(Failure::Data(anyhow!("{} violations in {}", report.len(), dir.display())))
}

fn read_counts(args: &CorpusArgs, norm: Normalization) -> CliResult<CorpusCounts> {
    if let Some(p) = &args.counts {
        return Ok(CorpusCounts::load_tsv(p)?);
    }
    let input = open_input(args.corpus.as_deref())?;
    let counts = count_corpus_threaded(input, norm, args.threads)?;
    Ok(counts)
}

fn build_vocab(a: BuildVocabArgs) -> CliResult {
    let pack = load_pack(pack_dir(&a.pack)?)?;
    pack.ensure_valid()?;
    let counts = read_counts(&a.corpus, pack.normalization)?;
    let cfg = VocabBuildConfig {
        target_size: a.target_size,
        min_freq_phase2: a.min_freq_phase2,
        min_freq_phase3: a.min_freq_phase3,
        max_generated_affixes: a.max_generated_affixes,
        threads: a.corpus.threads,
    };
    let vocab = morphotok::build_vocabulary(&pack, &counts, &cfg)?;
    vocab.save(&a.out)?;
    let mut err = io::stderr().lock();
    writeln!(err, "wrote {} entries to {}", vocab.len(), a.out.display())?;
    for (prov, n) in vocab.provenance_histogram() {
        writeln!(err, "  {:<18}{n}", prov.as_str())?;
    }
    Ok(())
}

fn tokenize(a: TokenizeArgs) -> CliResult {
    let tok = load_tokenizer(&a.tok)?;
    let mut out = stdout();
    for_each_line(open_input(a.io.input.as_deref())?, |line, newline| {
        let pieces = tok.tokenize_text(line);
        out.write_all(format::format_pieces(&pieces, a.annotate).as_bytes())?;
        if newline {
            out.write_all(b"\n")?;
        }
        Ok(())
    })?;
    out.flush()?;
    Ok(())
}

fn detokenize(a: IoArgs) -> CliResult {
    let mut out = stdout();
    let mut number = 0usize;
    for_each_line(open_input(a.input.as_deref())?, |line, newline| {
        number += 1;
        let text = format::join_line(line)
            .ok_or_else(|| anyhow!("line {number}: bad escape sequence"))?;
        out.write_all(text.as_bytes())?;
        if newline {
            out.write_all(b"\n")?;
        }
        Ok(())
    })?;
    out.flush()?;
    Ok(())
}

fn encode(a: EncodeArgs) -> CliResult {
    let tok = load_tokenizer(&a.tok)?;
    let mut out = stdout();
    let mut unknown = 0usize;
    for_each_line(open_input(a.io.input.as_deref())?, |line, newline| {
        let (ids, unk) = tok.encode_counting(line);
        unknown += unk;
        let text: Vec<String> = ids.iter().map(u32::to_string).collect();
        out.write_all(text.join(" ").as_bytes())?;
        if newline {
            out.write_all(b"\n")?;
        }
        Ok(())
    })?;
    out.flush()?;
    if unknown > 0 {
        eprintln!("warning: {unknown} tokens mapped to <unk>");
    }
    Ok(())
}

fn decode(a: EncodeArgs) -> CliResult {
    let tok = load_tokenizer(&a.tok)?;
    let mut out = stdout();
    let mut number = 0usize;
    for_each_line(open_input(a.io.input.as_deref())?, |line, newline| {
        number += 1;
        let ids = line
            .split_whitespace()
            .map(|s| s.parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| anyhow!("line {number}: {e}"))?;
        let text = tok.decode(&ids).map_err(|e| anyhow!("line {number}: {e}"))?;
        out.write_all(text.as_bytes())?;
        if newline {
            out.write_all(b"\n")?;
        }
        Ok(())
    })?;
    out.flush()?;
    Ok(())
}

fn train(a: TrainBpeArgs) -> CliResult {
    let counts = read_counts(&a.corpus, parse_norm(&a.normalization)?)?;
    let model = train_bpe(&counts, a.vocab_size)?;
    model.save(&a.out)?;
    eprintln!(
        "wrote {} ({} symbols, {} merges)",
        a.out.display(),
        model.alphabet().len(),
        model.merges().len()
    );
    Ok(())
}

fn stats(a: StatsArgs) -> CliResult {
    let strata = match &a.strata {
        Some(s) => s.parse::<StrataSpec>().map_err(|e| Failure::Usage(e.to_string()))?,
        None => StrataSpec::default(),
    };
    let counts = read_counts(&a.corpus, parse_norm(&a.normalization)?)?;
    let mut report = corpus_stats(&counts, &strata);
    if let Some(min) = a.eval_min_freq {
        let set = build_eval_set(&counts, min);
        report = report.with_eval_set(&set);
        if let Some(p) = &a.eval_set_out {
            let mut text = set.join("\n");
            if !text.is_empty() {
                text.push('\n');
            }
            std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
        }
    }
    let mut out = stdout();
    write!(out, "{report}")?;
    out.flush()?;
    if let Some(p) = &a.records {
        let mut text = String::new();
        for (k, v) in report.records() {
            text.push_str(&format!("{k}\t{v}\n"));
        }
        std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
    }
    if let Some(p) = &a.counts_out {
        counts.save_tsv(p)?;
    }
    Ok(())
}

/// Named word lists to evaluate, plus the counts they came from.
fn word_lists(a: &WordsArgs) -> CliResult<(Vec<(String, Vec<String>)>, Option<CorpusCounts>)> {
    if let Some(p) = &a.words {
        let mut text = String::new();
        File::open(p)
            .and_then(|mut f| f.read_to_string(&mut text))
            .with_context(|| format!("reading {}", p.display()))?;
        let words: Vec<String> = text
            .lines()
            .map(|l| l.trim_end_matches('\r'))
            .filter(|l| !l.is_empty())
            .map(str::to_string)
            .collect();
        return Ok((vec![("all".into(), words)], None));
    }
    let counts = match (&a.counts, &a.corpus) {
        (Some(p), _) => CorpusCounts::load_tsv(p)?,
        (None, Some(p)) => {
            let input = open_input(Some(p))?;
            count_corpus_threaded(input, parse_norm(&a.normalization)?, 1)?
        }
        (None, None) => {
            return Err(Failure::Usage("give --words, --corpus or --counts".into()));
        }
    };
    let lists = match a.per_stratum {
        None => vec![(format!("freq>={}", a.min_freq), build_eval_set(&counts, a.min_freq))],
        Some(n) => {
            let band = a
                .rare_band
                .split_once('-')
                .and_then(|(lo, hi)| Some((lo.parse().ok()?, hi.parse().ok()?)))
                .ok_or_else(|| Failure::Usage(format!("bad --rare-band {:?}", a.rare_band)))?;
            let s = stratified_sample(&counts, n, band, a.seed)?;
            let mut lists: Vec<(String, Vec<String>)> = s
                .strata()
                .iter()
                .map(|(name, w)| (name.to_string(), w.to_vec()))
                .collect();
            lists.push(("all".into(), s.all()));
            lists
        }
    };
    Ok((lists, Some(counts)))
}

enum Loaded {
    Morpho(Box<Tokenizer>),
    Bpe(BpeModel),
    Extern(ExternAdapter),
}

impl Loaded {
    fn adapter(&self, spec: &str) -> Box<dyn TokenizerAdapter + '_> {
        match self {
            Loaded::Morpho(t) => Box::new(MorphoAdapter::new(t).with_label(spec)),
            Loaded::Bpe(m) => Box::new(BpeAdapter::new(m).with_label(spec)),
            Loaded::Extern(e) => Box::new(ExternAdapter::new(
                e.label().trim_start_matches("extern:").to_string(),
            )),
        }
    }
}

fn load_spec(spec: &str, pack: Option<&Path>, vocab: Option<&Path>) -> CliResult<Loaded> {
    let morpho = |pack: &Path, vocab: &Path| -> CliResult<Loaded> {
        let p = load_pack(pack)?;
        let v = Vocabulary::load(vocab)?;
        Ok(Loaded::Morpho(Box::new(Tokenizer::new(p, v, TokenizerConfig::default())?)))
    };
    if spec == "morpho" {
        let (Some(p), Some(v)) = (pack, vocab) else {
            return Err(Failure::Usage("`morpho` needs --pack and --vocab".into()));
        };
        return morpho(p, v);
    }
    if let Some(rest) = spec.strip_prefix("morpho:") {
        let (p, v) = rest
            .split_once(',')
            .ok_or_else(|| Failure::Usage(format!("expected morpho:<pack>,<vocab>, got {spec:?}")))?;
        return morpho(Path::new(p), Path::new(v));
    }
    if let Some(path) = spec.strip_prefix("bpe:") {
        let m = BpeModel::load(path)?;
        return Ok(Loaded::Bpe(m));
    }
    if let Some(cmd) = spec.strip_prefix("extern:") {
        if cmd.trim().is_empty() {
            return Err(Failure::Usage("extern: needs a command".into()));
        }
        return Ok(Loaded::Extern(ExternAdapter::new(cmd)));
    }
    Err(Failure::Usage(format!("unknown tokenizer spec {spec:?}")))
}

fn eval(a: EvalArgs) -> CliResult {
    let (lists, counts) = word_lists(&a.words)?;
    if a.weighted && counts.is_none() {
        return Err(Failure::Usage("--weighted needs --corpus or --counts".into()));
    }
    let loaded = a
        .tokenizers
        .iter()
        .map(|s| load_spec(s, a.pack.as_deref(), a.vocab.as_deref()))
        .collect::<CliResult<Vec<_>>>()?;
    let options = EvalOptions {
        threads: a.threads,
        weights: if a.weighted { counts.as_ref() } else { None },
    };
    let mut out = stdout();
    let mut all_reports = Vec::new();
    for (name, words) in &lists {
        let mut reports: Vec<FertilityReport> = Vec::new();
        for (spec, l) in a.tokenizers.iter().zip(&loaded) {
            let adapter = l.adapter(spec);
            let mut r = evaluate(adapter.as_ref(), words, &options)
                .with_context(|| format!("evaluating {spec} on {name}"))?;
            if let Loaded::Morpho(t) = l {
                r.root_preservation_rate = root_preservation(t, words);
            }
            reports.push(r);
        }
        if lists.len() > 1 {
            writeln!(out, "[{name}] {} words", words.len())?;
        }
        write!(out, "{}", format_comparison(&reports))?;
        if lists.len() > 1 {
            writeln!(out)?;
        }
        for r in &mut reports {
            if lists.len() > 1 {
                r.tokenizer_label = format!("{}@{name}", r.tokenizer_label);
            }
        }
        all_reports.extend(reports);
    }
    out.flush()?;
    if let Some(p) = &a.records {
        std::fs::write(p, records_text(&all_reports))
            .with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn bench(a: BenchArgs) -> CliResult {
    let (lists, _) = word_lists(&a.words)?;
    let words = &lists.last().expect("at least one list").1;
    let loaded = a
        .tokenizers
        .iter()
        .map(|s| load_spec(s, a.pack.as_deref(), a.vocab.as_deref()))
        .collect::<CliResult<Vec<_>>>()?;
    let mut out = stdout();
    for (spec, l) in a.tokenizers.iter().zip(&loaded) {
        let adapter = l.adapter(spec);
        let r = throughput_bench(adapter.as_ref(), words, a.repetitions)?;
        writeln!(
            out,
            "{:<32} {:>14.1} words/sec  ({} words, median of {}; {})",
            spec, r.words_per_sec, r.word_count, r.repetitions, r.hardware
        )?;
    }
    out.flush()?;
    Ok(())
}
