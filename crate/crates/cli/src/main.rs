//! `logdoc`: ingest abstracts into a knowledge base and query it.

mod config;

use std::io::{BufRead, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use logdoc::kb::{load_kb, save_kb, KbBuilder, KnowledgeBase};
use logdoc::prover::{translate_query, variable_depth_search, SearchConfig, SearchOutcome, Stage};
use logdoc::resources::{self, translator_from};
use logdoc::retrieval::{explain, format_human, format_line, format_stages, rank, RankedResult};
use logdoc::semantics::Translator;

use config::EngineConfig;

const DEFAULT_KB: &str = "logdoc.kb";

const EXIT_ENV: u8 = 1;
const EXIT_STRICT: u8 = 2;
const EXIT_EMPTY: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "logdoc", version, about = "Logic-based passage retrieval")]
struct Cli {
    /// Knowledge-base file (default: logdoc.kb).
    #[arg(long, global = true)]
    kb: Option<PathBuf>,
    /// `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    #[arg(long, global = true)]
    grammar: Option<PathBuf>,
    /// Meaning postulate library replacing the shipped one.
    #[arg(long, global = true)]
    postulates: Option<PathBuf>,
    /// isa links replacing the shipped ones.
    #[arg(long, global = true)]
    isa: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Translate files into the knowledge base, one document per file.
    Ingest {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Fail (exit 2) when any fragment had no complete parse.
        #[arg(long)]
        strict: bool,
        /// Document id per file, in order (default: argument position).
        #[arg(long = "doc-id")]
        doc_id: Vec<u32>,
    },
    /// Answer one query.
    Query {
        text: String,
        /// Append proof traces.
        #[arg(long)]
        explain: bool,
        /// Last stage the search may relax to.
        #[arg(long)]
        stage_max: Option<Stage>,
    },
    /// Read queries and directives from standard input.
    Repl {
        #[arg(long)]
        stage_max: Option<Stage>,
    },
    /// Show the stage trace and proof traces of a query.
    Explain {
        text: String,
        /// Only this result.
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        stage_max: Option<Stage>,
    },
    /// Print the knowledge base in its file format.
    Dump,
    /// Check a knowledge-base file and install it as the current one.
    Load { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) if broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ENV)
        }
    }
}

/// Output closed early, e.g. piped into `head`.
fn broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<std::io::Error>()
            .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
    })
}

fn run(cli: Cli) -> Result<u8> {
    let mut cfg = match &cli.config {
        Some(p) => EngineConfig::load(p)?,
        None => EngineConfig::default(),
    };
    for (slot, flag) in [
        (&mut cfg.lexicon, &cli.lexicon),
        (&mut cfg.grammar, &cli.grammar),
        (&mut cfg.postulates, &cli.postulates),
        (&mut cfg.isa, &cli.isa),
        (&mut cfg.kb, &cli.kb),
    ] {
        if flag.is_some() {
            slot.clone_from(flag);
        }
    }
    cfg.check()?;
    let kb_path = cfg.kb.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_KB));
    let mut out = std::io::stdout().lock();

    match cli.command {
        Command::Ingest {
            files,
            strict,
            doc_id,
        } => ingest(&cfg, &kb_path, &files, &doc_id, strict, &mut out),
        Command::Query {
            text,
            explain: with_traces,
            stage_max,
        } => {
            let engine = Engine::open(&cfg, &kb_path, stage_max)?;
            let ranked = engine.answer(&text).1;
            print_results(&mut out, &ranked, &engine.kb, with_traces)?;
            Ok(if ranked.is_empty() { EXIT_EMPTY } else { 0 })
        }
        Command::Explain {
            text,
            rank: only,
            stage_max,
        } => {
            let engine = Engine::open(&cfg, &kb_path, stage_max)?;
            let (outcome, ranked) = engine.answer(&text);
            writeln!(out, "query {}", translate_query(&engine.translator, &text))?;
            write!(out, "{}", format_stages(&outcome))?;
            for r in ranked.iter().filter(|r| only.is_none_or(|k| k == r.rank)) {
                writeln!(out, "{}", format_line(r))?;
                write!(out, "{}", explain(&r.result, &engine.kb))?;
            }
            Ok(if ranked.is_empty() { EXIT_EMPTY } else { 0 })
        }
        Command::Repl { stage_max } => {
            let mut engine = Engine::open(&cfg, &kb_path, stage_max)?;
            repl(&mut engine, std::io::stdin().lock(), &mut out)?;
            Ok(0)
        }
        Command::Dump => {
            let (translator, _) = load_translator(&cfg)?;
            let kb = read_kb(&kb_path, &translator)?;
            write!(out, "{}", save_kb(&kb))?;
            Ok(0)
        }
        Command::Load { file } => {
            let (translator, _) = load_translator(&cfg)?;
            let kb = read_kb(&file, &translator)?;
            write_kb(&kb_path, &kb)?;
            writeln!(
                out,
                "loaded {}: {} documents, {} facts, {} postulates -> {}",
                file.display(),
                kb.documents().count(),
                kb.facts().len(),
                kb.postulates().len(),
                kb_path.display()
            )?;
            Ok(0)
        }
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// The translator over the configured resources, with the search settings
/// it needs.
fn load_translator(cfg: &EngineConfig) -> Result<(Translator, SearchConfig)> {
    let text = |p: &Option<PathBuf>, builtin: &'static str| -> Result<String> {
        match p {
            Some(p) => read_file(p),
            None => Ok(builtin.to_string()),
        }
    };
    let mut t = translator_from(
        &text(&cfg.grammar, resources::GRAMMAR)?,
        &text(&cfg.lexicon, resources::LEXICON)?,
        &text(&cfg.schemes, resources::SCHEMES)?,
        &text(&cfg.levels, resources::LEVELS)?,
    )?;
    t.weights = cfg.weights;
    t.theta = cfg.search.theta;
    Ok((t, cfg.search.clone()))
}

fn read_kb(path: &Path, translator: &Translator) -> Result<KnowledgeBase> {
    let text = read_file(path).context("no knowledge base; run `logdoc ingest` first")?;
    Ok(load_kb(&text, &path.display().to_string(), &translator.levels)?)
}

fn write_kb(path: &Path, kb: &KnowledgeBase) -> Result<()> {
    std::fs::write(path, save_kb(kb)).with_context(|| format!("cannot write {}", path.display()))
}

/// Replaces the postulates and isa links of `b` when files are configured,
/// or installs the shipped ones when `fresh`.
fn apply_rules(b: &mut KbBuilder, cfg: &EngineConfig, t: &Translator, fresh: bool) -> Result<()> {
    match &cfg.postulates {
        Some(p) => {
            b.clear_postulates();
            b.load_postulates(&read_file(p)?, &p.display().to_string(), &t.levels)?;
        }
        None if fresh => {
            b.load_postulates(resources::POSTULATES, "postulates", &t.levels)?;
        }
        None => {}
    }
    match &cfg.isa {
        Some(p) => {
            b.clear_isa();
            b.load_isa(&read_file(p)?, &p.display().to_string())?;
        }
        None if fresh => {
            b.load_isa(resources::ISA, "isa")?;
        }
        None => {}
    }
    Ok(())
}

fn ingest(
    cfg: &EngineConfig,
    kb_path: &Path,
    files: &[PathBuf],
    ids: &[u32],
    strict: bool,
    out: &mut impl Write,
) -> Result<u8> {
    if !ids.is_empty() && ids.len() != files.len() {
        bail!("{} --doc-id values for {} files", ids.len(), files.len());
    }
    let (translator, _) = load_translator(cfg)?;
    let fresh = !kb_path.exists();
    let mut b = if fresh {
        KbBuilder::new()
    } else {
        read_kb(kb_path, &translator)?.into_builder()
    };
    apply_rules(&mut b, cfg, &translator, fresh)?;

    let mut failures = 0;
    for (i, path) in files.iter().enumerate() {
        let doc = ids.get(i).copied().unwrap_or(i as u32 + 1);
        let text = read_file(path)?;
        let report = b
            .ingest_document(&translator, doc, &text)
            .with_context(|| format!("ingesting {}", path.display()))?;
        writeln!(
            out,
            "doc {doc} {}: {} fragments, {} facts, {} disjunct groups, {} parse failures",
            path.display(),
            report.fragments,
            report.facts,
            report.groups,
            report.parse_failures
        )?;
        if report.parse_failures > 0 {
            eprintln!(
                "warning: doc {doc}: {} fragment(s) translated from maximal fragments",
                report.parse_failures
            );
        }
        failures += report.parse_failures;
    }
    if strict && failures > 0 {
        eprintln!("error: {failures} fragment(s) without a complete parse; knowledge base not written");
        return Ok(EXIT_STRICT);
    }
    let kb = b.freeze();
    write_kb(kb_path, &kb)?;
    writeln!(out, "wrote {} ({} facts)", kb_path.display(), kb.facts().len())?;
    Ok(0)
}

struct Engine {
    translator: Translator,
    kb: KnowledgeBase,
    search: SearchConfig,
    last: Vec<RankedResult>,
}

impl Engine {
    fn open(cfg: &EngineConfig, kb_path: &Path, stage_max: Option<Stage>) -> Result<Self> {
        let (translator, mut search) = load_translator(cfg)?;
        let kb = read_kb(kb_path, &translator)?;
        let kb = if cfg.postulates.is_some() || cfg.isa.is_some() {
            let mut b = kb.into_builder();
            apply_rules(&mut b, cfg, &translator, false)?;
            b.freeze()
        } else {
            kb
        };
        if let Some(s) = stage_max {
            search.stage_max = s;
        }
        Ok(Engine {
            translator,
            kb,
            search,
            last: Vec::new(),
        })
    }

    fn answer(&self, text: &str) -> (SearchOutcome, Vec<RankedResult>) {
        let q = translate_query(&self.translator, text);
        let outcome = variable_depth_search(&q, &self.search, &self.kb);
        let ranked = rank(outcome.results.clone(), self.search.m, &self.kb);
        (outcome, ranked)
    }

    /// Applies `:set <key> <value>`, keeping the old settings when the new
    /// ones are invalid. Lowering N to O or below also lowers O, down to 0,
    /// which switches inheritance and decomposition off. Returns a note on
    /// such adjustments.
    fn set(&mut self, key: &str, value: &str) -> Result<Option<String>> {
        let mut s = self.search.clone();
        let mut note = None;
        match key {
            "M" => s.m = value.parse()?,
            "N" => {
                s.n = value.parse()?;
                if s.n > 0 && s.o >= s.n {
                    s.o = s.n - 1;
                    note = Some(format!("O lowered to {}", s.o));
                }
            }
            "O" => s.o = value.parse()?,
            "theta" => s.theta = value.parse()?,
            "budget" => s.budget = value.parse()?,
            "depth" => s.depth = value.parse()?,
            other => bail!("cannot set `{other}` (expected M, N, O, theta, budget or depth)"),
        }
        if !(s.o < s.n && s.n < s.m) {
            bail!("thresholds must satisfy O < N < M (got M={}, N={}, O={})", s.m, s.n, s.o);
        }
        if !(0.0..=1.0).contains(&s.theta) {
            bail!("theta must lie in [0, 1]");
        }
        self.translator.theta = s.theta;
        self.search = s;
        Ok(note)
    }
}

fn print_results(out: &mut impl Write, ranked: &[RankedResult], kb: &KnowledgeBase, traces: bool) -> Result<()> {
    if ranked.is_empty() {
        writeln!(out, "no results")?;
        return Ok(());
    }
    for r in ranked {
        writeln!(out, "{}", format_line(r))?;
    }
    writeln!(out)?;
    for r in ranked {
        writeln!(out, "{}", format_human(r))?;
    }
    if traces {
        for r in ranked {
            writeln!(out)?;
            write!(out, "{}", explain(&r.result, kb))?;
        }
    }
    Ok(())
}

fn repl(engine: &mut Engine, input: impl BufRead, out: &mut impl Write) -> Result<()> {
    let prompt = std::io::stdin().is_terminal();
    if prompt {
        write!(out, "> ")?;
        out.flush()?;
    }
    for line in input.lines() {
        let line = line?;
        let line = line.trim();
        if line == ":quit" {
            break;
        }
        if let Some(rest) = line.strip_prefix(':') {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            match parts.as_slice() {
                ["explain", n] => match n.parse::<usize>().ok().and_then(|n| engine.last.get(n.wrapping_sub(1))) {
                    Some(r) => write!(out, "{}", explain(&r.result, &engine.kb))?,
                    None => writeln!(out, "no result with rank {n}")?,
                },
                ["set", key, value] => match engine.set(key, value) {
                    Ok(note) => {
                        writeln!(out, "{key} = {value}")?;
                        if let Some(n) = note {
                            writeln!(out, "{n}")?;
                        }
                    }
                    Err(e) => writeln!(out, "error: {e:#}")?,
                },
                _ => writeln!(out, "unknown directive `:{rest}` (try :explain <rank>, :set <key> <value>, :quit)")?,
            }
        } else if !line.is_empty() {
            let ranked = engine.answer(line).1;
            print_results(out, &ranked, &engine.kb, false)?;
            engine.last = ranked;
        }
        if prompt {
            write!(out, "> ")?;
        }
        out.flush()?;
    }
    Ok(())
}
