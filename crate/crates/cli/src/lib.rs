//! Command-line front end: parsing, meanings, similarity, dimension audits,
//! co-occurrence tables and the lumberjack demo.
//!
//! Exit codes: 0 success with results, 1 no result, 2 input or
//! configuration error.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use pregroup_lab::demo::{self, Demo, Fixtures, Reading};
use pregroup_lab::distributional::{build_cooccurrence, cluster_columns, parse_corpus, ppmi, ClusterMap};
use pregroup_lab::grammar::{builtin_english, load_grammar, GrammarSpec};
use pregroup_lab::reducer::{parse_sentence, render_svg, Limits, Parse};
use pregroup_lab::semantics::{cosine, dim_audit, evaluate, Tensor, WordModel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NONE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Tsv,
    Svg,
}

#[derive(Debug, Parser)]
#[command(name = "pregroup-lab", version, about = "Pregroup parsing and tensor semantics")]
pub struct Cli {
    /// Grammar file (defaults to the bundled English fragment)
    #[arg(long, global = true, env = "PREGROUP_LAB_GRAMMAR")]
    pub grammar: Option<PathBuf>,
    /// Word-model manifest (defaults to the graded demo model)
    #[arg(long, global = true)]
    pub model: Option<PathBuf>,
    /// Target group, overriding the one chosen by final punctuation
    #[arg(long, global = true)]
    pub targets: Option<String>,
    /// Evaluate every parse instead of the first
    #[arg(long, global = true)]
    pub all: bool,
    /// Print contraction links under each parse
    #[arg(long, global = true)]
    pub show_links: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Maximum number of derivations per sentence
    #[arg(long, global = true)]
    pub limit: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse sentences (argument, or one per line on stdin)
    Parse { sentence: Option<String> },
    /// Print the meaning tensor of sentences
    Meaning { sentence: Option<String> },
    /// Cosine between the meanings of two phrases
    Similarity { a: String, b: String },
    /// Compare tensor and direct-sum dimensions of x·y·z^l
    Audit { m: u64, n: u64, p: u64 },
    /// Count co-occurrences in a corpus and print the table
    Cooccur {
        /// Corpus file (defaults to the bundled demo corpus)
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Comma-separated target words
        #[arg(long, value_delimiter = ',', required = true)]
        rows: Vec<String>,
        /// Comma-separated context words
        #[arg(long, value_delimiter = ',', required = true)]
        cols: Vec<String>,
        #[arg(long, default_value_t = 5)]
        window: usize,
        /// Sum columns into clusters (lines `name<TAB>members`)
        #[arg(long)]
        clusters: Option<PathBuf>,
        /// Apply positive PMI weighting
        #[arg(long)]
        ppmi: bool,
    },
    /// Run the lumberjack pipeline and its self-checks
    Demo {
        /// Directory with raw_counts.tsv, reference_clusters.tsv, clusters.txt, corpus.txt
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// Warn when recomputed clustered rows differ from the reference table
        #[arg(long)]
        strict_lombard: bool,
        /// Write the strict and graded word models under this directory
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Print the grammar in file format
    Grammar,
}

/// Loaded configuration shared by all commands.
pub struct RunConfig {
    pub grammar: GrammarSpec,
    pub model: Option<WordModel>,
    pub targets: Option<String>,
    pub limits: Limits,
    pub all: bool,
    pub show_links: bool,
    pub format: Format,
}

impl RunConfig {
    pub fn load(cli: &Cli) -> Result<Self, String> {
        let grammar = match &cli.grammar {
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
                load_grammar(&text).map_err(|e| format!("{}: {e}", p.display()))?
            }
            None => builtin_english(),
        };
        let model = match &cli.model {
            Some(p) => Some(WordModel::load(p, &grammar.poset).map_err(|e| e.to_string())?),
            None => None,
        };
        if let Some(t) = &cli.targets {
            if grammar.target_group(t).is_none() {
                return Err(format!("unknown target group `{t}`"));
            }
        }
        let mut limits = Limits::default();
        if let Some(n) = cli.limit {
            limits.max_derivations = n;
        }
        Ok(RunConfig {
            grammar,
            model,
            targets: cli.targets.clone(),
            limits,
            all: cli.all,
            show_links: cli.show_links,
            format: cli.format,
        })
    }

    /// The configured model, or the graded demo model.
    pub fn model_or_demo(&self) -> Result<WordModel, String> {
        match &self.model {
            Some(m) => Ok(m.clone()),
            None => demo_model(Reading::Graded, &self.grammar),
        }
    }
}

pub fn demo_model(reading: Reading, grammar: &GrammarSpec) -> Result<WordModel, String> {
    let d = Demo::build(&Fixtures::builtin()).map_err(|e| e.to_string())?;
    d.model(reading, grammar).map_err(|e| e.to_string())
}

fn has_final_punctuation(text: &str) -> bool {
    text.trim_end().ends_with(['.', '?'])
}

/// Parses under `--targets`, else the punctuation-selected group; input
/// without final punctuation that fails as a sentence is retried as a noun
/// phrase when the grammar has a `noun` group.
pub fn parses(config: &RunConfig, text: &str) -> Result<Vec<Parse>, String> {
    let run = |g: Option<&str>| parse_sentence(text, &config.grammar, g, &config.limits).map_err(|e| e.to_string());
    if let Some(t) = &config.targets {
        return run(Some(t));
    }
    let first = run(None)?;
    if first.is_empty() && !has_final_punctuation(text) && config.grammar.target_group("noun").is_some() {
        return run(Some("noun"));
    }
    Ok(first)
}

/// Meanings of the first parse (or all parses with `--all`).
pub fn meanings(config: &RunConfig, model: &WordModel, text: &str) -> Result<Vec<Tensor>, String> {
    let ps = parses(config, text)?;
    let take = if config.all { ps.len() } else { ps.len().min(1) };
    ps[..take]
        .iter()
        .map(|p| evaluate(p, model).map_err(|e| e.to_string()))
        .collect()
}

/// Fixed 12-decimal rendering with trailing zeros removed.
pub fn format_number(v: f64) -> String {
    let s = format!("{v:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn tensor_text(t: &Tensor, format: Format) -> String {
    let dims: Vec<String> = t.dims().iter().map(usize::to_string).collect();
    let vals: Vec<String> = t.values().iter().map(|&v| format_number(v)).collect();
    match format {
        Format::Tsv => format!("{}\t{}\n", dims.join(" "), vals.join(" ")),
        _ => {
            let head = if dims.is_empty() { "shape".to_string() } else { format!("shape {}", dims.join(" ")) };
            format!("{head}\n{}\n", vals.join(" "))
        }
    }
}

fn parse_text(p: &Parse, index: usize, config: &RunConfig) -> String {
    let mut out = String::new();
    match config.format {
        Format::Svg => out.push_str(&render_svg(p)),
        Format::Tsv => {
            let words: Vec<String> = p
                .tokens
                .iter()
                .zip(&p.choice)
                .map(|(w, t)| format!("{w}:{t}"))
                .collect();
            let links: Vec<String> = p.derivation.links.iter().map(|(i, j)| format!("{i}-{j}")).collect();
            writeln!(
                out,
                "{index}\t{}\t{}\t{}\t{}",
                words.join(" "),
                links.join(" "),
                p.derivation.survivor,
                p.derivation.target
            )
            .unwrap();
        }
        Format::Text => {
            writeln!(out, "parse {index} : {}", p.derivation.target).unwrap();
            let width = p.tokens.iter().map(|t| t.chars().count()).max().unwrap_or(0);
            for (w, t) in p.tokens.iter().zip(&p.choice) {
                writeln!(out, "  {w:<width$}  {t}").unwrap();
            }
            if config.show_links {
                for line in p.derivation.render().lines() {
                    writeln!(out, "  {line}").unwrap();
                }
            }
        }
    }
    out
}

fn input_lines(sentence: &Option<String>, stdin: &mut dyn BufRead) -> Result<Vec<String>, String> {
    match sentence {
        Some(s) => Ok(vec![s.clone()]),
        None => {
            let mut lines = Vec::new();
            for l in stdin.lines() {
                let l = l.map_err(|e| format!("stdin: {e}"))?;
                if !l.trim().is_empty() {
                    lines.push(l);
                }
            }
            Ok(lines)
        }
    }
}

fn worst(a: i32, b: i32) -> i32 {
    a.max(b)
}

pub fn cmd_parse(config: &RunConfig, text: &str, out: &mut String) -> Result<i32, String> {
    let ps = parses(config, text)?;
    for (k, p) in ps.iter().enumerate() {
        out.push_str(&parse_text(p, k + 1, config));
    }
    Ok(if ps.is_empty() { EXIT_NONE } else { EXIT_OK })
}

pub fn cmd_meaning(config: &RunConfig, model: &WordModel, text: &str, out: &mut String) -> Result<i32, String> {
    let ts = meanings(config, model, text)?;
    for (k, t) in ts.iter().enumerate() {
        if ts.len() > 1 && config.format == Format::Text {
            writeln!(out, "# parse {}", k + 1).unwrap();
        }
        out.push_str(&tensor_text(t, config.format));
    }
    Ok(if ts.is_empty() { EXIT_NONE } else { EXIT_OK })
}

/// Cosine of the first meanings of two phrases; `Ok(None)` if either has no parse.
pub fn cmd_similarity(config: &RunConfig, model: &WordModel, a: &str, b: &str) -> Result<Option<f64>, String> {
    let first = |text: &str| -> Result<Option<Tensor>, String> {
        match parses(config, text)?.first() {
            Some(p) => evaluate(p, model).map(Some).map_err(|e| e.to_string()),
            None => Ok(None),
        }
    };
    match (first(a)?, first(b)?) {
        (Some(x), Some(y)) => cosine(&x, &y).map(Some).map_err(|e| e.to_string()),
        _ => Ok(None),
    }
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|&x| format_number(x)).collect();
    format!("({})", parts.join(", "))
}

/// Runs the pipeline; returns the report and whether every check passed.
pub fn cmd_demo(
    config: &RunConfig,
    fixtures: Option<&Path>,
    strict_lombard: bool,
    export: Option<&Path>,
    out: &mut String,
    err: &mut String,
) -> Result<i32, String> {
    let f = match fixtures {
        Some(dir) => Fixtures::load(dir).map_err(|e| e.to_string())?,
        None => Fixtures::builtin(),
    };
    let d = Demo::build(&f).map_err(|e| e.to_string())?;
    let g = &config.grammar;

    writeln!(out, "raw co-occurrence counts").unwrap();
    out.push_str(&f.raw.to_tsv());
    writeln!(out, "\nclustered counts (recomputed)").unwrap();
    out.push_str(&d.clustered.to_tsv());
    for (t, got, printed) in demo::cluster_mismatches(&d, &f) {
        let msg = format!("clustered `{t}` is {} but the reference table has {}", fmt_vec(&got), fmt_vec(&printed));
        if strict_lombard {
            writeln!(err, "warning: {msg}").unwrap();
        } else {
            writeln!(out, "note: {msg}; the recomputed row is used").unwrap();
        }
    }

    let fashion = [0.0, 0.0, 1.0];
    let cos = |v: &[f64]| pregroup_lab::semantics::cosine_slices(v, &fashion).map_err(|e| e.to_string());
    writeln!(out, "\ncosine with the fashion axis").unwrap();
    for (name, v) in [
        ("lumberjack", &d.lumberjack),
        ("red lumberjack", &d.red_target),
        ("tall lumberjack", &d.tall_target),
        ("lombard", &d.lombard),
    ] {
        writeln!(out, "  {name:<16} {:.4}", cos(v)?).unwrap();
    }

    writeln!(out, "\ntruth degrees (true, false)").unwrap();
    let strict = d.model(Reading::Strict, g).map_err(|e| e.to_string())?;
    let graded = d.model(Reading::Graded, g).map_err(|e| e.to_string())?;
    for (label, model, sentence) in [
        ("strict", &strict, "tall lumberjacks drink ."),
        ("strict", &strict, "red lumberjacks drink ."),
        ("graded", &graded, "lumberjacks drink ."),
        ("graded", &graded, "lumberjacks may drink ."),
        ("graded", &graded, "may lumberjacks drink ?"),
        ("graded", &graded, "who may drink ?"),
    ] {
        let t = demo::first_meaning(sentence, g, model).map_err(|e| e.to_string())?;
        writeln!(out, "  {label}  {sentence:<26} {}", fmt_vec(t.values())).unwrap();
    }

    if let Some(dir) = export {
        for (name, model) in [("strict", &strict), ("graded", &graded)] {
            model
                .save(&dir.join(name), "words.model")
                .map_err(|e| format!("{}: {e}", dir.display()))?;
        }
        writeln!(out, "\nmodels written to {}", dir.display()).unwrap();
    }

    writeln!(out, "\nchecks").unwrap();
    let checks = demo::run_checks(&d, g).map_err(|e| e.to_string())?;
    let mut ok = true;
    for c in &checks {
        writeln!(out, "  {c}").unwrap();
        ok &= c.passed;
    }
    Ok(if ok { EXIT_OK } else { EXIT_NONE })
}

pub fn cmd_cooccur(
    corpus: Option<&Path>,
    rows: &[String],
    cols: &[String],
    window: usize,
    clusters: Option<&Path>,
    weight: bool,
) -> Result<String, String> {
    let text = match corpus {
        Some(p) => fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?,
        None => demo::CORPUS.to_string(),
    };
    let lower = |v: &[String]| v.iter().map(|w| w.to_lowercase()).collect::<Vec<_>>();
    let mut table =
        build_cooccurrence(&parse_corpus(&text), &lower(rows), &lower(cols), window).map_err(|e| e.to_string())?;
    if let Some(p) = clusters {
        let t = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
        let cmap = ClusterMap::from_text(&t).map_err(|e| format!("{}: {e}", p.display()))?;
        table = cluster_columns(&table, &cmap).map_err(|e| e.to_string())?;
    }
    if weight {
        table = ppmi(&table).map_err(|e| e.to_string())?;
    }
    Ok(table.to_tsv())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut out = String::new();
    let mut err = String::new();
    let code = dispatch(&cli, stdin, &mut out, &mut err);
    let _ = stdout.write_all(out.as_bytes());
    let _ = stderr.write_all(err.as_bytes());
    code
}

fn dispatch(cli: &Cli, stdin: &mut dyn BufRead, out: &mut String, err: &mut String) -> i32 {
    let config = match RunConfig::load(cli) {
        Ok(c) => c,
        Err(e) => {
            writeln!(err, "error: {e}").unwrap();
            return EXIT_ERROR;
        }
    };
    let result = match &cli.command {
        Command::Parse { sentence } | Command::Meaning { sentence } => {
            let meaning = matches!(cli.command, Command::Meaning { .. });
            let model = if meaning { config.model_or_demo().map(Some) } else { Ok(None) };
            model.and_then(|model| {
                let lines = input_lines(sentence, stdin)?;
                let mut code = if lines.is_empty() { EXIT_NONE } else { EXIT_OK };
                for line in &lines {
                    let r = match &model {
                        Some(m) => cmd_meaning(&config, m, line, out),
                        None => cmd_parse(&config, line, out),
                    };
                    code = worst(
                        code,
                        r.unwrap_or_else(|e| {
                            writeln!(err, "error: {line}: {e}").unwrap();
                            EXIT_ERROR
                        }),
                    );
                }
                Ok(code)
            })
        }
        Command::Similarity { a, b } => config.model_or_demo().and_then(|m| {
            cmd_similarity(&config, &m, a, b).map(|c| match c {
                Some(v) => {
                    writeln!(out, "{}", format_number(v)).unwrap();
                    EXIT_OK
                }
                None => EXIT_NONE,
            })
        }),
        Command::Audit { m, n, p } => match dim_audit(*m, *n, *p) {
            Some(a) => {
                write!(out, "{a}").unwrap();
                Ok(EXIT_OK)
            }
            None => Err("dimensions must be at least 1".to_string()),
        },
        Command::Cooccur {
            corpus,
            rows,
            cols,
            window,
            clusters,
            ppmi,
        } => cmd_cooccur(corpus.as_deref(), rows, cols, *window, clusters.as_deref(), *ppmi).map(|t| {
            out.push_str(&t);
            EXIT_OK
        }),
        Command::Demo {
            fixtures,
            strict_lombard,
            export,
        } => cmd_demo(&config, fixtures.as_deref(), *strict_lombard, export.as_deref(), out, err),
        Command::Grammar => {
            out.push_str(&config.grammar.to_text());
            Ok(EXIT_OK)
        }
    };
    result.unwrap_or_else(|e| {
        writeln!(err, "error: {e}").unwrap();
        EXIT_ERROR
    })
}
