use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use presslim::compile::budget_from_env;
use presslim::encoding::{decode, encode, CodeWord};
use presslim::enumerate::{count_trees, enumerate_trees, EnumerationSpec};
use presslim::format::{self, ParseOptions};
use presslim::par::Exec;
use presslim::presentation::{decide_word_automatic, convert_presentation, Decision, KPolicy, TreePresentation};
use presslim::slim::{decide_slim, pump_thick_witness};
use presslim::symbol::Symbol;
use presslim::verify::{sanity_order_tree, sanity_order_word, verify_presentation, OrderReport};
use presslim::{Tree, TreeAutomaton};

#[derive(Parser)]
#[command(name = "presslim", version, about = "Decide and build word-automatic presentations from tree-automatic ones")]
struct Cli {
    /// Print tabular text instead of JSON.
    #[arg(long, global = true)]
    human: bool,
    /// Complete partial transition tables with a rejecting sink state.
    #[arg(long, global = true)]
    complete_with_sink: bool,
    /// Run enumeration and verification on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide word automaticity of a tree-automatic presentation.
    Decide {
        input: PathBuf,
        /// Write the word-automatic presentation here when one exists.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value = "exact")]
        k: KPolicy,
        /// Include wall-clock time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Compile a presentation with slim domain into a word-automatic one.
    Convert {
        input: PathBuf,
        #[arg(long, default_value = "exact")]
        k: KPolicy,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Encode trees, one S-expression per line.
    Encode {
        #[arg(long)]
        k: usize,
        /// Read from this file instead of stdin.
        input: Option<PathBuf>,
    },
    /// Decode code words, one per line.
    Decode {
        #[arg(long)]
        k: usize,
        input: Option<PathBuf>,
    },
    /// Print an accepted tree of thickness at least M from a fat domain.
    Witness {
        /// A `.ta` automaton or a `.tap` presentation.
        input: PathBuf,
        #[arg(long)]
        min_thickness: usize,
    },
    /// Check a word presentation against its tree source on bounded trees.
    Verify {
        #[arg(long)]
        max_height: usize,
        tree: PathBuf,
        word: PathBuf,
    },
    /// Check that `<` is a strict linear order on bounded domain elements.
    SanityOrder {
        #[arg(long)]
        max_height: usize,
        /// A `.tap` or `.wap` presentation.
        input: PathBuf,
    },
    /// List all trees within the given bounds.
    Enumerate {
        /// Comma-separated symbols.
        #[arg(long, value_delimiter = ',', required = true)]
        alphabet: Vec<String>,
        #[arg(long)]
        max_height: usize,
        #[arg(long)]
        max_thickness: Option<usize>,
        #[arg(long)]
        max_count: Option<usize>,
        /// Print only the number of trees.
        #[arg(long)]
        count: bool,
    },
}

/// Failures that are not the input's fault: a check ran and did not pass.
struct Failed;

type Outcome = anyhow::Result<Result<(), Failed>>;

struct Ctx {
    human: bool,
    opts: ParseOptions,
    exec: Exec,
}

impl Ctx {
    fn emit<T: Serialize>(&self, report: &T) -> anyhow::Result<()> {
        let v = serde_json::to_value(report)?;
        let mut out = io::stdout().lock();
        if self.human {
            write_human(&mut out, &v, "")?;
        } else {
            writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
        }
        Ok(())
    }
}

fn write_human(out: &mut impl Write, v: &Value, prefix: &str) -> io::Result<()> {
    match v {
        Value::Object(map) => {
            let width = map.keys().map(|k| k.len()).max().unwrap_or(0);
            for (k, x) in map {
                match x {
                    Value::Object(_) => {
                        writeln!(out, "{prefix}{k}:")?;
                        write_human(out, x, &format!("{prefix}  "))?;
                    }
                    Value::Array(items) if items.iter().all(Value::is_object) && !items.is_empty() => {
                        writeln!(out, "{prefix}{k}:")?;
                        for item in items {
                            write_human(out, item, &format!("{prefix}  "))?;
                            writeln!(out)?;
                        }
                    }
                    _ => writeln!(out, "{prefix}{k:<width$}  {}", scalar(x))?,
                }
            }
            Ok(())
        }
        other => writeln!(out, "{prefix}{}", scalar(other)),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        human: cli.human,
        opts: ParseOptions { complete_with_sink: cli.complete_with_sink },
        exec: if cli.sequential { Exec::Sequential } else { Exec::default() },
    };
    match run(&ctx, cli.cmd) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failed)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(ctx: &Ctx, cmd: Command) -> Outcome {
    match cmd {
        Command::Decide { input, output, k, timing } => decide(ctx, &input, output.as_deref(), k, timing),
        Command::Convert { input, k, output } => convert(ctx, &input, k, output.as_deref()),
        Command::Encode { k, input } => encode_lines(k, input.as_deref()),
        Command::Decode { k, input } => decode_lines(k, input.as_deref()),
        Command::Witness { input, min_thickness } => witness(ctx, &input, min_thickness),
        Command::Verify { max_height, tree, word } => verify(ctx, &tree, &word, max_height),
        Command::SanityOrder { max_height, input } => sanity(ctx, &input, max_height),
        Command::Enumerate { alphabet, max_height, max_thickness, max_count, count } => {
            let alphabet = alphabet.iter().map(|s| Symbol::new(s)).collect::<Result<Vec<_>, _>>()?;
            let spec = EnumerationSpec { alphabet, max_height, max_thickness, max_count };
            if count {
                ctx.emit(&json!({ "count": count_trees(&spec).to_string() }))?;
            } else {
                let mut out = io::stdout().lock();
                for t in enumerate_trees(&spec) {
                    writeln!(out, "{t}")?;
                }
            }
            Ok(Ok(()))
        }
    }
}

fn load_tree(ctx: &Ctx, path: &Path) -> anyhow::Result<TreePresentation> {
    Ok(format::load_tree_presentation(path, ctx.opts)?)
}

#[derive(Serialize)]
struct VerdictReport {
    presentation: String,
    verdict: presslim::presentation::VerdictKind,
    slim: bool,
    states: usize,
    bound: u64,
    exact_k: Option<usize>,
    block_width: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<u64>,
}

#[derive(Serialize)]
struct WitnessReport {
    tree: String,
    thickness: usize,
    height: usize,
    state: String,
    accepted: bool,
}

fn witness_report(a: &TreeAutomaton, t: &Tree) -> anyhow::Result<WitnessReport> {
    let q = a.run(t)?;
    Ok(WitnessReport {
        tree: t.to_string(),
        thickness: t.thickness(),
        height: t.height(),
        state: a.state_name(q).to_string(),
        accepted: a.is_accepting(q),
    })
}

fn decide(ctx: &Ctx, input: &Path, output: Option<&Path>, k: KPolicy, timing: bool) -> Outcome {
    let start = Instant::now();
    let p = load_tree(ctx, input)?;
    let d = decide_word_automatic(&p, k, budget_from_env())?;
    let v = d.verdict().clone();
    let mut report = VerdictReport {
        presentation: p.name.clone(),
        verdict: d.kind(),
        slim: v.is_slim(),
        states: v.states,
        bound: v.bound,
        exact_k: v.exact_max_thickness,
        block_width: None,
        witness: None,
        output: None,
        timing_ms: None,
    };
    let mut ok = true;
    match &d {
        Decision::WordAutomatic { presentation, .. } => {
            report.block_width = Some(presentation.block_width);
            if let Some(out) = output {
                format::save_word_presentation(presentation, out)?;
                report.output = Some(out.display().to_string());
            }
        }
        Decision::NotWordAutomaticGivenScattered { witness, .. } => {
            let w = witness_report(&p.domain, witness)?;
            ok = w.accepted && w.thickness as u64 > v.bound;
            report.witness = Some(w);
        }
    }
    if timing {
        report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    ctx.emit(&report)?;
    Ok(if ok { Ok(()) } else { Err(Failed) })
}

fn convert(ctx: &Ctx, input: &Path, k: KPolicy, output: Option<&Path>) -> Outcome {
    let p = load_tree(ctx, input)?;
    let w = convert_presentation(&p, k, budget_from_env())?;
    if let Some(out) = output {
        format::save_word_presentation(&w, out)?;
    }
    let relations: Vec<Value> = w
        .relations
        .iter()
        .map(|r| json!({ "name": r.name, "arity": r.arity, "states": r.automaton.num_states() }))
        .collect();
    ctx.emit(&json!({
        "presentation": w.name,
        "block_width": w.block_width,
        "domain_states": w.domain.num_states(),
        "relations": relations,
        "output": output.map(|o| o.display().to_string()),
    }))?;
    Ok(Ok(()))
}

fn lines(input: Option<&Path>) -> anyhow::Result<Box<dyn BufRead>> {
    Ok(match input {
        Some(p) => Box::new(io::BufReader::new(std::fs::File::open(p).with_context(|| p.display().to_string())?)),
        None => Box::new(io::stdin().lock()),
    })
}

fn encode_lines(k: usize, input: Option<&Path>) -> Outcome {
    if k == 0 {
        bail!(presslim::Error::InvalidK);
    }
    let mut out = io::stdout().lock();
    for (i, line) in lines(input)?.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let t = Tree::parse(&line).with_context(|| format!("line {}", i + 1))?;
        writeln!(out, "{}", encode(&t, k).with_context(|| format!("line {}", i + 1))?)?;
    }
    Ok(Ok(()))
}

fn decode_lines(k: usize, input: Option<&Path>) -> Outcome {
    if k == 0 {
        bail!(presslim::Error::InvalidK);
    }
    let mut out = io::stdout().lock();
    for (i, line) in lines(input)?.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let w = CodeWord::parse(&line, k).with_context(|| format!("line {}", i + 1))?;
        writeln!(out, "{}", decode(&w).with_context(|| format!("line {}", i + 1))?)?;
    }
    Ok(Ok(()))
}

fn witness(ctx: &Ctx, input: &Path, min_thickness: usize) -> Outcome {
    let a = if input.extension().is_some_and(|e| e == "ta") {
        let text = std::fs::read_to_string(input).with_context(|| input.display().to_string())?;
        format::parse_tree_automaton(&text, ctx.opts).with_context(|| input.display().to_string())?
    } else {
        load_tree(ctx, input)?.domain
    };
    let red = a.reduced();
    let verdict = decide_slim(&red);
    if verdict.is_slim() {
        bail!(presslim::Error::NotFat);
    }
    let t = pump_thick_witness(&red, min_thickness.saturating_sub(1))?;
    let w = witness_report(&a, &t)?;
    let ok = w.accepted && w.thickness >= min_thickness;
    ctx.emit(&w)?;
    Ok(if ok { Ok(()) } else { Err(Failed) })
}

fn verify(ctx: &Ctx, tree: &Path, word: &Path, max_height: usize) -> Outcome {
    let tp = load_tree(ctx, tree)?;
    let wp = format::load_word_presentation(word)?;
    let report = verify_presentation(&tp, &wp, max_height, ctx.exec)?;
    ctx.emit(&json!({ "passed": report.passed(), "report": report }))?;
    Ok(if report.passed() { Ok(()) } else { Err(Failed) })
}

fn is_word_presentation(path: &Path) -> anyhow::Result<bool> {
    if path.extension().is_some_and(|e| e == "wap") {
        return Ok(true);
    }
    if path.extension().is_some_and(|e| e == "tap") {
        return Ok(false);
    }
    let text = std::fs::read_to_string(path).with_context(|| path.display().to_string())?;
    Ok(text.lines().any(|l| l.split_whitespace().next() == Some("blockwidth")))
}

fn sanity(ctx: &Ctx, input: &Path, max_height: usize) -> Outcome {
    let report: OrderReport = if is_word_presentation(input)? {
        sanity_order_word(&format::load_word_presentation(input)?, max_height, ctx.exec)?
    } else {
        sanity_order_tree(&load_tree(ctx, input)?, max_height, ctx.exec)?
    };
    ctx.emit(&json!({ "passed": report.passed(), "report": report }))?;
    Ok(if report.passed() { Ok(()) } else { Err(Failed) })
}
