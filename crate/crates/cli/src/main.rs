use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cml_core::atoms::{expand_atom, AtomKind};
use cml_core::corpus::{random_pco, random_set, rng};
use cml_core::geometry::{conic_discriminant, extract, set_from_json, set_to_json, synth, IneqClass};
use cml_core::model::io::{model_from_json, model_to_json, signature_from_json};
use cml_core::model::{enumerate_models, CausalMultiteam, Guard, LawMode, Signature, VarId};
use cml_core::oracle::equiv;
use cml_core::rewrite::{push_boxright, relativize, supset_normal_form};
use cml_core::semantics::{eval, eval_traced, CoStrategy, EvalConfig};
use cml_core::syntax::{classify_fragment, infer_signature, parse, parse_decimal, print, rational, Formula, FragmentLabel};
use cml_core::{Error, Rational};
use num_bigint::BigInt;
use serde_json::json;

#[derive(Parser)]
#[command(name = "cml", version, about = "Causal multiteam logic: evaluation, rewriting and probability-set geometry")]
struct Cli {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a formula on a model; exit status 0 for true, 1 for false.
    Check {
        #[arg(short = 'm', long)]
        model: PathBuf,
        #[arg(short = 'f', long)]
        formula: String,
        #[arg(long, value_enum, default_value_t = Strategy::Rowwise)]
        strategy: Strategy,
        /// Condition the right side of mixed conditional comparisons on the left condition.
        #[arg(long)]
        literal_conditioning: bool,
        /// Print the evaluation trace.
        #[arg(long)]
        trace: bool,
    },
    /// Apply one rewrite pass.
    Rewrite {
        #[arg(long, value_enum)]
        pass: Pass,
        #[arg(short = 'f', long)]
        formula: String,
        #[command(flatten)]
        sig: SigArgs,
        /// Model file whose law system is used by `relativize`.
        #[arg(long)]
        laws: Option<PathBuf>,
    },
    /// Compute the probability set defined by a formula.
    Extract {
        #[arg(short = 'f', long)]
        formula: String,
        #[command(flatten)]
        sig: SigArgs,
        #[arg(long)]
        laws: Option<PathBuf>,
        /// Drop union branches with no grid point of this denominator (heuristic).
        #[arg(long)]
        prune: Option<u64>,
    },
    /// Build a formula defining a probability set.
    Synth {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_class)]
        target: IneqClass,
        /// States are named by this signature; default is one variable `S` with values 1..n.
        #[arg(long)]
        sig: Option<String>,
    },
    /// Print the fragment of a formula.
    Classify {
        #[arg(short = 'f', long)]
        formula: String,
        #[command(flatten)]
        sig: SigArgs,
    },
    /// Compare two formulas on every model up to a size bound; exit status 1 on a counterexample.
    Equiv {
        #[arg(long = "f1")]
        f1: String,
        #[arg(long = "f2")]
        f2: String,
        #[command(flatten)]
        sig: SigArgs,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Probabilistic dependence and independence atoms.
    Atoms {
        #[command(subcommand)]
        cmd: AtomsCmd,
    },
    /// Conic discriminant for a probability strictly between 0 and 1.
    Discriminant {
        #[arg(long)]
        delta: String,
    },
    /// Stream every model up to a size bound, one JSON object per line.
    Enumerate {
        #[command(flatten)]
        sig: SigArgs,
        #[arg(long, default_value_t = 2)]
        max_size: usize,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Seeded random formulas or inequality systems.
    Corpus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// A fragment name (`P-`, `P`, `P(=>)`, `P([])`, `PCO`, `EXTENDED`) or an inequality class.
        #[arg(long, default_value = "PCO")]
        kind: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[command(flatten)]
        sig: SigArgs,
    },
}

#[derive(Subcommand)]
enum AtomsCmd {
    /// Print the formula for an atom, e.g. `--kind cindep --vars "X;Y|Z"`.
    Expand {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        vars: String,
        #[command(flatten)]
        sig: SigArgs,
    },
}

#[derive(Args)]
struct SigArgs {
    /// Signature as a JSON file, inline JSON, or a model file.
    #[arg(long = "sig")]
    sig: Option<String>,
}

#[derive(Args)]
struct ModeArgs {
    #[arg(long, value_enum, default_value_t = Mode::AllLaws)]
    mode: Mode,
    /// Model file supplying the laws for `--mode fixed-laws`.
    #[arg(long = "fixed")]
    fixed: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Rowwise,
    Split,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pass {
    SupsetNf,
    PushBox,
    Relativize,
}

#[derive(Clone, Copy, ValueEnum)]
#[allow(clippy::enum_variant_names)]
enum Mode {
    AllLaws,
    FixedLaws,
    NoLaws,
}

fn parse_class(s: &str) -> Result<IneqClass, String> {
    IneqClass::from_name(s).ok_or_else(|| format!("unknown class `{s}`"))
}

enum Failure {
    Input(String),
    Guard(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_guard() {
            Failure::Guard(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Out = Result<ExitCode, Failure>;

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_model(path: &PathBuf) -> Result<CausalMultiteam, Failure> {
    Ok(model_from_json(&read(path)?)?)
}

fn load_signature(arg: &str) -> Result<Signature, Failure> {
    let text = if arg.trim_start().starts_with('{') { arg.to_string() } else { read(&PathBuf::from(arg))? };
    Ok(signature_from_json(&text)?)
}

/// The supplied signature, or one read off the formulas' literals.
fn signature(args: &SigArgs, formulas: &[&str]) -> Result<Arc<Signature>, Failure> {
    match &args.sig {
        Some(s) => Ok(Arc::new(load_signature(s)?)),
        None => Ok(Arc::new(infer_signature(&formulas.join(" and "))?)),
    }
}

fn law_mode(m: &ModeArgs, sig: &Arc<Signature>) -> Result<LawMode, Failure> {
    Ok(match m.mode {
        Mode::AllLaws => LawMode::AllLaws,
        Mode::NoLaws => LawMode::NoLaws,
        Mode::FixedLaws => {
            let path = m.fixed.as_ref().ok_or_else(|| Failure::Input("--mode fixed-laws needs --fixed MODEL".into()))?;
            let t = load_model(path)?;
            if t.signature().as_ref() != sig.as_ref() {
                return Err(Error::SignatureMismatch.into());
            }
            LawMode::FixedLaws(t.laws().clone())
        }
    })
}

fn guard() -> Result<Guard, Failure> {
    Ok(Guard::from_env()?)
}

fn emit(json: bool, plain: impl std::fmt::Display, value: serde_json::Value) {
    if json {
        println!("{value}");
    } else {
        println!("{plain}");
    }
}

fn verdict_code(v: bool) -> ExitCode {
    if v {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn var_list(text: &str, sig: &Signature) -> Result<Vec<VarId>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|name| sig.var_index(name).ok_or_else(|| Error::UnknownVariable(name.into()).into()))
        .collect()
}

fn run(cli: Cli) -> Out {
    let json = cli.json;
    match cli.cmd {
        Cmd::Check { model, formula, strategy, literal_conditioning, trace } => {
            let t = load_model(&model)?;
            let f = parse(&formula, t.signature())?;
            let cfg = EvalConfig {
                co_strategy: match strategy {
                    Strategy::Rowwise => CoStrategy::Rowwise,
                    Strategy::Split => CoStrategy::SplitSearch,
                },
                literal_conditioning,
                ..EvalConfig::default()
            };
            if trace {
                let (v, entries) = eval_traced(&t, &f, &cfg)?;
                if json {
                    let steps: Vec<_> = entries
                        .iter()
                        .map(|e| json!({"depth": e.depth, "formula": e.formula, "size": e.size, "verdict": e.verdict}))
                        .collect();
                    println!("{}", json!({"verdict": v, "trace": steps}));
                } else {
                    for e in &entries {
                        println!("{}{} [{}] {}", "  ".repeat(e.depth), e.verdict, e.size, e.formula);
                    }
                    println!("{v}");
                }
                return Ok(verdict_code(v));
            }
            let v = eval(&t, &f, &cfg)?;
            emit(json, v, json!({"verdict": v}));
            Ok(verdict_code(v))
        }
        Cmd::Rewrite { pass, formula, sig, laws } => {
            let (sig, laws) = match (&laws, pass) {
                (Some(path), _) => {
                    let t = load_model(path)?;
                    (t.signature().clone(), Some(t.laws().clone()))
                }
                (None, Pass::Relativize) => return Err(Failure::Input("relativize needs --laws MODEL".into())),
                (None, _) => (signature(&sig, &[&formula])?, None),
            };
            let f = parse(&formula, &sig)?;
            let g = match pass {
                Pass::SupsetNf => supset_normal_form(&f)?,
                Pass::PushBox => push_boxright(&f, &sig)?,
                Pass::Relativize => Formula::Pco(relativize(&f, laws.as_ref().expect("checked above"), &sig)?),
            };
            let text = print(&g, &sig);
            emit(json, &text, json!({"formula": text, "fragment": classify_fragment(&g).name()}));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Extract { formula, sig, laws, prune } => {
            let (sig, laws) = match &laws {
                Some(path) => {
                    let t = load_model(path)?;
                    (t.signature().clone(), Some(t.laws().clone()))
                }
                None => (signature(&sig, &[&formula])?, None),
            };
            guard()?.check_states(&sig)?;
            let f = parse(&formula, &sig)?;
            let mut set = extract(&f, &sig, laws.as_ref())?;
            if let Some(d) = prune {
                set = set.prune_empty_branches(d);
            }
            let class = set.class().name();
            if json {
                println!("{}", json!({"set": set_to_json(&set), "class": class}));
            } else {
                println!("{}", set_to_json(&set));
                println!("class: {class}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Synth { input, target, sig } => {
            let set = set_from_json::<BigInt>(&read(&input)?)?;
            let sig = match sig {
                Some(s) => load_signature(&s)?,
                None => {
                    let values: Vec<i64> = (1..=set.n as i64).collect();
                    Signature::int_ranges(&[("S", &values)])?
                }
            };
            let f = Formula::Pco(synth(&set, target, &sig)?);
            let text = print(&f, &sig);
            emit(json, &text, json!({"formula": text, "fragment": classify_fragment(&f).name()}));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Classify { formula, sig } => {
            let sig = signature(&sig, &[&formula])?;
            let label = classify_fragment(&parse(&formula, &sig)?).name();
            emit(json, label, json!({"fragment": label}));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Equiv { f1, f2, sig, max_size, mode } => {
            let sig = signature(&sig, &[&f1, &f2])?;
            let (f, g) = (parse(&f1, &sig)?, parse(&f2, &sig)?);
            let mode = law_mode(&mode, &sig)?;
            match equiv(&f, &g, &sig, max_size, &mode, &guard()?)? {
                None => {
                    emit(json, "pass", json!({"result": "pass"}));
                    Ok(ExitCode::SUCCESS)
                }
                Some(c) => {
                    let mut value = c.to_json();
                    value["result"] = json!("counterexample");
                    if json {
                        println!("{value}");
                    } else {
                        println!("counterexample: {c}");
                        println!("{}", serde_json::to_string_pretty(&value["model"]).expect("json"));
                    }
                    Ok(ExitCode::from(1))
                }
            }
        }
        Cmd::Atoms { cmd: AtomsCmd::Expand { kind, vars, sig } } => {
            let kind = AtomKind::from_name(&kind).ok_or_else(|| Failure::Input(format!("unknown atom kind `{kind}`")))?;
            let (main, cond) = match vars.split_once('|') {
                Some((a, b)) => (a, b),
                None => (vars.as_str(), ""),
            };
            let (xs, ys) = main.split_once(';').ok_or_else(|| Failure::Input("--vars must look like `X;Y` or `X;Y|Z`".into()))?;
            let sig = match &sig.sig {
                Some(s) => Arc::new(load_signature(s)?),
                None => {
                    let mut names: Vec<&str> = Vec::new();
                    for n in [xs, ys, cond].iter().flat_map(|p| p.split(',')).map(str::trim).filter(|s| !s.is_empty()) {
                        if !names.contains(&n) {
                            names.push(n);
                        }
                    }
                    Arc::new(Signature::binary(&names)?)
                }
            };
            let (xs, ys, zs) = (var_list(xs, &sig)?, var_list(ys, &sig)?, var_list(cond, &sig)?);
            let f = Formula::Pco(expand_atom(kind, &xs, &ys, &zs, &sig)?);
            let text = print(&f, &sig);
            emit(json, &text, json!({"formula": text, "fragment": classify_fragment(&f).name()}));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Discriminant { delta } => {
            let d: Rational = delta
                .trim()
                .parse()
                .ok()
                .or_else(|| parse_decimal(delta.trim()))
                .ok_or_else(|| Failure::Input(format!("`{delta}` is not a rational number")))?;
            let value = rational(&conic_discriminant(&d)?);
            emit(json, &value, json!({"delta": rational(&d), "discriminant": value}));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Enumerate { sig, max_size, mode } => {
            let text = sig.sig.as_deref().ok_or_else(|| Failure::Input("enumerate needs --sig".into()))?;
            let sig = Arc::new(load_signature(text)?);
            let mode = law_mode(&mode, &sig)?;
            for t in enumerate_models(&sig, max_size, &mode, &guard()?)? {
                println!("{}", model_to_json(&t));
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Corpus { seed, count, kind, depth, sig } => {
            let sig = match &sig.sig {
                Some(s) => Arc::new(load_signature(s)?),
                None => Arc::new(Signature::binary(&["X", "Y"])?),
            };
            let mut r = rng(seed);
            if let Some(frag) = FragmentLabel::from_name(&kind) {
                for _ in 0..count {
                    let text = print(&Formula::Pco(random_pco(&mut r, &sig, depth, frag)), &sig);
                    emit(json, &text, json!({"formula": text}));
                }
            } else if let Some(class) = IneqClass::from_name(&kind) {
                for _ in 0..count {
                    println!("{}", set_to_json(&random_set(&mut r, sig.num_states(), class)));
                }
            } else {
                return Err(Failure::Input(format!("`{kind}` is neither a fragment nor an inequality class")));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Accepts `-f1`/`-f2` as spellings of `--f1`/`--f2`.
fn normalize_args() -> Vec<String> {
    std::env::args()
        .map(|a| match a.as_str() {
            "-f1" => "--f1".to_string(),
            "-f2" => "--f2".to_string(),
            _ => a,
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse_from(normalize_args());
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Guard(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
