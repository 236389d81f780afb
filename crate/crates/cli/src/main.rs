//! `realiz`: batch front end for the realizability toolkit.
//!
//! Every command prints one report (JSON by default) and exits with 0 on a
//! definite outcome, 1 on an error, and 2 when the outcome is still open:
//! Unknown, fuel exhausted, or equal so far.

mod demo;
mod inputs;

use std::io::Write;
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use realiz::classify::{classify_report, in_class, FormulaClass};
use realiz::compact::{image_code, select_across, CompactCode, CompactError};
use realiz::formula::FunTerm;
use realiz::k2::{apply_fun, apply_num, associate_of, use_trace, Baire, EvalFault, PartialResult, TraceError};
use realiz::nat::Nat;
use realiz::translate::{sequential_form, translate, Mode};
use realiz::witness::{
    extract_choice, extract_choice_lrf, Battery, Bounds, CheckResult, Checker, Truth, WitnessError,
};

#[derive(Parser, Debug)]
#[command(name = "realiz", version, about = "Function realizability, the second Kleene algebra and constructive analysis demos")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Config {
    /// Prefix interrogation limit per application; also the stage limit for comparisons.
    #[arg(long, global = true, default_value_t = 64)]
    pub fuel: u64,
    /// Instances checked per number quantifier, and tree depth for compact sets and cuts.
    #[arg(long, global = true, default_value_t = 8)]
    pub depth: u64,
    /// Approximation stage for square roots and polynomial roots.
    #[arg(long, global = true, default_value_t = 20)]
    pub stage: u64,
    /// Seed of the random elements in the function-quantifier battery.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Node length at which compact realizers are represented.
    #[arg(long, global = true, default_value_t = 4)]
    pub fan_depth: u64,
    /// Candidates tried for an unbounded number witness.
    #[arg(long, global = true, default_value_t = 256)]
    pub search: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Rf,
    Lrf,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Rf => Mode::Kleene,
            ModeArg::Lrf => Mode::Lifschitz,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum DemoKind {
    Dichotomy,
    Trichotomy,
    Dedekind,
    Sqrt,
    Fta,
    Cramer,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a formula file and print it normalized and desugared.
    Parse { file: String },
    /// Membership of a formula in every syntactic class.
    Classify { file: String },
    /// `α rf A` or `α lrf A` for the formula in FILE.
    Translate {
        file: String,
        #[arg(long, value_enum, default_value = "rf")]
        mode: ModeArg,
        /// Name of the realizer variable.
        #[arg(long, default_value = "alpha")]
        realizer: String,
    },
    /// The sequential form `∀ξ(∀n B(ξ_n) → ∃ζ ∀n A(ξ_n, ζ_n))`.
    Seqform {
        /// Formula file for `B(ξ)`.
        #[arg(long)]
        hyp: String,
        /// Formula file for `A(ξ, ζ)`.
        #[arg(long)]
        concl: String,
        #[arg(long, default_value = "xi")]
        xi: String,
        #[arg(long, default_value = "zeta")]
        zeta: String,
    },
    /// `α(β)`, or `α|β` to `--depth` positions with `--function`.
    EvalApp {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        function: bool,
    },
    /// Compact sets coded as (bound, test) pairs.
    Compact {
        #[command(subcommand)]
        op: CompactOp,
    },
    /// Whether an element realizes the formula in FILE.
    Check {
        file: String,
        #[arg(long, value_enum, default_value = "rf")]
        mode: ModeArg,
        #[arg(long)]
        realizer: String,
        /// JSON object binding the free variables.
        #[arg(long)]
        env: Option<String>,
    },
    /// Desk-scale truth, the canonical self-realizer, and its check.
    Omega {
        file: String,
        #[arg(long, value_enum, default_value = "rf")]
        mode: ModeArg,
        #[arg(long)]
        env: Option<String>,
    },
    /// The choice function `ζ` from a realizer of `∀ξ(B(ξ) → ∃ζ A(ξ, ζ))`.
    Extract {
        /// Formula file for `B(ξ)`.
        #[arg(long)]
        hyp: String,
        #[arg(long)]
        realizer: String,
        /// The input element `ξ`.
        #[arg(long)]
        xi: String,
        #[arg(long, default_value = "xi")]
        xi_var: String,
        #[arg(long, value_enum, default_value = "rf")]
        mode: ModeArg,
        #[arg(long)]
        env: Option<String>,
    },
    /// Exact constructive-analysis demos on JSON input (inline or a file).
    Demo {
        #[arg(value_enum)]
        kind: DemoKind,
        input: String,
    },
}

#[derive(Subcommand, Debug)]
enum CompactOp {
    /// Whether ξ passes every test up to `--depth`.
    Member {
        #[arg(long)]
        code: String,
        #[arg(long)]
        xi: String,
    },
    /// The leftmost admissible node of length `--depth`.
    Path {
        #[arg(long)]
        code: String,
    },
    /// The image of the set under `φ|·`.
    Image {
        #[arg(long)]
        code: String,
        /// The associate `φ`.
        #[arg(long, conflicts_with = "map", required_unless_present = "map")]
        phi: Option<String>,
        /// A built-in map whose canonical associate is used.
        #[arg(long)]
        map: Option<String>,
    },
    /// The leftmost node of length `--depth` in each code.
    Select {
        #[arg(long = "code", required = true)]
        codes: Vec<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Parse { .. } => "parse",
            Command::Classify { .. } => "classify",
            Command::Translate { .. } => "translate",
            Command::Seqform { .. } => "seqform",
            Command::EvalApp { .. } => "eval-app",
            Command::Compact { .. } => "compact",
            Command::Check { .. } => "check",
            Command::Omega { .. } => "omega",
            Command::Extract { .. } => "extract",
            Command::Demo { .. } => "demo",
        }
    }
}

/// A command's outcome: the report body and whether it is still open.
pub struct Report {
    pub body: Value,
    pub open: bool,
}

impl Report {
    pub fn done(body: Value) -> Self {
        Report { body, open: false }
    }
}

fn nat_json(n: &Nat) -> Value {
    use num_traits::ToPrimitive;
    n.to_u64().map_or_else(|| Value::String(n.to_string()), Value::from)
}

fn seq_json(s: &[Nat]) -> Value {
    Value::Array(s.iter().map(nat_json).collect())
}

fn checker(cfg: &Config, mode: Mode) -> Checker {
    let bounds = Bounds { fuel: cfg.fuel, depth: cfg.depth, fan_depth: cfg.fan_depth, search: cfg.search };
    Checker::new(mode, bounds, Battery::standard(cfg.seed))
}

fn check_json(r: &CheckResult) -> Result<Value> {
    Ok(serde_json::to_value(r)?)
}

/// The first `depth` values of an element; a fault ends the list and is reported.
fn prefix_json(b: &Baire, depth: u64) -> (Value, Option<EvalFault>) {
    let mut out = Vec::new();
    for n in 0..depth {
        match b.at(n) {
            Ok(v) => out.push(nat_json(&v)),
            Err(e) => return (Value::Array(out), Some(e)),
        }
    }
    (Value::Array(out), None)
}

fn fault_is_fuel(e: &EvalFault) -> bool {
    matches!(e, EvalFault::FuelExhausted { .. })
}

/// Errors that only say "not within fuel" become open outcomes.
fn is_fuel(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        if let Some(f) = c.downcast_ref::<EvalFault>() {
            return fault_is_fuel(f);
        }
        if let Some(CompactError::Fault(f)) = c.downcast_ref::<CompactError>() {
            return fault_is_fuel(f);
        }
        match c.downcast_ref::<WitnessError>() {
            Some(WitnessError::Fault(f)) | Some(WitnessError::Compact(CompactError::Fault(f))) => fault_is_fuel(f),
            _ => false,
        }
    })
}

fn run(cmd: Command, cfg: &Config) -> Result<Report> {
    match cmd {
        Command::Parse { file } => {
            let f = inputs::read_formula(&file)?;
            let fv = f.free_vars();
            let d = f.desugar();
            Ok(Report::done(json!({
                "formula": f.to_string(),
                "desugared": d.to_string(),
                "free_num": fv.num,
                "free_fun": fv.fun,
                "size": f.size(),
            })))
        }
        Command::Classify { file } => {
            let f = inputs::read_formula(&file)?;
            Ok(Report::done(serde_json::to_value(classify_report(&f))?))
        }
        Command::Translate { file, mode, realizer } => {
            let f = inputs::read_formula(&file)?;
            let mode = Mode::from(mode);
            let t = translate(mode, &FunTerm::var(realizer.clone()), &f);
            Ok(Report::done(json!({
                "mode": mode.name(),
                "realizer": realizer,
                "formula": f.to_string(),
                "translated": t.to_string(),
                "report": classify_report(&t),
            })))
        }
        Command::Seqform { hyp, concl, xi, zeta } => {
            let b = inputs::read_formula(&hyp)?;
            let a = inputs::read_formula(&concl)?;
            let sf = sequential_form(&b, &a, &xi, &zeta)?;
            Ok(Report::done(json!({
                "hypothesis": b.to_string(),
                "conclusion": a.to_string(),
                "hypothesis_nk": in_class(&b, FormulaClass::NK),
                "conclusion_gamma_k": in_class(&a, FormulaClass::GammaK),
                "formula": sf.to_string(),
                "report": classify_report(&sf),
            })))
        }
        Command::EvalApp { alpha, beta, function } => {
            let (a, b) = (inputs::element(&alpha)?, inputs::element(&beta)?);
            if function {
                let (values, fault) = prefix_json(&apply_fun(&a, &b, cfg.fuel), cfg.depth);
                let open = fault.as_ref().is_some_and(fault_is_fuel);
                if let Some(e) = fault.as_ref().filter(|e| !fault_is_fuel(e)) {
                    return Err(anyhow!("{e}"));
                }
                return Ok(Report {
                    body: json!({
                        "alpha": alpha, "beta": beta, "fuel": cfg.fuel, "depth": cfg.depth,
                        "values": values, "stopped": fault.map(|e| e.to_string()),
                    }),
                    open,
                });
            }
            let r = apply_num(&a, &b, cfg.fuel)?;
            let trace = match use_trace(&a, &b, cfg.fuel) {
                Ok(n) => Some(n),
                Err(TraceError::Undefined(_)) => None,
                Err(e) => return Err(e.into()),
            };
            let open = matches!(r, PartialResult::FuelExhausted { .. });
            Ok(Report {
                body: json!({"alpha": alpha, "beta": beta, "fuel": cfg.fuel, "result": r, "use_trace": trace}),
                open,
            })
        }
        Command::Compact { op } => compact(op, cfg),
        Command::Check { file, mode, realizer, env } => {
            let f = inputs::read_formula(&file)?;
            let env = inputs::environment(env.as_deref())?;
            let c = checker(cfg, mode.into());
            let r = c.realizes(&inputs::element(&realizer)?, &f, &env)?;
            let open = matches!(r, CheckResult::Unknown { .. });
            Ok(Report {
                body: json!({
                    "formula": f.to_string(), "mode": c.mode.name(), "realizer": realizer,
                    "bounds": c.bounds, "check": check_json(&r)?,
                }),
                open,
            })
        }
        Command::Omega { file, mode, env } => {
            let f = inputs::read_formula(&file)?;
            let env = inputs::environment(env.as_deref())?;
            let c = checker(cfg, mode.into());
            let truth = c.decide(&f, &env)?;
            let w = c.build_omega(&f, &env)?;
            let r = c.realizes(&w, &f, &env)?;
            let (prefix, _) = prefix_json(&w, cfg.depth);
            let open = truth == Truth::Unknown || matches!(r, CheckResult::Unknown { .. });
            Ok(Report {
                body: json!({
                    "formula": f.to_string(), "mode": c.mode.name(), "bounds": c.bounds,
                    "truth": truth, "omega_prefix": prefix, "check": check_json(&r)?,
                }),
                open,
            })
        }
        Command::Extract { hyp, realizer, xi, xi_var, mode, env } => {
            let b = inputs::read_formula(&hyp)?;
            let env = inputs::environment(env.as_deref())?;
            let c = checker(cfg, mode.into());
            let (beta, xi_elem) = (inputs::element(&realizer)?, inputs::element(&xi)?);
            match c.mode {
                Mode::Kleene => {
                    let zeta = extract_choice(&c, &beta, &b, &xi_var, &xi_elem, &env)?;
                    let (values, fault) = prefix_json(&zeta, cfg.depth);
                    if let Some(e) = fault.as_ref().filter(|e| !fault_is_fuel(e)) {
                        return Err(anyhow!("{e}"));
                    }
                    Ok(Report {
                        open: fault.is_some(),
                        body: json!({
                            "mode": c.mode.name(), "hypothesis": b.to_string(), "realizer": realizer, "xi": xi,
                            "depth": cfg.depth, "zeta": values, "stopped": fault.map(|e| e.to_string()),
                        }),
                    })
                }
                Mode::Lifschitz => {
                    let image = extract_choice_lrf(&c, &beta, &b, &xi_var, &xi_elem, &env, cfg.depth)?;
                    let images: Vec<Value> = image.images.iter().map(|s| seq_json(s)).collect();
                    Ok(Report::done(json!({
                        "mode": c.mode.name(), "hypothesis": b.to_string(), "realizer": realizer, "xi": xi,
                        "image_depth": image.depth, "witness_prefixes": images,
                    })))
                }
            }
        }
        Command::Demo { kind, input } => demo::run(kind, &inputs::json_arg(&input)?, cfg),
    }
}

fn compact(op: CompactOp, cfg: &Config) -> Result<Report> {
    let d = cfg.depth;
    match op {
        CompactOp::Member { code, xi } => {
            let c = inputs::code(&code)?;
            let member = c.member_at_depth(&inputs::element(&xi)?, d)?;
            Ok(Report::done(json!({"code": code, "xi": xi, "depth": d, "member": member})))
        }
        CompactOp::Path { code } => {
            let c = inputs::code(&code)?;
            let status = c.nonempty_to_depth(d)?;
            let path = c.leftmost_path(d)?;
            Ok(Report::done(json!({
                "code": code, "depth": d, "nonemptiness": status, "path": path.as_deref().map(seq_json),
            })))
        }
        CompactOp::Image { code, phi, map } => {
            let c = inputs::code(&code)?;
            let (label, phi) = match (phi, map) {
                (Some(p), _) => (p.clone(), inputs::element(&p)?),
                (None, Some(m)) => (format!("assoc:{m}"), associate_of(&inputs::named_map(&m)?)),
                (None, None) => return Err(anyhow!("give --phi or --map")),
            };
            let image = image_code(&phi, &c, d, cfg.fuel)?;
            let images: Vec<Value> = image.images.iter().map(|s| seq_json(s)).collect();
            Ok(Report::done(json!({
                "code": code, "phi": label, "depth": d, "image_depth": image.depth, "images": images,
            })))
        }
        CompactOp::Select { codes } => {
            let parsed: Vec<CompactCode> = codes.iter().map(|c| inputs::code(c)).collect::<Result<_>>()?;
            let sel = select_across(move |n| parsed[n as usize].clone(), codes.len() as u64, d)?;
            let sel: Vec<Value> = sel.iter().map(|s| seq_json(s)).collect();
            Ok(Report::done(json!({"codes": codes, "depth": d, "selection": sel})))
        }
    }
}

/// JSON pretty-printed, or one `key: value` line per top-level field.
fn render(body: &Map<String, Value>, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(body).expect("JSON values serialize"),
        Format::Text => body
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}"),
                other => format!("{k}: {other}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    let cfg = cli.config.clone();
    let command = cli.command.name();
    let (mut body, code) = match run(cli.command, &cfg) {
        Ok(report) => {
            let body = match report.body {
                Value::Object(m) => m,
                other => Map::from_iter([("result".to_string(), other)]),
            };
            (body, if report.open { 2 } else { 0 })
        }
        Err(e) if is_fuel(&e) => (Map::from_iter([("error".to_string(), Value::from(format!("{e:#}")))]), 2),
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    body.insert("command".into(), Value::from(command));
    body.insert("seed".into(), Value::from(cfg.seed));
    body.insert("status".into(), Value::from(if code == 0 { "definite" } else { "open" }));
    // a closed pipe downstream is not an error of the command
    let _ = writeln!(std::io::stdout().lock(), "{}", render(&body, cfg.format));
    ExitCode::from(code)
}
