//! `transurf`: classify surfaces, verify and implicitize translational
//! parametrizations, parametrize space curves and run the generator
//! self-test.
//!
//! Exit codes: 0 the command completed (a classification, even
//! `undecided`, is a result), 2 input could not be parsed, 3 unsupported
//! input or exhausted budget, 4 internal invariant violation.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use transurf_core::curve::{parametrize_space_curve, CurveConfig, SpaceCurveSystem};
use transurf_core::expr::{coord_texts, parse_param_triple, parse_poly, ParseError, ResultDocument};
use transurf_core::genlab::{implicitize, roundtrip_check, GenError, InstanceSpec, DEFAULT_DEGREE_BUDGET};
use transurf_core::surface::{
    check_certificate, classify_surface, jacobian_rank_two, verify_surface_param, Classification, Config, Route,
};
use transurf_core::{CurveParam, MPoly, SurfaceParam, VarSet};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "transurf", version, about = "Translational parametrizations of algebraic surfaces")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Opts {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Text)]
    format: OutFormat,
    /// Names of the three space variables, comma separated.
    #[arg(long, global = true, default_value = "x1,x2,x3")]
    vars: String,
    /// Number of candidate vectors tried before giving up.
    #[arg(long, global = true, default_value_t = 25)]
    vector_budget: usize,
    /// Number of sample pairs tried per vector on the shortcut route.
    #[arg(long, global = true, default_value_t = 10)]
    pair_budget: usize,
    /// Cap on the total degree of implicitization eliminants.
    #[arg(long, global = true, default_value_t = DEFAULT_DEGREE_BUDGET)]
    degree_budget: u32,
    /// Seed for the randomized parts of the search and the generator.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// How the second curve is computed: shortcut, general or both.
    #[arg(long, global = true, default_value = "shortcut")]
    route: Route,
    /// Height bound for the rational-point search on conics.
    #[arg(long, global = true, default_value_t = 20)]
    conic_height: u32,
    /// Read the input polynomial from a file instead of the command line.
    #[arg(long, global = true)]
    file: Option<PathBuf>,
    /// Include per-instance timings in self-test reports.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Classify f = 0 as plane, cylinder, translational or undecided.
    Analyze { expr: Option<String> },
    /// Check f(P1(t1) + P2(t2)) = 0 exactly.
    Verify {
        expr: Option<String>,
        #[arg(long)]
        p1: String,
        #[arg(long)]
        p2: String,
    },
    /// Implicit equation of P1(t1) + P2(t2).
    Implicitize {
        #[arg(long)]
        p1: String,
        #[arg(long)]
        p2: String,
    },
    /// Rational parametrization of the space curve g1 = g2 = 0.
    CurveParam { g1: String, g2: String },
    /// Generate, classify and verify seeded random instances.
    Selftest {
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
}

enum Failure {
    Parse(String),
    Unsupported(String),
    Budget(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Unsupported(_) | Failure::Budget(_) => 3,
            Failure::Internal(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Parse(_) => "parse",
            Failure::Unsupported(_) => "unsupported",
            Failure::Budget(_) => "budget",
            Failure::Internal(_) => "internal",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Unsupported(m) | Failure::Budget(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e.to_string())
    }
}

/// Rendered result: text for stdout, its structured twin, and diagnostics
/// (stderr in text mode).
struct Output {
    text: String,
    structured: Value,
    diagnostics: Vec<String>,
}

impl Opts {
    fn config(&self) -> Config {
        Config {
            vector_budget: self.vector_budget,
            pair_budget: self.pair_budget,
            curve: CurveConfig { conic_height: self.conic_height },
            seed: self.seed,
            route: self.route,
            vectors: None,
        }
    }

    fn user_vars(&self) -> Result<VarSet, Failure> {
        let names: Vec<&str> = self.vars.split(',').map(str::trim).collect();
        if names.len() != 3 {
            return Err(Failure::Parse(format!("--vars needs three names, got {}", names.len())));
        }
        VarSet::new(names).map_err(|e| Failure::Parse(e.to_string()))
    }

    /// Polynomial from the positional argument or `--file`, in canonical variables.
    fn poly(&self, inline: Option<&str>) -> Result<MPoly, Failure> {
        let text = match (inline, &self.file) {
            (Some(s), None) => s.to_string(),
            (None, Some(path)) => std::fs::read_to_string(path)
                .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?,
            (Some(_), Some(_)) => return Err(Failure::Parse("give the polynomial inline or via --file, not both".into())),
            (None, None) => return Err(Failure::Parse("missing polynomial (inline or --file)".into())),
        };
        self.parse_space(text.trim())
    }

    fn parse_space(&self, text: &str) -> Result<MPoly, Failure> {
        Ok(parse_poly(text, &self.user_vars()?)?.rename(&VarSet::space()))
    }

    fn show(&self, p: &MPoly) -> Result<String, Failure> {
        Ok(p.rename(&self.user_vars()?).to_string())
    }
}

/// Triple in a single parameter, whatever its name.
fn triple(text: &str) -> Result<CurveParam, Failure> {
    match parse_param_triple(text, "t") {
        Err(ParseError::MultipleParameters { found, .. }) => Ok(parse_param_triple(text, &found)?),
        r => Ok(r?),
    }
}

fn envelope(fields: Value) -> Value {
    let mut v = json!({ "schema_version": SCHEMA_VERSION });
    if let (Some(obj), Value::Object(more)) = (v.as_object_mut(), fields) {
        obj.extend(more);
    }
    v
}

fn document(doc: ResultDocument) -> Result<Output, Failure> {
    doc.validate().map_err(|e| Failure::Internal(format!("emitted document is invalid: {e}")))?;
    Ok(Output {
        text: doc.to_text(),
        structured: serde_json::to_value(&doc).expect("serializable"),
        diagnostics: doc.diagnostics.clone(),
    })
}

fn analyze(opts: &Opts, expr: Option<&str>) -> Result<Output, Failure> {
    let f = opts.poly(expr)?;
    let c = classify_surface(&f, &opts.config()).map_err(|e| Failure::Unsupported(e.to_string()))?;
    match &c {
        Classification::Translational(sp, cert) => {
            check_certificate(&f, sp, cert).map_err(|e| Failure::Internal(format!("emitted certificate: {e}")))?
        }
        Classification::Plane(sp) if !verify_surface_param(&f, sp) => {
            return Err(Failure::Internal("plane parametrization does not verify".into()))
        }
        _ => {}
    }
    document(ResultDocument::from_classification(&c))
}

fn verify(opts: &Opts, expr: Option<&str>, p1: &str, p2: &str) -> Result<Output, Failure> {
    let f = opts.poly(expr)?;
    let sp = SurfaceParam::new(triple(p1)?, triple(p2)?);
    let ok = verify_surface_param(&f, &sp);
    let mut diagnostics = Vec::new();
    if !ok {
        diagnostics.push(if jacobian_rank_two(&sp) {
            "f(P1(t1) + P2(t2)) is not identically zero".to_string()
        } else {
            "the Jacobian of P1(t1) + P2(t2) has rank below 2".to_string()
        });
    } else if !sp.is_standard() {
        diagnostics.push("P2 is not in standard form (P2(0) = 0, P2'(0) != 0)".into());
    }
    Ok(Output {
        text: format!("{ok}\n"),
        structured: envelope(json!({ "verified": ok, "diagnostics": diagnostics })),
        diagnostics,
    })
}

fn implicit(opts: &Opts, p1: &str, p2: &str) -> Result<Output, Failure> {
    let sp = SurfaceParam::new(triple(p1)?, triple(p2)?);
    let f = implicitize(&sp, opts.degree_budget).map_err(|e| match e {
        GenError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
        other => Failure::Unsupported(other.to_string()),
    })?;
    let shown = opts.show(&f)?;
    Ok(Output {
        text: format!("{shown}\n"),
        structured: envelope(json!({ "implicit": shown, "diagnostics": [] })),
        diagnostics: Vec::new(),
    })
}

fn curve_param(opts: &Opts, g1: &str, g2: &str) -> Result<Output, Failure> {
    let sys = SpaceCurveSystem::new(opts.parse_space(g1)?, opts.parse_space(g2)?)
        .map_err(|e| Failure::Unsupported(e.to_string()))?;
    let p = parametrize_space_curve(&sys, &opts.config().curve).map_err(|e| Failure::Unsupported(e.to_string()))?;
    Ok(Output {
        text: format!("{p}\n"),
        structured: envelope(json!({ "curve": coord_texts(&p), "diagnostics": [] })),
        diagnostics: Vec::new(),
    })
}

fn selftest(opts: &Opts, count: usize) -> Result<Output, Failure> {
    let spec = InstanceSpec { degree_budget: opts.degree_budget, seed: opts.seed, ..InstanceSpec::default() };
    spec.validate().map_err(|e| Failure::Budget(e.to_string()))?;
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let report = roundtrip_check(&spec, count, &opts.config(), threads);
    let mut text = report.to_report_text();
    if !opts.timings {
        text.timings_ms.clear();
    }
    let mut doc = ResultDocument::new("report");
    doc.report = Some(text);
    doc.diagnostics = report.failures;
    document(doc)
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let opts = &cli.opts;
    match &cli.command {
        Command::Analyze { expr } => analyze(opts, expr.as_deref()),
        Command::Verify { expr, p1, p2 } => verify(opts, expr.as_deref(), p1, p2),
        Command::Implicitize { p1, p2 } => implicit(opts, p1, p2),
        Command::CurveParam { g1, g2 } => curve_param(opts, g1, g2),
        Command::Selftest { count } => selftest(opts, *count),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let structured = cli.opts.format == OutFormat::Structured;
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(&cli)))
        .unwrap_or_else(|_| Err(Failure::Internal("panic during evaluation".into())));
    match outcome {
        Ok(out) => {
            if structured {
                println!("{}", serde_json::to_string_pretty(&out.structured).expect("serializable"));
            } else {
                print!("{}", out.text);
                for d in &out.diagnostics {
                    eprintln!("{d}");
                }
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            if structured {
                let payload = envelope(json!({ "error": { "kind": failure.kind(), "message": failure.message() } }));
                println!("{}", serde_json::to_string_pretty(&payload).expect("serializable"));
            } else {
                eprintln!("error ({}): {}", failure.kind(), failure.message());
            }
            ExitCode::from(failure.code())
        }
    }
}
