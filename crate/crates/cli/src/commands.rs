use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use jacobi_core::algebra::VectorJson;
use jacobi_core::diagram::{enumerate_with, EnumerateOptions, RawDiagram};
use jacobi_core::lie::builtin;
use jacobi_core::rational::format;
use jacobi_core::verify::{verify_chi_iso, verify_closure_omega, verify_relations, verify_wheeling_suite, Report};
use jacobi_core::{
    cap, chi, closure, connect_sum, omega, BasisStore, DiagramVector, Error, EvalOptions, Grading, MetricLieAlgebra, Piece, Space,
    WeightSystem,
};

/// Exact computations with Jacobi diagrams. Reads JSON from stdin (or
/// `--input`) and writes JSON to stdout (or `--output`).
#[derive(Parser, Debug)]
#[command(name = "jacobi", version)]
pub struct Cli {
    /// Basis cache directory.
    #[arg(long, global = true, env = "JACOBI_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Keep computed bases in memory only.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Read input from this file instead of stdin.
    #[arg(long, short, global = true)]
    pub input: Option<PathBuf>,
    /// Write output to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Largest number of partial states in one enumeration round.
    #[arg(long, global = true, default_value_t = 2_000_000)]
    pub max_states: usize,
    /// Largest accepted contraction cost.
    #[arg(long, global = true, default_value_t = 500_000_000)]
    pub max_cost: u128,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// List the nonzero diagrams of one grading up to isomorphism.
    Enumerate(GradingArgs),
    /// Quotient basis of one graded piece.
    Basis(GradingArgs),
    /// Coordinates of a vector in the quotient bases.
    Reduce,
    /// Symmetrization map from B to A.
    Chi,
    /// Sum over all pairings of the legs.
    Close,
    /// Cap product; stdin holds {"left": C, "right": x}.
    Cap,
    /// Wheels element truncated at vmax internal vertices.
    Omega {
        #[arg(long)]
        vmax: usize,
    },
    /// Connected sum in A; stdin holds {"left": x, "right": y}.
    ConnectSum,
    /// Weight system value of a diagram or vector.
    Eval(EvalArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SpaceArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

impl From<SpaceArg> for Space {
    fn from(s: SpaceArg) -> Space {
        match s {
            SpaceArg::A => Space::A,
            SpaceArg::B => Space::B,
        }
    }
}

#[derive(Args, Debug)]
pub struct GradingArgs {
    #[arg(long, value_enum)]
    space: SpaceArg,
    /// Internal vertices.
    #[arg(long)]
    v: Option<usize>,
    /// Legs (B).
    #[arg(long)]
    l: Option<usize>,
    /// Skeleton points (A).
    #[arg(long)]
    e: Option<usize>,
    /// Total vertex count (A basis).
    #[arg(long)]
    total: Option<usize>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Built-in name (`sl2`, `abelian:N`) or path to a JSON description.
    #[arg(long, default_value = "sl2")]
    algebra: String,
    /// Module for diagrams with a skeleton.
    #[arg(long)]
    rep: Option<String>,
    /// Largest number of variables ordered exhaustively.
    #[arg(long, default_value_t = 10)]
    dp_width: usize,
    /// Include the contraction plan (single diagram input only).
    #[arg(long)]
    plan: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Suite {
    Relations,
    ChiIso,
    ClosureOmega,
    Wheeling,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Largest total vertex count (relations, chi-iso).
    #[arg(long, default_value_t = 6)]
    max_total: usize,
    /// Largest total for the legged relation checks pushed through chi.
    #[arg(long, default_value_t = 4)]
    chi_total: usize,
    /// Truncation of the wheels element (closure-omega).
    #[arg(long, default_value_t = 4)]
    vmax: usize,
    #[arg(long, default_value = "sl2")]
    algebra: String,
    #[arg(long, default_value = "fundamental")]
    rep: String,
}

#[derive(Debug)]
pub struct Failure {
    pub code: &'static str,
    pub message: String,
    pub exit: u8,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: "usage",
            message: message.into(),
            exit: 2,
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Failure {
            code: "io",
            message: message.into(),
            exit: 6,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let exit = match &e {
            Error::Format(_) | Error::Rational(_) => 3,
            Error::Diagram(_) | Error::Grading(_) | Error::Lie(_) | Error::Unsupported(_) => 4,
            Error::Resource(_) => 5,
            Error::Io(_) => 6,
        };
        Failure {
            code: e.code(),
            message: e.to_string(),
            exit,
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Error::from(e).into()
    }
}

pub struct Output {
    pub text: String,
    /// False when a verification suite reports a failure.
    pub passed: bool,
}

fn emit<T: Serialize>(value: &T) -> Result<Output, Failure> {
    Ok(Output {
        text: serde_json::to_string_pretty(value)?,
        passed: true,
    })
}

pub fn run(cli: &Cli) -> Result<Output, Failure> {
    let enumerate_opts = EnumerateOptions {
        max_states: cli.max_states,
        ..EnumerateOptions::default()
    };
    let store = || BasisStore::with_options(cache_dir(cli), enumerate_opts.clone());
    match &cli.verb {
        Verb::Enumerate(g) => {
            let (space, grading) = g.grading()?;
            let diagrams: Vec<_> = enumerate_with(space, grading, &enumerate_opts)?.into_iter().map(|c| c.diagram).collect();
            emit(&json!({"count": diagrams.len(), "diagrams": diagrams}))
        }
        Verb::Basis(g) => {
            let b = store().get(g.piece()?)?;
            emit(&json!({
                "piece": b.piece().to_string(),
                "dimension": b.dimension(),
                "basis": b.basis_diagrams(),
            }))
        }
        Verb::Reduce => {
            let x = read_vector(read_input(cli)?)?;
            let store = store();
            let mut pieces = vec![];
            for (piece, coords) in store.reduce(&x)? {
                let b = store.get(piece)?;
                pieces.push(json!({
                    "piece": piece.to_string(),
                    "dimension": b.dimension(),
                    "basis": b.basis_diagrams(),
                    "coordinates": coords.iter().map(format).collect::<Vec<_>>(),
                }));
            }
            emit(&json!({ "pieces": pieces }))
        }
        Verb::Chi => emit(&chi(&read_vector(read_input(cli)?)?)?.to_json()),
        Verb::Close => emit(&closure(&read_vector(read_input(cli)?)?)?.to_json()),
        Verb::Cap => {
            let (c, x) = read_pair(read_input(cli)?)?;
            emit(&cap(&c, &x)?.to_json())
        }
        Verb::Omega { vmax } => emit(&omega(*vmax).vector.to_json()),
        Verb::ConnectSum => {
            let (a, b) = read_pair(read_input(cli)?)?;
            emit(&connect_sum(&a, &b)?.to_json())
        }
        Verb::Eval(args) => {
            let g = load_algebra(&args.algebra)?;
            let opts = EvalOptions {
                max_cost: cli.max_cost,
                dp_width: args.dp_width,
            };
            let ws = WeightSystem::new(&g, args.rep.as_deref())?.with_options(opts);
            let input = read_input(cli)?;
            if is_vector(&input) {
                if args.plan {
                    return Err(Failure::usage("--plan needs a single diagram on input"));
                }
                let value = ws.evaluate_vector(&read_vector(input)?)?;
                return emit(&json!({ "value": format(&value) }));
            }
            let d = serde_json::from_value::<RawDiagram>(input)?.validate().map_err(Error::from)?;
            let value = format(&ws.evaluate(&d)?);
            if args.plan {
                emit(&json!({ "value": value, "plan": ws.plan(&d)? }))
            } else {
                emit(&json!({ "value": value }))
            }
        }
        Verb::Verify(args) => {
            let report = verify(args, &store(), cli.max_cost, &enumerate_opts)?;
            let mut out = emit(&report)?;
            out.passed = report.passed;
            Ok(out)
        }
    }
}

fn verify(args: &VerifyArgs, store: &BasisStore, max_cost: u128, opts: &EnumerateOptions) -> Result<Report, Failure> {
    Ok(match args.suite {
        Suite::Relations => {
            let g = load_algebra(&args.algebra)?;
            let ws = WeightSystem::new(&g, Some(&args.rep))?.with_options(EvalOptions {
                max_cost,
                ..EvalOptions::default()
            });
            verify_relations(&ws, args.max_total, args.chi_total, opts)
        }
        Suite::ChiIso => verify_chi_iso(store, args.max_total),
        Suite::ClosureOmega => verify_closure_omega(store, args.vmax),
        Suite::Wheeling => verify_wheeling_suite(store),
    })
}

impl GradingArgs {
    fn grading(&self) -> Result<(Space, Grading), Failure> {
        let need = |x: Option<usize>, flag: &str| x.ok_or_else(|| Failure::usage(format!("--{flag} is required for space {:?}", self.space)));
        match self.space {
            SpaceArg::A => {
                if self.l.is_some() {
                    return Err(Failure::usage("--l applies to space B"));
                }
                Ok((Space::A, Grading::a(need(self.v, "v")?, need(self.e, "e")?)))
            }
            SpaceArg::B => {
                if self.e.is_some() || self.total.is_some() {
                    return Err(Failure::usage("--e and --total apply to space A"));
                }
                Ok((Space::B, Grading::b(need(self.v, "v")?, need(self.l, "l")?)))
            }
        }
    }

    fn piece(&self) -> Result<Piece, Failure> {
        match (self.space, self.total) {
            (SpaceArg::A, Some(total)) => {
                if self.v.is_some() || self.e.is_some() {
                    return Err(Failure::usage("give either --total or --v and --e"));
                }
                Ok(Piece::A { total })
            }
            _ => {
                let (space, g) = self.grading()?;
                Ok(g.piece(space))
            }
        }
    }
}

fn cache_dir(cli: &Cli) -> Option<PathBuf> {
    if cli.no_cache {
        return None;
    }
    cli.cache_dir.clone().or_else(|| dirs::cache_dir().map(|d| d.join("jacobi")))
}

fn read_input(cli: &Cli) -> Result<Value, Failure> {
    let mut text = String::new();
    match &cli.input {
        Some(path) => text = std::fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?,
        None => {
            std::io::stdin().read_to_string(&mut text).map_err(|e| Failure::io(e.to_string()))?;
        }
    }
    Ok(serde_json::from_str(&text)?)
}

fn is_vector(v: &Value) -> bool {
    v.is_array() || v.get("terms").is_some()
}

/// A vector, or a single diagram read as a vector with coefficient one.
fn read_vector(v: Value) -> Result<DiagramVector, Failure> {
    if is_vector(&v) {
        return Ok(VectorJson::from_value(v)?);
    }
    let d = serde_json::from_value::<RawDiagram>(v)?.validate().map_err(Error::from)?;
    Ok(DiagramVector::from_diagram(&d))
}

fn read_pair(v: Value) -> Result<(DiagramVector, DiagramVector), Failure> {
    let Value::Object(mut obj) = v else {
        return Err(Error::Format("expected an object with keys \"left\" and \"right\"".into()).into());
    };
    if let Some(k) = obj.keys().find(|k| *k != "left" && *k != "right") {
        return Err(Error::Format(format!("unknown key '{k}'")).into());
    }
    let mut take = |k: &str| obj.remove(k).ok_or_else(|| Failure::from(Error::Format(format!("missing key '{k}'"))));
    let left = take("left")?;
    let right = take("right")?;
    Ok((read_vector(left)?, read_vector(right)?))
}

fn load_algebra(name: &str) -> Result<MetricLieAlgebra, Failure> {
    if let Some(g) = builtin(name) {
        return Ok(g);
    }
    let text = std::fs::read_to_string(name).map_err(|e| Failure::io(format!("algebra '{name}': {e}")))?;
    Ok(MetricLieAlgebra::from_json(&serde_json::from_str(&text)?)?)
}
