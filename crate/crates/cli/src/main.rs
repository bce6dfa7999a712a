//! `flexlab`: classify, trace, generate and verify bipartite frameworks.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flexlab::classifier::classify;
use flexlab::framework::{FlipRecord, Framework};
use flexlab::geometry::{from_model, Model};
use flexlab::kinematics::{
    export_motion, generate_cda, generate_dixon1, generate_dixon2, rigidity_report, trace_flex, MotionFormat,
    TraceOutcome,
};
use flexlab::polysym::verify_kind;
use flexlab::{Exec, FlexError, GeometryKind, DEFAULT_TOL};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Flex(#[from] FlexError),
    #[error("verification failed")]
    Verification,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification => 1,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "flexlab", version, about = "Flexibility of complete bipartite frameworks in E2, H2 and S2")]
struct Cli {
    /// Tolerance of the geometric predicates and of the tracer residual.
    #[arg(long, global = true, env = "FLEXLAB_TOL", default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a framework file.
    Analyze(InputArgs),
    /// Infinitesimal degrees of freedom from the rigidity matrix.
    Dof(InputArgs),
    /// Trace the flex of a framework file.
    Trace(TraceArgs),
    /// Write a mechanism of the given kind as a framework file.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Run the exact identity suites and the kinematic self-checks.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GeometryArg {
    Euclidean,
    Hyperbolic,
    Spherical,
}

impl From<GeometryArg> for GeometryKind {
    fn from(g: GeometryArg) -> GeometryKind {
        match g {
            GeometryArg::Euclidean => GeometryKind::Euclidean,
            GeometryArg::Hyperbolic => GeometryKind::Hyperbolic,
            GeometryArg::Spherical => GeometryKind::Spherical,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Cartesian,
    Poincare,
    Lobachevsky,
    Ambient,
    Stereographic,
    Geographic,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::Cartesian => Model::Cartesian,
            ModelArg::Poincare => Model::Poincare,
            ModelArg::Lobachevsky => Model::Lobachevsky,
            ModelArg::Ambient => Model::Ambient,
            ModelArg::Stereographic => Model::Stereographic,
            ModelArg::Geographic => Model::Geographic,
        }
    }
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Framework JSON file.
    file: PathBuf,
    /// Read the coordinates in this model instead of the file's.
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MotionArg {
    Json,
    Svg,
}

#[derive(Debug, Args)]
struct TraceArgs {
    /// Framework JSON file.
    file: PathBuf,
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    /// Most frames per direction.
    #[arg(long, default_value_t = 400)]
    steps: usize,
    /// Driver step in radians.
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    /// Write the motion here; without it the motion goes to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = MotionArg::Json)]
    format: MotionArg,
}

#[derive(Debug, Subcommand)]
enum GenerateKind {
    /// Joints on two orthogonal geodesics.
    Dixon1 {
        #[arg(long, value_enum)]
        geometry: GeometryArg,
        /// Coordinates of the Q joints along the first axis.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        xs: Vec<f64>,
        /// Coordinates of the P joints along the second axis.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        ys: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Orbits of two anchors under the reflections in two orthogonal axes.
    Dixon2 {
        #[arg(long, value_enum)]
        geometry: GeometryArg,
        /// Anchor of P in the canonical model of the geometry.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        p_anchor: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        q_anchor: Vec<f64>,
        /// Orbit indices 1..=4 of the P joints.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        p_sel: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        q_sel: Vec<usize>,
        /// Indices of P joints to replace by their antipodes (sphere only).
        #[arg(long, value_delimiter = ',')]
        p_flips: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        q_flips: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// A spherical framework with the constant diagonal angle pattern.
    Cda {
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, allow_negative_numbers = true)]
        phi1: f64,
        /// Seed of the solver's start; failing seeds are followed by the next ones.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Euclidean,
    Hyperbolic,
    Spherical,
    All,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
    /// Run the suites one after another.
    #[arg(long)]
    sequential: bool,
}

/// Seeds tried after the requested one when a CDA solve fails.
const CDA_SEED_ATTEMPTS: u64 = 64;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Verification) => ExitCode::from(1),
        Err(e) => {
            eprintln!("flexlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<String> {
    let tol = cli.tol;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Usage(format!("field \"tol\": must be positive, got {tol}")));
    }
    match cli.command {
        Command::Analyze(a) => analyze(&a, tol),
        Command::Dof(a) => dof(&a, tol),
        Command::Trace(a) => trace(&a, tol),
        Command::Generate { kind } => generate(&kind, tol),
        Command::Verify(a) => verify(&a, tol),
    }
}

fn read_framework(path: &Path, model: Option<ModelArg>) -> Result<Framework> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    let mut value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: invalid JSON: {e}", path.display())))?;
    if let (Some(m), Some(obj)) = (model, value.as_object_mut()) {
        let m = Model::from(m);
        obj.insert("model".into(), json!(m));
        obj.insert("geometry".into(), json!(m.kind()));
    }
    Framework::from_value(&value).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn analyze(a: &InputArgs, tol: f64) -> Result<String> {
    let fw = read_framework(&a.file, a.model)?;
    let c = classify(&fw, tol)?;
    let v = c.to_value();
    Ok(match a.format {
        ReportFormat::Json => pretty(&v),
        ReportFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "kind: {}", c.kind.name());
            let _ = writeln!(s, "flexible: {}", c.flexible);
            let _ = writeln!(s, "dof: {}", c.internal_dof_claim);
            let _ = writeln!(s, "witness: {}", v["witness"]["type"].as_str().unwrap_or("none"));
            let _ = writeln!(s, "d1_lengths: {}", c.diagnostics.d1_lengths);
            let _ = writeln!(s, "d2_lengths: {}", c.diagnostics.d2_lengths);
            s
        }
    })
}

fn dof(a: &InputArgs, tol: f64) -> Result<String> {
    let fw = read_framework(&a.file, a.model)?;
    let r = rigidity_report(&fw, tol);
    Ok(match a.format {
        ReportFormat::Json => pretty(&serde_json::to_value(&r).expect("report serializes")),
        ReportFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "rigidity matrix: {} x {}, rank {}", r.rows, r.cols, r.rank);
            let _ = writeln!(s, "infinitesimal dof: {}", r.infinitesimal_dof);
            let _ = writeln!(s, "infinitesimally flexible: {}", r.infinitesimally_flexible);
            let _ = writeln!(s, "ambiguous gap: {}", r.ambiguous_gap);
            s
        }
    })
}

fn trace(a: &TraceArgs, tol: f64) -> Result<String> {
    if a.steps == 0 {
        return Err(CliError::Usage("field \"steps\": must be at least 1".into()));
    }
    if !(a.step > 0.0 && a.step < std::f64::consts::PI) {
        return Err(CliError::Usage(format!("field \"step\": must lie in (0, pi), got {}", a.step)));
    }
    let fw = read_framework(&a.file, a.model)?;
    match trace_flex(&fw, a.steps, a.step, tol)? {
        TraceOutcome::Jammed(j) => {
            let mut s = String::from("Jammed\n");
            let pairs: Vec<String> = j.fixed_pairs_tried.iter().map(|(i, k)| format!("(p{i}, q{k})")).collect();
            let _ = writeln!(s, "fixed pairs tried: {}", pairs.join(" "));
            let _ = writeln!(s, "best first-step residual: {:e}", j.best_residual);
            Ok(s)
        }
        TraceOutcome::Path(p) => {
            let format = match a.format {
                MotionArg::Json => MotionFormat::Json,
                MotionArg::Svg => MotionFormat::Svg,
            };
            let bytes = export_motion(&p, format)?;
            match &a.out {
                None => Ok(String::from_utf8(bytes).expect("exports are UTF-8")),
                Some(path) => {
                    write_file(path, &bytes)?;
                    let mut s = String::from("Path\n");
                    let _ = writeln!(s, "frames: {}", p.frames.len());
                    let _ = writeln!(s, "fixed pair: (p{}, q{})", p.fixed.0, p.fixed.1);
                    let _ = writeln!(s, "closure: {}", p.closure);
                    let _ = writeln!(s, "max length drift: {:e}", p.max_length_drift);
                    let _ = writeln!(s, "written: {}", path.display());
                    Ok(s)
                }
            }
        }
    }
}

fn anchor(kind: GeometryKind, coords: &[f64], field: &str) -> Result<flexlab::Point> {
    from_model(kind.canonical_model(), coords).map_err(|e| CliError::Usage(format!("field \"{field}\": {e}")))
}

fn flips(len: usize, idx: &[usize], field: &str) -> Result<Vec<bool>> {
    let mut v = vec![false; len];
    for &i in idx {
        *v.get_mut(i).ok_or_else(|| CliError::Usage(format!("field \"{field}\": index {i} is out of range")))? = true;
    }
    Ok(v)
}

fn generate(kind: &GenerateKind, tol: f64) -> Result<String> {
    let (fw, out) = match kind {
        GenerateKind::Dixon1 { geometry, xs, ys, out } => (generate_dixon1((*geometry).into(), xs, ys)?, out),
        GenerateKind::Dixon2 { geometry, p_anchor, q_anchor, p_sel, q_sel, p_flips, q_flips, out } => {
            let g: GeometryKind = (*geometry).into();
            let record = if p_flips.is_empty() && q_flips.is_empty() {
                None
            } else {
                Some(FlipRecord {
                    p: flips(p_sel.len(), p_flips, "p-flips")?,
                    q: flips(q_sel.len(), q_flips, "q-flips")?,
                })
            };
            let pa = anchor(g, p_anchor, "p-anchor")?;
            let qa = anchor(g, q_anchor, "q-anchor")?;
            (generate_dixon2(g, &pa, &qa, p_sel, q_sel, record.as_ref())?, out)
        }
        GenerateKind::Cda { theta, phi1, seed, out } => {
            let mut last = None;
            let mut made = None;
            for s in *seed..seed.saturating_add(CDA_SEED_ATTEMPTS) {
                match generate_cda(*theta, *phi1, s as f64) {
                    Ok(fw) => {
                        made = Some(fw);
                        break;
                    }
                    Err(e @ FlexError::Generation(_))
                        if !e.to_string().contains("pi/2") && !e.to_string().contains("theta = 0") =>
                    {
                        last = Some(e)
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            match made {
                Some(fw) => (fw, out),
                None => return Err(last.expect("at least one attempt").into()),
            }
        }
    };
    write_file(out, format!("{}\n", fw.to_json()).as_bytes())?;
    let c = classify(&fw, tol)?;
    Ok(format!("wrote {} ({}, m = {}, n = {})\n", out.display(), c.kind.name(), fw.m(), fw.n()))
}

/// Traces a Dixon-1 instance of `kind`, which must move.
fn kinematic_check(kind: GeometryKind, tol: f64) -> (bool, String) {
    let fw = match kind {
        GeometryKind::Spherical => generate_dixon1(kind, &[0.3, 0.6, 0.9], &[0.4, 0.8, 1.1]),
        GeometryKind::Hyperbolic => generate_dixon1(kind, &[0.3, 0.6, 0.9], &[0.4, 0.8, 1.2]),
        GeometryKind::Euclidean => generate_dixon1(kind, &[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]),
    };
    let outcome = fw.and_then(|fw| trace_flex(&fw, 200, 0.01, tol));
    match outcome {
        Ok(TraceOutcome::Path(p)) if p.max_length_drift < tol => {
            (true, format!("{} frames, drift {:e}", p.frames.len(), p.max_length_drift))
        }
        Ok(TraceOutcome::Path(p)) => (false, format!("drift {:e} exceeds the tolerance", p.max_length_drift)),
        Ok(TraceOutcome::Jammed(_)) => (false, "jammed although a flex is expected".into()),
        Err(e) => (false, e.to_string()),
    }
}

fn verify(a: &VerifyArgs, tol: f64) -> Result<String> {
    let kinds: Vec<GeometryKind> = match a.suite {
        Suite::Euclidean => vec![GeometryKind::Euclidean],
        Suite::Hyperbolic => vec![GeometryKind::Hyperbolic],
        Suite::Spherical => vec![GeometryKind::Spherical],
        Suite::All => GeometryKind::ALL.to_vec(),
    };
    let exec = if a.sequential { Exec::Sequential } else { Exec::Parallel };
    let mut ok = true;
    let mut text = String::new();
    let mut reports = Vec::new();
    for kind in kinds {
        let rep = verify_kind(kind, exec);
        let (moved, note) = kinematic_check(kind, tol);
        ok &= rep.passed() && moved;
        text.push_str(&rep.to_text());
        let _ = writeln!(text, "  {:<12} Dixon-1 trace moves -- {note}", if moved { "ok" } else { "fail" });
        let mut v = rep.to_json();
        v["kinematics"] = json!({ "dixon1_trace_moves": moved, "note": note });
        reports.push(v);
    }
    let out = match a.format {
        ReportFormat::Text => {
            let _ = writeln!(text, "{}", if ok { "all checks passed" } else { "some checks FAILED" });
            text
        }
        ReportFormat::Json => pretty(&json!({ "passed": ok, "suites": reports })),
    };
    if ok {
        Ok(out)
    } else {
        print!("{out}");
        Err(CliError::Verification)
    }
}
