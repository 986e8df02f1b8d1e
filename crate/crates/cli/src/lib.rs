//! Command-line front end. [`run`] parses arguments, runs one subcommand and
//! returns the process exit status.

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qgraph_core::graph::builtin::{parse_builtin, BUILTINS};
use qgraph_core::graph::{analyze, qgf};
use qgraph_core::theorems::{VertexCut, VerifyParams};
use qgraph_core::{
    dirichlet_spectrum, find_spectrum, verify, ConditionSpec, Error, MetricGraph, SecularSystem, SolverOptions, Spectrum,
    TheoremId, Verdict, VertexId,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VIOLATED: i32 = 2;
pub const EXIT_INAPPLICABLE: i32 = 3;
pub const EXIT_WEYL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "qgraph", version, about = "Laplacian spectra and eigenvalue inequalities on metric graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Connectivity, bipartiteness, Betti number and lengths.
    Analyze(GraphSource),
    /// Eigenvalues up to a bound on λ.
    Spectrum {
        #[command(flatten)]
        source: GraphSource,
        #[command(flatten)]
        conditions: ConditionArgs,
        #[arg(long, value_name = "LAMBDA", allow_negative_numbers = true)]
        lmax: f64,
        /// One row per eigenvalue instead of per distinct k.
        #[arg(long)]
        expand: bool,
    },
    /// Dirichlet eigenvalues from the closed form.
    Dirichlet {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_name = "LAMBDA", allow_negative_numbers = true)]
        lmax: f64,
        #[arg(long)]
        expand: bool,
    },
    /// Smallest singular value of the secular matrix on a k grid, as CSV.
    Secular {
        #[command(flatten)]
        source: GraphSource,
        #[command(flatten)]
        conditions: ConditionArgs,
        #[arg(long, value_name = "K", allow_negative_numbers = true)]
        kmax: f64,
        #[arg(long, value_name = "DK", allow_negative_numbers = true)]
        step: f64,
    },
    /// Check one eigenvalue identity or inequality.
    Verify {
        #[arg(value_name = "THEOREM_ID")]
        theorem: String,
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_name = "N")]
        count: Option<usize>,
        #[arg(long, value_name = "V1,V2")]
        boundary: Option<String>,
        /// Vertex split `v:a,b|c,d`; endpoint tokens are `edge`, `edge/0` or `edge/1`.
        #[arg(long, value_name = "CUT")]
        cut: Option<String>,
        #[arg(long, value_name = "LAMBDA", allow_negative_numbers = true)]
        lmax: Option<f64>,
    },
    /// List builtin graph families.
    BuiltinList,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct GraphSource {
    /// QGF file.
    #[arg(value_name = "GRAPH")]
    path: Option<PathBuf>,
    /// Builtin family `name:p1,p2,...`.
    #[arg(long, value_name = "SPEC")]
    builtin: Option<String>,
}

#[derive(Debug, Args)]
struct ConditionArgs {
    #[arg(long, value_enum, default_value = "st")]
    conditions: ConditionFlag,
    /// Vertices carrying the Dirichlet (stD) or Neumann (astN) part; defaults to all leaves.
    #[arg(long, value_name = "V1,V2")]
    boundary: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConditionFlag {
    #[value(name = "st")]
    Standard,
    #[value(name = "ast")]
    AntiStandard,
    #[value(name = "dir")]
    Dirichlet,
    #[value(name = "neu")]
    Neumann,
    #[value(name = "stD")]
    StandardDirichlet,
    #[value(name = "astN")]
    AntiStandardNeumann,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::WeylMismatch { .. }) { EXIT_WEYL } else { EXIT_USAGE };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: format!("write failed: {e}"),
        }
    }
}

fn usage(message: String) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message,
    }
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return EXIT_OK;
            }
            let rendered = e.render().to_string();
            let first: Vec<&str> = rendered.lines().take_while(|l| !l.trim().is_empty()).map(str::trim).collect();
            let _ = writeln!(err, "qgraph: {}", first.join(" ").trim_start_matches("error: "));
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "qgraph: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Analyze(source) => {
            let g = load(&source)?;
            write_analysis(&g, out)?;
            Ok(EXIT_OK)
        }
        Command::Spectrum {
            source,
            conditions,
            lmax,
            expand,
        } => {
            let g = load(&source)?;
            let spec = condition_spec(&g, &conditions)?;
            let lmax = positive("--lmax", lmax)?;
            let s = find_spectrum(&g, &spec, lmax, &SolverOptions::default())?;
            write_spectrum(&s, expand, out)?;
            Ok(EXIT_OK)
        }
        Command::Dirichlet { source, lmax, expand } => {
            let g = load(&source)?;
            let s = dirichlet_spectrum(&g, positive("--lmax", lmax)?)?;
            write_spectrum(&s, expand, out)?;
            Ok(EXIT_OK)
        }
        Command::Secular {
            source,
            conditions,
            kmax,
            step,
        } => {
            let g = load(&source)?;
            let spec = condition_spec(&g, &conditions)?;
            let kmax = positive("--kmax", kmax)?;
            let step = positive("--step", step)?;
            let sys = SecularSystem::new(&g, &spec)?;
            writeln!(out, "k,sigma_min")?;
            let n = (kmax / step * (1.0 + 1e-12)).floor() as usize;
            for i in 0..=n {
                let k = i as f64 * step;
                writeln!(out, "{},{}", sci(k), sci(sys.sigma_min(k)))?;
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            theorem,
            source,
            count,
            boundary,
            cut,
            lmax,
        } => {
            let id = TheoremId::from_str(&theorem).map_err(|_| usage(format!("unknown theorem `{theorem}`")))?;
            let g = load(&source)?;
            let mut params = VerifyParams::default();
            if let Some(n) = count {
                if n == 0 {
                    return Err(usage("`--count` must be at least 1".into()));
                }
                params.count = n;
            }
            if let Some(list) = boundary {
                params.boundary = Some(vertex_list(&g, &list)?);
            }
            if let Some(token) = cut {
                params.cut = Some(parse_cut(&g, &token)?);
            }
            if let Some(l) = lmax {
                params.lambda_max = Some(positive("--lmax", l)?);
            }
            let report = verify(id, &g, &params)?;
            write_report(&report, out)?;
            Ok(match report.verdict {
                Verdict::Holds => EXIT_OK,
                Verdict::Violated => EXIT_VIOLATED,
                Verdict::Inapplicable(_) => EXIT_INAPPLICABLE,
            })
        }
        Command::BuiltinList => {
            for (name, params, description) in BUILTINS {
                writeln!(out, "{name}:{params}\t{description}")?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn load(source: &GraphSource) -> Result<MetricGraph, Failure> {
    match (&source.path, &source.builtin) {
        (_, Some(spec)) => parse_builtin(spec).map_err(|e| usage(format!("builtin `{spec}`: {e}"))),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read `{}`: {e}", path.display())))?;
            qgf::parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
        }
        (None, None) => Err(usage("no graph given".into())),
    }
}

fn positive(flag: &str, x: f64) -> Result<f64, Failure> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(usage(format!("`{flag}` must be positive, got `{x}`")))
    }
}

fn vertex_list(g: &MetricGraph, list: &str) -> Result<Vec<VertexId>, Failure> {
    list.split(',')
        .map(|label| g.vertex_by_label(label.trim()).map_err(Failure::from))
        .collect()
}

fn condition_spec(g: &MetricGraph, args: &ConditionArgs) -> Result<ConditionSpec, Failure> {
    let boundary = match &args.boundary {
        Some(list) => vertex_list(g, list)?,
        None => analyze(g).boundary,
    };
    let spec = match args.conditions {
        ConditionFlag::Standard => ConditionSpec::standard(),
        ConditionFlag::AntiStandard => ConditionSpec::anti_standard(),
        ConditionFlag::Dirichlet => ConditionSpec::dirichlet(),
        ConditionFlag::Neumann => ConditionSpec::neumann(),
        ConditionFlag::StandardDirichlet => ConditionSpec::standard_dirichlet(boundary),
        ConditionFlag::AntiStandardNeumann => ConditionSpec::anti_standard_neumann(boundary),
    };
    spec.validate(g)?;
    Ok(spec)
}

fn parse_cut(g: &MetricGraph, token: &str) -> Result<VertexCut, Failure> {
    let bad = || usage(format!("malformed cut `{token}`, expected `v:a,b|c,d`"));
    let (label, classes) = token.split_once(':').ok_or_else(bad)?;
    let (a, b) = classes.split_once('|').ok_or_else(bad)?;
    let vertex = g.vertex_by_label(label)?;
    let endpoints = |list: &str| -> Result<Vec<_>, Failure> {
        let mut eps = Vec::new();
        for t in list.split(',').filter(|t| !t.is_empty()) {
            eps.extend(g.parse_endpoints_at(vertex, t)?);
        }
        Ok(eps)
    };
    Ok(VertexCut {
        vertex,
        class_a: endpoints(a)?,
        class_b: endpoints(b)?,
    })
}

/// Scientific notation with 12 significant digits and a signed two-digit exponent.
pub fn sci(x: f64) -> String {
    let s = format!("{x:.11e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    format!("{mantissa}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
}

fn write_analysis(g: &MetricGraph, out: &mut dyn Write) -> std::io::Result<()> {
    let a = analyze(g);
    writeln!(out, "vertices: {}", g.vertex_count())?;
    writeln!(out, "edges: {}", g.edge_count())?;
    writeln!(out, "connected: {}", a.connected)?;
    writeln!(out, "components: {}", a.component_count)?;
    writeln!(out, "bipartite: {}", a.bipartite)?;
    writeln!(out, "betti: {}", a.betti)?;
    writeln!(out, "boundary_size: {}", a.boundary.len())?;
    writeln!(out, "total_length: {}", sci(g.total_length()))?;
    writeln!(out, "doubly_connected_length: {}", sci(a.doubly_connected_length))
}

fn write_spectrum(s: &Spectrum, expand: bool, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "index\tk\tlambda\tmultiplicity")?;
    let mut index = 1;
    for r in &s.records {
        let rows = if expand { r.multiplicity } else { 1 };
        for i in 0..rows {
            writeln!(out, "{}\t{}\t{}\t{}", index + i, sci(r.k), sci(r.lambda), r.multiplicity)?;
        }
        index += r.multiplicity;
    }
    Ok(())
}

fn write_report(r: &qgraph_core::VerificationReport, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "theorem: {}", r.theorem)?;
    writeln!(out, "statement: {}", r.theorem.summary())?;
    match &r.verdict {
        Verdict::Holds => writeln!(out, "verdict: holds")?,
        Verdict::Violated => writeln!(out, "verdict: violated")?,
        Verdict::Inapplicable(reason) => writeln!(out, "verdict: inapplicable ({reason})")?,
    }
    if let Some((lo, hi)) = r.checked {
        writeln!(out, "checked: n = {lo}..{hi}")?;
        writeln!(out, "max_residual: {}", sci(r.max_residual))?;
    }
    if let Some(p) = &r.predicted_violations {
        let list: Vec<String> = p.iter().map(|n| n.to_string()).collect();
        writeln!(out, "predicted_violations: {}", if list.is_empty() { "none".into() } else { list.join(",") })?;
    }
    for v in &r.violations {
        writeln!(
            out,
            "violation: n = {}: {} {} {} fails ({})",
            v.index,
            sci(v.lhs),
            v.relation.symbol(),
            sci(v.rhs),
            v.label
        )?;
    }
    for note in &r.notes {
        writeln!(out, "note: {note}")?;
    }
    Ok(())
}
