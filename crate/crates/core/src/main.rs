use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use gqe_comparison::cli_runner::{
    build_space, emit_profiles, load_config, parse_config, radii_arity, run_suite, serialize_config,
    write_document, FamilyKind, OutputFormat, OutputSpec, SuiteConfig,
};
use gqe_comparison::integral_norms::{RadialGrid, DEFAULT_CELLS};
use gqe_comparison::model_space::{
    annulus_comparison_constant, area_comparison_constant, doubling_epsilon, excess_threshold,
    volume_comparison_constant, AnnulusRadii, ConstantRequest, ModelParams,
};
use gqe_comparison::theorem_checks::{TheoremId, Verdict};
use gqe_comparison::warped_manifold::read_tabulated;
use gqe_comparison::{Error, QuadratureSpec, Result};

/// Comparison estimates under integral curvature bounds, checked on weighted
/// rotationally symmetric spaces.
#[derive(Parser)]
#[command(name = "gqe-compare", version)]
struct Cli {
    /// Suite configuration; for `constants`, `profile` and `check` it
    /// supplies the space (first sweep point), overridden by explicit flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format of `suite` and `check`.
    #[arg(long, global = true, value_parser = ["json", "csv"])]
    format: Option<String>,
    /// Pass tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Number of radial grid cells.
    #[arg(long = "grid-m", global = true)]
    grid_m: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the comparison constants, the doubling threshold and the
    /// excess-function threshold.
    Constants {
        #[command(flatten)]
        space: SpaceArgs,
        /// Outer radius R.
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Doubling factor.
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        /// Radius of the excess-function threshold; R when absent.
        #[arg(long)]
        threshold_radius: Option<f64>,
        /// Annulus radii `r1,r2,R1,R2`.
        #[arg(long, value_delimiter = ',', num_args = 4)]
        annulus: Option<Vec<f64>>,
    },
    /// Write radial profiles of a space and its model as CSV.
    Profile {
        #[command(flatten)]
        space: SpaceArgs,
        /// Grading exponent of the grid.
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
    },
    /// Run a single check and print its report.
    Check {
        #[command(flatten)]
        space: SpaceArgs,
        /// Theorem id, e.g. T2 or T1_eq17.
        #[arg(long)]
        theorem: String,
        /// Comma-separated radius tuple; theorem default when absent.
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<f64>>,
        /// Doubling factor.
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
    },
    /// Run a configured suite.
    Suite,
}

#[derive(Args, Default)]
struct SpaceArgs {
    /// sphere, flat, hyperbolic, gaussian_flat, weight_perturbed_sphere or tabulated.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    /// `r phi f` table for the tabulated family.
    #[arg(long)]
    profile_path: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    /// Model curvature H.
    #[arg(long = "H", alias = "curvature", allow_hyphen_values = true)]
    curvature: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    max_radius: Option<f64>,
}

fn usage(key: &str, message: impl Into<String>) -> Error {
    Error::Config {
        key: key.into(),
        message: message.into(),
    }
}

/// Single-point configuration from an optional config file and flags,
/// validated by the configuration parser.
fn resolve(cli: &Cli, args: &SpaceArgs, theorems: &[TheoremId]) -> Result<SuiteConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let mut c = load_config(path)?;
            let first = c.sweep().into_iter().next().expect("sweeps are nonempty");
            c.family_params = first.family_params.iter().map(|(k, v)| (k.clone(), vec![*v])).collect();
            c.n = vec![first.n];
            c.k = vec![first.k];
            c.mu = vec![first.mu];
            c.curvature = vec![first.curvature];
            c.p = vec![first.p];
            c.radii.clear();
            c
        }
        None => parse_config(
            "family = \"sphere\"\nn = 3\nk = 1\nmu = 1\nH = 0\np = 3\ntheorems = \"all\"\noutput.format = \"json\"\n",
        )?,
    };
    if let Some(name) = &args.family {
        let family = FamilyKind::parse(name).ok_or_else(|| usage("family", format!("unknown family `{name}`")))?;
        if family != cfg.family {
            cfg.family = family;
            cfg.family_params = family
                .parameter_defaults()
                .iter()
                .map(|(k, v)| (k.to_string(), vec![*v]))
                .collect();
            cfg.profile_path = None;
        }
    }
    for (key, value) in [("a", args.a), ("delta", args.delta), ("q", args.q)] {
        if let Some(v) = value {
            cfg.family_params.insert(key.into(), vec![v]);
        }
    }
    if args.profile_path.is_some() {
        cfg.profile_path = args.profile_path.clone();
    }
    if let Some(n) = args.n {
        cfg.n = vec![n];
    }
    if let Some(k) = args.k {
        cfg.k = vec![k];
        if args.mu.is_none() && cli.config.is_none() {
            cfg.mu = vec![1.0 / k];
        }
    }
    if let Some(mu) = args.mu {
        cfg.mu = vec![mu];
    }
    if let Some(h) = args.curvature {
        cfg.curvature = vec![h];
    }
    if let Some(p) = args.p {
        cfg.p = vec![p];
    }
    if args.omega.is_some() {
        cfg.omega = args.omega;
    }
    if args.max_radius.is_some() {
        cfg.max_radius = args.max_radius;
    }
    apply_overrides(cli, &mut cfg)?;
    if !theorems.is_empty() {
        cfg.theorems = theorems.to_vec();
    }
    // the parser re-validates every constraint and names the offending key
    parse_config(&serialize_config(&cfg))
}

fn apply_overrides(cli: &Cli, cfg: &mut SuiteConfig) -> Result<()> {
    if let Some(t) = cli.tol {
        cfg.tolerance = t;
    }
    if let Some(m) = cli.grid_m {
        cfg.grid_cells = m;
    }
    if let Some(f) = &cli.format {
        cfg.output.format = OutputFormat::parse(f).ok_or_else(|| usage("output.format", f.clone()))?;
    }
    if cli.out.is_some() {
        cfg.output.path = cli.out.clone();
    }
    Ok(())
}

fn space_and_model(
    cfg: &SuiteConfig,
) -> Result<(gqe_comparison::WarpedSpace64, gqe_comparison::ModelParams64)> {
    let point = cfg.sweep().into_iter().next().expect("sweeps are nonempty");
    let table = match (cfg.family, &cfg.profile_path) {
        (FamilyKind::Tabulated, Some(path)) => Some(read_tabulated::<f64>(path)?),
        _ => None,
    };
    let space = build_space(cfg, &point, table.as_ref())?;
    let model = space.model(point.curvature)?;
    Ok((space, model))
}

fn write_text(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io {
            path: path.clone(),
            message: e.to_string(),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn entry(value: Result<f64>) -> Value {
    match value {
        Ok(v) => json!(v),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn constants(
    model: &ModelParams<f64>,
    p: f64,
    radius: f64,
    beta: f64,
    threshold_radius: f64,
    annulus: Option<&[f64]>,
    spec: &QuadratureSpec<f64>,
) -> Result<Value> {
    let req = ConstantRequest::new(*model, p, radius)?;
    let mut out = BTreeMap::new();
    out.insert("n", json!(model.n));
    out.insert("k", json!(model.k));
    out.insert("H", json!(model.curvature));
    out.insert("omega", json!(model.omega));
    out.insert("p", json!(p));
    out.insert("R", json!(radius));
    out.insert("volume_constant", entry(volume_comparison_constant(&req, spec)));
    out.insert("area_constant", entry(area_comparison_constant(&req, spec)));
    out.insert(
        "doubling_epsilon",
        entry(req.with_beta(beta).and_then(|r| doubling_epsilon(&r, spec))),
    );
    out.insert("beta", json!(beta));
    out.insert("k_threshold", entry(excess_threshold(model, threshold_radius)));
    out.insert("threshold_radius", json!(threshold_radius));
    if let Some(a) = annulus {
        let radii = AnnulusRadii {
            r1: a[0],
            r2: a[1],
            big_r1: a[2],
            big_r2: a[3],
        };
        let value = ConstantRequest::new(*model, p, a[3])
            .and_then(|r| r.with_annulus(radii))
            .and_then(|r| annulus_comparison_constant(&r, spec));
        out.insert("annulus_constant", entry(value));
    }
    Ok(serde_json::to_value(out).expect("constants serialize"))
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Constants {
            space,
            radius,
            beta,
            threshold_radius,
            annulus,
        } => {
            let cfg = resolve(cli, space, &[])?;
            let point = cfg.sweep().into_iter().next().expect("sweeps are nonempty");
            let omega = match cfg.omega {
                Some(w) => w,
                None => space_and_model(&cfg)?.0.omega(),
            };
            let model = ModelParams::with_omega(point.n, point.k, point.curvature, omega)?;
            let value = constants(
                &model,
                point.p,
                *radius,
                *beta,
                threshold_radius.unwrap_or(*radius),
                annulus.as_deref(),
                &cfg.quadrature,
            )?;
            write_text(&cli.out, &(serde_json::to_string_pretty(&value).expect("json") + "\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Profile { space, gamma } => {
            let cfg = resolve(cli, space, &[])?;
            let (space, model) = space_and_model(&cfg)?;
            let cells = cli.grid_m.unwrap_or(DEFAULT_CELLS);
            let grid = RadialGrid::new(space.r_min(), space.max_radius(), cells, *gamma)?;
            let path = cli.out.clone().ok_or_else(|| usage("out", "profile needs --out PATH"))?;
            emit_profiles(&space, &model, &grid, &path)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Check {
            space,
            theorem,
            radii,
            beta,
        } => {
            let id: TheoremId = theorem
                .parse()
                .map_err(|_| usage("theorem", format!("unknown theorem id `{theorem}`")))?;
            let mut cfg = resolve(cli, space, &[id])?;
            cfg.beta = *beta;
            if let Some(r) = radii {
                let (arity, shape) = radii_arity(id);
                if r.len() != arity {
                    return Err(usage("radii", format!("{id} takes {shape}")));
                }
                cfg.radii.insert(id, vec![r.clone()]);
            }
            let cfg = parse_config(&serialize_config(&cfg))?;
            let doc = run_suite(&cfg)?;
            if cli.format.is_none() {
                // a single report prints as a bare JSON object
                if let [report] = doc.reports.as_slice() {
                    let text = serde_json::to_string_pretty(report).expect("json") + "\n";
                    write_text(&cli.out, &text)?;
                    return Ok(ExitCode::from(match report.verdict {
                        Verdict::Pass => 0,
                        Verdict::Fail => 2,
                        Verdict::HypothesisNotMet => 3,
                    }));
                }
            }
            for issue in doc.errors.iter().chain(&doc.skipped) {
                eprintln!("{}: {}", issue.theorem_id, issue.message);
            }
            write_document(&doc, &cfg.output)?;
            // an explicitly requested check that cannot run is an error
            let code = if doc.reports.is_empty() && !doc.skipped.is_empty() {
                2
            } else {
                doc.exit_code()
            };
            Ok(ExitCode::from(code as u8))
        }
        Command::Suite => {
            let path = cli.config.as_ref().ok_or_else(|| usage("config", "suite needs --config PATH"))?;
            let mut cfg = load_config(path)?;
            apply_overrides(cli, &mut cfg)?;
            let cfg = parse_config(&serialize_config(&cfg))?;
            let doc = run_suite(&cfg)?;
            let output = OutputSpec {
                path: cfg.output.path.clone(),
                format: cfg.output.format,
            };
            write_document(&doc, &output)?;
            Ok(ExitCode::from(doc.exit_code() as u8))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config { .. } | Error::Io { .. } | Error::Profile(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
