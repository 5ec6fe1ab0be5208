//! Suite execution and report documents.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::config::{FamilyKind, OutputFormat, OutputSpec, SuiteConfig, SweepPoint};
use crate::error::{Error, Result};
use crate::integral_norms::{QuadratureSpec, RadialGrid};
use crate::model_space::{AnnulusRadii, ModelParams};
use crate::theorem_checks::{
    check_annulus_ratio, check_area_ratio, check_area_ratio_extended, check_derivation_chain, check_doubling,
    check_mean_curvature_extended, check_mean_curvature_norm, check_mean_curvature_pointwise, check_volume_ratio,
    diameter_probe, CheckOptions, CheckReport, TheoremId, Verdict,
};
use crate::warped_manifold::{read_tabulated, TabulatedProfile, WarpedSpace};

/// Metadata of a suite run. `timestamp` is the only field that differs
/// between runs of the same configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteHeader {
    pub tool: String,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub tolerance: f64,
    pub grid_cells: usize,
    pub grid_gamma: Option<f64>,
    pub quadrature: QuadratureSpec<f64>,
    pub sweep_points: usize,
}

/// A check that produced no report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteIssue {
    pub theorem_id: TheoremId,
    pub params: BTreeMap<String, Value>,
    pub message: String,
}

/// Reports of a suite run, sorted by theorem id and parameter hash.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteDocument {
    pub header: SuiteHeader,
    pub reports: Vec<CheckReport>,
    /// Estimates whose range or compactness requirements the parameters
    /// do not meet.
    pub skipped: Vec<SuiteIssue>,
    /// Checks that failed with a numerical or input error.
    pub errors: Vec<SuiteIssue>,
}

/// Hex SHA-256 of the canonical JSON of a parameter echo.
pub fn params_hash(params: &BTreeMap<String, Value>) -> String {
    let bytes = serde_json::to_vec(params).expect("parameter maps serialize");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl SuiteDocument {
    /// `0` when every applicable check passes, `2` when a check fails or
    /// errors, `3` when some hypothesis is not met and nothing fails.
    pub fn exit_code(&self) -> i32 {
        let failed = self.reports.iter().any(|r| r.verdict == Verdict::Fail);
        if failed || !self.errors.is_empty() {
            2
        } else if self.reports.iter().any(|r| r.verdict == Verdict::HypothesisNotMet) {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("suite documents serialize") + "\n"
    }

    /// One row per report, skipped check and error.
    pub fn to_csv(&self) -> String {
        #[derive(Serialize)]
        struct Row<'a> {
            theorem_id: &'a str,
            status: &'a str,
            pass: Option<bool>,
            lhs: Option<f64>,
            rhs: Option<f64>,
            margin: Option<f64>,
            relative_margin: Option<f64>,
            tolerance: f64,
            params_hash: String,
            params: String,
            message: &'a str,
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let tol = self.header.tolerance;
        for r in &self.reports {
            let status = match r.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "fail",
                Verdict::HypothesisNotMet => "hypothesis_not_met",
            };
            w.serialize(Row {
                theorem_id: r.theorem_id.as_str(),
                status,
                pass: Some(r.pass),
                lhs: Some(r.lhs),
                rhs: Some(r.rhs),
                margin: Some(r.margin),
                relative_margin: Some(r.relative_margin()),
                tolerance: r.tolerance,
                params_hash: params_hash(&r.params),
                params: serde_json::to_string(&r.params).expect("params serialize"),
                message: "",
            })
            .expect("in-memory csv");
        }
        for (status, issues) in [("skipped", &self.skipped), ("error", &self.errors)] {
            for i in issues {
                w.serialize(Row {
                    theorem_id: i.theorem_id.as_str(),
                    status,
                    pass: None,
                    lhs: None,
                    rhs: None,
                    margin: None,
                    relative_margin: None,
                    tolerance: tol,
                    params_hash: params_hash(&i.params),
                    params: serde_json::to_string(&i.params).expect("params serialize"),
                    message: &i.message,
                })
                .expect("in-memory csv");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
        }
    }
}

/// Writes the document to `output.path`, or standard output when absent.
pub fn write_document(doc: &SuiteDocument, output: &OutputSpec) -> Result<()> {
    let text = doc.render(output.format);
    match &output.path {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io {
            path: path.clone(),
            message: e.to_string(),
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| Error::Io {
                path: "<stdout>".into(),
                message: e.to_string(),
            })
        }
    }
}

/// Space of one sweep point.
pub fn build_space(
    config: &SuiteConfig,
    point: &SweepPoint,
    table: Option<&TabulatedProfile<f64>>,
) -> Result<WarpedSpace<f64>> {
    let mut space = match config.family.builtin(&point.family_params) {
        Some(family) => WarpedSpace::builtin(family, point.n, point.k, point.mu)?,
        None => {
            let table = table.ok_or_else(|| Error::config("profile_path", "tabulated profile not loaded"))?;
            WarpedSpace::tabulated(point.n, point.k, point.mu, table)?
        }
    };
    if let Some(l) = config.max_radius {
        space = space.with_max_radius(l)?;
    }
    if let Some(w) = config.omega {
        space = space.with_omega(w)?;
    }
    Ok(space)
}

/// Radii used when the configuration lists none for a theorem: fractions of
/// `min(1, L, pi/(2 sqrt H))`, or of the model period for the estimates
/// beyond the half period.
pub fn default_radii(id: TheoremId, space: &WarpedSpace<f64>, model: &ModelParams<f64>) -> Vec<f64> {
    let limit = space.max_radius();
    let half = model.half_period().unwrap_or(f64::INFINITY);
    let base = 1.0f64.min(limit).min(half);
    let period = model.period().unwrap_or(f64::INFINITY);
    match id {
        TheoremId::MeanCurvatureNorm | TheoremId::MeanCurvaturePointwise => vec![base],
        TheoremId::MeanCurvatureNormExtended | TheoremId::MeanCurvaturePointwiseExtended => {
            vec![(0.75 * period).min(limit)]
        }
        TheoremId::AreaRatio | TheoremId::VolumeRatio => vec![0.5 * base, base],
        TheoremId::AreaRatioExtended => {
            let big_r = (0.8 * period).min(limit);
            vec![(0.6 * period).min(big_r), big_r]
        }
        TheoremId::AnnulusRatio => vec![0.2 * base, 0.4 * base, 0.8 * base, base],
        TheoremId::VolumeDoubling => vec![0.5 * base, base, base],
        TheoremId::DerivationChain => vec![0.01 * base, base],
        TheoremId::DiameterThreshold => vec![base, base],
    }
}

fn run_check(
    id: TheoremId,
    space: &WarpedSpace<f64>,
    model: &ModelParams<f64>,
    p: f64,
    beta: f64,
    radii: &[f64],
    opts: &CheckOptions<f64>,
) -> Result<CheckReport> {
    match id {
        TheoremId::MeanCurvatureNorm => check_mean_curvature_norm(space, model, p, radii[0], opts),
        TheoremId::MeanCurvaturePointwise => check_mean_curvature_pointwise(space, model, p, radii[0], opts),
        TheoremId::MeanCurvatureNormExtended => {
            check_mean_curvature_extended(space, model, p, radii[0], opts).map(|pair| pair.0)
        }
        TheoremId::MeanCurvaturePointwiseExtended => {
            check_mean_curvature_extended(space, model, p, radii[0], opts).map(|pair| pair.1)
        }
        TheoremId::AreaRatio => check_area_ratio(space, model, p, radii[0], radii[1], opts),
        TheoremId::AreaRatioExtended => check_area_ratio_extended(space, model, p, radii[0], radii[1], opts),
        TheoremId::VolumeRatio => check_volume_ratio(space, model, p, radii[0], radii[1], opts),
        TheoremId::AnnulusRatio => {
            let annulus = AnnulusRadii {
                r1: radii[0],
                r2: radii[1],
                big_r1: radii[2],
                big_r2: radii[3],
            };
            check_annulus_ratio(space, model, p, annulus, opts)
        }
        TheoremId::VolumeDoubling => check_doubling(space, model, p, beta, radii[0], radii[1], radii[2], opts),
        TheoremId::DerivationChain => {
            let start = radii[0].max(space.r_min());
            let grid = RadialGrid::uniform(start, radii[1], opts.grid_cells)?;
            check_derivation_chain(space, model, p, &grid, opts)
        }
        TheoremId::DiameterThreshold => diameter_probe(space, model, p, radii[0], radii[1], opts),
    }
}

/// Parameter echo of a check that produced no report.
fn issue_params(config: &SuiteConfig, point: &SweepPoint, radii: Option<&[f64]>) -> BTreeMap<String, Value> {
    let mut m = BTreeMap::new();
    m.insert("family".into(), Value::from(config.family.name()));
    for (k, v) in &point.family_params {
        m.insert(k.clone(), Value::from(*v));
    }
    m.insert("n".into(), Value::from(point.n));
    m.insert("k".into(), Value::from(point.k));
    m.insert("mu".into(), Value::from(point.mu));
    m.insert("H".into(), Value::from(point.curvature));
    m.insert("p".into(), Value::from(point.p));
    if let Some(radii) = radii {
        m.insert("radii".into(), Value::from(radii.to_vec()));
    }
    m
}

enum Outcome {
    Report(CheckReport),
    Skipped(SuiteIssue),
    Error(SuiteIssue),
}

fn run_point(config: &SuiteConfig, point: &SweepPoint, table: Option<&TabulatedProfile<f64>>) -> Vec<Outcome> {
    let opts = CheckOptions {
        quadrature: config.quadrature,
        tolerance: config.tolerance,
        grid_cells: config.grid_cells,
        grid_gamma: config.grid_gamma,
    };
    let built = build_space(config, point, table).and_then(|s| {
        let m = s.model(point.curvature)?;
        Ok((s, m))
    });
    let (space, model) = match built {
        Ok(pair) => pair,
        Err(e) => {
            return config
                .theorems
                .iter()
                .map(|&id| {
                    Outcome::Error(SuiteIssue {
                        theorem_id: id,
                        params: issue_params(config, point, None),
                        message: e.to_string(),
                    })
                })
                .collect()
        }
    };
    let mut tasks = Vec::new();
    for &id in &config.theorems {
        match config.radii.get(&id) {
            Some(list) => tasks.extend(list.iter().map(|r| (id, r.clone()))),
            None => tasks.push((id, default_radii(id, &space, &model))),
        }
    }
    tasks
        .into_par_iter()
        .map(|(id, radii)| match run_check(id, &space, &model, point.p, config.beta, &radii, &opts) {
            Ok(report) => Outcome::Report(report),
            Err(e) => {
                let issue = SuiteIssue {
                    theorem_id: id,
                    params: issue_params(config, point, Some(&radii)),
                    message: e.to_string(),
                };
                if e.is_inapplicable() {
                    Outcome::Skipped(issue)
                } else {
                    Outcome::Error(issue)
                }
            }
        })
        .collect()
}

/// Runs every configured theorem at every sweep point. Check errors become
/// entries of the document; only an unreadable tabulated profile aborts.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteDocument> {
    let table = match (config.family, &config.profile_path) {
        (FamilyKind::Tabulated, Some(path)) => Some(read_tabulated::<f64>(path)?),
        _ => None,
    };
    let points = config.sweep();
    let outcomes: Vec<Outcome> = points
        .par_iter()
        .flat_map_iter(|point| run_point(config, point, table.as_ref()))
        .collect();
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    let mut errors = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Report(r) => reports.push(r),
            Outcome::Skipped(i) => skipped.push(i),
            Outcome::Error(i) => errors.push(i),
        }
    }
    reports.sort_by_cached_key(|r| (r.theorem_id, params_hash(&r.params)));
    for issues in [&mut skipped, &mut errors] {
        issues.sort_by_cached_key(|i| (i.theorem_id, params_hash(&i.params), i.message.clone()));
    }
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Ok(SuiteDocument {
        header: SuiteHeader {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
            tolerance: config.tolerance,
            grid_cells: config.grid_cells,
            grid_gamma: config.grid_gamma,
            quadrature: config.quadrature,
            sweep_points: points.len(),
        },
        reports,
        skipped,
        errors,
    })
}

/// Reads and parses a configuration file.
pub fn load_config(path: &Path) -> Result<SuiteConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    super::config::parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli_runner::config::parse_config;

    fn config(body: &str) -> SuiteConfig {
        parse_config(body).unwrap()
    }

    #[test]
    fn sphere_suite_passes() {
        let c = config(
            "family = \"sphere\"\nn = 3\nk = 1\nmu = 1\nH = 0.6666666666666666\np = 3\ntheorems = \"all\"\noutput.format = \"json\"\ngrid.cells = 512\n",
        );
        let doc = run_suite(&c).unwrap();
        assert!(doc.errors.is_empty(), "{:?}", doc.errors);
        assert_eq!(doc.exit_code(), 0, "{:?}", doc.reports);
        assert_eq!(doc.reports.len(), TheoremId::ALL.len());
    }

    #[test]
    fn flat_suite_skips_positive_curvature_estimates() {
        let c = config(
            "family = \"flat\"\nn = 3\nk = 1\nmu = 1\nH = 0\np = 3\ntheorems = [\"T1_ext_163\", \"T4_threshold\", \"T2\"]\noutput.format = \"csv\"\n",
        );
        let doc = run_suite(&c).unwrap();
        assert_eq!(doc.reports.len(), 1);
        assert_eq!(doc.skipped.len(), 2);
        assert_eq!(doc.exit_code(), 0);
        assert_eq!(doc.to_csv().lines().count(), 4);
    }

    #[test]
    fn doubling_gate_exit_code() {
        let c = config(
            "family = \"gaussian_flat\"\na = 5\nn = 3\nk = 2\nmu = 0.5\nH = 0\np = 3\ntheorems = [\"C32_doubling\"]\noutput.format = \"json\"\n",
        );
        assert_eq!(run_suite(&c).unwrap().exit_code(), 3);
    }
}
