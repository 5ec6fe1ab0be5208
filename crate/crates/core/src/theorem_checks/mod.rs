//! Numerical verification of the comparison inequalities on a concrete
//! weighted rotationally symmetric space.
//!
//! Every check returns a [`CheckReport`] with the two sides of the inequality,
//! the margin `rhs - lhs` and a verdict. A check passes when
//! `lhs <= rhs + tol (1 + |rhs|)`. All norms are centred at the pole.

mod diameter;
mod mean_curvature;
mod volume;

pub use diameter::diameter_probe;
pub use mean_curvature::{
    check_derivation_chain, check_mean_curvature_extended, check_mean_curvature_norm,
    check_mean_curvature_pointwise,
};
pub use volume::{check_annulus_ratio, check_area_ratio, check_area_ratio_extended, check_doubling, check_volume_ratio};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::integral_norms::{weighted_lp_norm, GridSummary, QuadratureSpec, RadialGrid, DEFAULT_CELLS};
use crate::model_space::ModelParams;
use crate::scalar::Real;
use crate::warped_manifold::{SpaceOrigin, WarpedSpace};

/// Default slack of the pass criterion.
pub const DEFAULT_TOLERANCE: f64 = 1e-7;

/// Identifier of a checked inequality. Serialized with the short wire names
/// used in reports and configuration files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    /// Mean-curvature excess norm bound.
    #[serde(rename = "T1_eq16")]
    MeanCurvatureNorm,
    /// Pointwise mean-curvature excess bound.
    #[serde(rename = "T1_eq17")]
    MeanCurvaturePointwise,
    /// Sine-weighted excess norm bound beyond the half period.
    #[serde(rename = "T1_ext_163")]
    MeanCurvatureNormExtended,
    /// Sine-weighted pointwise excess bound beyond the half period.
    #[serde(rename = "T1_ext_164")]
    MeanCurvaturePointwiseExtended,
    /// Area-ratio comparison.
    #[serde(rename = "T31_eq31")]
    AreaRatio,
    /// Area-ratio comparison beyond the half period.
    #[serde(rename = "T31_eq32")]
    AreaRatioExtended,
    /// Ball volume-ratio comparison.
    #[serde(rename = "T2")]
    VolumeRatio,
    /// Annulus volume-ratio comparison.
    #[serde(rename = "T3")]
    AnnulusRatio,
    /// Volume doubling under a small normalized curvature integral.
    #[serde(rename = "C32_doubling")]
    VolumeDoubling,
    /// Differential inequality behind the mean-curvature estimates.
    #[serde(rename = "Eq21_chain")]
    DerivationChain,
    /// Excess-function threshold and the model diameter bound.
    #[serde(rename = "T4_threshold")]
    DiameterThreshold,
}

impl TheoremId {
    pub const ALL: [TheoremId; 11] = [
        TheoremId::MeanCurvatureNorm,
        TheoremId::MeanCurvaturePointwise,
        TheoremId::MeanCurvatureNormExtended,
        TheoremId::MeanCurvaturePointwiseExtended,
        TheoremId::AreaRatio,
        TheoremId::AreaRatioExtended,
        TheoremId::VolumeRatio,
        TheoremId::AnnulusRatio,
        TheoremId::VolumeDoubling,
        TheoremId::DerivationChain,
        TheoremId::DiameterThreshold,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::MeanCurvatureNorm => "T1_eq16",
            TheoremId::MeanCurvaturePointwise => "T1_eq17",
            TheoremId::MeanCurvatureNormExtended => "T1_ext_163",
            TheoremId::MeanCurvaturePointwiseExtended => "T1_ext_164",
            TheoremId::AreaRatio => "T31_eq31",
            TheoremId::AreaRatioExtended => "T31_eq32",
            TheoremId::VolumeRatio => "T2",
            TheoremId::AnnulusRatio => "T3",
            TheoremId::VolumeDoubling => "C32_doubling",
            TheoremId::DerivationChain => "Eq21_chain",
            TheoremId::DiameterThreshold => "T4_threshold",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown theorem id `{s}`")))
    }
}

impl PartialOrd for TheoremId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TheoremId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.as_str().cmp(other.as_str())
    }
}

/// Outcome of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The estimate is conditional and its hypothesis does not hold for the
    /// given space; the conclusion was not asserted.
    HypothesisNotMet,
}

/// Result of one check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub theorem_id: TheoremId,
    /// Every input of the check.
    pub params: BTreeMap<String, Value>,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub margin: f64,
    /// `lhs <= rhs + tolerance (1 + |rhs|)`.
    pub pass: bool,
    pub tolerance: f64,
    /// Radial grid of node-wise checks; absent for purely integral checks.
    pub grid_meta: Option<GridSummary>,
    pub verdict: Verdict,
    /// Intermediate quantities (constants, norms, worst node, cross-checks).
    pub diagnostics: BTreeMap<String, Value>,
}

impl CheckReport {
    /// `margin / max(|lhs|, |rhs|)`, or `0` when both sides vanish. Invariant
    /// under a common rescaling of both sides.
    pub fn relative_margin(&self) -> f64 {
        let scale = self.lhs.abs().max(self.rhs.abs());
        if scale == 0.0 {
            0.0
        } else {
            self.margin / scale
        }
    }
}

/// `lhs <= rhs + tol (1 + |rhs|)`.
pub fn passes<T: Real>(lhs: T, rhs: T, tol: T) -> bool {
    lhs <= rhs + tol * (T::one() + rhs.abs())
}

/// Numerical settings shared by all checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions<T> {
    pub quadrature: QuadratureSpec<T>,
    pub tolerance: T,
    /// Number of cells `M` of the radial grids of node-wise checks.
    pub grid_cells: usize,
    /// Grading exponent of those grids; `2p - 1` when absent.
    pub grid_gamma: Option<T>,
}

impl<T: Real> Default for CheckOptions<T> {
    fn default() -> Self {
        CheckOptions {
            quadrature: QuadratureSpec::default(),
            tolerance: T::lit(DEFAULT_TOLERANCE),
            grid_cells: DEFAULT_CELLS,
            grid_gamma: None,
        }
    }
}

impl<T: Real> CheckOptions<T> {
    pub fn validate(&self) -> Result<()> {
        self.quadrature.validate()?;
        if !(self.tolerance >= T::zero()) || !self.tolerance.is_finite() {
            return Err(Error::Parameter(format!("tolerance must be >= 0, got {}", self.tolerance)));
        }
        Ok(())
    }

    pub fn gamma(&self, p: T) -> T {
        self.grid_gamma.unwrap_or(T::lit(2.0) * p - T::one())
    }

    /// Graded grid on `[lo, hi]` with these options. The default exponent is
    /// capped so that the first cell stays about 1024 ulps of `hi` wide;
    /// an explicit exponent is used as given.
    pub fn grid(&self, lo: T, hi: T, p: T) -> Result<RadialGrid<T>> {
        let gamma = match self.grid_gamma {
            Some(g) => g,
            None => {
                let span = hi - lo;
                let resolvable = (span / (T::lit(1024.0) * T::epsilon() * hi)).ln()
                    / T::from_usize_lossy(self.grid_cells.max(2)).ln();
                self.gamma(p).min(resolvable.max(T::one()))
            }
        };
        RadialGrid::new(lo, hi, self.grid_cells, gamma)
    }
}

/// Shared validation of the `(space, model, p)` triple.
fn prepare<T: Real>(space: &WarpedSpace<T>, model: &ModelParams<T>, p: T, opts: &CheckOptions<T>) -> Result<()> {
    opts.validate()?;
    space.require_compatible(model)?;
    if !(T::lit(2.0) * p > model.dim()) || !p.is_finite() {
        return Err(Error::Parameter(format!(
            "2p > n + k required, got p = {p}, n + k = {}",
            model.dim()
        )));
    }
    Ok(())
}

fn require_radius<T: Real>(space: &WarpedSpace<T>, r: T, what: &'static str) -> Result<()> {
    if !(r > T::zero()) || !r.is_finite() {
        return Err(Error::domain(what, format!("radius must be positive, got {r}")));
    }
    if r > space.max_radius() * (T::one() + T::lit(1e-12)) {
        return Err(Error::domain(
            what,
            format!("radius {r} exceeds the maximal radius {}", space.max_radius()),
        ));
    }
    Ok(())
}

/// `(n + k - 1)(2p - 1) / (2p - n - k)`.
fn norm_coefficient<T: Real>(model: &ModelParams<T>, p: T) -> T {
    let two_p = T::lit(2.0) * p;
    (model.dim() - T::one()) * (two_p - T::one()) / (two_p - model.dim())
}

/// `(2p - 1)^p ((n + k - 1) / (2p - n - k))^(p - 1)`.
fn pointwise_coefficient<T: Real>(model: &ModelParams<T>, p: T) -> T {
    let two_p = T::lit(2.0) * p;
    (two_p - T::one()).powf(p) * ((model.dim() - T::one()) / (two_p - model.dim())).powf(p - T::one())
}

/// `||Ric_{f-}^{mu,H}||_{p,f}(r)` about the pole.
fn deficit_norm<T: Real>(space: &WarpedSpace<T>, model: &ModelParams<T>, p: T, r: T, spec: &QuadratureSpec<T>) -> Result<T> {
    let h = model.curvature;
    weighted_lp_norm(space, |t| space.deficit(h, t), p, r, spec)
}

/// Input echo for a report.
struct Params(BTreeMap<String, Value>);

impl Params {
    fn new<T: Real>(space: &WarpedSpace<T>, model: &ModelParams<T>, p: T, opts: &CheckOptions<T>) -> Self {
        let mut map = BTreeMap::new();
        let (family, family_params) = match space.origin() {
            SpaceOrigin::Builtin(f) => (f.name().to_string(), f.parameters()),
            SpaceOrigin::Tabulated { samples } => {
                let mut m = BTreeMap::new();
                m.insert("samples".to_string(), *samples as f64);
                ("tabulated".to_string(), m)
            }
            SpaceOrigin::Custom => ("custom".to_string(), BTreeMap::new()),
        };
        map.insert("family".into(), Value::from(family));
        for (k, v) in family_params {
            map.insert(k, num(v));
        }
        map.insert("n".into(), Value::from(space.n()));
        map.insert("k".into(), num(space.k().as_f64()));
        map.insert("mu".into(), num(space.mu().as_f64()));
        map.insert("omega".into(), num(space.omega().as_f64()));
        map.insert("max_radius".into(), num(space.max_radius().as_f64()));
        map.insert("H".into(), num(model.curvature.as_f64()));
        map.insert("p".into(), num(p.as_f64()));
        map.insert("center".into(), Value::from("pole"));
        map.insert("reduced_accuracy".into(), Value::from(space.reduced_accuracy()));
        map.insert("quadrature.abs_tol".into(), num(opts.quadrature.abs_tol.as_f64()));
        map.insert("quadrature.rel_tol".into(), num(opts.quadrature.rel_tol.as_f64()));
        map.insert(
            "quadrature.max_refinements".into(),
            Value::from(opts.quadrature.max_refinements),
        );
        Params(map)
    }

    fn with<T: Real>(mut self, key: &str, value: T) -> Self {
        self.0.insert(key.to_string(), num(value.as_f64()));
        self
    }
}

fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

/// Diagnostics accumulator.
#[derive(Default)]
struct Diagnostics(BTreeMap<String, Value>);

impl Diagnostics {
    fn set<T: Real>(&mut self, key: &str, value: T) {
        self.0.insert(key.to_string(), num(value.as_f64()));
    }

    fn note(&mut self, key: &str, value: impl Into<Value>) {
        self.0.insert(key.to_string(), value.into());
    }
}

fn finish<T: Real>(
    id: TheoremId,
    params: Params,
    lhs: T,
    rhs: T,
    opts: &CheckOptions<T>,
    grid: Option<GridSummary>,
    diagnostics: Diagnostics,
) -> Result<CheckReport> {
    let verdict = if passes(lhs, rhs, opts.tolerance) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    finish_with(id, params, lhs, rhs, opts, grid, diagnostics, verdict)
}

#[allow(clippy::too_many_arguments)]
fn finish_with<T: Real>(
    id: TheoremId,
    params: Params,
    lhs: T,
    rhs: T,
    opts: &CheckOptions<T>,
    grid: Option<GridSummary>,
    diagnostics: Diagnostics,
    verdict: Verdict,
) -> Result<CheckReport> {
    let (l, r) = (lhs.as_f64(), rhs.as_f64());
    if !l.is_finite() || !r.is_finite() {
        return Err(Error::domain(
            "theorem check",
            format!("{id}: non-finite sides lhs = {l}, rhs = {r}"),
        ));
    }
    Ok(CheckReport {
        theorem_id: id,
        params: params.0,
        lhs: l,
        rhs: r,
        margin: r - l,
        pass: passes(lhs, rhs, opts.tolerance),
        tolerance: opts.tolerance.as_f64(),
        grid_meta: grid,
        verdict,
        diagnostics: diagnostics.0,
    })
}

/// Node-wise comparison: keeps the node with the smallest relative margin
/// `(rhs - lhs) / (1 + |rhs|)`, preferring the larger radius on ties.
struct WorstNode<T> {
    t: T,
    lhs: T,
    rhs: T,
    score: T,
    nodes: usize,
    failing: usize,
}

impl<T: Real> WorstNode<T> {
    fn new() -> Self {
        WorstNode {
            t: T::zero(),
            lhs: T::zero(),
            rhs: T::zero(),
            score: T::infinity(),
            nodes: 0,
            failing: 0,
        }
    }

    fn push(&mut self, t: T, lhs: T, rhs: T, tol: T) {
        self.nodes += 1;
        if !passes(lhs, rhs, tol) {
            self.failing += 1;
        }
        let score = (rhs - lhs) / (T::one() + rhs.abs());
        let worse = score < self.score || (score == self.score && t > self.t) || score.is_nan();
        if worse && !self.score.is_nan() {
            self.t = t;
            self.lhs = lhs;
            self.rhs = rhs;
            self.score = score;
        }
    }

    fn record(&self, d: &mut Diagnostics) {
        d.set("worst_radius", self.t);
        d.note("nodes_checked", self.nodes);
        d.note("failing_nodes", self.failing);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theorem_ids_round_trip() {
        for id in TheoremId::ALL {
            assert_eq!(id.as_str().parse::<TheoremId>().unwrap(), id);
            let json = serde_json::to_string(&id).unwrap();
            assert_eq!(json, format!("\"{}\"", id.as_str()));
        }
        assert!("T9".parse::<TheoremId>().is_err());
    }

    #[test]
    fn pass_rule() {
        assert!(passes(1.0, 1.0, 0.0));
        assert!(passes(1.0 + 1e-8, 1.0, 1e-7));
        assert!(!passes(1.0 + 1e-6, 1.0, 1e-7));
        assert!(passes(1e-8, 0.0, 1e-7));
    }

    #[test]
    fn worst_node_prefers_larger_radius_on_ties() {
        let mut w = WorstNode::new();
        w.push(0.5, 0.0, 0.0, 1e-7);
        w.push(1.0, 0.0, 0.0, 1e-7);
        assert_eq!(w.t, 1.0);
        w.push(0.2, 1.0, 0.5, 1e-7);
        assert_eq!((w.t, w.failing), (0.2, 1));
    }
}
