//! Weighted rotationally symmetric spaces `dr² + phi(r)² g_sphere` with
//! measure `e^{-f} dv`, and the curvature of the generalized quasi-Einstein
//! tensor `Ric + Hess f - mu df ⊗ df` along the radius.
//!
//! Every radial evaluation is clamped to `r >= r_min = 1e-6 L`. Integrals
//! that reach into `[0, r_min)` use the leading-order behaviour at the pole:
//! density `t^(n-1) e^{-f(0)}`, mean-curvature excess `0` and the deficit of
//! the first regular radius.

mod profile;
mod spline;
mod tabulated;

pub use profile::{BuiltinFamily, Jet, Profile};
pub use spline::CubicSpline;
pub use tabulated::{parse_tabulated, read_tabulated, TabulatedProfile, MIN_TABULATED_SAMPLES};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::integral_norms::{integrate_adaptive, integrate_cumulative, QuadratureSpec, RadialGrid};
use crate::model_space::{sphere_measure, ModelParams};
use crate::scalar::Real;

/// Pole regularization radius as a fraction of the maximal radius.
pub const POLE_FRACTION: f64 = 1e-6;
/// Relative tolerance of the pole smoothness checks `phi/t -> 1`, `phi' -> 1`.
pub const POLE_TOLERANCE: f64 = 1e-4;
/// Bound on `|f'(0)|`.
pub const WEIGHT_SLOPE_TOLERANCE: f64 = 1e-8;
const POSITIVITY_SAMPLES: usize = 1024;

/// Where a space came from; carried into reports.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceOrigin<T> {
    Builtin(BuiltinFamily<T>),
    /// Spline fit through tabulated samples; curvature is of reduced accuracy.
    Tabulated { samples: usize },
    Custom,
}

/// The two eigenvalues of `Ric_f^mu` at a radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenvalues<T> {
    /// On the radial direction `d/dr`.
    pub radial: T,
    /// On vectors tangent to the geodesic sphere (multiplicity `n - 1`).
    pub tangential: T,
}

impl<T: Real> Eigenvalues<T> {
    pub fn min(&self) -> T {
        self.radial.min(self.tangential)
    }
}

/// A weighted rotationally symmetric smooth metric measure space.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpedSpace<T> {
    n: usize,
    k: T,
    mu: T,
    omega: T,
    max_radius: T,
    warp: Profile<T>,
    weight: Profile<T>,
    origin: SpaceOrigin<T>,
}

impl<T: Real> WarpedSpace<T> {
    /// Space with the given warp and weight on `(0, max_radius]`, with `omega`
    /// the measure of the round unit `(n-1)`-sphere.
    pub fn new(n: usize, k: T, mu: T, warp: Profile<T>, weight: Profile<T>, max_radius: T) -> Result<Self> {
        let space = WarpedSpace {
            n,
            k,
            mu,
            omega: sphere_measure(n),
            max_radius,
            warp,
            weight,
            origin: SpaceOrigin::Custom,
        };
        space.validate()?;
        Ok(space)
    }

    /// Builtin family on its default radius range.
    pub fn builtin(family: BuiltinFamily<T>, n: usize, k: T, mu: T) -> Result<Self> {
        if let BuiltinFamily::WeightPerturbedSphere { q, .. } = family {
            if !(q >= T::lit(2.0)) {
                return Err(Error::Parameter(format!(
                    "weight exponent q must be >= 2 for a smooth weight at the pole, got {q}"
                )));
            }
        }
        let mut space = Self::new(n, k, mu, family.warp(), family.weight(), family.default_max_radius())?;
        space.origin = SpaceOrigin::Builtin(family);
        Ok(space)
    }

    /// Space interpolating tabulated `(r, phi, f)` samples. The first sample
    /// must sit at the pole `r = 0`; the splines are clamped to `phi'(0) = 1`
    /// and `f'(0) = 0`.
    pub fn tabulated(n: usize, k: T, mu: T, table: &TabulatedProfile<T>) -> Result<Self> {
        let warp = CubicSpline::new(table.r.clone(), table.phi.clone(), Some(T::one()))?;
        let weight = CubicSpline::new(table.r.clone(), table.f.clone(), Some(T::zero()))?;
        let max_radius = *table.r.last().expect("validated table");
        let mut space = Self::new(
            n,
            k,
            mu,
            Profile::Spline(Arc::new(warp)),
            Profile::Spline(Arc::new(weight)),
            max_radius,
        )?;
        space.origin = SpaceOrigin::Tabulated { samples: table.r.len() };
        Ok(space)
    }

    pub fn with_max_radius(mut self, max_radius: T) -> Result<Self> {
        self.max_radius = max_radius;
        self.validate()?;
        Ok(self)
    }

    pub fn with_omega(mut self, omega: T) -> Result<Self> {
        self.omega = omega;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Parameter(format!("dimension n must be >= 2, got {}", self.n)));
        }
        if !(self.k > T::zero()) || !self.k.is_finite() {
            return Err(Error::Parameter(format!("k must be positive, got {}", self.k)));
        }
        let slack = T::lit(1e-12);
        if !(self.mu * self.k >= T::one() - slack) {
            return Err(Error::Parameter(format!(
                "mu >= 1/k violated: mu = {}, 1/k = {}",
                self.mu,
                T::one() / self.k
            )));
        }
        if !(self.omega > T::zero()) || !self.omega.is_finite() {
            return Err(Error::Parameter(format!("omega must be positive, got {}", self.omega)));
        }
        let l = self.max_radius;
        if !(l > T::zero()) || !l.is_finite() {
            return Err(Error::Parameter(format!("max radius must be positive, got {l}")));
        }
        if let Some(close) = self.warp.closing_radius() {
            if !(l < close) {
                return Err(Error::Parameter(format!(
                    "max radius {l} must stay below the closing radius {close} of the warp"
                )));
            }
        }
        let r0 = self.r_min();
        let jet = self.warp.jet(r0);
        let tol = T::lit(POLE_TOLERANCE);
        if !((jet.value / r0 - T::one()).abs() <= tol && (jet.d1 - T::one()).abs() <= tol) {
            return Err(Error::Profile(format!(
                "warp is not smooth at the pole: phi(t)/t = {}, phi'(t) = {} at t = {r0}",
                jet.value / r0,
                jet.d1
            )));
        }
        let f_slope = self.weight.jet(T::zero()).d1;
        if !(f_slope.abs() < T::lit(WEIGHT_SLOPE_TOLERANCE)) {
            return Err(Error::Profile(format!("weight must satisfy f'(0) = 0, got {f_slope}")));
        }
        for i in 1..=POSITIVITY_SAMPLES {
            let t = r0 + (l - r0) * T::from_usize_lossy(i) / T::from_usize_lossy(POSITIVITY_SAMPLES);
            let phi = self.warp.jet(t);
            let f = self.weight.jet(t);
            if !(phi.value > T::zero()) {
                return Err(Error::Profile(format!("warp must be positive on (0, L], phi({t}) = {}", phi.value)));
            }
            let finite = [phi.value, phi.d1, phi.d2, f.value, f.d1, f.d2].iter().all(|v| v.is_finite());
            if !finite {
                return Err(Error::Profile(format!("profile not finite at t = {t}")));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> T {
        self.k
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    /// Largest admissible radius `L`.
    pub fn max_radius(&self) -> T {
        self.max_radius
    }

    /// Effective dimension `n + k`.
    pub fn dim(&self) -> T {
        T::from_usize_lossy(self.n) + self.k
    }

    pub fn origin(&self) -> &SpaceOrigin<T> {
        &self.origin
    }

    pub fn family(&self) -> Option<BuiltinFamily<T>> {
        match self.origin {
            SpaceOrigin::Builtin(f) => Some(f),
            _ => None,
        }
    }

    /// True when the curvature comes from spline derivatives.
    pub fn reduced_accuracy(&self) -> bool {
        self.warp.is_tabulated() || self.weight.is_tabulated()
    }

    pub fn warp(&self) -> &Profile<T> {
        &self.warp
    }

    pub fn weight(&self) -> &Profile<T> {
        &self.weight
    }

    /// Pole regularization radius `1e-6 L`.
    pub fn r_min(&self) -> T {
        self.max_radius * T::lit(POLE_FRACTION)
    }

    /// Radius of the second pole when the warp closes up there and `L`
    /// reaches it up to the default gap; `None` for non-compact spaces.
    pub fn closing_radius(&self) -> Option<T> {
        self.warp.closing_radius()
    }

    /// Comparison model matching this space's `n`, `k` and `omega`.
    pub fn model(&self, curvature: T) -> Result<ModelParams<T>> {
        ModelParams::with_omega(self.n, self.k, curvature, self.omega)
    }

    /// Fails unless `model` has this space's dimensions and `omega`.
    pub fn require_compatible(&self, model: &ModelParams<T>) -> Result<()> {
        let close = |a: T, b: T| (a - b).abs() <= T::lit(1e-12) * a.abs().max(b.abs());
        if model.n != self.n || !close(model.k, self.k) || !close(model.omega, self.omega) {
            return Err(Error::Parameter(format!(
                "model (n={}, k={}, omega={}) does not match space (n={}, k={}, omega={})",
                model.n, model.k, model.omega, self.n, self.k, self.omega
            )));
        }
        Ok(())
    }

    fn require_regular(&self, r: T) -> Result<()> {
        let r0 = self.r_min();
        if !(r >= r0 * (T::one() - T::lit(1e-12))) {
            return Err(Error::Pole {
                r: r.as_f64(),
                r_min: r0.as_f64(),
            });
        }
        self.require_within(r)
    }

    fn require_within(&self, r: T) -> Result<()> {
        if !(r <= self.max_radius * (T::one() + T::lit(1e-12))) {
            return Err(Error::domain(
                "warped space",
                format!("radius {r} exceeds the maximal radius {}", self.max_radius),
            ));
        }
        Ok(())
    }

    fn clamp(&self, t: T) -> T {
        t.max(self.r_min()).min(self.max_radius)
    }

    fn eigenvalues_at(&self, t: T) -> Eigenvalues<T> {
        let phi = self.warp.jet(t);
        let f = self.weight.jet(t);
        let n1 = T::from_usize_lossy(self.n - 1);
        let n2 = T::from_usize_lossy(self.n - 2);
        let curv = phi.d2 / phi.value;
        Eigenvalues {
            radial: -n1 * curv + f.d2 - self.mu * f.d1 * f.d1,
            tangential: -curv + n2 * self.warp.one_minus_slope_sq(t) / (phi.value * phi.value)
                + f.d1 * phi.d1 / phi.value,
        }
    }

    /// Radial and tangential eigenvalues of `Ric_f^mu` at `r`.
    pub fn gqe_eigenvalues(&self, r: T) -> Result<Eigenvalues<T>> {
        self.require_regular(r)?;
        Ok(self.eigenvalues_at(self.clamp(r)))
    }

    /// Smallest eigenvalue of `Ric_f^mu`, evaluated at the clamped radius.
    pub fn lambda_min(&self, t: T) -> T {
        self.eigenvalues_at(self.clamp(t)).min()
    }

    /// Curvature deficit `((n + k - 1) H - lambda_min)_+` at the clamped radius.
    pub fn deficit(&self, curvature: T, t: T) -> T {
        ((self.dim() - T::one()) * curvature - self.lambda_min(t)).positive_part()
    }

    /// `f`-mean curvature `(n - 1) phi'/phi - f'` of the geodesic sphere.
    pub fn weighted_mean_curvature(&self, r: T) -> Result<T> {
        self.require_regular(r)?;
        Ok(self.mean_curvature_at(self.clamp(r)))
    }

    fn mean_curvature_at(&self, t: T) -> T {
        let phi = self.warp.jet(t);
        T::from_usize_lossy(self.n - 1) * phi.d1 / phi.value - self.weight.jet(t).d1
    }

    /// Mean-curvature excess `(m_f - m_H)_+` over the model. Zero inside the
    /// pole region, where `m_f - m_H ~ -k / t`.
    pub fn excess(&self, model: &ModelParams<T>, r: T) -> Result<T> {
        if !(r > T::zero()) {
            return Err(Error::domain("excess", format!("radius must be positive, got {r}")));
        }
        self.require_within(r)?;
        let m_model = model.mean_curvature(r)?;
        if r < self.r_min() {
            return Ok(T::zero());
        }
        Ok((self.mean_curvature_at(r) - m_model).positive_part())
    }

    /// `omega`-free weighted area density `phi^(n-1) e^{-f}`.
    pub fn density(&self, t: T) -> T {
        if t <= T::zero() {
            return T::zero();
        }
        let e = (self.n - 1) as i32;
        if t < self.r_min() {
            return t.powi(e) * (-self.weight.jet(T::zero()).value).exp();
        }
        let t = t.min(self.max_radius);
        self.warp.jet(t).value.powi(e) * (-self.weight.jet(t).value).exp()
    }

    /// Weighted area `A_f(r) = omega phi(r)^(n-1) e^{-f(r)}`.
    pub fn weighted_area(&self, r: T) -> Result<T> {
        if r < T::zero() {
            return Err(Error::domain("weighted area", format!("negative radius {r}")));
        }
        self.require_within(r)?;
        Ok(self.omega * self.density(r))
    }

    /// Weighted volume `V_f(r) = ∫_0^r A_f`.
    pub fn weighted_volume(&self, r: T) -> Result<T> {
        self.weighted_volume_annulus(T::zero(), r)
    }

    /// Weighted annulus volume `V_f(r1, r2) = ∫_{r1}^{r2} A_f`.
    pub fn weighted_volume_annulus(&self, r1: T, r2: T) -> Result<T> {
        if r1 > r2 {
            return Err(Error::Ordering(format!("annulus radii {r1} > {r2}")));
        }
        if r1 < T::zero() {
            return Err(Error::domain("weighted volume", format!("negative radius {r1}")));
        }
        self.require_within(r2)?;
        if r1 == r2 {
            return Ok(T::zero());
        }
        let est = integrate_adaptive(|t| self.density(t), r1, r2, &volume_spec())?;
        Ok(self.omega * est.value)
    }

    /// Weighted volumes `V_f(node)` of the balls at every node (nondecreasing
    /// nodes starting at or above zero).
    pub fn weighted_volume_cumulative(&self, nodes: &[T]) -> Result<Vec<T>> {
        let Some(&first) = nodes.first() else {
            return Ok(Vec::new());
        };
        if let Some(&last) = nodes.last() {
            self.require_within(last)?;
        }
        let head = self.weighted_volume(first.max(T::zero()))?;
        let tail = integrate_cumulative(|t| self.density(t), nodes, &volume_spec())?;
        Ok(tail.into_iter().map(|v| head + self.omega * v).collect())
    }

    /// Eigenvalue and deficit samples on a grid.
    pub fn deficit_profile(&self, curvature: T, grid: &RadialGrid<T>) -> Result<DeficitProfile<T>> {
        self.require_within(grid.r_max())?;
        let lambda_min: Vec<T> = grid.nodes().iter().map(|&t| self.lambda_min(t)).collect();
        let level = (self.dim() - T::one()) * curvature;
        let deficit = lambda_min.iter().map(|&l| (level - l).positive_part()).collect();
        Ok(DeficitProfile {
            grid: grid.clone(),
            lambda_min,
            deficit,
            curvature,
        })
    }
}

/// Tolerances for weighted volumes, which have smooth positive integrands.
pub(crate) fn volume_spec<T: Real>() -> QuadratureSpec<T> {
    let eps = T::epsilon();
    QuadratureSpec {
        abs_tol: T::min_positive_value().sqrt() * eps,
        rel_tol: T::lit(1e-12).max(eps * T::lit(100.0)),
        max_refinements: 30,
    }
}

/// Smallest eigenvalue of `Ric_f^mu` and the deficit below `(n + k - 1) H`
/// sampled on a radial grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DeficitProfile<T> {
    pub grid: RadialGrid<T>,
    pub lambda_min: Vec<T>,
    pub deficit: Vec<T>,
    pub curvature: T,
}

impl<T: Real> DeficitProfile<T> {
    /// True when the space satisfies `Ric_f^mu >= (n + k - 1) H` at every node.
    pub fn is_zero(&self) -> bool {
        self.deficit.iter().all(|d| *d == T::zero())
    }
}
