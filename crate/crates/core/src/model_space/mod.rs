//! Closed-form geometry of the simply connected comparison model of constant
//! curvature `H` at effective dimension `N = n + k`, and the explicit
//! comparison constants built from it.
//!
//! Volume quantities carry the factor `omega`, the measure of the unit
//! `(n-1)`-sphere. All integrals are evaluated on the `omega`-free densities
//! and multiplied by `omega` afterwards, so rescaling `omega` rescales every
//! quantity exactly.

mod constants;

pub use constants::{
    annulus_comparison_constant, area_comparison_constant, comparison_prefactor, doubling_epsilon,
    excess_threshold, volume_comparison_constant, AnnulusRadii, ConstantRequest,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integral_norms::{integrate_adaptive, QuadratureSpec};
use crate::scalar::Real;

/// Radii closer than this to `pi / sqrt(H)` are treated as the antipodal point.
pub const PERIOD_GUARD: f64 = 1e-12;

/// Measure of the unit `(n-1)`-sphere, `2 pi^(n/2) / Gamma(n/2)`.
pub fn sphere_measure<T: Real>(n: usize) -> T {
    let half_n = n as f64 / 2.0;
    let (mut gamma, mut x) = if n.is_multiple_of(2) {
        (1.0, 1.0)
    } else {
        (std::f64::consts::PI.sqrt(), 0.5)
    };
    while x < half_n {
        gamma *= x;
        x += 1.0;
    }
    T::lit(2.0 * std::f64::consts::PI.powf(half_n) / gamma)
}

/// The comparison model `M_H^{n+k}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams<T> {
    /// Base dimension of the weighted space.
    pub n: usize,
    /// Quasi-Einstein parameter; the model has dimension `n + k`.
    pub k: T,
    /// Constant sectional curvature `H`.
    pub curvature: T,
    /// Measure of the unit `(n-1)`-sphere used for areas and volumes.
    pub omega: T,
}

impl<T: Real> ModelParams<T> {
    /// Model with `omega` set to the measure of the round unit `(n-1)`-sphere.
    pub fn new(n: usize, k: T, curvature: T) -> Result<Self> {
        Self::with_omega(n, k, curvature, sphere_measure(n))
    }

    pub fn with_omega(n: usize, k: T, curvature: T, omega: T) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(format!("dimension n must be >= 2, got {n}")));
        }
        if !(k > T::zero()) || !k.is_finite() {
            return Err(Error::Parameter(format!("k must be positive, got {k}")));
        }
        if !curvature.is_finite() {
            return Err(Error::Parameter(format!("curvature must be finite, got {curvature}")));
        }
        if !(omega > T::zero()) || !omega.is_finite() {
            return Err(Error::Parameter(format!("omega must be positive, got {omega}")));
        }
        Ok(ModelParams {
            n,
            k,
            curvature,
            omega,
        })
    }

    /// Effective dimension `N = n + k`.
    #[inline]
    pub fn dim(&self) -> T {
        T::from_usize_lossy(self.n) + self.k
    }

    /// `pi / sqrt(H)` for `H > 0`.
    pub fn period(&self) -> Option<T> {
        (self.curvature > T::zero()).then(|| T::PI() / self.curvature.sqrt())
    }

    /// `pi / (2 sqrt(H))` for `H > 0`.
    pub fn half_period(&self) -> Option<T> {
        self.period().map(|p| p * T::lit(0.5))
    }

    /// Fails unless `r <= pi / (2 sqrt(H))` (when `H > 0`).
    pub fn require_half_period(&self, r: T, what: &'static str) -> Result<()> {
        if let Some(half) = self.half_period() {
            if r > half * (T::one() + T::lit(PERIOD_GUARD)) {
                return Err(Error::Range(format!(
                    "{what}: radius {r} exceeds pi/(2 sqrt(H)) = {half}"
                )));
            }
        }
        Ok(())
    }

    pub fn sn(&self, t: T) -> Result<T> {
        generalized_sine(self.curvature, t)
    }

    /// Mean curvature of the geodesic sphere of radius `t`,
    /// `(N - 1) sn'(t) / sn(t)`.
    pub fn mean_curvature(&self, t: T) -> Result<T> {
        if !(t > T::zero()) {
            return Err(Error::domain(
                "model mean curvature",
                format!("radius must be positive, got {t}"),
            ));
        }
        let s = self.sn(t)?;
        let c = generalized_sine_derivative(self.curvature, t);
        Ok((self.dim() - T::one()) * c / s)
    }

    /// `sn(t)^(N-1)`, the model area without the `omega` factor. Zero at the
    /// antipodal point.
    pub fn area_density(&self, t: T) -> Result<T> {
        if t < T::zero() {
            return Err(Error::domain("model area", format!("negative radius {t}")));
        }
        if let Some(period) = self.period() {
            if (t - period).abs() <= T::lit(PERIOD_GUARD) * period.max(T::one()) {
                return Ok(T::zero());
            }
        }
        Ok(self.sn(t)?.powf(self.dim() - T::one()))
    }

    /// Model area `A_H^{n+k}(t) = omega sn(t)^(N-1)`.
    pub fn area(&self, t: T) -> Result<T> {
        Ok(self.omega * self.area_density(t)?)
    }

    /// `V(r) / (r A(r))`, bounded in `(0, 1]` for `r` inside the half period
    /// or for `H <= 0`. Equals `1 / N` in the flat model.
    pub fn volume_ratio(&self, r: T) -> Result<T> {
        if !(r > T::zero()) {
            return Err(Error::domain("model volume ratio", format!("radius must be positive, got {r}")));
        }
        if self.curvature == T::zero() {
            return Ok(T::one() / self.dim());
        }
        let e = self.dim() - T::one();
        let sr = self.sn(r)?;
        let h = self.curvature;
        let est = integrate_adaptive(
            |v: T| (generalized_sine(h, r * v).unwrap_or(T::zero()) / sr).powf(e),
            T::zero(),
            T::one(),
            &model_spec(),
        )?;
        Ok(est.value)
    }

    /// `omega`-free model ball volume `∫_0^r sn^(N-1)`.
    pub fn volume_density(&self, r: T) -> Result<T> {
        if r < T::zero() {
            return Err(Error::domain("model volume", format!("negative radius {r}")));
        }
        if r == T::zero() {
            return Ok(T::zero());
        }
        let within_half = self.half_period().is_none_or(|half| r <= half);
        if within_half {
            return Ok(r * self.area_density(r)? * self.volume_ratio(r)?);
        }
        let period = self.period().expect("positive curvature");
        if r > period * (T::one() + T::lit(PERIOD_GUARD)) {
            return Err(Error::domain(
                "model volume",
                format!("radius {r} beyond the antipodal point {period}"),
            ));
        }
        let r = r.min(period);
        let est = integrate_adaptive(
            |t: T| self.area_density(t).unwrap_or(T::zero()),
            T::zero(),
            r,
            &model_spec(),
        )?;
        Ok(est.value)
    }

    /// Model ball volume `V_H^{n+k}(r) = ∫_0^r A_H^{n+k}`.
    pub fn volume(&self, r: T) -> Result<T> {
        Ok(self.omega * self.volume_density(r)?)
    }

    /// `omega`-free annulus volume `∫_{r1}^{r2} sn^(N-1)`.
    pub fn annulus_density(&self, r1: T, r2: T) -> Result<T> {
        if r1 > r2 {
            return Err(Error::Ordering(format!("annulus radii {r1} > {r2}")));
        }
        if r1 < T::zero() {
            return Err(Error::domain("model annulus", format!("negative radius {r1}")));
        }
        if r1 == r2 {
            return Ok(T::zero());
        }
        if r1 == T::zero() {
            return self.volume_density(r2);
        }
        if let Some(period) = self.period() {
            if r2 > period * (T::one() + T::lit(PERIOD_GUARD)) {
                return Err(Error::domain(
                    "model annulus",
                    format!("radius {r2} beyond the antipodal point {period}"),
                ));
            }
        }
        let est = integrate_adaptive(
            |t: T| self.area_density(t).unwrap_or(T::zero()),
            r1,
            r2,
            &model_spec(),
        )?;
        Ok(est.value)
    }

    /// Model annulus volume `V_H^{n+k}(r1, r2)`.
    pub fn annulus_volume(&self, r1: T, r2: T) -> Result<T> {
        Ok(self.omega * self.annulus_density(r1, r2)?)
    }
}

/// Tolerances for model-space integrals, which have smooth positive integrands.
pub(crate) fn model_spec<T: Real>() -> QuadratureSpec<T> {
    let eps = T::epsilon();
    QuadratureSpec {
        abs_tol: T::lit(1e-300).max(eps * T::lit(100.0) * T::min_positive_value().sqrt()),
        rel_tol: T::lit(1e-13).max(eps * T::lit(100.0)),
        max_refinements: 30,
    }
}

const SERIES_CUTOFF: f64 = 1e-6;

/// Generalized sine `sn_H(t)`: `sin(sqrt(H) t) / sqrt(H)`, `t`, or
/// `sinh(sqrt(-H) t) / sqrt(-H)`.
///
/// Fails for `H > 0` when `t` reaches the first zero `pi / sqrt(H)`.
pub fn generalized_sine<T: Real>(h: T, t: T) -> Result<T> {
    if t < T::zero() {
        return Err(Error::domain("generalized sine", format!("negative argument {t}")));
    }
    let x = h * t * t;
    if h > T::zero() {
        let period = T::PI() / h.sqrt();
        if t >= period - T::lit(PERIOD_GUARD) * period.max(T::one()) {
            return Err(Error::domain(
                "generalized sine",
                format!("argument {t} reaches the first zero pi/sqrt(H) = {period}"),
            ));
        }
    }
    if x.abs() < T::lit(SERIES_CUTOFF) {
        // t (1 - x/6 + x^2/120)
        return Ok(t * (T::one() - x / T::lit(6.0) + x * x / T::lit(120.0)));
    }
    Ok(if h > T::zero() {
        let s = h.sqrt();
        (s * t).sin() / s
    } else {
        let s = (-h).sqrt();
        (s * t).sinh() / s
    })
}

/// Derivative of [`generalized_sine`] in `t`.
pub fn generalized_sine_derivative<T: Real>(h: T, t: T) -> T {
    let x = h * t * t;
    if x.abs() < T::lit(SERIES_CUTOFF) {
        return T::one() - x / T::lit(2.0) + x * x / T::lit(24.0);
    }
    if h > T::zero() {
        (h.sqrt() * t).cos()
    } else {
        ((-h).sqrt() * t).cosh()
    }
}
