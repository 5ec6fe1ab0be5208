//! Explicit constants of the integral comparison estimates.

use serde::{Deserialize, Serialize};

use super::ModelParams;
use crate::error::{Error, Result};
use crate::integral_norms::{integrate_adaptive, integrate_graded, QuadratureSpec};
use crate::scalar::Real;

/// Radii of an annulus comparison, `r1 <= r2 <= big_r1 <= big_r2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusRadii<T> {
    pub r1: T,
    pub r2: T,
    pub big_r1: T,
    pub big_r2: T,
}

impl<T: Real> AnnulusRadii<T> {
    pub fn validate(&self) -> Result<()> {
        let AnnulusRadii { r1, r2, big_r1, big_r2 } = *self;
        if !(T::zero() <= r1 && r1 <= r2 && r2 <= big_r1 && big_r1 <= big_r2) {
            return Err(Error::Ordering(format!(
                "annulus radii must satisfy 0 <= r1 <= r2 <= R1 <= R2, got ({r1}, {r2}, {big_r1}, {big_r2})"
            )));
        }
        Ok(())
    }
}

/// Inputs of a constant evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantRequest<T> {
    pub model: ModelParams<T>,
    /// Integrability exponent, `2p > n + k`.
    pub p: T,
    /// Outer radius `R`.
    pub radius: T,
    pub annulus: Option<AnnulusRadii<T>>,
    pub beta: Option<T>,
}

impl<T: Real> ConstantRequest<T> {
    pub fn new(model: ModelParams<T>, p: T, radius: T) -> Result<Self> {
        let req = ConstantRequest {
            model,
            p,
            radius,
            annulus: None,
            beta: None,
        };
        req.validate()?;
        Ok(req)
    }

    pub fn with_annulus(mut self, annulus: AnnulusRadii<T>) -> Result<Self> {
        annulus.validate()?;
        self.annulus = Some(annulus);
        Ok(self)
    }

    pub fn with_beta(mut self, beta: T) -> Result<Self> {
        if !(beta > T::one()) {
            return Err(Error::Parameter(format!("beta must exceed 1, got {beta}")));
        }
        self.beta = Some(beta);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        require_integrable_p(&self.model, self.p)?;
        if !(self.radius >= T::zero()) || !self.radius.is_finite() {
            return Err(Error::Parameter(format!("radius must be >= 0, got {}", self.radius)));
        }
        Ok(())
    }
}

pub(crate) fn require_integrable_p<T: Real>(model: &ModelParams<T>, p: T) -> Result<()> {
    if !(T::lit(2.0) * p > model.dim()) {
        return Err(Error::Parameter(format!(
            "2p > n + k required, got p = {p}, n + k = {}",
            model.dim()
        )));
    }
    Ok(())
}

/// `((N - 1) / ((2p - 1)(2p - N)))^((p - 1)/(2p - 1))`, shared by every
/// volume-type constant.
pub fn comparison_prefactor<T: Real>(model: &ModelParams<T>, p: T) -> T {
    let two_p = T::lit(2.0) * p;
    let big_n = model.dim();
    ((big_n - T::one()) / ((two_p - T::one()) * (two_p - big_n))).powf((p - T::one()) / (two_p - T::one()))
}

fn singular_exponent<T: Real>(model: &ModelParams<T>, p: T) -> T {
    (model.dim() - T::one()) / (T::lit(2.0) * p - T::one())
}

/// Volume comparison constant
/// `prefactor * ∫_0^R A(t) (t / V(t))^(2p/(2p-1)) dt`, nondecreasing in `R`.
pub fn volume_comparison_constant<T: Real>(req: &ConstantRequest<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    req.validate()?;
    let model = &req.model;
    model.require_half_period(req.radius, "volume comparison constant")?;
    let p = req.p;
    let inv = T::one() / (T::lit(2.0) * p - T::one());
    let q = T::lit(2.0) * p * inv;
    // A (t/V)^q = omega^(-inv) a^(-inv) rho^(-q),  rho = V / (t A)
    let integrand = |t: T| -> T {
        let a = model.area_density(t).unwrap_or(T::nan());
        let rho = model.volume_ratio(t).unwrap_or(T::nan());
        a.powf(-inv) * rho.powf(-q)
    };
    let est = integrate_graded(integrand, T::zero(), req.radius, singular_exponent(model, p), spec)?;
    Ok(comparison_prefactor(model, p) * model.omega.powf(-inv) * est.value)
}

/// Area comparison constant `prefactor * ∫_0^R A(t)^(-1/(2p-1)) dt`.
pub fn area_comparison_constant<T: Real>(req: &ConstantRequest<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    req.validate()?;
    let model = &req.model;
    model.require_half_period(req.radius, "area comparison constant")?;
    let inv = T::one() / (T::lit(2.0) * req.p - T::one());
    let integrand = |t: T| model.area_density(t).unwrap_or(T::nan()).powf(-inv);
    let est = integrate_graded(integrand, T::zero(), req.radius, singular_exponent(model, req.p), spec)?;
    Ok(comparison_prefactor(model, req.p) * model.omega.powf(-inv) * est.value)
}

/// Annulus comparison constant
/// `prefactor * (∫_{R1}^{R2} A(t) (t / V(r2, t))^q dt + ∫_{r1}^{r2} A(R1) (R1 / V(t, R1))^q dt)`
/// with `q = 2p / (2p - 1)`.
///
/// Both integrands blow up non-integrably when `r2 = R1 > 0` and the
/// corresponding interval is nonempty; that case is reported as divergent.
pub fn annulus_comparison_constant<T: Real>(req: &ConstantRequest<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    req.validate()?;
    let radii = req
        .annulus
        .ok_or_else(|| Error::Parameter("annulus constant needs annulus radii".into()))?;
    radii.validate()?;
    let model = &req.model;
    model.require_half_period(radii.big_r2, "annulus comparison constant")?;
    let AnnulusRadii { r1, r2, big_r1, big_r2 } = radii;
    let p = req.p;
    let inv = T::one() / (T::lit(2.0) * p - T::one());
    let q = T::lit(2.0) * p * inv;

    let outer_empty = big_r1 == big_r2;
    let inner_empty = r1 == r2;
    if outer_empty && inner_empty {
        return Ok(T::zero());
    }
    if r2 == big_r1 && r2 > T::zero() {
        return Err(Error::Divergent(format!(
            "annulus constant with r2 = R1 = {r2}: the kernel (t - r2)^(-{q}) is not integrable"
        )));
    }

    let outer = if outer_empty {
        T::zero()
    } else if r2 == T::zero() {
        // inner radius at the center: same kernel as the ball constant
        let integrand = |t: T| {
            let a = model.area_density(t).unwrap_or(T::nan());
            let rho = model.volume_ratio(t).unwrap_or(T::nan());
            a.powf(-inv) * rho.powf(-q)
        };
        integrate_graded(integrand, big_r1, big_r2, singular_exponent(model, p), spec)?.value
    } else {
        let integrand = |t: T| {
            let a = model.area_density(t).unwrap_or(T::nan());
            let v = model.annulus_density(r2, t).unwrap_or(T::nan());
            a * (t / v).powf(q)
        };
        integrate_adaptive(integrand, big_r1, big_r2, spec)?.value
    };

    let inner = if inner_empty {
        T::zero()
    } else {
        let a_big = model.area_density(big_r1)?;
        let integrand = |t: T| {
            let v = model.annulus_density(t, big_r1).unwrap_or(T::nan());
            a_big * (big_r1 / v).powf(q)
        };
        integrate_adaptive(integrand, r1, r2, spec)?.value
    };

    Ok(comparison_prefactor(model, p) * model.omega.powf(T::one() - q) * (outer + inner))
}

/// Smallness threshold for the normalized curvature integral under which the
/// volume doubling estimate with factor `beta` holds:
/// `eps^(p/(2p-1)) = (1 - beta^(-1/(2p-1))) / (3 C(R) V(R)^(1/(2p-1)))`.
pub fn doubling_epsilon<T: Real>(req: &ConstantRequest<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    let beta = req
        .beta
        .ok_or_else(|| Error::Parameter("doubling epsilon needs beta".into()))?;
    if !(beta > T::one()) {
        return Err(Error::Parameter(format!("beta must exceed 1, got {beta}")));
    }
    if !(req.radius > T::zero()) {
        return Err(Error::Parameter(format!("radius must be positive, got {}", req.radius)));
    }
    let p = req.p;
    let inv = T::one() / (T::lit(2.0) * p - T::one());
    let c = volume_comparison_constant(req, spec)?;
    let v = req.model.volume(req.radius)?;
    let base = (T::one() - beta.powf(-inv)) / (T::lit(3.0) * c * v.powf(inv));
    Ok(base.powf((T::lit(2.0) * p - T::one()) / p))
}

/// Lower bound on `K` that makes the excess-function estimate of the diameter
/// argument positive: `(8/3) (V(r) / V(r/2)) (7 (n + k) / r + 1)`.
pub fn excess_threshold<T: Real>(model: &ModelParams<T>, r: T) -> Result<T> {
    if !(r > T::zero()) {
        return Err(Error::domain("excess threshold", format!("radius must be positive, got {r}")));
    }
    model.require_half_period(r, "excess threshold").map_err(|e| match e {
        Error::Range(m) => Error::domain("excess threshold", m),
        other => other,
    })?;
    let big_n = model.dim();
    let ratio = if model.curvature == T::zero() {
        T::lit(2.0).powf(big_n)
    } else {
        model.volume_density(r)? / model.volume_density(r * T::lit(0.5))?
    };
    Ok(T::lit(8.0) * ratio * (T::lit(7.0) * big_n / r + T::one()) / T::lit(3.0))
}
