//! Area, ball-volume, annulus-volume and doubling comparisons.

use super::{
    deficit_norm, finish, finish_with, prepare, require_radius, CheckOptions, CheckReport, Diagnostics, Params,
    TheoremId, Verdict,
};
use crate::error::{Error, Result};
use crate::integral_norms::kbar;
use crate::model_space::{
    annulus_comparison_constant, area_comparison_constant, comparison_prefactor, doubling_epsilon,
    volume_comparison_constant, AnnulusRadii, ConstantRequest, ModelParams,
};
use crate::scalar::Real;
use crate::warped_manifold::WarpedSpace;

fn require_ordered<T: Real>(r: T, big_r: T) -> Result<()> {
    if !(r > T::zero() && r <= big_r) {
        return Err(Error::Ordering(format!("radii must satisfy 0 < r <= R, got r = {r}, R = {big_r}")));
    }
    Ok(())
}

fn degenerate<T: Real>(id: TheoremId, params: Params, opts: &CheckOptions<T>) -> Result<CheckReport> {
    let mut d = Diagnostics::default();
    d.note("degenerate", true);
    finish(id, params, T::zero(), T::zero(), opts, None, d)
}

/// `(A_f(R)/A_H(R))^(1/(2p-1)) - (A_f(r)/A_H(r))^(1/(2p-1)) <= C_area(R) ||Ric_{f-}||_{p,f}(R)^(p/(2p-1))`
/// for `0 < r <= R`, with `R <= pi/(2 sqrt H)` when `H > 0`.
pub fn check_area_ratio<T: Real>(
    space: &WarpedSpace<T>,
    model: &ModelParams<T>,
    p: T,
    r: T,
    big_r: T,
    opts: &CheckOptions<T>,
) -> Result<CheckReport> {
    prepare(space, model, p, opts)?;
    require_radius(space, big_r, "area ratio check")?;
    require_ordered(r, big_r)?;
    model.require_half_period(big_r, "area ratio check")?;
    let params = Params::new(space, model, p, opts).with("r", r).with("R", big_r);
    if r == big_r {
        return degenerate(TheoremId::AreaRatio, params, opts);
    }
    let inv = T::one() / (T::lit(2.0) * p - T::one());
    let ratio = |t: T| -> Result<T> { Ok((space.weighted_area(t)? / model.area(t)?).powf(inv)) };
    let lhs = ratio(big_r)? - ratio(r)?;
    let constant = area_comparison_constant(&ConstantRequest::new(*model, p, big_r)?, &opts.quadrature)?;
    let dn = deficit_norm(space, model, p, big_r, &opts.quadrature)?;
    let rhs = constant * dn.powf(p * inv);
    let mut d = Diagnostics::default();
    d.set("constant", constant);
    d.set("deficit_norm", dn);
    finish(TheoremId::AreaRatio, params, lhs, rhs, opts, None, d)
}

/// The area-ratio comparison for `H > 0` and
/// `pi/(2 sqrt H) < r <= R < pi/sqrt H`, where the constant becomes
/// `prefactor omega^(-1/(2p-1)) sqrt(H)^((n+k-1)/(2p-1)) ∫_r^R sin^(-2)(sqrt(H) t) dt`.
pub fn check_area_ratio_extended<T: Real>(
    space: &WarpedSpace<T>,
    model: &ModelParams<T>,
    p: T,
    r: T,
    big_r: T,
    opts: &CheckOptions<T>,
) -> Result<CheckReport> {
    prepare(space, model, p, opts)?;
    require_radius(space, big_r, "extended area ratio check")?;
    require_ordered(r, big_r)?;
    let (half, period) = match (model.half_period(), model.period()) {
        (Some(h), Some(p)) => (h, p),
        _ => {
            return Err(Error::Range(format!(
                "extended area ratio needs H > 0, got H = {}",
                model.curvature
            )))
        }
    };
    if !(r > half && big_r < period) {
        return Err(Error::Range(format!(
            "extended area ratio needs pi/(2 sqrt H) = {half} < r <= R < pi/sqrt H = {period}, got r = {r}, R = {big_r}"
        )));
    }
    let params = Params::new(space, model, p, opts).with("r", r).with("R", big_r);
    if r == big_r {
        return degenerate(TheoremId::AreaRatioExtended, params, opts);
    }
    let inv = T::one() / (T::lit(2.0) * p - T::one());
    let ratio = |t: T| -> Result<T> { Ok((space.weighted_area(t)? / model.area(t)?).powf(inv)) };
    let lhs = ratio(big_r)? - ratio(r)?;
    let sqrt_h = model.curvature.sqrt();
    let cot = |t: T| (sqrt_h * t).cos() / (sqrt_h * t).sin();
    let kernel = (cot(r) - cot(big_r)) / sqrt_h;
    let constant = comparison_prefactor(model, p)
        * model.omega.powf(-inv)
        * sqrt_h.powf((model.dim() - T::one()) * inv)
        * kernel;
    let dn = deficit_norm(space, model, p, big_r, &opts.quadrature)?;
    let rhs = constant * dn.powf(p * inv);
    let mut d = Diagnostics::default();
    d.set("constant", constant);
    d.set("kernel_integral", kernel);
    d.set("deficit_norm", dn);
    finish(TheoremId::AreaRatioExtended, params, lhs, rhs, opts, None, d)
}

/// `(V_f(R)/V_H(R))^(1/(2p-1)) - (V_f(r)/V_H(r))^(1/(2p-1)) <= C(R) ||Ric_{f-}||_{p,f}(R)^(p/(2p-1))`.
pub fn check_volume_ratio<T: Real>(
    space: &WarpedSpace<T>,
    model: &ModelParams<T>,
    p: T,
    r: T,
    big_r: T,
    opts: &CheckOptions<T>,
) -> Result<CheckReport> {
    prepare(space, model, p, opts)?;
    require_radius(space, big_r, "volume ratio check")?;
    require_ordered(r, big_r)?;
    model.require_half_period(big_r, "volume ratio check")?;
    let params = Params::new(space, model, p, opts).with("r", r).with("R", big_r);
    if r == big_r {
        return degenerate(TheoremId::VolumeRatio, params, opts);
    }
    let inv = T::one() / (T::lit(2.0) * p - T::one());
    let ratio = |t: T| -> Result<T> { Ok((space.weighted_volume(t)? / model.volume(t)?).powf(inv)) };
    let lhs = ratio(big_r)? - ratio(r)?;
    let constant = volume_comparison_constant(&ConstantRequest::new(*model, p, big_r)?, &opts.quadrature)?;
    let dn = deficit_norm(space, model, p, big_r, &opts.quadrature)?;
    let rhs = constant * dn.powf(p * inv);
    let mut d = Diagnostics::default();
    d.set("constant", constant);
    d.set("deficit_norm", dn);
    finish(TheoremId::VolumeRatio, params, lhs, rhs, opts, None, d)
}

/// Annulus comparison
/// `(V_f(r2,R2)/V_H(r2,R2))^(1/(2p-1)) - (V_f(r1,R1)/V_H(r1,R1))^(1/(2p-1))
///  <= C_annulus ||Ric_{f-}||_{p,f}(R2)^(p/(2p-1))`
/// for `0 <= r1 <= r2 < R1 <= R2`.
pub fn check_annulus_ratio<T: Real>(
    space: &WarpedSpace<T>,
    model: &ModelParams<T>,
    p: T,
    radii: AnnulusRadii<T>,
    opts: &CheckOptions<T>,
) -> Result<CheckReport> {
    prepare(space, model, p, opts)?;
    radii.validate()?;
    let AnnulusRadii { r1, r2, big_r1, big_r2 } = radii;
    require_radius(space, big_r2, "annulus ratio check")?;
    model.require_half_period(big_r2, "annulus ratio check")?;
    let params = Params::new(space, model, p, opts)
        .with("r1", r1)
        .with("r2", r2)
        .with("R1", big_r1)
        .with("R2", big_r2);
    if r1 == r2 && big_r1 == big_r2 {
        return degenerate(TheoremId::AnnulusRatio, params, opts);
    }
    let req = ConstantRequest::new(*model, p, big_r2)?.with_annulus(radii)?;
    let constant = annulus_comparison_constant(&req, &opts.quadrature)?;
    if r2 == big_r1 {
        return Err(Error::Ordering(format!(
            "annulus check needs r2 < R1, got r2 = R1 = {r2}"
        )));
    }
    let inv = T::one() / (T::lit(2.0) * p - T::one());
    let ratio = |a: T, b: T| -> Result<T> {
        Ok((space.weighted_volume_annulus(a, b)? / model.annulus_volume(a, b)?).powf(inv))
    };
    let lhs = ratio(r2, big_r2)? - ratio(r1, big_r1)?;
    let dn = deficit_norm(space, model, p, big_r2, &opts.quadrature)?;
    let rhs = constant * dn.powf(p * inv);
    let mut d = Diagnostics::default();
    d.set("constant", constant);
    d.set("deficit_norm", dn);
    finish(TheoremId::AnnulusRatio, params, lhs, rhs, opts, None, d)
}

/// Volume doubling `V_f(r2)/V_f(r1) <= beta V_H(r2)/V_H(r1)` for
/// `0 < r1 < r2 <= R`, asserted only when `kbar(p, H, R) < eps(beta, R)`.
/// When the hypothesis fails the verdict is [`Verdict::HypothesisNotMet`]
/// and the sides are `lhs = kbar`, `rhs = eps`.
#[allow(clippy::too_many_arguments)]
pub fn check_doubling<T: Real>(
    space: &WarpedSpace<T>,
    model: &ModelParams<T>,
    p: T,
    beta: T,
    r1: T,
    r2: T,
    big_r: T,
    opts: &CheckOptions<T>,
) -> Result<CheckReport> {
    prepare(space, model, p, opts)?;
    require_radius(space, big_r, "doubling check")?;
    if !(r1 > T::zero() && r1 < r2 && r2 <= big_r) {
        return Err(Error::Ordering(format!(
            "doubling needs 0 < r1 < r2 <= R, got ({r1}, {r2}, {big_r})"
        )));
    }
    model.require_half_period(big_r, "doubling check")?;
    let req = ConstantRequest::new(*model, p, big_r)?.with_beta(beta)?;
    let eps = doubling_epsilon(&req, &opts.quadrature)?;
    let kb = kbar(space, p, model.curvature, big_r, &opts.quadrature)?;
    let params = Params::new(space, model, p, opts)
        .with("beta", beta)
        .with("r1", r1)
        .with("r2", r2)
        .with("R", big_r);
    let mut d = Diagnostics::default();
    d.set("kbar", kb);
    d.set("epsilon", eps);
    if !(kb < eps) {
        d.note("hypothesis", "kbar < epsilon");
        return finish_with(
            TheoremId::VolumeDoubling,
            params,
            kb,
            eps,
            opts,
            None,
            d,
            Verdict::HypothesisNotMet,
        );
    }
    let lhs = space.weighted_volume(r2)? / space.weighted_volume(r1)?;
    let model_ratio = model.volume(r2)? / model.volume(r1)?;
    d.set("model_ratio", model_ratio);
    finish(TheoremId::VolumeDoubling, params, lhs, beta * model_ratio, opts, None, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::warped_manifold::BuiltinFamily;

    fn opts() -> CheckOptions<f64> {
        CheckOptions::default()
    }

    fn gaussian(a: f64) -> WarpedSpace<f64> {
        WarpedSpace::builtin(BuiltinFamily::GaussianFlat { a }, 3, 2.0, 0.5).unwrap()
    }

    #[test]
    fn gaussian_volume_checks_pass() {
        let s = gaussian(1.0);
        // H = a / (n + k - 1) makes the deficit a^2 r^2 / k positive
        let m = s.model(0.25).unwrap();
        let rep = check_volume_ratio(&s, &m, 3.0, 0.5, 1.0, &opts()).unwrap();
        assert!(rep.pass && rep.rhs > 0.0, "{rep:?}");
        let rep = check_area_ratio(&s, &m, 3.0, 0.5, 1.0, &opts()).unwrap();
        assert!(rep.pass, "{rep:?}");
        let radii = AnnulusRadii { r1: 0.2, r2: 0.4, big_r1: 0.8, big_r2: 1.0 };
        let rep = check_annulus_ratio(&s, &m, 3.0, radii, &opts()).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn degenerate_radii() {
        let s = gaussian(1.0);
        let m = s.model(0.0).unwrap();
        let rep = check_volume_ratio(&s, &m, 3.0, 1.0, 1.0, &opts()).unwrap();
        assert_eq!((rep.lhs, rep.rhs, rep.pass), (0.0, 0.0, true));
        let radii = AnnulusRadii { r1: 0.3, r2: 0.3, big_r1: 0.9, big_r2: 0.9 };
        let rep = check_annulus_ratio(&s, &m, 3.0, radii, &opts()).unwrap();
        assert_eq!((rep.lhs, rep.rhs, rep.pass), (0.0, 0.0, true));
        let radii = AnnulusRadii { r1: 0.3, r2: 0.5, big_r1: 0.5, big_r2: 0.9 };
        assert!(matches!(
            check_annulus_ratio(&s, &m, 3.0, radii, &opts()),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn extended_area_ratio_on_sphere() {
        let s = WarpedSpace::builtin(BuiltinFamily::Sphere, 3, 1.0, 1.0).unwrap();
        let m = s.model(2.0 / 3.0).unwrap();
        let rep = check_area_ratio_extended(&s, &m, 3.0, 2.0, 2.8, &opts()).unwrap();
        assert!(rep.pass && rep.rhs == 0.0, "{rep:?}");
        assert!(check_area_ratio_extended(&s, &m, 3.0, 1.0, 2.8, &opts()).is_err());
    }

    #[test]
    fn doubling_gate() {
        let m = gaussian(1.0).model(0.0).unwrap();
        let big = check_doubling(&gaussian(5.0), &m, 3.0, 2.0, 0.5, 1.0, 1.0, &opts()).unwrap();
        assert_eq!(big.verdict, Verdict::HypothesisNotMet);
        let small = check_doubling(&gaussian(1e-3), &m, 3.0, 2.0, 0.5, 1.0, 1.0, &opts()).unwrap();
        assert_eq!(small.verdict, Verdict::Pass, "{small:?}");
    }
}
