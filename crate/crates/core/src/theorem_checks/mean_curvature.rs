//! Mean-curvature comparison: the excess norm and pointwise bounds, their
//! sine-weighted versions beyond the half period, and the differential
//! inequality they are integrated from.

use super::{
    deficit_norm, finish, norm_coefficient, pointwise_coefficient, prepare, require_radius, CheckOptions, CheckReport,
    Diagnostics, Params, TheoremId, WorstNode,
};
use crate::error::{Error, Result};
use crate::integral_norms::{
    integrate_adaptive, integrate_cumulative, weighted_lp_norm, weighted_power_integral, QuadratureSpec, RadialGrid,
};
use crate::model_space::ModelParams;
use crate::scalar::Real;
use crate::warped_manifold::WarpedSpace;

/// `omega`-free running integrals `∫_0^{node} (Ric_{f-})^p phi^(n-1) e^{-f}`.
fn cumulative_deficit<T: Real>(
    space: &WarpedSpace<T>,
    curvature: T,
    p: T,
    nodes: &[T],
    spec: &QuadratureSpec<T>,
) -> Result<Vec<T>> {
    let integrand = |t: T| {
        let d = space.deficit(curvature, t);
        if d == T::zero() {
            T::zero()
        } else {
            d.powf(p) * space.density(t)
        }
    };
    let head = integrate_adaptive(integrand, T::zero(), nodes[0], spec)?.value;
    let tail = integrate_cumulative(integrand, nodes, spec)?;
    Ok(tail.into_iter().map(|v| head + v).collect())
}

fn excess_or_nan<T: Real>(space: &WarpedSpace<T>, model: &ModelParams<T>, t: T) -> T {
    space.excess(model, t).unwrap_or(T::nan())
}

fn rel_diff<T: Real>(a: T, b: T) -> T {
    let scale = a.abs().max(b.abs());
    if scale == T::zero() {
        T::zero()
    } else {
        (a - b).abs() / scale
    }
}

/// `||excess||_{2p,f}(r) <= ((n+k-1)(2p-1)/(2p-n-k) ||Ric_{f-}^{mu,H}||_{p,f}(r))^(1/2)`,
/// for `r <= pi / (2 sqrt H)` when `H > 0`.
pub fn check_mean_curvature_norm<T: Real>(
    space: &WarpedSpace<T>,
    model: &ModelParams<T>,
    p: T,
    r: T,
    opts: &CheckOptions<T>,
) -> Result<CheckReport> {
    prepare(space, model, p, opts)?;
    require_radius(space, r, "mean-curvature norm check")?;
    model.require_half_period(r, "mean-curvature norm check")?;
    let two_p = T::lit(2.0) * p;
    let lhs = weighted_lp_norm(space, |t| excess_or_nan(space, model, t), two_p, r, &opts.quadrature)?;
    let dn = deficit_norm(space, model, p, r, &opts.quadrature)?;
    let coef = norm_coefficient(model, p);
    let rhs = (coef * dn).sqrt();
    let mut d = Diagnostics::default();
    d.set("deficit_norm", dn);
    d.set("coefficient", coef);
    let params = Params::new(space, model, p, opts).with("r", r);
    finish(TheoremId::MeanCurvatureNorm, params, lhs, rhs, opts, None, d)
}

/// `excess(t)^(2p-1) A_f(t) <= (2p-1)^p ((n+k-1)/(2p-n-k))^(p-1) ∫_0^t (Ric_{f-})^p A_f`
/// at every node of a graded grid on `(0, r]`. Both sides use the
/// `omega`-free volume element; the report carries the worst node.
pub fn check_mean_curvature_pointwise<T: Real>(
    space: &WarpedSpace<T>,
    model: &ModelParams<T>,
    p: T,
    r: T,
    opts: &CheckOptions<T>,
) -> Result<CheckReport> {
    prepare(space, model, p, opts)?;
    require_radius(space, r, "pointwise mean-curvature check")?;
    model.require_half_period(r, "pointwise mean-curvature check")?;
    if !(r > space.r_min()) {
        return Err(Error::Pole {
            r: r.as_f64(),
            r_min: space.r_min().as_f64(),
        });
    }
    let grid = opts.grid(space.r_min(), r, p)?;
    let coef = pointwise_coefficient(model, p);
    let cumulative = cumulative_deficit(space, model.curvature, p, grid.nodes(), &opts.quadrature)?;
    let expo = T::lit(2.0) * p - T::one();
    let mut worst = WorstNode::new();
    for (&t, &integral) in grid.nodes().iter().zip(&cumulative) {
        let e = space.excess(model, t)?;
        let lhs = e.powf(expo) * space.density(t);
        worst.push(t, lhs, coef * integral, opts.tolerance);
    }
    // cross-check of the running integral against the weighted norm
    let dn = deficit_norm(space, model, p, r, &opts.quadrature)?;
    let from_norm = coef * dn.powf(p) / space.omega();
    let at_r = coef * cumulative[cumulative.len() - 1];
    let mut d = Diagnostics::default();
    worst.record(&mut d);
    d.set("coefficient", coef);
    d.set("rhs_at_r", at_r);
    d.set("consistency_rel_diff", rel_diff(at_r, from_norm));
    let params = Params::new(space, model, p, opts).with("r", r);
    finish(
        TheoremId::MeanCurvaturePointwise,
        params,
        worst.lhs,
        worst.rhs,
        opts,
        Some(grid.summary()),
        d,
    )
}

/// Sine-weighted estimates for `H > 0` and `pi/(2 sqrt H) < r < pi/sqrt H`:
/// the norm bound with weight `sin^((4p-n-k-1)/(2p))(sqrt(H) t)` and the
/// pointwise bound with factor `sin^(4p-n-k-1)(sqrt(H) t)`, the latter
/// checked on a uniform grid of `[pi/(2 sqrt H), r]`.
pub fn check_mean_curvature_extended<T: Real>(
    space: &WarpedSpace<T>,
    model: &ModelParams<T>,
    p: T,
    r: T,
    opts: &CheckOptions<T>,
) -> Result<(CheckReport, CheckReport)> {
    prepare(space, model, p, opts)?;
    require_radius(space, r, "extended mean-curvature check")?;
    let (half, period) = match (model.half_period(), model.period()) {
        (Some(h), Some(p)) => (h, p),
        _ => {
            return Err(Error::Range(format!(
                "extended mean-curvature estimates need H > 0, got H = {}",
                model.curvature
            )))
        }
    };
    if !(r > half && r < period) {
        return Err(Error::Range(format!(
            "extended mean-curvature estimates need pi/(2 sqrt H) = {half} < r < pi/sqrt H = {period}, got r = {r}"
        )));
    }
    let sqrt_h = model.curvature.sqrt();
    let two_p = T::lit(2.0) * p;
    let sine_expo = T::lit(4.0) * p - model.dim() - T::one();
    let weight = |t: T| (sqrt_h * t).sin().max(T::zero()).powf(sine_expo);

    let dn = deficit_norm(space, model, p, r, &opts.quadrature)?;
    let coef = norm_coefficient(model, p);
    let rhs_norm = (coef * dn).sqrt();
    let lhs_norm = weighted_power_integral(
        space,
        |t| weight(t).powf(T::one() / two_p) * excess_or_nan(space, model, t),
        two_p,
        T::zero(),
        r,
        &opts.quadrature,
    )?
    .powf(T::one() / two_p);
    let mut d = Diagnostics::default();
    d.set("deficit_norm", dn);
    d.set("coefficient", coef);
    d.set("sine_exponent", sine_expo);
    let params = Params::new(space, model, p, opts).with("r", r);
    let norm_report = finish(
        TheoremId::MeanCurvatureNormExtended,
        params,
        lhs_norm,
        rhs_norm,
        opts,
        None,
        d,
    )?;

    let grid = RadialGrid::uniform(half, r, opts.grid_cells)?;
    let pw_coef = pointwise_coefficient(model, p);
    let cumulative = cumulative_deficit(space, model.curvature, p, grid.nodes(), &opts.quadrature)?;
    let mut worst = WorstNode::new();
    for (&t, &integral) in grid.nodes().iter().zip(&cumulative) {
        let e = space.excess(model, t)?;
        let lhs = weight(t) * e.powf(two_p - T::one()) * space.density(t);
        worst.push(t, lhs, pw_coef * integral, opts.tolerance);
    }
    let mut d = Diagnostics::default();
    worst.record(&mut d);
    d.set("coefficient", pw_coef);
    d.set("sine_exponent", sine_expo);
    let params = Params::new(space, model, p, opts).with("r", r);
    let pointwise_report = finish(
        TheoremId::MeanCurvaturePointwiseExtended,
        params,
        worst.lhs,
        worst.rhs,
        opts,
        Some(grid.summary()),
        d,
    )?;
    Ok((norm_report, pointwise_report))
}

/// The differential inequality
/// `(e^(2p-1) A_f)' + e^(2p) A_f ((2p-1)/(n+k-1) - 1) + e^(2p-1) m_H A_f ((4p-2)/(n+k-1) - 1)
///  <= (2p-1) Ric_{f-} e^(2p-2) A_f`
/// for the excess `e`, at every interior node of `grid`, both sides divided
/// by `A_f`. The derivative is a fourth-order central difference with step
/// `min(spacing/2, t/4)`.
pub fn check_derivation_chain<T: Real>(
    space: &WarpedSpace<T>,
    model: &ModelParams<T>,
    p: T,
    grid: &RadialGrid<T>,
    opts: &CheckOptions<T>,
) -> Result<CheckReport> {
    prepare(space, model, p, opts)?;
    require_radius(space, grid.r_max(), "derivation chain check")?;
    model.require_half_period(grid.r_max(), "derivation chain check")?;
    let two_p = T::lit(2.0) * p;
    let big_n1 = model.dim() - T::one();
    let excess_factor = (two_p - T::one()) / big_n1 - T::one();
    let model_factor = (T::lit(4.0) * p - T::lit(2.0)) / big_n1 - T::one();
    let g = |t: T| -> T {
        let e = excess_or_nan(space, model, t);
        if e == T::zero() {
            T::zero()
        } else {
            e.powf(two_p - T::one()) * space.density(t)
        }
    };
    let min_step_ratio = T::epsilon().cbrt();
    let nodes = grid.nodes();
    let mut worst = WorstNode::new();
    for (i, &t) in nodes.iter().enumerate().take(nodes.len() - 1).skip(1) {
        if t < space.r_min() {
            return Err(Error::Pole {
                r: t.as_f64(),
                r_min: space.r_min().as_f64(),
            });
        }
        let h = (grid.local_spacing(i) * T::lit(0.5)).min(t * T::lit(0.25));
        if h < min_step_ratio * t {
            return Err(Error::domain(
                "derivation chain check",
                format!("finite-difference step {h} underflows at t = {t}"),
            ));
        }
        let derivative = (g(t - T::lit(2.0) * h) - T::lit(8.0) * g(t - h) + T::lit(8.0) * g(t + h)
            - g(t + T::lit(2.0) * h))
            / (T::lit(12.0) * h);
        let a = space.density(t);
        let e = space.excess(model, t)?;
        let m_model = model.mean_curvature(t)?;
        let lhs = derivative / a
            + e.powf(two_p) * excess_factor
            + e.powf(two_p - T::one()) * m_model * model_factor;
        let rhs = (two_p - T::one()) * space.deficit(model.curvature, t) * e.powf(two_p - T::lit(2.0));
        worst.push(t, lhs, rhs, opts.tolerance);
    }
    let mut d = Diagnostics::default();
    worst.record(&mut d);
    d.note("normalization", "divided by A_f");
    let params = Params::new(space, model, p, opts)
        .with("grid.r_min", grid.r_min())
        .with("grid.r_max", grid.r_max());
    finish(
        TheoremId::DerivationChain,
        params,
        worst.lhs,
        worst.rhs,
        opts,
        Some(grid.summary()),
        d,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theorem_checks::Verdict;
    use crate::warped_manifold::BuiltinFamily;
    use std::f64::consts::PI;

    fn opts() -> CheckOptions<f64> {
        CheckOptions::default()
    }

    #[test]
    fn sphere_norm_check_is_trivial() {
        let s = WarpedSpace::builtin(BuiltinFamily::Sphere, 3, 1.0, 1.0).unwrap();
        let m = s.model(2.0 / 3.0).unwrap();
        let rep = check_mean_curvature_norm(&s, &m, 3.0, 1.0, &opts()).unwrap();
        assert_eq!((rep.lhs, rep.rhs, rep.verdict), (0.0, 0.0, Verdict::Pass));
    }

    #[test]
    fn negative_gaussian_has_positive_excess_and_passes() {
        let s = WarpedSpace::builtin(BuiltinFamily::GaussianFlat { a: -1.0 }, 3, 2.0, 0.5).unwrap();
        let m = s.model(0.0).unwrap();
        let rep = check_mean_curvature_norm(&s, &m, 3.0, 2.0, &opts()).unwrap();
        assert!(rep.lhs > 0.0 && rep.pass, "{rep:?}");
        let rep = check_mean_curvature_pointwise(&s, &m, 3.0, 2.0, &opts()).unwrap();
        assert!(rep.pass, "{rep:?}");
        let diff = rep.diagnostics["consistency_rel_diff"].as_f64().unwrap();
        assert!(diff < 1e-8, "{diff}");
    }

    #[test]
    fn half_period_violation_is_a_range_error() {
        let s = WarpedSpace::builtin(BuiltinFamily::Sphere, 3, 1.0, 1.0).unwrap();
        let m = s.model(2.0 / 3.0).unwrap();
        let err = check_mean_curvature_norm(&s, &m, 3.0, 2.5, &opts()).unwrap_err();
        assert!(err.is_inapplicable());
        let half = PI / 2.0 / (2.0f64 / 3.0).sqrt();
        assert!(check_mean_curvature_extended(&s, &m, 3.0, half * 0.99, &opts()).is_err());
        let (a, b) = check_mean_curvature_extended(&s, &m, 3.0, 2.5, &opts()).unwrap();
        assert!(a.pass && b.pass);
    }

    #[test]
    fn derivation_chain_on_negative_gaussian() {
        let s = WarpedSpace::builtin(BuiltinFamily::GaussianFlat { a: -1.0 }, 3, 2.0, 0.5).unwrap();
        let m = s.model(0.0).unwrap();
        let grid = RadialGrid::new(s.r_min(), 3.0, 1024, 1.0).unwrap();
        let rep = check_derivation_chain(&s, &m, 3.0, &grid, &opts()).unwrap();
        assert!(rep.pass, "{rep:?}");
    }
}
