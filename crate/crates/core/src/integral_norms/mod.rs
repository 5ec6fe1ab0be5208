//! Weighted `L^p` norms over geodesic balls centred at the pole, the
//! normalized curvature integral `kbar`, and the quadrature engine.
//!
//! The norms are centred at the pole of the rotationally symmetric space;
//! the supremum over centres in the definition of `kbar` is not taken.

mod grid;
mod quadrature;

pub use grid::{GridSummary, RadialGrid, DEFAULT_CELLS, MIN_CELLS};
pub use quadrature::{
    gauss_legendre, graded_rule, grading_for_exponent, integrate_adaptive, integrate_cumulative,
    integrate_graded, Estimate, QuadratureSpec,
};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::warped_manifold::{CubicSpline, WarpedSpace};

fn require_exponent<T: Real>(p: T) -> Result<()> {
    if !(p >= T::one()) || !p.is_finite() {
        return Err(Error::Parameter(format!("norm exponent must be >= 1, got {p}")));
    }
    Ok(())
}

fn require_radius<T: Real>(space: &WarpedSpace<T>, r: T) -> Result<()> {
    if !(r >= T::zero()) || r > space.max_radius() * (T::one() + T::lit(1e-12)) {
        return Err(Error::domain(
            "weighted norm",
            format!("radius {r} outside [0, {}]", space.max_radius()),
        ));
    }
    Ok(())
}

/// `omega ∫_a^b |v(t)|^p phi(t)^(n-1) e^{-f(t)} dt`.
pub fn weighted_power_integral<T, F>(
    space: &WarpedSpace<T>,
    values: F,
    p: T,
    a: T,
    b: T,
    spec: &QuadratureSpec<T>,
) -> Result<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    require_exponent(p)?;
    require_radius(space, b)?;
    if a > b {
        return Err(Error::Ordering(format!("integration radii {a} > {b}")));
    }
    if a == b {
        return Ok(T::zero());
    }
    let integrand = |t: T| {
        let v = values(t).abs();
        if v == T::zero() {
            T::zero()
        } else {
            v.powf(p) * space.density(t)
        }
    };
    Ok(space.omega() * integrate_adaptive(integrand, a, b, spec)?.value)
}

/// Weighted norm `(∫_{B(o, r)} |v|^p e^{-f} dv)^(1/p)` of a radial function
/// over the ball of radius `r` about the pole.
///
/// The values are divided by their sampled maximum before integration, so
/// that the absolute quadrature tolerance acts relative to their size and
/// the norm is homogeneous to rounding.
pub fn weighted_lp_norm<T, F>(space: &WarpedSpace<T>, values: F, p: T, r: T, spec: &QuadratureSpec<T>) -> Result<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    const PROBES: usize = 64;
    let peak = (1..=PROBES)
        .map(|j| values(r * T::from_usize_lossy(j) / T::from_usize_lossy(PROBES)).abs())
        .fold(T::zero(), |acc, v| if v > acc { v } else { acc });
    let scale = if peak > T::zero() && peak.is_finite() {
        peak
    } else {
        T::one()
    };
    let integral = weighted_power_integral(space, |t| values(t) / scale, p, T::zero(), r, spec)?;
    Ok(scale * integral.powf(T::one() / p))
}

/// [`weighted_lp_norm`] of nodal values, interpolated by a natural cubic
/// spline through `(nodes[i], values[i])`. Below the first node the first
/// value is held constant.
pub fn weighted_lp_norm_nodal<T: Real>(
    space: &WarpedSpace<T>,
    nodes: &[T],
    values: &[T],
    p: T,
    r: T,
    spec: &QuadratureSpec<T>,
) -> Result<T> {
    if nodes.len() != values.len() {
        return Err(Error::Parameter(format!(
            "{} nodes but {} values",
            nodes.len(),
            values.len()
        )));
    }
    let last = *nodes
        .last()
        .ok_or_else(|| Error::Parameter("nodal norm needs at least 3 nodes".into()))?;
    if r > last {
        return Err(Error::domain(
            "nodal weighted norm",
            format!("radius {r} beyond the last node {last}"),
        ));
    }
    let spline = CubicSpline::new(nodes.to_vec(), values.to_vec(), None)?;
    let first = nodes[0];
    weighted_lp_norm(
        space,
        |t| if t <= first { values[0] } else { spline.jet(t).value },
        p,
        r,
        spec,
    )
}

/// Normalized curvature integral
/// `kbar(p, H, r) = (V_f(r)^{-1} ∫_{B(o, r)} (Ric_{f-}^{mu,H})^p e^{-f} dv)^(1/p)`
/// about the pole. Zero exactly when the deficit vanishes on the ball.
pub fn kbar<T: Real>(space: &WarpedSpace<T>, p: T, curvature: T, r: T, spec: &QuadratureSpec<T>) -> Result<T> {
    if !(T::lit(2.0) * p > space.dim()) {
        return Err(Error::Parameter(format!(
            "2p > n + k required, got p = {p}, n + k = {}",
            space.dim()
        )));
    }
    if !(r > T::zero()) {
        return Err(Error::domain("kbar", format!("radius must be positive, got {r}")));
    }
    let norm = weighted_lp_norm(space, |t| space.deficit(curvature, t), p, r, spec)?;
    let volume = space.weighted_volume(r)?;
    Ok(norm / volume.powf(T::one() / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::warped_manifold::BuiltinFamily;
    use std::f64::consts::PI;

    fn gaussian() -> WarpedSpace<f64> {
        WarpedSpace::builtin(BuiltinFamily::GaussianFlat { a: 1.0 }, 3, 2.0, 0.5).unwrap()
    }

    fn spec() -> QuadratureSpec<f64> {
        QuadratureSpec::default()
    }

    // ∫_0^1 t^8 e^{-t²/2} dt
    const T8_MOMENT: f64 = 0.074_023_511_205_877_64;

    #[test]
    fn trivial_values() {
        let s = gaussian();
        assert_eq!(weighted_lp_norm(&s, |_| 0.0, 3.0, 1.0, &spec()).unwrap(), 0.0);
        let v = s.weighted_volume(1.0).unwrap();
        let c = weighted_lp_norm(&s, |_| 2.0, 3.0, 1.0, &spec()).unwrap();
        assert!((c - 2.0 * v.powf(1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn gaussian_deficit_norm_oracle() {
        let s = gaussian();
        let norm = weighted_lp_norm(&s, |t| s.deficit(0.25, t), 3.0, 1.0, &spec()).unwrap();
        let exact = (4.0 * PI / 8.0 * T8_MOMENT).powf(1.0 / 3.0);
        assert!(((norm - exact) / exact).abs() < 1e-10, "{norm} vs {exact}");
        let kb = kbar(&s, 3.0, 0.25, 1.0, &spec()).unwrap();
        let exact_kbar = (4.0 * PI / 8.0 * T8_MOMENT / s.weighted_volume(1.0).unwrap()).powf(1.0 / 3.0);
        assert!(((kb - exact_kbar) / exact_kbar).abs() < 1e-10);
    }

    #[test]
    fn kbar_vanishes_without_deficit() {
        let sphere = WarpedSpace::builtin(BuiltinFamily::Sphere, 3, 1.0, 1.0).unwrap();
        assert_eq!(kbar(&sphere, 3.0, 2.0 / 3.0, 1.0, &spec()).unwrap(), 0.0);
        let flat = WarpedSpace::builtin(BuiltinFamily::Flat, 3, 1.0, 1.0).unwrap();
        assert_eq!(kbar(&flat, 3.0, 0.0, 1.0, &spec()).unwrap(), 0.0);
        assert!(kbar(&flat, 2.0, 0.0, 1.0, &spec()).is_err());
    }

    #[test]
    fn nodal_norm_matches_closure() {
        let s = gaussian();
        let grid = RadialGrid::uniform(0.0, 1.0, 512).unwrap();
        let vals: Vec<f64> = grid.nodes().iter().map(|t| t * t / 2.0).collect();
        let nodal = weighted_lp_norm_nodal(&s, grid.nodes(), &vals, 3.0, 1.0, &spec()).unwrap();
        let exact = (4.0 * PI / 8.0 * T8_MOMENT).powf(1.0 / 3.0);
        assert!(((nodal - exact) / exact).abs() < 1e-8);
    }

    #[test]
    fn omega_scales_the_norm() {
        let s = gaussian();
        let one = s.clone().with_omega(1.0).unwrap();
        let a = weighted_power_integral(&s, |t| t.sin(), 2.0, 0.0, 1.5, &spec()).unwrap();
        let b = weighted_power_integral(&one, |t| t.sin(), 2.0, 0.0, 1.5, &spec()).unwrap();
        assert!((a / b - s.omega()).abs() < 1e-13 * s.omega());
    }
}
