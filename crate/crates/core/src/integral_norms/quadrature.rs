//! Quadrature engine shared by the model constants, the weighted norms and the
//! theorem checks.
//!
//! Two rules are provided:
//!
//! * [`integrate_adaptive`]: globally adaptive 7/15-point Gauss–Kronrod with the
//!   QUADPACK error heuristic. Used for smooth integrands and integrands with
//!   interior kinks (positive parts of curvature deficits).
//! * [`integrate_graded`]: composite Gauss–Legendre on a graded mesh
//!   `t_i = a + (b - a) (i / M)^gamma`, doubling `M` until two successive
//!   levels agree. Used for kernels with an integrable `(t - a)^(-s)`
//!   singularity at the left endpoint.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Tolerances for every integral computed by the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    /// Maximum bisection depth for the adaptive rule and maximum number of
    /// mesh doublings for the graded rule.
    pub max_refinements: usize,
}

impl<T: Real> Default for QuadratureSpec<T> {
    fn default() -> Self {
        let eps = T::epsilon();
        QuadratureSpec {
            abs_tol: T::lit(1e-10).max(eps * T::lit(1e3)),
            rel_tol: T::lit(1e-9).max(eps * T::lit(1e2)),
            max_refinements: 20,
        }
    }
}

impl<T: Real> QuadratureSpec<T> {
    pub fn new(abs_tol: T, rel_tol: T, max_refinements: usize) -> Result<Self> {
        let spec = QuadratureSpec {
            abs_tol,
            rel_tol,
            max_refinements,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > T::zero()) || !(self.rel_tol > T::zero()) {
            return Err(Error::Parameter(format!(
                "quadrature tolerances must be positive (abs {}, rel {})",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_refinements < 1 {
            return Err(Error::Parameter(
                "quadrature max_refinements must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Error budget for an integral of magnitude `value`.
    #[inline]
    pub fn budget(&self, value: T) -> T {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// A converged integral together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: T,
    pub evaluations: usize,
}

// Gauss-Kronrod 7/15 abscissae and weights.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

const MAX_PANELS: usize = 8192;

struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
    depth: usize,
}

fn kronrod15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> Result<(T, T)> {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let fc = f(center);
    let mut res_k = T::lit(WGK[7]) * fc;
    let mut res_g = T::lit(WG[3]) * fc;
    let mut res_abs = res_k.abs();
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];
    for j in 0..7 {
        let dx = half_len * T::lit(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let w = T::lit(WGK[j]);
        res_k = res_k + w * (f1 + f2);
        res_abs = res_abs + w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g = res_g + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }
    let mean = res_k * half;
    let mut res_asc = T::lit(WGK[7]) * (fc - mean).abs();
    for j in 0..7 {
        res_asc = res_asc + T::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let hl = half_len.abs();
    let value = res_k * half_len;
    res_abs = res_abs * hl;
    res_asc = res_asc * hl;
    let mut err = ((res_k - res_g) * half_len).abs();
    if res_asc != T::zero() && err != T::zero() {
        let scale = (T::lit(200.0) * err / res_asc).powf(T::lit(1.5));
        err = res_asc * scale.min(T::one());
    }
    let floor = T::lit(50.0) * T::epsilon() * res_abs;
    if floor > err {
        err = floor;
    }
    if !value.is_finite() || !err.is_finite() {
        return Err(Error::domain(
            "quadrature",
            format!("non-finite integrand on [{a}, {b}]"),
        ));
    }
    Ok((value, err))
}

/// Globally adaptive Gauss–Kronrod quadrature of `f` over `[a, b]`.
///
/// `a > b` integrates with reversed sign; `a == b` returns zero. The returned
/// error estimate satisfies `error <= spec.budget(value)` or the call fails.
pub fn integrate_adaptive<T, F>(f: F, a: T, b: T, spec: &QuadratureSpec<T>) -> Result<Estimate<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    if a == b {
        return Ok(Estimate {
            value: T::zero(),
            error: T::zero(),
            evaluations: 0,
        });
    }
    if b < a {
        let e = integrate_adaptive(f, b, a, spec)?;
        return Ok(Estimate { value: -e.value, ..e });
    }
    let (value, error) = kronrod15(&f, a, b)?;
    let mut panels = vec![Panel {
        a,
        b,
        value,
        error,
        depth: 0,
    }];
    let mut evaluations = 15;
    loop {
        let total: T = panels.iter().map(|p| p.value).sum();
        let total_err: T = panels.iter().map(|p| p.error).sum();
        if total_err <= spec.budget(total) {
            return Ok(Estimate {
                value: total,
                error: total_err,
                evaluations,
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| p.depth < spec.max_refinements)
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).expect("finite errors"))
            .map(|(i, _)| i);
        let Some(i) = worst.filter(|_| panels.len() < MAX_PANELS) else {
            return Err(Error::Quadrature {
                a: a.as_f64(),
                b: b.as_f64(),
                estimate: total.as_f64(),
                error: total_err.as_f64(),
            });
        };
        let p = panels.swap_remove(i);
        let mid = T::lit(0.5) * (p.a + p.b);
        if !(mid > p.a && mid < p.b) {
            return Err(Error::Quadrature {
                a: a.as_f64(),
                b: b.as_f64(),
                estimate: total.as_f64(),
                error: total_err.as_f64(),
            });
        }
        let (v1, e1) = kronrod15(&f, p.a, mid)?;
        let (v2, e2) = kronrod15(&f, mid, p.b)?;
        evaluations += 30;
        panels.push(Panel {
            a: p.a,
            b: mid,
            value: v1,
            error: e1,
            depth: p.depth + 1,
        });
        panels.push(Panel {
            a: mid,
            b: p.b,
            value: v2,
            error: e2,
            depth: p.depth + 1,
        });
    }
}

/// Running integrals `∫_{nodes[0]}^{nodes[i]} f` for every node.
///
/// Each cell is integrated adaptively with an absolute tolerance proportional
/// to its share of the total length.
pub fn integrate_cumulative<T, F>(f: F, nodes: &[T], spec: &QuadratureSpec<T>) -> Result<Vec<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    let mut out = Vec::with_capacity(nodes.len());
    if nodes.is_empty() {
        return Ok(out);
    }
    let span = (nodes[nodes.len() - 1] - nodes[0]).abs();
    let mut acc = T::zero();
    out.push(acc);
    for w in nodes.windows(2) {
        let share = if span > T::zero() {
            ((w[1] - w[0]) / span).abs()
        } else {
            T::one()
        };
        let cell_spec = QuadratureSpec {
            abs_tol: (spec.abs_tol * share).max(T::min_positive_value()),
            ..*spec
        };
        acc = acc + integrate_adaptive(&f, w[0], w[1], &cell_spec)?.value;
        out.push(acc);
    }
    Ok(out)
}

const GL_ORDER: usize = 10;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, computed by Newton iteration
/// on the Legendre recurrence.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let nf = order as f64;
    for i in 0..order.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=order {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if order == 0 { 1.0 } else if order == 1 { x } else { p1 };
            let pn1 = if order == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

fn gl10() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_ORDER))
}

/// Grading exponent that turns a `(t - a)^(-s)` kernel into `u * smooth(u)`
/// under `t = a + (b - a) u^gamma`.
pub fn grading_for_exponent<T: Real>(singular_exponent: T) -> T {
    if singular_exponent > T::zero() {
        T::lit(2.0) / (T::one() - singular_exponent)
    } else {
        T::one()
    }
}

/// Composite 10-point Gauss–Legendre on `cells` uniform cells in `u`, i.e. on
/// the graded mesh `t_i = a + (b - a) (i / cells)^gamma`.
pub fn graded_rule<T, F>(f: &F, a: T, b: T, gamma: T, cells: usize) -> T
where
    T: Real,
    F: Fn(T) -> T,
{
    let (x, w) = gl10();
    let len = b - a;
    let du = T::one() / T::from_usize_lossy(cells);
    let half = T::lit(0.5) * du;
    let mut sum = T::zero();
    for c in 0..cells {
        let u0 = T::from_usize_lossy(c) * du;
        let mut cell = T::zero();
        for (xi, wi) in x.iter().zip(w) {
            let u = u0 + half * (T::one() + T::lit(*xi));
            let jac = gamma * len * u.powf(gamma - T::one());
            if jac == T::zero() {
                continue;
            }
            let t = a + len * u.powf(gamma);
            if t <= a {
                continue;
            }
            cell = cell + T::lit(*wi) * f(t) * jac;
        }
        sum = sum + cell * half;
    }
    sum
}

const GRADED_START_CELLS: usize = 8;
const GRADED_MAX_CELLS: usize = 1 << 18;

/// Integral of `f` over `[a, b]` where `f` may behave like `(t - a)^(-s)` with
/// `s = singular_exponent < 1` near the left endpoint.
///
/// The mesh is doubled until two successive levels agree within the spec
/// budget; the reported error is that last difference.
pub fn integrate_graded<T, F>(
    f: F,
    a: T,
    b: T,
    singular_exponent: T,
    spec: &QuadratureSpec<T>,
) -> Result<Estimate<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    if !(singular_exponent < T::one()) {
        return Err(Error::Divergent(format!(
            "endpoint singularity exponent {singular_exponent} is not integrable"
        )));
    }
    if b < a {
        return Err(Error::Ordering(format!("integration bounds {a} > {b}")));
    }
    if a == b {
        return Ok(Estimate {
            value: T::zero(),
            error: T::zero(),
            evaluations: 0,
        });
    }
    let gamma = grading_for_exponent(singular_exponent);
    let mut cells = GRADED_START_CELLS;
    let mut prev = graded_rule(&f, a, b, gamma, cells);
    let mut evaluations = cells * GL_ORDER;
    for _ in 0..spec.max_refinements {
        if cells >= GRADED_MAX_CELLS {
            break;
        }
        cells *= 2;
        let cur = graded_rule(&f, a, b, gamma, cells);
        evaluations += cells * GL_ORDER;
        if !cur.is_finite() {
            return Err(Error::domain(
                "quadrature",
                format!("non-finite graded integral on [{a}, {b}]"),
            ));
        }
        let diff = (cur - prev).abs();
        if diff <= spec.budget(cur) {
            return Ok(Estimate {
                value: cur,
                error: diff,
                evaluations,
            });
        }
        prev = cur;
    }
    Err(Error::Quadrature {
        a: a.as_f64(),
        b: b.as_f64(),
        estimate: prev.as_f64(),
        error: f64::NAN,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spec() -> QuadratureSpec<f64> {
        QuadratureSpec::default()
    }

    #[test]
    fn legendre_rule_is_exact_on_polynomials() {
        let (x, w) = gauss_legendre(10);
        for deg in 0..20 {
            let approx: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((approx - exact).abs() < 1e-14, "degree {deg}: {approx} vs {exact}");
        }
    }

    #[test]
    fn inverse_sqrt_kernel() {
        let e = integrate_graded(|t: f64| t.powf(-0.5), 0.0, 1.0, 0.5, &spec()).unwrap();
        assert!((e.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn three_fifths_kernel() {
        let e = integrate_graded(|t: f64| t.powf(-0.6), 0.0, 1.0, 0.6, &spec()).unwrap();
        assert!((e.value - 2.5).abs() < 1e-9 * 2.5);
    }

    #[test]
    fn sine_cubed() {
        // antiderivative: -cos t + cos^3 t / 3
        let anti = |t: f64| -t.cos() + t.cos().powi(3) / 3.0;
        let exact = anti(PI) - anti(0.0);
        assert!((exact - 4.0 / 3.0).abs() < 1e-15);
        let e = integrate_adaptive(|t: f64| t.sin().powi(3), 0.0, PI, &spec()).unwrap();
        assert!((e.value - exact).abs() < 1e-12);
        let g = integrate_graded(|t: f64| t.sin().powi(3), 0.0, PI, 0.0, &spec()).unwrap();
        assert!((g.value - exact).abs() < 1e-9);
    }

    #[test]
    fn non_integrable_exponent_is_rejected() {
        let r = integrate_graded(|t: f64| 1.0 / t, 0.0, 1.0, 1.0, &spec());
        assert!(matches!(r, Err(Error::Divergent(_))));
    }

    #[test]
    fn kink_is_resolved() {
        let f = |t: f64| (t - 0.3).max(0.0).powi(3);
        let e = integrate_adaptive(f, 0.0, 1.0, &spec()).unwrap();
        assert!((e.value - 0.7f64.powi(4) / 4.0).abs() < 1e-12);
    }

    #[test]
    fn reversed_and_empty_intervals() {
        let e = integrate_adaptive(|t: f64| t, 1.0, 0.0, &spec()).unwrap();
        assert!((e.value + 0.5).abs() < 1e-14);
        assert_eq!(integrate_adaptive(|t: f64| t, 1.0, 1.0, &spec()).unwrap().value, 0.0);
    }

    #[test]
    fn nonconvergence_is_an_error() {
        let tight = QuadratureSpec {
            abs_tol: 1e-30,
            rel_tol: 1e-30,
            max_refinements: 2,
        };
        let r = integrate_adaptive(|t: f64| t.sqrt(), 0.0, 1.0, &tight);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }

    #[test]
    fn cumulative_matches_antiderivative() {
        let nodes: Vec<f64> = (0..=50).map(|i| (i as f64 / 50.0).powi(3) * 2.0).collect();
        let cum = integrate_cumulative(|t: f64| t.cos(), &nodes, &spec()).unwrap();
        for (t, c) in nodes.iter().zip(&cum) {
            assert!((c - t.sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn halving_cells_stays_within_reported_error() {
        let f = |t: f64| t.powf(-0.6) * (1.0 + t).ln().exp();
        let e = integrate_graded(f, 0.0, 1.0, 0.6, &spec()).unwrap();
        let gamma = grading_for_exponent(0.6);
        // the converged level used e.evaluations / 10 cells in total across levels;
        // recompute the finest and half-finest levels directly
        let mut cells = GRADED_START_CELLS;
        let mut total = cells;
        while total * GL_ORDER < e.evaluations {
            cells *= 2;
            total += cells;
        }
        let fine = graded_rule(&f, 0.0, 1.0, gamma, cells);
        let half = graded_rule(&f, 0.0, 1.0, gamma, cells / 2);
        assert_eq!(fine, e.value);
        assert!((fine - half).abs() <= e.error);
    }

    #[test]
    fn single_precision_rule() {
        let spec = QuadratureSpec::<f32>::default();
        let e = integrate_graded(|t: f32| t.powf(-0.5), 0.0, 1.0, 0.5, &spec).unwrap();
        assert!((e.value - 2.0).abs() < 1e-4);
    }
}
