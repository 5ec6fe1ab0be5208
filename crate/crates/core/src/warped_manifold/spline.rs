use crate::error::{Error, Result};
use crate::scalar::Real;

use super::profile::Jet;

/// Cubic interpolating spline, clamped to a prescribed slope at the first knot
/// (or natural when none is given) and natural at the last knot.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline<T> {
    x: Vec<T>,
    y: Vec<T>,
    moments: Vec<T>,
}

impl<T: Real> CubicSpline<T> {
    pub fn new(x: Vec<T>, y: Vec<T>, start_slope: Option<T>) -> Result<Self> {
        let n = x.len();
        if n < 3 || y.len() != n {
            return Err(Error::Profile(format!(
                "spline needs at least 3 matching samples, got {} knots and {} values",
                x.len(),
                y.len()
            )));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Profile("spline knots must be strictly increasing".into()));
        }
        let six = T::lit(6.0);
        let two = T::lit(2.0);
        let h: Vec<T> = x.windows(2).map(|w| w[1] - w[0]).collect();
        // tridiagonal system for the second derivatives, last one fixed at zero
        let m = n - 1;
        let mut sub = vec![T::zero(); m];
        let mut diag = vec![T::zero(); m];
        let mut sup = vec![T::zero(); m];
        let mut rhs = vec![T::zero(); m];
        match start_slope {
            Some(s0) => {
                diag[0] = two * h[0];
                sup[0] = h[0];
                rhs[0] = six * ((y[1] - y[0]) / h[0] - s0);
            }
            None => {
                diag[0] = T::one();
            }
        }
        for i in 1..m {
            sub[i] = h[i - 1];
            diag[i] = two * (h[i - 1] + h[i]);
            sup[i] = if i + 1 < m { h[i] } else { T::zero() };
            rhs[i] = six * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
        }
        // Thomas sweep
        for i in 1..m {
            let w = sub[i] / diag[i - 1];
            diag[i] = diag[i] - w * sup[i - 1];
            rhs[i] = rhs[i] - w * rhs[i - 1];
        }
        let mut moments = vec![T::zero(); n];
        moments[m - 1] = rhs[m - 1] / diag[m - 1];
        for i in (0..m - 1).rev() {
            moments[i] = (rhs[i] - sup[i] * moments[i + 1]) / diag[i];
        }
        Ok(CubicSpline { x, y, moments })
    }

    pub fn knots(&self) -> &[T] {
        &self.x
    }

    fn interval(&self, t: T) -> usize {
        let last = self.x.len() - 2;
        match self.x.binary_search_by(|v| v.partial_cmp(&t).expect("finite knot")) {
            Ok(i) => i.min(last),
            Err(0) => 0,
            Err(i) => (i - 1).min(last),
        }
    }

    pub fn jet(&self, t: T) -> Jet<T> {
        let i = self.interval(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        let (mi, mj) = (self.moments[i], self.moments[i + 1]);
        let six = T::lit(6.0);
        let three = T::lit(3.0);
        let value = a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * mi + (b * b * b - b) * mj) * h * h / six;
        let d1 = (self.y[i + 1] - self.y[i]) / h - (three * a * a - T::one()) / six * h * mi
            + (three * b * b - T::one()) / six * h * mj;
        let d2 = a * mi + b * mj;
        Jet { value, d1, d2 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_sine_with_clamped_start() {
        // sin has slope 1 at the clamped end; the natural end condition is only
        // approximate at t = 1, so accuracy is checked away from it.
        let x: Vec<f64> = (0..=200).map(|i| i as f64 / 200.0).collect();
        let y: Vec<f64> = x.iter().map(|t| t.sin()).collect();
        let s = CubicSpline::new(x, y, Some(1.0)).unwrap();
        for t in [0.01, 0.2, 0.5, 0.8] {
            let j = s.jet(t);
            assert!((j.value - f64::sin(t)).abs() < 1e-9);
            assert!((j.d1 - f64::cos(t)).abs() < 1e-6);
            assert!((j.d2 + f64::sin(t)).abs() < 1e-3);
        }
        assert!((s.jet(0.0).d1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_unsorted_knots() {
        assert!(CubicSpline::new(vec![0.0, 2.0, 1.0], vec![0.0; 3], None).is_err());
    }
}
