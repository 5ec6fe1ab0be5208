use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::spline::CubicSpline;
use crate::scalar::Real;

/// Value and first two derivatives of a radial function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<T> {
    pub value: T,
    pub d1: T,
    pub d2: T,
}

/// A radial C² function given analytically (or by a spline fit).
#[derive(Debug, Clone, PartialEq)]
pub enum Profile<T> {
    /// `0`
    Zero,
    /// `t`
    Identity,
    /// `sin t`
    Sine,
    /// `sinh t`
    HypSine,
    /// `a t² / 2`
    Quadratic { a: T },
    /// `delta (1 - cos t)^q`
    CosinePower { delta: T, q: T },
    /// Cubic spline through tabulated samples.
    Spline(Arc<CubicSpline<T>>),
}

impl<T: Real> Profile<T> {
    pub fn jet(&self, t: T) -> Jet<T> {
        match self {
            Profile::Zero => Jet {
                value: T::zero(),
                d1: T::zero(),
                d2: T::zero(),
            },
            Profile::Identity => Jet {
                value: t,
                d1: T::one(),
                d2: T::zero(),
            },
            Profile::Sine => {
                let (s, c) = t.sin_cos();
                Jet { value: s, d1: c, d2: -s }
            }
            Profile::HypSine => {
                let (s, c) = (t.sinh(), t.cosh());
                Jet { value: s, d1: c, d2: s }
            }
            Profile::Quadratic { a } => Jet {
                value: *a * t * t * T::lit(0.5),
                d1: *a * t,
                d2: *a,
            },
            Profile::CosinePower { delta, q } => {
                let (s, c) = t.sin_cos();
                let u = T::one() - c;
                let (delta, q) = (*delta, *q);
                let one = T::one();
                Jet {
                    value: delta * u.powf(q),
                    d1: delta * q * u.powf(q - one) * s,
                    d2: delta * q * ((q - one) * u.powf(q - T::lit(2.0)) * s * s + u.powf(q - one) * c),
                }
            }
            Profile::Spline(s) => s.jet(t),
        }
    }

    /// `1 - (d/dt)²`, evaluated without cancellation where a closed form exists.
    pub fn one_minus_slope_sq(&self, t: T) -> T {
        match self {
            Profile::Identity => T::zero(),
            Profile::Sine => {
                let s = t.sin();
                s * s
            }
            Profile::HypSine => {
                let s = t.sinh();
                -s * s
            }
            other => {
                let d1 = other.jet(t).d1;
                T::one() - d1 * d1
            }
        }
    }

    /// First positive zero of the profile for closed (two-pole) warps.
    pub fn closing_radius(&self) -> Option<T> {
        match self {
            Profile::Sine => Some(T::PI()),
            _ => None,
        }
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self, Profile::Spline(_))
    }
}

/// Catalog of explicit weighted rotationally symmetric test spaces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BuiltinFamily<T> {
    /// Round unit sphere, `phi = sin t`, `f = 0`.
    Sphere,
    /// Euclidean space, `phi = t`, `f = 0`.
    Flat,
    /// Hyperbolic space, `phi = sinh t`, `f = 0`.
    Hyperbolic,
    /// Euclidean space with Gaussian weight `f = a t² / 2`.
    GaussianFlat { a: T },
    /// Round sphere with weight `f = delta (1 - cos t)^q`, `q >= 2`.
    WeightPerturbedSphere { delta: T, q: T },
}

impl<T: Real> BuiltinFamily<T> {
    pub fn warp(&self) -> Profile<T> {
        match self {
            BuiltinFamily::Sphere | BuiltinFamily::WeightPerturbedSphere { .. } => Profile::Sine,
            BuiltinFamily::Flat | BuiltinFamily::GaussianFlat { .. } => Profile::Identity,
            BuiltinFamily::Hyperbolic => Profile::HypSine,
        }
    }

    pub fn weight(&self) -> Profile<T> {
        match *self {
            BuiltinFamily::GaussianFlat { a } => Profile::Quadratic { a },
            BuiltinFamily::WeightPerturbedSphere { delta, q } => Profile::CosinePower { delta, q },
            _ => Profile::Zero,
        }
    }

    /// Largest radius used by default: just short of the antipodal point for
    /// sphere families, 10 otherwise.
    pub fn default_max_radius(&self) -> T {
        match self {
            BuiltinFamily::Sphere | BuiltinFamily::WeightPerturbedSphere { .. } => T::PI() * T::lit(0.999),
            _ => T::lit(10.0),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BuiltinFamily::Sphere => "sphere",
            BuiltinFamily::Flat => "flat",
            BuiltinFamily::Hyperbolic => "hyperbolic",
            BuiltinFamily::GaussianFlat { .. } => "gaussian_flat",
            BuiltinFamily::WeightPerturbedSphere { .. } => "weight_perturbed_sphere",
        }
    }

    pub fn parameters(&self) -> BTreeMap<String, f64> {
        let mut out = BTreeMap::new();
        match *self {
            BuiltinFamily::GaussianFlat { a } => {
                out.insert("a".into(), a.as_f64());
            }
            BuiltinFamily::WeightPerturbedSphere { delta, q } => {
                out.insert("delta".into(), delta.as_f64());
                out.insert("q".into(), q.as_f64());
            }
            _ => {}
        }
        out
    }

    /// All five families with representative parameters.
    pub fn catalog() -> [BuiltinFamily<T>; 5] {
        [
            BuiltinFamily::Sphere,
            BuiltinFamily::Flat,
            BuiltinFamily::Hyperbolic,
            BuiltinFamily::GaussianFlat { a: T::one() },
            BuiltinFamily::WeightPerturbedSphere {
                delta: T::lit(0.05),
                q: T::lit(2.0),
            },
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_power_derivatives_match_differences() {
        let p = Profile::<f64>::CosinePower { delta: 0.3, q: 2.5 };
        let h = 1e-5;
        for t in [0.2, 1.0, 2.5] {
            let j = p.jet(t);
            let d1 = (p.jet(t + h).value - p.jet(t - h).value) / (2.0 * h);
            let d2 = (p.jet(t + h).value - 2.0 * j.value + p.jet(t - h).value) / (h * h);
            assert!((j.d1 - d1).abs() < 1e-8);
            assert!((j.d2 - d2).abs() < 1e-4);
        }
        assert_eq!(p.jet(0.0).d1, 0.0);
    }

    #[test]
    fn slope_identity_is_exact_for_sine() {
        let t = 1e-6;
        let exact = Profile::<f64>::Sine.one_minus_slope_sq(t);
        assert!((exact / (t * t) - 1.0).abs() < 1e-10);
    }
}
