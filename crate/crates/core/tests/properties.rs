//! Property tests of the norms, the curvature deficit, the configuration
//! round trip and the `omega`-invariance of the checks.

use gqe_comparison::cli_runner::{parse_config, serialize_config, FamilyKind, OutputFormat, OutputSpec, SuiteConfig};
use gqe_comparison::integral_norms::weighted_lp_norm;
use gqe_comparison::theorem_checks::{check_area_ratio, check_volume_ratio, CheckOptions, TheoremId};
use gqe_comparison::{BuiltinFamily64, QuadratureSpec, WarpedSpace64};
use proptest::prelude::*;
use std::collections::BTreeMap;

fn spec() -> QuadratureSpec<f64> {
    QuadratureSpec::default()
}

fn gaussian(a: f64, k: f64, mu: f64) -> WarpedSpace64 {
    WarpedSpace64::builtin(BuiltinFamily64::GaussianFlat { a }, 3, k, mu).unwrap()
}

/// Smooth random radial profile `c0 + c1 sin(w t) + c2 t^2`.
fn profile(c: [f64; 4]) -> impl Fn(f64) -> f64 {
    move |t: f64| c[0] + c[1] * (c[3] * t).sin() + c[2] * t * t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn norm_scaling(
        c in prop::array::uniform4(-2.0f64..2.0),
        scale in -5.0f64..5.0,
        p in 1.0f64..6.0,
        r in 0.2f64..3.0,
    ) {
        let s = gaussian(0.7, 2.0, 0.5);
        let v = profile(c);
        let base = weighted_lp_norm(&s, &v, p, r, &spec()).unwrap();
        let scaled = weighted_lp_norm(&s, |t| scale * v(t), p, r, &spec()).unwrap();
        prop_assert!((scaled - scale.abs() * base).abs() <= 1e-12 * (scale.abs() * base).max(1e-300));
    }

    #[test]
    fn holder_consistency(
        c in prop::array::uniform4(-2.0f64..2.0),
        p in 1.0f64..4.0,
        extra in 0.1f64..4.0,
        r in 0.2f64..3.0,
    ) {
        let s = WarpedSpace64::builtin(BuiltinFamily64::WeightPerturbedSphere { delta: 0.1, q: 2.0 }, 3, 1.0, 1.0).unwrap();
        let q = p + extra;
        let v = profile(c);
        let small = weighted_lp_norm(&s, &v, p, r, &spec()).unwrap();
        let large = weighted_lp_norm(&s, &v, q, r, &spec()).unwrap();
        let vol = s.weighted_volume(r).unwrap();
        let bound = large * vol.powf(1.0 / p - 1.0 / q);
        prop_assert!(small <= bound * (1.0 + 1e-9), "{} > {}", small, bound);
    }

    #[test]
    fn deficit_nondecreasing_in_mu(
        a in -2.0f64..2.0,
        k in 0.5f64..4.0,
        extra in 0.0f64..3.0,
        t in 0.01f64..5.0,
        h in -1.0f64..1.0,
    ) {
        let mu = 1.0 / k;
        let lo = gaussian(a, k, mu);
        let hi = gaussian(a, k, mu + extra);
        prop_assert!(hi.deficit(h, t) >= lo.deficit(h, t));
        prop_assert!(hi.lambda_min(t) <= lo.lambda_min(t));
    }

    #[test]
    fn deficit_nondecreasing_in_curvature(
        family in 0usize..5,
        t in 0.01f64..3.0,
        h in -2.0f64..2.0,
        dh in 0.0f64..1.0,
    ) {
        let s = WarpedSpace64::builtin(BuiltinFamily64::catalog()[family], 3, 1.0, 1.0).unwrap();
        let t = t.min(s.max_radius());
        prop_assert!(s.deficit(h + dh, t) >= s.deficit(h, t));
    }

    #[test]
    fn omega_invariance_of_volume_checks(
        a in -1.0f64..1.5,
        r in 0.1f64..0.9,
        omega in 0.1f64..50.0,
    ) {
        let s = gaussian(a, 2.0, 0.5).with_omega(omega).unwrap();
        let unit = s.clone().with_omega(1.0).unwrap();
        let o = CheckOptions::default();
        let (m, mu) = (s.model(0.25).unwrap(), unit.model(0.25).unwrap());
        for (x, y) in [
            (check_volume_ratio(&s, &m, 3.0, r, 1.0, &o).unwrap(), check_volume_ratio(&unit, &mu, 3.0, r, 1.0, &o).unwrap()),
            (check_area_ratio(&s, &m, 3.0, r, 1.0, &o).unwrap(), check_area_ratio(&unit, &mu, 3.0, r, 1.0, &o).unwrap()),
        ] {
            prop_assert_eq!(x.verdict, y.verdict);
            prop_assert!((x.relative_margin() - y.relative_margin()).abs() <= 1e-10);
        }
    }
}

fn sweep(values: impl Strategy<Value = f64>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(values, 1..4)
}

fn config_strategy() -> impl Strategy<Value = SuiteConfig> {
    let families = prop::sample::select(vec![
        FamilyKind::Sphere,
        FamilyKind::Flat,
        FamilyKind::Hyperbolic,
        FamilyKind::GaussianFlat,
        FamilyKind::WeightPerturbedSphere,
    ]);
    let theorems = prop::sample::subsequence(TheoremId::ALL.to_vec(), 1..=TheoremId::ALL.len());
    (
        families,
        sweep(-3.0f64..3.0),
        sweep(2.0f64..4.0),
        prop::collection::vec(2usize..6, 1..3),
        sweep(0.5f64..3.0),
        sweep(-1.0f64..1.0),
        theorems,
        (64usize..5000, prop::option::of(1.0f64..6.0), 1e-9f64..1e-6, prop::bool::ANY),
        prop::option::of(0.1f64..20.0),
        (1.01f64..4.0, prop::collection::vec(0.01f64..1.0, 2)),
    )
        .prop_map(|(family, a, q, n, k, h, mut theorems, (cells, gamma, tol, csv), omega, (beta, radii))| {
            // parsed configurations hold theorem ids in sorted order
            theorems.sort();
            let mut family_params = BTreeMap::new();
            match family {
                FamilyKind::GaussianFlat => {
                    family_params.insert("a".to_string(), a);
                }
                FamilyKind::WeightPerturbedSphere => {
                    family_params.insert("delta".to_string(), a.iter().map(|v| v.abs() / 10.0).collect());
                    family_params.insert("q".to_string(), q);
                }
                _ => {}
            }
            let max_dim = *n.iter().max().unwrap() as f64 + k.iter().cloned().fold(0.0, f64::max);
            let mu = vec![1.0 / k.iter().cloned().fold(f64::INFINITY, f64::min) + 0.25];
            let mut radii_map = BTreeMap::new();
            let (lo, hi) = (radii[0].min(radii[1]), radii[0].max(radii[1]) + 0.5);
            radii_map.insert(TheoremId::VolumeRatio, vec![vec![lo, hi]]);
            radii_map.insert(TheoremId::AnnulusRatio, vec![vec![0.1 * lo, 0.2 * lo, hi, hi + 0.25]]);
            SuiteConfig {
                family,
                family_params,
                profile_path: None,
                n,
                k,
                mu,
                curvature: h,
                p: vec![max_dim / 2.0 + 0.5, max_dim / 2.0 + 1.25],
                omega,
                max_radius: None,
                beta,
                tolerance: tol,
                theorems,
                radii: radii_map,
                grid_cells: cells,
                grid_gamma: gamma,
                quadrature: QuadratureSpec::default(),
                output: OutputSpec {
                    path: if csv { Some("suite out.csv".into()) } else { None },
                    format: if csv { OutputFormat::Csv } else { OutputFormat::Json },
                },
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn config_round_trip(config in config_strategy()) {
        let text = serialize_config(&config);
        let parsed = parse_config(&text);
        prop_assert!(parsed.is_ok(), "{:?}\n{}", parsed, text);
        prop_assert_eq!(parsed.unwrap(), config);
    }
}
