//! Worked examples of the theorem checks and the suite runner.

use std::f64::consts::PI;

use gqe_comparison::cli_runner::{parse_config, run_suite, write_profiles};
use gqe_comparison::theorem_checks::{
    check_annulus_ratio, check_area_ratio, check_area_ratio_extended, check_derivation_chain, check_doubling,
    check_mean_curvature_extended, check_mean_curvature_norm, check_mean_curvature_pointwise, check_volume_ratio,
    diameter_probe, CheckOptions, TheoremId, Verdict,
};
use gqe_comparison::{AnnulusRadii, BuiltinFamily64, Error, RadialGrid, WarpedSpace64};

const H_SPHERE: f64 = 2.0 / 3.0;

fn opts() -> CheckOptions<f64> {
    CheckOptions::default()
}

fn sphere() -> WarpedSpace64 {
    WarpedSpace64::builtin(BuiltinFamily64::Sphere, 3, 1.0, 1.0).unwrap()
}

fn perturbed() -> WarpedSpace64 {
    WarpedSpace64::builtin(BuiltinFamily64::WeightPerturbedSphere { delta: 0.05, q: 2.0 }, 3, 1.0, 1.0).unwrap()
}

fn gaussian(a: f64) -> WarpedSpace64 {
    WarpedSpace64::builtin(BuiltinFamily64::GaussianFlat { a }, 3, 2.0, 0.5).unwrap()
}

#[test]
fn mean_curvature_norm_examples() {
    let s = sphere();
    let rep = check_mean_curvature_norm(&s, &s.model(H_SPHERE).unwrap(), 3.0, 1.0, &opts()).unwrap();
    assert_eq!((rep.lhs, rep.rhs, rep.pass), (0.0, 0.0, true));

    let g = gaussian(1.0);
    let rep = check_mean_curvature_norm(&g, &g.model(0.0).unwrap(), 3.0, 2.0, &opts()).unwrap();
    assert!(rep.pass && rep.margin > 0.0, "{rep:?}");

    let w = perturbed();
    let rep = check_mean_curvature_norm(&w, &w.model(H_SPHERE).unwrap(), 3.0, 1.0, &opts()).unwrap();
    assert!(rep.pass, "{rep:?}");
}

#[test]
fn pointwise_examples() {
    let flat = WarpedSpace64::builtin(BuiltinFamily64::Flat, 3, 1.0, 1.0).unwrap();
    let rep = check_mean_curvature_pointwise(&flat, &flat.model(0.0).unwrap(), 3.0, 1.0, &opts()).unwrap();
    assert_eq!((rep.lhs, rep.pass), (0.0, true));

    let g = gaussian(1.0);
    let o = CheckOptions {
        grid_cells: 512,
        ..opts()
    };
    let rep = check_mean_curvature_pointwise(&g, &g.model(0.0).unwrap(), 3.0, 2.0, &o).unwrap();
    assert!(rep.pass, "{rep:?}");
    assert_eq!(rep.diagnostics["nodes_checked"], 513);
    assert_eq!(rep.diagnostics["failing_nodes"], 0);

    let s = sphere();
    let m = s.model(0.70).unwrap();
    let rep = check_mean_curvature_pointwise(&s, &m, 3.0, 1.5, &opts()).unwrap();
    assert!(rep.pass, "{rep:?}");
    assert!(rep.diagnostics["rhs_at_r"].as_f64().unwrap() > 0.0);
}

#[test]
fn extended_examples() {
    let period = PI / H_SPHERE.sqrt();
    let s = sphere();
    let (a, b) = check_mean_curvature_extended(&s, &s.model(H_SPHERE).unwrap(), 3.0, 0.75 * period, &opts()).unwrap();
    assert_eq!((a.lhs, a.rhs, b.lhs, b.rhs), (0.0, 0.0, 0.0, 0.0));

    let w = perturbed();
    let m = w.model(H_SPHERE).unwrap();
    let (a, b) = check_mean_curvature_extended(&w, &m, 3.0, 0.75 * period, &opts()).unwrap();
    assert!(a.pass && b.pass);
    assert_eq!(a.theorem_id, TheoremId::MeanCurvatureNormExtended);
    assert_eq!(b.theorem_id, TheoremId::MeanCurvaturePointwiseExtended);

    let err = check_mean_curvature_extended(&w, &m, 3.0, 0.5 * period, &opts()).unwrap_err();
    assert!(matches!(err, Error::Range(_)));
}

#[test]
fn derivation_chain_examples() {
    let s = sphere();
    let grid = RadialGrid::uniform(0.05, 1.5, 256).unwrap();
    let rep = check_derivation_chain(&s, &s.model(H_SPHERE).unwrap(), 3.0, &grid, &opts()).unwrap();
    assert_eq!((rep.lhs, rep.pass), (0.0, true));

    // a negative Gaussian weight has excess (r - 2/r)_+, so every term is
    // active beyond sqrt 2 and the tightest node sits at the support edge
    let g = WarpedSpace64::builtin(BuiltinFamily64::GaussianFlat { a: -1.0 }, 3, 2.0, 0.5).unwrap();
    let m = g.model(0.0).unwrap();
    assert!(g.excess(&m, 3.0).unwrap() > 1.0);
    let grid = RadialGrid::uniform(0.01, 3.0, 2048).unwrap();
    let rep = check_derivation_chain(&g, &m, 3.0, &grid, &opts()).unwrap();
    assert!(rep.pass, "{rep:?}");
    assert_eq!(rep.diagnostics["failing_nodes"], 0);
    assert!((rep.diagnostics["worst_radius"].as_f64().unwrap() - 2f64.sqrt()).abs() < 0.01);

    // grids must stay below the half period
    let grid = RadialGrid::uniform(0.05, 2.5, 256).unwrap();
    assert!(check_derivation_chain(&s, &s.model(H_SPHERE).unwrap(), 3.0, &grid, &opts()).is_err());
}

#[test]
fn area_ratio_examples() {
    let s = sphere();
    let rep = check_area_ratio(&s, &s.model(H_SPHERE).unwrap(), 3.0, 0.5, 1.5, &opts()).unwrap();
    assert!(rep.pass && rep.lhs <= 0.0 && rep.rhs == 0.0, "{rep:?}");

    let g = gaussian(1.0);
    let rep = check_area_ratio(&g, &g.model(0.0).unwrap(), 3.0, 0.5, 1.0, &opts()).unwrap();
    assert!(rep.pass, "{rep:?}");

    let period = PI / H_SPHERE.sqrt();
    let w = perturbed();
    let rep =
        check_area_ratio_extended(&w, &w.model(H_SPHERE).unwrap(), 3.0, 0.6 * period, 0.8 * period, &opts()).unwrap();
    assert!(rep.pass, "{rep:?}");
}

#[test]
fn volume_ratio_examples() {
    for family in BuiltinFamily64::catalog().into_iter().take(3) {
        let s = WarpedSpace64::builtin(family, 3, 1.0, 1.0).unwrap();
        let h = match family {
            BuiltinFamily64::Sphere => H_SPHERE,
            BuiltinFamily64::Hyperbolic => -1.0,
            _ => 0.0,
        };
        let rep = check_volume_ratio(&s, &s.model(h).unwrap(), 3.0, 0.5, 1.0, &opts()).unwrap();
        assert!(rep.pass && rep.rhs == 0.0 && rep.lhs <= 1e-12, "{rep:?}");
    }

    let g = gaussian(1.0);
    let rep = check_volume_ratio(&g, &g.model(0.0).unwrap(), 3.0, 0.5, 1.0, &opts()).unwrap();
    assert!(rep.pass, "{rep:?}");

    let weak = WarpedSpace64::builtin(BuiltinFamily64::GaussianFlat { a: 0.01 }, 3, 1.0, 1.0).unwrap();
    let rep = check_volume_ratio(&weak, &weak.model(0.0).unwrap(), 3.0, 0.5, 1.0, &opts()).unwrap();
    assert!(rep.pass && rep.lhs < 0.0 && rep.rhs == 0.0, "{rep:?}");
}

#[test]
fn annulus_examples() {
    let g = gaussian(1.0);
    let m = g.model(0.0).unwrap();
    let same = AnnulusRadii {
        r1: 0.3,
        r2: 0.3,
        big_r1: 0.9,
        big_r2: 0.9,
    };
    let rep = check_annulus_ratio(&g, &m, 3.0, same, &opts()).unwrap();
    assert_eq!((rep.lhs, rep.rhs, rep.pass), (0.0, 0.0, true));

    let radii = AnnulusRadii {
        r1: 0.2,
        r2: 0.4,
        big_r1: 0.8,
        big_r2: 1.0,
    };
    assert!(check_annulus_ratio(&g, &m, 3.0, radii, &opts()).unwrap().pass);

    let s = sphere();
    let rep = check_annulus_ratio(&s, &s.model(H_SPHERE).unwrap(), 3.0, radii, &opts()).unwrap();
    assert!(rep.pass && rep.lhs <= 1e-12, "{rep:?}");

    let bad = AnnulusRadii {
        r1: 0.5,
        r2: 0.4,
        big_r1: 0.8,
        big_r2: 1.0,
    };
    assert!(matches!(check_annulus_ratio(&g, &m, 3.0, bad, &opts()), Err(Error::Ordering(_))));
}

#[test]
fn doubling_examples() {
    let s = sphere();
    let rep = check_doubling(&s, &s.model(H_SPHERE).unwrap(), 3.0, 1.1, 0.5, 1.0, 1.0, &opts()).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass);
    assert_eq!(rep.diagnostics["kbar"], 0.0);
    let model_ratio = rep.diagnostics["model_ratio"].as_f64().unwrap();
    assert!(rep.lhs <= model_ratio * (1.0 + 1e-9));

    let big = gaussian(6.0);
    let rep = check_doubling(&big, &big.model(0.0).unwrap(), 3.0, 2.0, 0.5, 1.0, 1.0, &opts()).unwrap();
    assert_eq!(rep.verdict, Verdict::HypothesisNotMet);
    assert_eq!(rep.lhs, rep.diagnostics["kbar"].as_f64().unwrap());
}

#[test]
fn diameter_examples() {
    let s = sphere();
    let rep = diameter_probe(&s, &s.model(H_SPHERE).unwrap(), 3.0, 1.0, 1.0, &opts()).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass);
    assert!((rep.rhs - PI / H_SPHERE.sqrt()).abs() < 1e-12);

    let flat = WarpedSpace64::builtin(BuiltinFamily64::Flat, 3, 1.0, 1.0).unwrap();
    let err = diameter_probe(&flat, &flat.model(0.5).unwrap(), 3.0, 1.0, 1.0, &opts()).unwrap_err();
    assert!(matches!(err, Error::NonCompact(_)));
}

#[test]
fn gaussian_sweep_suite() {
    let cfg = parse_config(
        "family = \"gaussian_flat\"\na = [0.5, 1, 2]\nn = 3\nk = 2\nmu = 0.5\nH = 0\np = 3\ntheorems = [\"T2\"]\noutput.format = \"json\"\n",
    )
    .unwrap();
    let doc = run_suite(&cfg).unwrap();
    assert_eq!(doc.reports.len(), 3);
    assert_eq!(doc.exit_code(), 0);
}

#[test]
fn sphere_profile_is_graded() {
    let s = sphere();
    let grid = RadialGrid::new(s.r_min(), s.max_radius(), 128, 3.0).unwrap();
    let mut buf = Vec::new();
    write_profiles(&s, &s.model(1.0).unwrap(), &grid, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let r: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(r.len(), 129);
    assert!(r.windows(2).all(|w| w[1] > w[0]));
    assert!(r[1] - r[0] < r[128] - r[127]);
}

#[test]
fn large_exponent_grids_stay_resolvable() {
    let s = sphere();
    let m = s.model(H_SPHERE).unwrap();
    for p in [4.0, 8.0, 20.0] {
        let rep = check_mean_curvature_pointwise(&s, &m, p, 1.0, &opts()).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(rep.grid_meta.unwrap().gamma <= 2.0 * p - 1.0);
    }
}
