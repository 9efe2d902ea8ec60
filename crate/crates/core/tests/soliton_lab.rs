use std::path::PathBuf;

use proptest::prelude::*;

use paratensor::manifest::load_manifest;
use paratensor::paracontact::{is_para_sasakian, sasakian_identity_suite};
use paratensor::soliton_lab::{
    collinear_potential_analysis, curvature_from_torse_forming, detect_torse_forming, einstein_like_fit,
    solve_soliton_constants, soliton_residual, torse_forming_constants, EinsteinFit, SolitonData, SolitonSolution,
};
use paratensor::{Expr, Geometry, Rational, RicciMode, Status};

fn geometry(name: &str) -> Geometry {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../fixtures/{name}.json"));
    let loaded = load_manifest(&path).unwrap();
    Geometry::new(loaded.structure, loaded.frame, 42).unwrap()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

const W: RicciMode = RicciMode::WeightedTrace;

#[test]
fn warped_product_is_an_exact_soliton() {
    let geom = geometry("warped_r3");
    let xi = geom.structure.xi().clone();
    let sol = solve_soliton_constants(&geom, W, &xi).unwrap();
    assert_eq!(
        sol,
        SolitonSolution::Exact {
            lambda: q(1, 1),
            mu: q(1, 1)
        }
    );
    let data = SolitonData {
        potential: xi,
        lambda: q(1, 1),
        mu: q(1, 1),
    };
    assert!(soliton_residual(&geom, W, &data).unwrap().is_zero());
    let wrong = SolitonData { mu: q(0, 1), ..data };
    assert!(!soliton_residual(&geom, W, &wrong).unwrap().is_zero());
}

#[test]
fn warped_product_curvature_matches_torse_forming_form() {
    let geom = geometry("warped_r3");
    let tf = detect_torse_forming(&geom).unwrap();
    let fit = einstein_like_fit(&geom, W).unwrap();
    let k = fit.constants().expect("eta-Einstein");
    assert_eq!((&k.a, &k.b, &k.c), (&q(-2, 1), &q(0, 1), &q(0, 1)));
    let a_plus_lambda = &k.a + q(1, 1);
    let report = curvature_from_torse_forming(&geom, &tf, Some(&a_plus_lambda)).unwrap();
    for e in report.entries() {
        assert_eq!(e.status, Status::Pass, "{}: {}", e.id, e.details);
    }
}

#[test]
fn torse_forming_curvature_needs_torse_forming_xi() {
    let geom = geometry("ex1_r3_spacelike");
    let tf = detect_torse_forming(&geom).unwrap();
    assert!(curvature_from_torse_forming(&geom, &tf, None).is_err());
}

#[test]
fn eta_einstein_structure_on_r5() {
    let geom = geometry("ex5d_r5_g1");
    let fit = einstein_like_fit(&geom, W).unwrap();
    let k = fit.constants().expect("eta-Einstein");
    assert_eq!((&k.a, &k.b, &k.c), (&q(1, 2), &q(0, 1), &q(3, 2)));
    let xi = geom.structure.xi().clone();
    let sol = solve_soliton_constants(&geom, W, &xi).unwrap();
    assert!(sol.is_exact());
    assert_eq!((sol.lambda(), sol.mu()), (&q(-1, 2), &q(-3, 2)));
}

#[test]
fn second_r5_metric_is_not_einstein_like() {
    let geom = geometry("ex5d_r5_g2");
    let fit = einstein_like_fit(&geom, W).unwrap();
    assert!(matches!(fit, EinsteinFit::NotEinsteinLike { .. }));
    let xi = geom.structure.xi().clone();
    let sol = solve_soliton_constants(&geom, W, &xi).unwrap();
    let SolitonSolution::LeastSquares {
        residual_norm,
        sampled_max,
        ..
    } = sol
    else {
        panic!("expected a least-squares fit");
    };
    // The base-point residual vanishes, but away from it the equation fails.
    assert_eq!(residual_norm, 0.0);
    assert!(sampled_max > 1e-6);
}

#[test]
fn collinear_potential_gate_vanishes_on_spacelike_example() {
    let geom = geometry("ex1_r3_spacelike");
    let report = collinear_potential_analysis(&geom, W, &Expr::one(), &q(0, 1), &q(2, 1), true).unwrap();
    let gate = report.get("collinear.gate").unwrap();
    assert_eq!(gate.status, Status::Pass, "{}", gate.details);
    assert!(collinear_potential_analysis(&geom, W, &Expr::one(), &q(0, 1), &q(2, 1), false).is_err());
}

#[test]
fn flat_structure_is_not_para_sasakian() {
    let geom = geometry("flat_r3");
    let ps = is_para_sasakian(&geom.structure, &geom.connection, &geom.probe).unwrap();
    assert!(!ps.passed());
    let suite = sasakian_identity_suite(&geom.structure, &geom.weighted, &geom.probe).unwrap();
    assert_eq!(suite.status("sasakian.curvature_xi"), Some(Status::Fail));
}

proptest! {
    #[test]
    fn torse_constants_satisfy_the_soliton_relation(
        a in -20i64..20, ad in 1i64..6, l in -20i64..20, ld in 1i64..6,
        eps in prop::sample::select(vec![1i8, -1]), n in 2usize..9,
    ) {
        let tc = torse_forming_constants(&q(a, ad), &q(l, ld), eps, n);
        prop_assert_eq!(tc.check, q(0, 1));
    }
}
