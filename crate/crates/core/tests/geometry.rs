#![allow(clippy::needless_range_loop)]

use algebroid::algebroid::{Section, Structure};
use algebroid::connections::*;
use algebroid::constructions::fixtures::{heisenberg, s3_restriction};
use algebroid::constructions::{direct_product, fixture, flatness_check, prolong};
use algebroid::eforms::{d_e, EForm};
use algebroid::expr::{eval_float, parse_with_coords, sample_points, Scalar};
use algebroid::jstruct::{integrability_report, matched_pair, nijenhuis, ComplexFrame, EndoField};

fn coords(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn p(text: &str, names: &[&str]) -> Scalar {
    parse_with_coords(text, &coords(names)).unwrap()
}

fn setup(name: &str) -> (Structure, EndoField, Metric) {
    let f = fixture(name).unwrap();
    (
        f.algebroid.structure().clone(),
        f.j.unwrap(),
        Metric::new(f.metric.unwrap()).unwrap(),
    )
}

#[test]
fn covariant_derivative_on_flat_plane() {
    let (st, _, _) = setup("flat_r2");
    let conn = Connection::zero(st);
    let s2 = Section(vec![Scalar::zero(), Scalar::coord("x")]);
    let out = conn.cov_deriv(&Section::basis(2, 0), &s2).unwrap();
    assert_eq!(out, Section::basis(2, 1));
}

#[test]
fn heisenberg_torsion_of_zero_connection() {
    let st = heisenberg().unwrap().structure().clone();
    let t = Connection::zero(st).torsion();
    assert_eq!(t.get(2, 0, 1), &Scalar::int(-1));
}

#[test]
fn levi_civita_coefficients() {
    let (st, _, g) = setup("warped_r4");
    let lc = levi_civita(&st, &g).unwrap();
    let c4 = ["x1", "x2", "x3", "x4"];
    assert_eq!(lc.gamma(0, 2, 0), &p("x3/(1 + x3^2)", &c4));

    let heis = heisenberg().unwrap().structure().clone();
    let id = Metric::new(algebroid::algebroid::matrix::identity(4)).unwrap();
    let lc = levi_civita(&heis, &id).unwrap();
    assert_eq!(lc.gamma(2, 0, 1), &Scalar::ratio(1, 2));
    assert!(torsion_free_check(&lc).passed());
    assert!(metric_compat_check(&lc, &id).unwrap().passed());
    assert!(koszul_check(&lc, &id).unwrap().passed());
    // The printed coefficient formula differs by the sign of one bracket term.
    let literal = levi_civita_literal(&heis, &id).unwrap();
    assert!(!torsion_free_check(&literal).passed());
}

#[test]
fn levi_civita_checks_on_suite() {
    for name in ["flat_r2", "flat_r4", "heis_j", "warped_r4", "conformal_sphere_chart", "s3_projector"] {
        let (st, _, g) = setup(name);
        let lc = levi_civita(&st, &g).unwrap();
        assert!(torsion_free_check(&lc).passed(), "{name}");
        assert!(metric_compat_check(&lc, &g).unwrap().passed(), "{name}");
        assert!(koszul_check(&lc, &g).unwrap().passed(), "{name}");
    }
}

#[test]
fn symmetric_perturbation_breaks_compatibility() {
    let (st, _, g) = setup("warped_r4");
    let lc = levi_civita(&st, &g).unwrap();
    let s = Tensor3::from_fn(4, |c, a, b| if c == 0 && a == b { Scalar::one() } else { Scalar::zero() });
    let perturbed = lc.add_tensor(&s);
    assert!(torsion_free_check(&perturbed).passed());
    assert!(!metric_compat_check(&perturbed, &g).unwrap().passed());
}

#[test]
fn fundamental_forms() {
    let (_, j, g) = setup("flat_r2");
    assert_eq!(fundamental_form(&g, &j), EForm::basis(2, &[0, 1]).unwrap().neg());
    let (st, j, g) = setup("warped_r4");
    let phi = fundamental_form(&g, &j);
    let c4 = ["x1", "x2", "x3", "x4"];
    assert_eq!(phi.get(&[0, 1]).unwrap(), p("1 + x3^2", &c4));
    assert!(fundamental_form_checks(&g, &j).passed());
    let dphi = d_e(&st, &phi).unwrap();
    assert_eq!(dphi.get(&[2, 0, 1]).unwrap(), p("2*x3", &c4));
}

#[test]
fn non_invariant_metric_is_not_hermitian() {
    let (_, j, _) = setup("flat_r2");
    let g = Metric::new(vec![vec![Scalar::one(), Scalar::zero()], vec![Scalar::zero(), Scalar::int(2)]]).unwrap();
    assert!(!hermitian_check(&g, &j).unwrap().passed());
}

#[test]
fn kahler_reports() {
    let (st, j, g) = setup("flat_r2");
    let rep = kahler_report(&st, &j, &g).unwrap();
    assert!(rep.kahler && rep.equivalence_holds);

    let (st, j, g) = setup("warped_r4");
    let rep = kahler_report(&st, &j, &g).unwrap();
    assert!(rep.integrable && !rep.closed && !rep.kahler);
    assert!(!rep.levi_civita_almost_complex.passed());
    assert!(rep.equivalence_holds);

    let (st, j, g) = setup("heis_j");
    let rep = kahler_report(&st, &j, &g).unwrap();
    assert!(!rep.integrable);
    assert!(rep.equivalence_holds);
}

#[test]
fn vii5_identity_holds_on_suite() {
    for name in ["flat_r2", "flat_r4", "heis_j", "warped_r4", "conformal_sphere_chart", "s3_projector"] {
        let (st, j, g) = setup(name);
        let rep = vii5_residuals(&st, &j, &g).unwrap();
        assert!(rep.residual.passed(), "{name}: {:?}", rep.residual.first_failure());
    }
}

#[test]
fn heisenberg_nijenhuis_value() {
    let (st, j, _) = setup("heis_j");
    let n = nijenhuis(&st, &j).unwrap();
    assert_eq!(n.tensor.on_frame(0, 1), Section::from_ints(&[0, 0, -2, 0]));
    assert!(n.agreement.passed());
    let rep = integrability_report(&st, &j).unwrap();
    assert!(!rep.integrable);
}

/// Gauss curvature of `λ(dx² + dy²)` from `K = −Δ(log λ) / (2λ)` by finite
/// differences.
fn gauss_oracle(x: f64, y: f64) -> f64 {
    let lam = |x: f64, y: f64| 4.0 / (1.0 + x * x + y * y).powi(2);
    let h = 1e-3;
    let l = |x: f64, y: f64| lam(x, y).ln();
    let lap = (l(x + h, y) + l(x - h, y) + l(x, y + h) + l(x, y - h) - 4.0 * l(x, y)) / (h * h);
    -lap / (2.0 * lam(x, y))
}

#[test]
fn sphere_chart_curvature_matches_oracle() {
    let (st, j, g) = setup("conformal_sphere_chart");
    let lc = levi_civita(&st, &g).unwrap();
    let r = lc.curvature();
    assert!(!r.get(0, 0, 1, 1).is_zero());
    let k = sectional_curvature(&r, &g, &Section::basis(2, 0), &Section::basis(2, 1)).unwrap();
    let hk = holomorphic_sectional(&r, &g, &j, &Section::basis(2, 0)).unwrap();
    for pt in sample_points(st.coords(), 8, 42) {
        let f = pt.to_float();
        let (x, y) = (f.0["x"].re, f.0["y"].re);
        let oracle = gauss_oracle(x, y);
        assert!((eval_float(&k, &f).unwrap().re - oracle).abs() < 1e-5);
        assert!((eval_float(&hk, &f).unwrap().re - oracle).abs() < 1e-5);
    }
    let scaled = holomorphic_sectional(&r, &g, &j, &Section::basis(2, 0).scale(&Scalar::int(3))).unwrap();
    assert_eq!(scaled, hk);
    assert!(r.antisymmetry().passed());
}

#[test]
fn flat_fixtures_have_zero_curvature() {
    for name in ["flat_r2", "flat_r4"] {
        let (st, _, g) = setup(name);
        assert!(levi_civita(&st, &g).unwrap().curvature().is_zero());
    }
}

#[test]
fn curvature_is_skew_in_orthonormal_frames() {
    for name in ["heis_j", "warped_r4", "conformal_sphere_chart", "s3_projector"] {
        let (st, _, g) = setup(name);
        let lc = levi_civita(&st, &g).unwrap();
        let chk = curvature_skew_check(&lc, &g, 6, 42, 1e-9).unwrap();
        assert!(chk.passed(), "{name}: {chk:?}");
    }
}

#[test]
fn complex_frame_levi_civita() {
    for name in ["flat_r2", "flat_r4", "heis_j", "warped_r4", "conformal_sphere_chart"] {
        let (st, j, g) = setup(name);
        let frame = ComplexFrame::adapted(&st, &j).unwrap();
        let clc = levi_civita_complex_frame(&st, &j, &g, &frame).unwrap();
        assert!(clc.block.checks.passed(), "{name}");
        assert!(clc.transform_agreement.passed(), "{name}");
        assert!(clc.conjugation.passed(), "{name}");
        for fam in &clc.formula_families {
            assert!(fam.passed(), "{name} {}: {:?}", fam.name, fam.first_failure());
        }
    }
    let (st, j, g) = setup("warped_r4");
    let frame = ComplexFrame::adapted(&st, &j).unwrap();
    let clc = levi_civita_complex_frame(&st, &j, &g, &frame).unwrap();
    assert!(clc.kahler.is_none());
    let m = 2;
    let some_mixed = (0..m).any(|d| (0..m).any(|a| (0..m).any(|b| !clc.connection.gamma(d, a, m + b).is_zero())));
    assert!(some_mixed);
}

#[test]
fn sphere_chart_kahler_curvature() {
    let (st, j, g) = setup("conformal_sphere_chart");
    let frame = ComplexFrame::adapted(&st, &j).unwrap();
    let clc = levi_civita_complex_frame(&st, &j, &g, &frame).unwrap();
    assert!(clc.kahler.as_ref().unwrap().passed());
    let rep = kahler_complex_curvature(&clc).unwrap();
    assert!(rep.conjugate_family.passed());
    assert!(rep.mixed_relation.passed());
    assert!(rep.outside_families.passed());
    assert!(rep.printed_mixed_formula.passed());
    assert_eq!(rep.holomorphic_ratios, vec![Scalar::one()]);
}

#[test]
fn prolongation_of_flat_plane() {
    let base = fixture("flat_r2").unwrap().algebroid;
    let pro = prolong(&base).unwrap();
    let st = pro.algebroid.structure();
    assert_eq!(st.coords(), &coords(&["x", "y", "y1", "y2"])[..]);
    assert!((0..4).all(|a| (0..4).all(|b| (0..4).all(|c| st.c(c, a, b).is_zero()))));
    assert_eq!(pro.complete_fn(&Scalar::coord("x")), Scalar::coord("y1"));
    let f = fixture("prolong(flat_r2)").unwrap();
    let jc = f.j.unwrap();
    assert_eq!(jc.image(0), Section::from_ints(&[0, 1, 0, 0]));
    assert_eq!(jc.image(2), Section::from_ints(&[0, 0, 0, 1]));
}

#[test]
fn prolongation_lift_laws() {
    for name in ["flat_r2", "heis_j", "warped_r4", "conformal_sphere_chart", "s3_projector"] {
        let f = fixture(name).unwrap();
        let pro = prolong(&f.algebroid).unwrap();
        assert!(pro.algebroid.validate().valid(), "{name}");
        let c = f.algebroid.chart().coords().to_vec();
        let r = f.algebroid.rank();
        let x0 = Scalar::coord(&c[0]);
        let sections: Vec<Section> = (0..r)
            .map(|a| Section::basis(r, a))
            .chain([Section((0..r).map(|a| x0.pow(a as i64 + 1).unwrap()).collect())])
            .collect();
        let functions = vec![x0.clone(), x0.mul(&x0).add(&Scalar::one())];
        let laws = pro.lift_laws(&sections, &functions).unwrap();
        assert!(laws.passed(), "{name}: {:?}", laws.first_failure());
        assert!(pro.complete_j_checks(&f.j.unwrap()).unwrap().passed(), "{name}");
    }
}

#[test]
fn heisenberg_prolongation_brackets() {
    let f = fixture("heis_j").unwrap();
    let pro = prolong(&f.algebroid).unwrap();
    let e = |a| Section::basis(4, a);
    let lhs = pro.algebroid.bracket(&pro.complete(&e(0)), &pro.complete(&e(1))).unwrap();
    assert_eq!(lhs, pro.complete(&e(2)));
    assert_eq!(lhs, Section::basis(8, 2));
    let jc = pro.complete_lift_endo(&f.j.unwrap()).unwrap();
    let n = algebroid::jstruct::nijenhuis_of(pro.algebroid.structure(), &jc, &pro.complete(&e(0)), &pro.complete(&e(1)))
        .unwrap();
    assert_eq!(n, pro.complete(&Section::from_ints(&[0, 0, -2, 0])));
}

#[test]
fn hermitian_transfer_to_prolongation() {
    for name in ["flat_r2", "heis_j", "warped_r4", "conformal_sphere_chart"] {
        let f = fixture(&format!("prolong({name})")).unwrap();
        let g = Metric::new(f.metric.unwrap()).unwrap();
        assert!(hermitian_check(&g, f.j.as_ref().unwrap()).unwrap().passed(), "{name}");
    }
}

#[test]
fn complete_lift_of_levi_civita() {
    for name in ["flat_r2", "conformal_sphere_chart"] {
        let f = fixture(name).unwrap();
        let pro = prolong(&f.algebroid).unwrap();
        let g = Metric::new(f.metric.clone().unwrap()).unwrap();
        let lc = levi_civita(f.algebroid.structure(), &g).unwrap();
        let dc = pro.complete_connection(&lc);
        let gc = pro.complete_metric(f.metric.as_ref().unwrap()).unwrap();
        assert_eq!(dc, levi_civita(pro.algebroid.structure(), &gc).unwrap(), "{name}");
        let jc = pro.complete_lift_endo(f.j.as_ref().unwrap()).unwrap();
        assert!(almost_complex_check(&dc, &jc).unwrap().passed(), "{name}");
    }
}

#[test]
fn sasaki_structure() {
    let f = fixture("warped_r4").unwrap();
    let pro = prolong(&f.algebroid).unwrap();
    let g = f.metric.clone().unwrap();
    let lc = levi_civita(f.algebroid.structure(), &Metric::new(g.clone()).unwrap()).unwrap();
    let jl = pro.sasaki_endo(&lc).unwrap();
    jl.require_almost_complex().unwrap();
    let gl = Metric::new(pro.sasaki_metric(&lc, &g).unwrap()).unwrap();
    assert!(hermitian_check(&gl, &jl).unwrap().passed());
    for a in 0..4 {
        let s = Section::basis(4, a);
        assert_eq!(jl.apply(&pro.horizontal(&lc, &s)), pro.vertical(&s).neg());
        assert_eq!(jl.apply(&pro.vertical(&s)), pro.horizontal(&lc, &s));
        for b in 0..4 {
            let t = Section::basis(4, b);
            assert!(gl.pair(&pro.horizontal(&lc, &s), &pro.vertical(&t)).is_zero());
            assert_eq!(gl.pair(&pro.horizontal(&lc, &s), &pro.horizontal(&lc, &t)), g[a][b]);
        }
    }
}

#[test]
fn products() {
    let a = fixture("flat_r2").unwrap();
    let b = fixture("flat_r2").unwrap();
    let prod = direct_product(&a.algebroid, &b.algebroid, "p").unwrap();
    assert_eq!(prod.algebroid.chart().coords(), &coords(&["x", "y", "x_2", "y_2"])[..]);
    let f = fixture("product(flat_r2,heis_j)").unwrap();
    let st = f.algebroid.structure();
    assert!(f.algebroid.validate().valid());
    let n = nijenhuis(st, f.j.as_ref().unwrap()).unwrap();
    for c in 0..6 {
        for x in 0..6 {
            for y in 0..6 {
                if x < 2 || y < 2 {
                    assert!(n.tensor.get(c, x, y).is_zero());
                }
            }
        }
    }
    assert!(!n.tensor.is_zero());
    let g = Metric::new(f.metric.unwrap()).unwrap();
    assert!(hermitian_check(&g, f.j.as_ref().unwrap()).unwrap().passed());
    let s = [Section::basis(2, 0), Section(vec![Scalar::coord("x"), Scalar::coord("y")])];
    let t = [Section::basis(4, 0), Section::basis(4, 1)];
    let prod = direct_product(&a.algebroid, &fixture("heis_j").unwrap().algebroid, "q").unwrap();
    assert!(prod.injection_check(&s, &t).unwrap().passed());
}

#[test]
fn three_sphere_restriction() {
    let pr = s3_restriction().unwrap();
    assert!(pr.algebroid.validate().valid());
    assert!(flatness_check(&pr).unwrap().passed());
    let j = pr.j.clone().unwrap();
    assert!(nijenhuis(pr.algebroid.structure(), &j).unwrap().integrable());
    assert_eq!(pr.commutes_with_j, Some(false));
    assert!(!pr.extension_residual(0, 1).is_zero());
}

#[test]
fn matched_pairs_on_integrable_fixtures() {
    for name in ["flat_r2", "flat_r4", "warped_r4", "conformal_sphere_chart", "s3_projector"] {
        let f = fixture(name).unwrap();
        let rep = matched_pair(f.algebroid.structure(), f.j.as_ref().unwrap()).unwrap();
        assert!(rep.passed(), "{name}");
    }
    let f = fixture("heis_j").unwrap();
    assert!(matched_pair(f.algebroid.structure(), f.j.as_ref().unwrap()).is_err());
}
