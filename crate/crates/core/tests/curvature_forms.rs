use algebroid::chern::{chern_form, chern_report, ChernSource};
use algebroid::connections::{almost_complex_check, metric_compat_check, Metric};
use algebroid::constructions::{fixture, SUITE};
use algebroid::expr::Scalar;
use algebroid::prodgeom::{product_connection, product_geometry, HermitianData, ProductGeometry};

fn geometry(name: &str) -> ProductGeometry {
    let f = fixture(name).unwrap();
    let g = Metric::new(f.metric.unwrap()).unwrap();
    product_geometry(f.algebroid.structure(), &f.j.unwrap(), &g).unwrap()
}

#[test]
fn product_connection_is_hermitian() {
    for name in SUITE {
        let pg = geometry(name);
        let d = &pg.product.connection;
        assert!(pg.product.passed(), "{name}");
        assert!(almost_complex_check(d, &pg.data.j).unwrap().passed(), "{name}");
        assert!(metric_compat_check(d, &pg.data.g).unwrap().passed(), "{name}");
    }
}

#[test]
fn chern_traces_agree_and_are_closed() {
    for name in SUITE {
        let f = fixture(name).unwrap();
        let j = f.j.unwrap();
        let g = Metric::new(f.metric.unwrap()).unwrap();
        let data = HermitianData::new(f.algebroid.structure(), &j, &g).unwrap();
        let pc = product_connection(&data).unwrap();
        let rep = chern_report(&pc.connection, &j, &data.frame, 2).unwrap();
        assert!(rep.block_pattern.passed(), "{name}");
        assert!(rep.restricted_agreement.passed(), "{name}");
        for o in &rep.orders {
            assert!(o.equality.passed(), "{name} order {}", o.order);
            assert!(o.closed.passed(), "{name} order {}", o.order);
            assert!(o.imaginary_part_zero, "{name} order {}", o.order);
        }
        if name.starts_with("flat") {
            assert!(rep.orders.iter().all(|o| o.vanishes), "{name}");
        }
    }
}

#[test]
fn sphere_chart_first_chern_form() {
    let f = fixture("conformal_sphere_chart").unwrap();
    let j = f.j.unwrap();
    let g = Metric::new(f.metric.unwrap()).unwrap();
    let data = HermitianData::new(f.algebroid.structure(), &j, &g).unwrap();
    let pc = product_connection(&data).unwrap();
    let rep = chern_report(&pc.connection, &j, &data.frame, 2).unwrap();
    let first = &rep.orders[0];
    assert!(!first.vanishes);
    assert_eq!(first.factor, Some(Scalar::ratio(1, 2)));
    // Gauss curvature 1 times the area density λ = 4/(1+x²+y²)².
    let lambda = g.get(0, 0).clone();
    assert_eq!(first.trace_iphi.get(&[0, 1]).unwrap(), lambda);
    assert!(rep.orders[1].vanishes);
}

#[test]
fn chern_forms_reject_order_zero() {
    let f = fixture("flat_r2").unwrap();
    let j = f.j.unwrap();
    let g = Metric::new(f.metric.unwrap()).unwrap();
    let data = HermitianData::new(f.algebroid.structure(), &j, &g).unwrap();
    let pc = product_connection(&data).unwrap();
    let blocks = algebroid::chern::block_curvature(&pc.connection, &j, &data.frame).unwrap();
    let phi = algebroid::chern::iphi(&pc.connection, &j, &data.frame).unwrap();
    assert!(chern_form(&blocks, &phi, 0, ChernSource::Iphi).is_err());
    assert!(chern_form(&blocks, &phi, 1, ChernSource::Block).unwrap().form.is_zero());
}

#[test]
fn second_fundamental_form_vanishes_exactly_when_integrable() {
    for name in SUITE {
        let pg = geometry(name);
        assert!(pg.second.passed(), "{name}");
        assert!(pg.mean.h.is_zero(), "{name}");
        assert!(pg.identities.vanishing_equivalence, "{name}");
        assert!(pg.identities.symmetry_equivalence, "{name}");
        assert_eq!(pg.second.is_zero(), pg.identities.integrable, "{name}");
    }
    assert!(!geometry("heis_j").second.is_zero());
    assert!(geometry("warped_r4").second.is_zero());
}

#[test]
fn weingarten_duality_holds_on_kahler_fixtures() {
    for name in ["flat_r2", "flat_r4", "conformal_sphere_chart"] {
        let pg = geometry(name);
        assert!(pg.duality.real_frame.passed(), "{name}");
        assert!(pg.duality.complex_frame.passed(), "{name}");
    }
}

#[test]
fn weingarten_duality_fails_where_j_is_not_parallel() {
    for name in ["heis_j", "warped_r4"] {
        let pg = geometry(name);
        assert!(!pg.duality.real_frame.passed(), "{name}");
    }
}

#[test]
fn heisenberg_identity_constants() {
    let id = geometry("heis_j").identities;
    assert!(id.im_re.passed());
    assert!(id.j_anti_invariance.passed());
    assert!(id.isotropy.passed());
    assert_eq!(id.nijenhuis_formula.observed, Some(Scalar::ratio(-1, 16)));
    assert_eq!(id.dphi_formula.observed, Some(Scalar::ratio(1, 8)));
    assert_eq!(id.nijenhuis_from_alt.observed, Some(Scalar::int(-8)));
    for c in [&id.nijenhuis_formula, &id.dphi_formula, &id.nijenhuis_from_alt] {
        assert!(c.observed_residual.passed());
        assert!(!c.printed_residual.passed());
    }
    assert!(!id.totally_geodesic);
}
