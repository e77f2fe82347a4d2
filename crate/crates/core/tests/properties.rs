use algebroid::algebroid::{Algebroid, Chart, Section, Structure};
use algebroid::cli::document::{parse, Document};
use algebroid::constructions::fixture;
use algebroid::eforms::{d_e, random_form, EForm};
use algebroid::expr::{parse_with_coords, random_poly, PolyShape, Scalar};
use algebroid::jstruct::nijenhuis_of;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const XY: [&str; 2] = ["x", "y"];

fn names(c: &[&str]) -> Vec<String> {
    c.iter().map(|s| s.to_string()).collect()
}

fn poly(rng: &mut ChaCha8Rng, coords: &[String]) -> Scalar {
    random_poly(rng, coords, PolyShape::default())
}

/// A random rational function `p/q` with `q` nonzero.
fn rational(rng: &mut ChaCha8Rng, coords: &[String]) -> Scalar {
    let num = poly(rng, coords);
    loop {
        let den = poly(rng, coords);
        if let Ok(v) = num.checked_div(&den) {
            return v;
        }
    }
}

fn section(rng: &mut ChaCha8Rng, st: &Structure) -> Section {
    Section((0..st.rank()).map(|_| poly(rng, st.coords())).collect())
}

fn structure(name: &str) -> Structure {
    fixture(name).unwrap().algebroid.structure().clone()
}

fn sign(p: usize) -> Scalar {
    Scalar::int(if p.is_multiple_of(2) { 1 } else { -1 })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn print_then_parse_is_identity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = names(&XY);
        let s = rational(&mut rng, &c).mul(&Scalar::i().add(&Scalar::ratio(1, 3)));
        let back = parse_with_coords(&s.to_string(), &c).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn field_laws(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = names(&XY);
        let (a, b, d) = (rational(&mut rng, &c), rational(&mut rng, &c), rational(&mut rng, &c));
        prop_assert_eq!(a.add(&b).mul(&d), a.mul(&d).add(&b.mul(&d)));
        prop_assert_eq!(a.sub(&a), Scalar::zero());
        if !b.is_zero() {
            prop_assert_eq!(a.checked_div(&b).unwrap().mul(&b), a);
        }
    }

    #[test]
    fn derivative_is_a_derivation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = names(&XY);
        let (a, b) = (rational(&mut rng, &c), rational(&mut rng, &c));
        let lhs = a.mul(&b).diff("x");
        let rhs = a.diff("x").mul(&b).add(&a.mul(&b.diff("x")));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(a.diff("x").diff("y"), a.diff("y").diff("x"));
    }

    #[test]
    fn conjugation_and_parts(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = names(&XY);
        let s = rational(&mut rng, &c).add(&rational(&mut rng, &c).mul(&Scalar::i()));
        prop_assert_eq!(s.conj().conj(), s.clone());
        prop_assert_eq!(s.re().add(&s.im().mul(&Scalar::i())), s.clone());
        prop_assert!(s.mul(&s.conj()).im().is_zero());
    }

    #[test]
    fn exterior_derivative_squares_to_zero(seed in any::<u64>(), which in 0usize..4, degree in 0usize..3) {
        let name = ["warped_r4", "conformal_sphere_chart", "heis_j", "flat_r4"][which];
        let st = structure(name);
        let degree = degree.min(st.rank() - 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_form(&mut rng, st.rank(), degree, st.coords(), PolyShape::default());
        let dd = d_e(&st, &d_e(&st, &w).unwrap()).unwrap();
        prop_assert!(dd.is_zero());
    }

    #[test]
    fn exterior_derivative_is_graded_leibniz(seed in any::<u64>(), p in 0usize..2, q in 0usize..2) {
        let st = structure("warped_r4");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = PolyShape { terms: 2, ..PolyShape::default() };
        let a = random_form(&mut rng, 4, p, st.coords(), shape);
        let b = random_form(&mut rng, 4, q, st.coords(), shape);
        let lhs = d_e(&st, &a.wedge(&b).unwrap()).unwrap();
        let rhs = d_e(&st, &a)
            .unwrap()
            .wedge(&b)
            .unwrap()
            .add(&a.wedge(&d_e(&st, &b).unwrap()).unwrap().scale(&sign(p)))
            .unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().is_zero());
    }

    #[test]
    fn bracket_is_antisymmetric_leibniz_and_jacobi(seed in any::<u64>()) {
        let st = structure("conformal_sphere_chart");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (s, t, u) = (section(&mut rng, &st), section(&mut rng, &st), section(&mut rng, &st));
        let f = poly(&mut rng, st.coords());
        let st_ = st.bracket(&s, &t).unwrap();
        prop_assert_eq!(st.bracket(&t, &s).unwrap(), st_.neg());
        let lhs = st.bracket(&s, &t.scale(&f)).unwrap();
        let rhs = st_.scale(&f).add(&t.scale(&st.derive_along(&s, &f)));
        prop_assert_eq!(lhs, rhs);
        prop_assert!(st.jacobiator(&s, &t, &u).unwrap().is_zero());
    }

    #[test]
    fn nijenhuis_is_tensorial(seed in any::<u64>()) {
        let f = fixture("heis_j").unwrap();
        let (st, j) = (f.algebroid.structure().clone(), f.j.unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = names(&["t"]);
        let s1 = Section((0..4).map(|_| poly(&mut rng, &c)).collect());
        let s2 = Section((0..4).map(|_| poly(&mut rng, &c)).collect());
        let g = poly(&mut rng, &c);
        let n = nijenhuis_of(&st, &j, &s1, &s2).unwrap();
        prop_assert_eq!(nijenhuis_of(&st, &j, &s1.scale(&g), &s2).unwrap(), n.scale(&g));
        prop_assert_eq!(nijenhuis_of(&st, &j, &s2, &s1).unwrap(), n.neg());
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>(), rank in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = names(&XY);
        let chart = Chart::new("random", &c).unwrap();
        let mut b = Algebroid::builder(chart, rank);
        for a in 0..rank {
            b = b.anchor_row(a, vec![rational(&mut rng, &c), poly(&mut rng, &c)]);
            for e in a + 1..rank {
                b = b.bracket(a, e, (a + e) % rank, poly(&mut rng, &c));
            }
        }
        let metric: Vec<Vec<Scalar>> = (0..rank)
            .map(|a| (0..rank).map(|e| if a == e { rational(&mut rng, &c) } else { Scalar::zero() }).collect())
            .collect();
        let doc = Document {
            name: "random".into(),
            algebroid: b.build().unwrap(),
            j: None,
            metric: Some(metric),
            projector: None,
        };
        let back = parse(&doc.emit()).unwrap();
        prop_assert_eq!(back.algebroid.structure(), doc.algebroid.structure());
        prop_assert_eq!(&back.metric, &doc.metric);
        prop_assert_eq!(back.emit(), doc.emit());
    }
}

#[test]
fn zero_form_derivative_is_anchor_action() {
    let st = structure("warped_r4");
    let f = parse_with_coords("x1*x3^2 + x2", st.coords()).unwrap();
    let df = d_e(&st, &EForm::function(4, f.clone())).unwrap();
    for a in 0..4 {
        assert_eq!(df.get(&[a]).unwrap(), st.derive(a, &f));
    }
}
