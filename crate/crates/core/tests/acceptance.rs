//! One test per acceptance criterion; each prints a single PASS/FAIL line.

use algebroid::algebroid::{Section, Structure};
use algebroid::check::sampled_check;
use algebroid::chern::chern_report;
use algebroid::cli::document::parse;
use algebroid::cli::run;
use algebroid::connections::{
    almost_complex_check, hermitian_check, kahler_report, levi_civita, levi_civita_complex_frame,
    metric_compat_check, sectional_curvature, torsion_free_check, Metric,
};
use algebroid::constructions::fixtures::s3_restriction;
use algebroid::constructions::{fixture, prolong, Fixture, SUITE};
use algebroid::eforms::{d_e, random_form};
use algebroid::expr::{eval_float, parse_with_coords, sample_points, PolyShape, Scalar};
use algebroid::jstruct::{integrability_report, matched_pair, nijenhuis, ComplexFrame, EndoField};
use algebroid::prodgeom::{product_connection, product_geometry, HermitianData};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use std::time::Instant;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !($cond) {
            return Err(format!($($msg)+));
        }
    };
}

fn verdict(n: usize, title: &str, body: impl FnOnce() -> Outcome) {
    let start = Instant::now();
    let out = body();
    let secs = start.elapsed().as_secs_f64();
    match &out {
        Ok(note) => println!("criterion {n:>2} PASS  {title} ({secs:.1}s) {note}"),
        Err(why) => println!("criterion {n:>2} FAIL  {title} ({secs:.1}s) {why}"),
    }
    assert!(secs < 60.0, "criterion {n} exceeded 60 s");
    if let Err(why) = out {
        panic!("criterion {n}: {why}");
    }
}

fn load(name: &str) -> Fixture {
    fixture(name).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn parts(name: &str) -> (Structure, EndoField, Metric) {
    let f = load(name);
    (
        f.algebroid.structure().clone(),
        f.j.expect("fixture has J"),
        Metric::new(f.metric.expect("fixture has a metric")).expect("nondegenerate"),
    )
}

fn ints(v: &[i64]) -> Section {
    Section::from_ints(v)
}

#[test]
fn criterion_01_structure_equations() {
    verdict(1, "structure-equation gate", || {
        for name in SUITE {
            let rep = load(name).algebroid.validate();
            ensure!(rep.valid(), "{name} fails validation");
        }
        let broken = load("heis_broken").algebroid;
        let rep = broken.validate();
        ensure!(!rep.jacobi.passed(), "heis_broken passes Jacobi");
        ensure!(rep.anchor_morphism.passed() && rep.antisymmetry.passed(), "heis_broken fails the wrong law");
        let e = |a| Section::basis(4, a);
        let jac = broken.jacobiator(&e(0), &e(1), &e(2)).map_err(|e| e.to_string())?;
        ensure!(jac == ints(&[0, 0, -1, 0]), "residual on (1,2,3) is {jac:?}, expected -e3");
        Ok("six fixtures valid; heis_broken residual -e3 on (1,2,3)".into())
    });
}

#[test]
fn criterion_02_d_squared() {
    verdict(2, "d_E squared vanishes", || {
        let mut total = 0;
        for name in SUITE {
            let st = load(name).algebroid.structure().clone();
            let mut rng = ChaCha8Rng::seed_from_u64(42);
            for degree in 0..st.rank() {
                for _ in 0..20 {
                    let w = random_form(&mut rng, st.rank(), degree, st.coords(), PolyShape::default());
                    let dd = d_e(&st, &d_e(&st, &w).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
                    ensure!(dd.is_zero(), "{name}: d² nonzero on a degree-{degree} form");
                    total += 1;
                }
            }
        }
        let st = load("heis_broken").algebroid.structure().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let witness = (0..20).find_map(|_| {
            let w = random_form(&mut rng, 4, 1, st.coords(), PolyShape::default());
            let dd = d_e(&st, &d_e(&st, &w).ok()?).ok()?;
            let hit = dd.components().find(|(_, v)| !v.is_zero()).map(|(i, v)| (i.clone(), v.clone()));
            hit
        });
        let (idx, value) = witness.ok_or("no d² witness on heis_broken")?;
        Ok(format!("{total} forms; heis_broken witness at {idx:?} = {value}"))
    });
}

/// Nijenhuis tensor of a constant-coefficient structure with zero anchor,
/// by direct integer arithmetic.
type Vec4 = [i64; 4];

fn brute_force_nijenhuis(j: &[Vec4; 4], bracket: &dyn Fn(&Vec4, &Vec4) -> Vec4, u: Vec4, v: Vec4) -> Vec4 {
    let apply = |x: &Vec4| -> Vec4 {
        let mut out = [0; 4];
        for (b, row) in j.iter().enumerate() {
            out[b] = (0..4).map(|a| row[a] * x[a]).sum();
        }
        out
    };
    let (ju, jv) = (apply(&u), apply(&v));
    let t1 = bracket(&ju, &jv);
    let t2 = apply(&bracket(&u, &jv));
    let t3 = apply(&bracket(&ju, &v));
    let t4 = bracket(&u, &v);
    let mut n = [0; 4];
    for c in 0..4 {
        n[c] = t1[c] - t2[c] - t3[c] - t4[c];
    }
    n
}

#[test]
fn criterion_03_nijenhuis_double_computation() {
    verdict(3, "Nijenhuis double computation", || {
        for name in SUITE {
            let f = load(name);
            let rep = nijenhuis(f.algebroid.structure(), f.j.as_ref().unwrap()).map_err(|e| e.to_string())?;
            ensure!(rep.agreement.passed(), "{name}: frame and coefficient routes disagree");
        }
        // heis_j: [e1,e2] = e3, J frozen from the catalog.
        let j = [[1, 0, -1, 0], [0, -1, 0, -2], [2, 0, -1, 0], [0, 1, 0, 1]];
        let heis = |u: &Vec4, v: &Vec4| [0, 0, u[0] * v[1] - u[1] * v[0], 0];
        let oracle = brute_force_nijenhuis(&j, &heis, [1, 0, 0, 0], [0, 1, 0, 0]);
        ensure!(oracle == [0, 0, -2, 0], "oracle gives {oracle:?}");
        let (st, jf, _) = parts("heis_j");
        for (b, row) in j.iter().enumerate() {
            for (a, v) in row.iter().enumerate() {
                ensure!(jf.entry(b, a) == &Scalar::int(*v), "catalog J differs from the frozen oracle");
            }
        }
        let rep = nijenhuis(&st, &jf).map_err(|e| e.to_string())?;
        ensure!(rep.tensor.on_frame(0, 1) == ints(&oracle), "N(e1,e2) = {:?}", rep.tensor.on_frame(0, 1));
        ensure!(rep.coefficients.on_frame(0, 1) == ints(&oracle), "coefficient route differs");
        Ok("routes agree on six fixtures; heis_j N(e1,e2) = -2 e3".into())
    });
}

#[test]
fn criterion_04_integrability_statements() {
    verdict(4, "integrability statements agree", || {
        for name in SUITE {
            let f = load(name);
            let rep = integrability_report(f.algebroid.structure(), f.j.as_ref().unwrap()).map_err(|e| e.to_string())?;
            ensure!(rep.consistent, "{name}: statuses disagree");
            let expected = name != "heis_j";
            ensure!(rep.integrable == expected, "{name}: integrable = {}", rep.integrable);
            ensure!(rep.items.iter().all(|i| i.holds == expected), "{name}: some statement differs");
        }
        Ok("heis_j fails all five; the rest pass all five".into())
    });
}

#[test]
fn criterion_05_levi_civita() {
    verdict(5, "Levi-Civita certification", || {
        for name in SUITE {
            let (st, j, g) = parts(name);
            let lc = levi_civita(&st, &g).map_err(|e| e.to_string())?;
            ensure!(torsion_free_check(&lc).passed(), "{name}: torsion");
            ensure!(metric_compat_check(&lc, &g).map_err(|e| e.to_string())?.passed(), "{name}: Dg");
            let frame = ComplexFrame::adapted(&st, &j).map_err(|e| e.to_string())?;
            let clc = levi_civita_complex_frame(&st, &j, &g, &frame).map_err(|e| e.to_string())?;
            ensure!(clc.transform_agreement.passed(), "{name}: complex frame disagrees with transform");
            ensure!(
                clc.formula_families.iter().all(|f| f.passed()),
                "{name}: complex coefficient formulas disagree"
            );
        }
        let (st, _, g) = parts("warped_r4");
        let lc = levi_civita(&st, &g).map_err(|e| e.to_string())?;
        let oracle = parse_with_coords("x3/(1 + x3^2)", st.coords()).unwrap();
        ensure!(lc.gamma(0, 2, 0) == &oracle, "Γ^1_31 = {}", lc.gamma(0, 2, 0));
        Ok("Γ^1_31 = x3/(1+x3²) on warped_r4".into())
    });
}

#[test]
fn criterion_06_kahler_trichotomy() {
    verdict(6, "Kähler trichotomy", || {
        let report = |name: &str| {
            let (st, j, g) = parts(name);
            kahler_report(&st, &j, &g).map_err(|e| e.to_string())
        };
        ensure!(report("flat_r2")?.kahler, "flat_r2 is not Kähler");
        let w = report("warped_r4")?;
        ensure!(w.integrable && !w.closed && !w.kahler, "warped_r4 is not Hermitian non-Kähler");
        let (st, _, _) = parts("warped_r4");
        let fprime = parse_with_coords("2*x3", st.coords()).unwrap();
        let mut expected = algebroid::eforms::EForm::zero(4, 3);
        // e3∧e1∧e2 = e1∧e2∧e3.
        expected.set(&[0, 1, 2], fprime).unwrap();
        ensure!(w.d_phi == expected, "dΦ on warped_r4 is {:?}", w.d_phi);
        ensure!(!report("heis_j")?.integrable, "heis_j reported integrable");
        for name in SUITE {
            ensure!(report(name)?.equivalence_holds, "{name}: DJ = 0 ⇔ (N = 0 ∧ dΦ = 0) fails");
        }
        Ok("flat_r2 Kähler; warped_r4 dΦ = f' e3∧e1∧e2; heis_j non-integrable".into())
    });
}

/// Gauss curvature of `λ(dx² + dy²)`, `λ = 4/(1+x²+y²)²`, from
/// `K = −Δ(log λ)/(2λ)` with `λ` differentiated by hand.
fn gauss_curvature(x: f64, y: f64) -> f64 {
    let s = 1.0 + x * x + y * y;
    let lam = 4.0 / (s * s);
    let lx = -16.0 * x / s.powi(3);
    let ly = -16.0 * y / s.powi(3);
    let lxx = -16.0 / s.powi(3) + 96.0 * x * x / s.powi(4);
    let lyy = -16.0 / s.powi(3) + 96.0 * y * y / s.powi(4);
    let lap_log = (lxx + lyy) / lam - (lx * lx + ly * ly) / (lam * lam);
    -lap_log / (2.0 * lam)
}

#[test]
fn criterion_07_sectional_curvature() {
    verdict(7, "sphere chart sectional curvature", || {
        let (st, _, g) = parts("conformal_sphere_chart");
        let lc = levi_civita(&st, &g).map_err(|e| e.to_string())?;
        let k = sectional_curvature(&lc.curvature(), &g, &Section::basis(2, 0), &Section::basis(2, 1))
            .map_err(|e| e.to_string())?;
        let mut worst: f64 = 0.0;
        for pt in sample_points(st.coords(), 10, 42) {
            let f = pt.to_float();
            let (x, y) = (f.0["x"].re, f.0["y"].re);
            let v = eval_float(&k, &f).map_err(|e| e.to_string())?;
            worst = worst.max((v.re - gauss_curvature(x, y)).abs()).max(v.im.abs());
            worst = worst.max((v.re.abs() - 1.0).abs());
        }
        ensure!(worst.is_finite() && worst < 1e-9, "max deviation {worst:e}");
        Ok(format!("K = {k} (sign +1) at 10 points, max deviation {worst:.1e}"))
    });
}

#[test]
fn criterion_08_chern_forms() {
    verdict(8, "Chern trace equality and closedness", || {
        for name in SUITE {
            let (st, j, g) = parts(name);
            let data = HermitianData::new(&st, &j, &g).map_err(|e| e.to_string())?;
            let pc = product_connection(&data).map_err(|e| e.to_string())?;
            ensure!(almost_complex_check(&pc.connection, &j).unwrap().passed(), "{name}: connection moves J");
            ensure!(metric_compat_check(&pc.connection, &g).unwrap().passed(), "{name}: connection not metric");
            let rep = chern_report(&pc.connection, &j, &data.frame, 2).map_err(|e| e.to_string())?;
            for o in &rep.orders {
                ensure!(o.equality.passed(), "{name}: trace equality fails at k = {}", o.order);
                ensure!(o.closed.passed(), "{name}: form not closed at k = {}", o.order);
                if name.starts_with("flat") {
                    ensure!(o.vanishes, "{name}: nonzero form at k = {}", o.order);
                }
            }
        }
        Ok("k = 1, 2 on six fixtures with the Hermitian product connection".into())
    });
}

#[test]
fn criterion_09_product_geometry() {
    verdict(9, "product-geometry suite", || {
        let mut failures = Vec::new();
        let mut n_from_b = None;
        for name in SUITE {
            let (st, j, g) = parts(name);
            let pg = product_geometry(&st, &j, &g).map_err(|e| e.to_string())?;
            if !pg.product.passed() {
                failures.push(format!("{name}: parallelism"));
            }
            if !(pg.duality.real_frame.passed() && pg.duality.complex_frame.passed()) {
                failures.push(format!("{name}: Weingarten duality"));
            }
            if !pg.mean.h.is_zero() {
                failures.push(format!("{name}: H nonzero"));
            }
            if pg.second.is_zero() != pg.identities.integrable {
                failures.push(format!("{name}: B = 0 ⇔ N = 0 broken"));
            }
            match name {
                "heis_j" if pg.second.is_zero() => failures.push("heis_j: B vanishes".into()),
                "warped_r4" if !pg.second.is_zero() => failures.push("warped_r4: B nonzero".into()),
                _ => {}
            }
            if name == "heis_j" {
                let c = &pg.identities.nijenhuis_from_alt;
                if c.observed_residual.passed() && c.observed.is_some() {
                    n_from_b = c.observed.clone();
                } else {
                    failures.push("heis_j: N not reconstructed from B".into());
                }
            }
        }
        let constant = n_from_b.map(|c| c.to_string()).unwrap_or_else(|| "-".into());
        ensure!(failures.is_empty(), "{}; N-from-B constant {constant}", failures.join("; "));
        Ok(format!("N-from-B constant {constant}"))
    });
}

#[test]
fn criterion_10_matched_pair() {
    verdict(10, "matched pair on integrable fixtures", || {
        for name in SUITE.iter().filter(|n| **n != "heis_j") {
            let f = load(name);
            let rep = matched_pair(f.algebroid.structure(), f.j.as_ref().unwrap()).map_err(|e| e.to_string())?;
            ensure!(rep.passed(), "{name}: matched-pair residual nonzero");
        }
        Ok("five integrable fixtures".into())
    });
}

#[test]
fn criterion_11_constructions() {
    verdict(11, "constructions", || {
        for name in SUITE {
            let f = load(name);
            let pro = prolong(&f.algebroid).map_err(|e| e.to_string())?;
            ensure!(pro.algebroid.validate().valid(), "prolong({name}) invalid");
            let r = f.algebroid.rank();
            let x0 = Scalar::coord(&f.algebroid.chart().coords()[0]);
            let sections: Vec<Section> = (0..r)
                .map(|a| Section::basis(r, a))
                .chain([Section((0..r).map(|a| x0.pow(a as i64 + 1).unwrap()).collect())])
                .collect();
            let laws = pro.lift_laws(&sections, std::slice::from_ref(&x0)).map_err(|e| e.to_string())?;
            ensure!(laws.passed(), "prolong({name}): lift law residual {:?}", laws.first_failure());
        }
        let base = load("flat_r2");
        let lifted = load("prolong(flat_r2)");
        let (jc, gc) = (lifted.j.clone().unwrap(), Metric::new(lifted.metric.clone().unwrap()).unwrap());
        ensure!(hermitian_check(&gc, &jc).unwrap().passed(), "complete lift not Hermitian");
        let kr = kahler_report(lifted.algebroid.structure(), &jc, &gc).map_err(|e| e.to_string())?;
        ensure!(kr.kahler, "complete lift of flat_r2 not Kähler");
        let pro = prolong(&base.algebroid).unwrap();
        let lc = levi_civita(base.algebroid.structure(), &Metric::new(base.metric.clone().unwrap()).unwrap()).unwrap();
        ensure!(
            pro.complete_connection(&lc) == levi_civita(lifted.algebroid.structure(), &gc).unwrap(),
            "D^c is not the Levi-Civita connection of g^c"
        );

        let pr = s3_restriction().map_err(|e| e.to_string())?;
        let coords = pr.algebroid.chart().coords().to_vec();
        let mut residuals = Vec::new();
        for a in 0..4 {
            for b in a + 1..4 {
                let res = pr
                    .flatness_residual(&Section::basis(4, a), &Section::basis(4, b))
                    .map_err(|e| e.to_string())?;
                residuals.extend(res.0);
            }
        }
        let flat = sampled_check("s3_flatness", &residuals, &coords, 10, 42, 1e-9).map_err(|e| e.to_string())?;
        ensure!(flat.points == 10 && flat.passed(), "s3 flatness max {:e} over {} points", flat.max_abs, flat.points);
        let j = pr.j.clone().unwrap();
        ensure!(nijenhuis(pr.algebroid.structure(), &j).unwrap().integrable(), "restricted J not integrable");
        Ok(format!("s3 flatness max {:.1e} at 10 points", flat.max_abs))
    });
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = run(std::iter::once("algebroid").chain(args.iter().copied()));
    (out.code, out.stdout)
}

#[test]
fn criterion_12_cli() {
    verdict(12, "CLI end to end", || {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/report-schema.json");
        let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let validator = jsonschema::validator_for(&schema).map_err(|e| e.to_string())?;

        let dir = std::env::temp_dir().join(format!("algebroid-acceptance-{}", std::process::id()));
        std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
        let s3 = s3_restriction().unwrap();
        let mut projector = String::from("[projector]\n");
        for (k, row) in s3.projector.iter().enumerate() {
            let row: Vec<String> = row.iter().map(Scalar::to_string).collect();
            projector.push_str(&format!("{} = {}\n", k + 1, row.join(", ")));
        }
        let proj_path = dir.join("projector.alg");
        std::fs::write(&proj_path, projector).map_err(|e| e.to_string())?;
        // An ambient document whose anchor rows equal the restricted anchor
        // reproduces the restriction, since Π fixes its own image.
        let ambient_path = dir.join("ambient.alg");
        let (_, emitted) = cli(&["--format", "text", "emit", "s3_projector"]);
        std::fs::write(&ambient_path, emitted).map_err(|e| e.to_string())?;
        let (ambient, proj) = (ambient_path.to_str().unwrap(), proj_path.to_str().unwrap());

        let runs: Vec<Vec<&str>> = vec![
            vec!["validate", "heis_j"],
            vec!["nijenhuis", "flat_r2"],
            vec!["nn-report", "heis_j"],
            vec!["matched-pair", "flat_r4"],
            vec!["levi-civita", "warped_r4", "--complex-frame"],
            vec!["curvature", "conformal_sphere_chart"],
            vec!["sectional", "conformal_sphere_chart", "--direction", "1,0"],
            vec!["kahler-report", "warped_r4"],
            vec!["chern", "conformal_sphere_chart", "--order", "1", "--source", "both"],
            vec!["second-fundamental", "heis_j"],
            vec!["identity-suite", "flat_r2"],
            vec!["prolong", "flat_r2"],
            vec!["product", "flat_r2", "heis_j"],
            vec!["restrict", ambient, "--projector", proj],
            vec!["fixtures", "--list"],
            vec!["emit", "heis_j"],
        ];
        for args in &runs {
            let (code, stdout) = cli(args);
            ensure!(code == 0, "{args:?} exited {code}");
            let json: Value = serde_json::from_str(&stdout).map_err(|e| format!("{args:?}: {e}"))?;
            ensure!(validator.is_valid(&json), "{args:?}: report violates the schema");
        }
        let (code, _) = cli(&["validate", "heis_broken"]);
        ensure!(code == 1, "failed check exited {code}");
        let (code, _) = cli(&["validate", "no_such_fixture"]);
        ensure!(code == 2, "invalid input exited {code}");
        let (code, _) = cli(&["matched-pair", "heis_j"]);
        ensure!(code == 3, "unmet precondition exited {code}");

        for name in SUITE {
            let (_, text) = cli(&["--format", "text", "emit", name]);
            let doc = parse(&text).map_err(|e| format!("{name}: {e}"))?;
            let f = load(name);
            ensure!(doc.algebroid.structure() == f.algebroid.structure(), "{name}: round trip changed the structure");
            ensure!(doc.metric == f.metric, "{name}: round trip changed the metric");
            ensure!(doc.j.as_ref() == f.j.as_ref().map(|j| j.matrix()), "{name}: round trip changed J");
        }
        for args in [["--seed", "5", "identity-suite", "heis_j"], ["--seed", "5", "validate", "heis_broken"]] {
            ensure!(cli(&args) == cli(&args), "{args:?} not deterministic");
        }
        Ok(format!("{} subcommands exit 0 with schema-valid JSON", runs.len()))
    });
}
