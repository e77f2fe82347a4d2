//! The metric product connection of an almost Hermitian algebroid, the
//! second fundamental form `B⁰¹` of `E^{0,1}`, Weingarten operators, mean
//! curvature, and the identities relating `B⁰¹` to `N_J` and `DΦ`.

use crate::algebroid::{Section, Structure};
use crate::check::Check;
use crate::connections::{hermitian_check, levi_civita, Connection, ConnectionError, Metric, Tensor3};
use crate::eforms::EForm;
use crate::expr::Scalar;
use crate::jstruct::{nijenhuis, ComplexFrame, EndoField, JError, Projectors};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProdError {
    #[error("metric is not Hermitian for J")]
    NotHermitian,
    #[error(transparent)]
    Connection(#[from] ConnectionError),
    #[error(transparent)]
    J(#[from] JError),
}

/// Shared data: structure, `J`, `g`, its Levi-Civita connection `D`, a
/// complex frame and the type projectors.
#[derive(Clone, Debug)]
pub struct HermitianData {
    pub structure: Structure,
    pub j: EndoField,
    pub g: Metric,
    pub lc: Connection,
    pub frame: ComplexFrame,
    pub projectors: Projectors,
}

impl HermitianData {
    pub fn new(st: &Structure, j: &EndoField, g: &Metric) -> Result<HermitianData, ProdError> {
        j.require_almost_complex()?;
        if !hermitian_check(g, j)?.passed() {
            return Err(ProdError::NotHermitian);
        }
        Ok(HermitianData {
            structure: st.clone(),
            j: j.clone(),
            g: g.clone(),
            lc: levi_civita(st, g)?,
            frame: ComplexFrame::adapted(st, j)?,
            projectors: Projectors::new(j),
        })
    }

    fn rank(&self) -> usize {
        self.structure.rank()
    }

    fn basis(&self, a: usize) -> Section {
        Section::basis(self.rank(), a)
    }

    fn d(&self, s1: &Section, s2: &Section) -> Section {
        self.lc.cov_deriv(s1, s2).expect("rank checked")
    }

    /// `(D_{s1} J) s2`.
    pub fn dj(&self, s1: &Section, s2: &Section) -> Section {
        self.d(s1, &self.j.apply(s2)).sub(&self.j.apply(&self.d(s1, s2)))
    }

    fn p10(&self, s: &Section) -> Section {
        self.projectors.p10.apply(s)
    }

    fn p01(&self, s: &Section) -> Section {
        self.projectors.p01.apply(s)
    }

    /// `h(s1, s2) = g(s1, conj s2)`.
    pub fn h(&self, s1: &Section, s2: &Section) -> Scalar {
        self.g.pair(s1, &s2.conj())
    }

    /// Coordinates of a section in the complex frame.
    fn complex_coords(&self, s: &Section) -> Vec<Scalar> {
        self.frame.to_complex(s).0
    }
}

fn record_section(check: &mut Check, at: &[usize], s: &Section) {
    for (c, v) in s.0.iter().enumerate() {
        let mut idx = at.to_vec();
        idx.push(c);
        check.record(&idx, v.clone());
    }
}

fn half() -> Scalar {
    Scalar::ratio(1, 2)
}

/// `D̃ = D + ½(DJ)J` with its structural certificates.
#[derive(Clone, Debug)]
pub struct ProductConnection {
    pub connection: Connection,
    /// `p⁰¹ D p⁰¹ + p¹⁰ D p¹⁰` against `D + ½(DJ)J`.
    pub projection_form: Check,
    pub parallel_p10: Check,
    pub parallel_p01: Check,
    pub parallel_h: Check,
    /// Torsion of `D̃` against the projector expression.
    pub torsion_projector: Check,
    /// Torsion of `D̃` against `½((D_{s1}J)Js2 − (D_{s2}J)Js1)`.
    pub torsion_dj: Check,
    /// The local torsion displays in the complex frame.
    pub torsion_local: Check,
}

impl ProductConnection {
    pub fn passed(&self) -> bool {
        [
            &self.projection_form,
            &self.parallel_p10,
            &self.parallel_p01,
            &self.parallel_h,
            &self.torsion_projector,
            &self.torsion_dj,
            &self.torsion_local,
        ]
        .iter()
        .all(|c| c.passed())
    }
}

pub fn product_connection(data: &HermitianData) -> Result<ProductConnection, ProdError> {
    let r = data.rank();
    let st = &data.structure;
    let corr: Vec<Vec<Section>> = (0..r)
        .map(|a| {
            (0..r)
                .map(|b| data.dj(&data.basis(a), &data.j.image(b)).scale(&half()))
                .collect()
        })
        .collect();
    let conn = Connection::from_fn(st.clone(), |c, a, b| data.lc.gamma(c, a, b).add(&corr[a][b].0[c]));
    let dt = |s1: &Section, s2: &Section| conn.cov_deriv(s1, s2).expect("rank checked");

    let mut projection_form = Check::new("product_connection_projection_form");
    let mut parallel_p10 = Check::new("product_parallel_p10");
    let mut parallel_p01 = Check::new("product_parallel_p01");
    for a in 0..r {
        let ea = data.basis(a);
        for b in 0..r {
            let eb = data.basis(b);
            let proj = data
                .p01(&data.d(&ea, &data.p01(&eb)))
                .add(&data.p10(&data.d(&ea, &data.p10(&eb))));
            record_section(&mut projection_form, &[a, b], &proj.sub(&conn.on_frame(a, b)));
            let on = conn.on_frame(a, b);
            record_section(&mut parallel_p10, &[a, b], &dt(&ea, &data.p10(&eb)).sub(&data.p10(&on)));
            record_section(&mut parallel_p01, &[a, b], &dt(&ea, &data.p01(&eb)).sub(&data.p01(&on)));
        }
    }
    let size = data.frame.size();
    let fs: Vec<Section> = (0..size).map(|k| data.frame.element(k)).collect();
    let mut parallel_h = Check::new("product_parallel_h");
    for a in 0..r {
        let ea = data.basis(a);
        for (x, fx) in fs.iter().enumerate() {
            for (y, fy) in fs.iter().enumerate() {
                let v = st
                    .derive(a, &data.h(fx, fy))
                    .sub(&data.h(&dt(&ea, fx), fy))
                    .sub(&data.h(fx, &dt(&ea, fy)));
                parallel_h.record(&[a, x, y], v);
            }
        }
    }

    let torsion = conn.torsion();
    let mut torsion_projector = Check::new("product_torsion_projector");
    let mut torsion_dj = Check::new("product_torsion_dj");
    for a in 0..r {
        let ea = data.basis(a);
        for b in 0..r {
            let eb = data.basis(b);
            let t = torsion.apply(&ea, &eb);
            let p = data
                .p01(&data.d(&eb, &data.p10(&ea)).sub(&data.d(&ea, &data.p10(&eb))))
                .add(&data.p10(&data.d(&eb, &data.p01(&ea)).sub(&data.d(&ea, &data.p01(&eb)))));
            record_section(&mut torsion_projector, &[a, b], &t.sub(&p));
            let q = data
                .dj(&ea, &data.j.apply(&eb))
                .sub(&data.dj(&eb, &data.j.apply(&ea)))
                .scale(&half());
            record_section(&mut torsion_dj, &[a, b], &t.sub(&q));
        }
    }

    // T(f_a, f_b) = C^{d̄}_{ba} f̄_d and
    // T(f_a, f̄_b) = (C^d_{b̄a} − Γ^d_{b̄a}) f_d + (Γ^{d̄}_{ab̄} − C^{d̄}_{ab̄}) f̄_d.
    let m = data.frame.m();
    let cst = data.frame.structure();
    let lcc = data.lc.in_complex_frame(&data.frame);
    let mut torsion_local = Check::new("product_torsion_local");
    for a in 0..m {
        for b in 0..m {
            let got = data.complex_coords(&torsion.apply(&fs[a], &fs[b]));
            for d in 0..m {
                torsion_local.record(&[0, a, b, d], got[d].clone());
                torsion_local.record(&[0, a, b, m + d], got[m + d].sub(cst.c(m + d, b, a)));
            }
            let (bb, dbar) = (m + b, |d: usize| m + d);
            let got = data.complex_coords(&torsion.apply(&fs[a], &fs[bb]));
            for d in 0..m {
                let want_u = cst.c(d, bb, a).sub(lcc.gamma(d, bb, a));
                let want_b = lcc.gamma(dbar(d), a, bb).sub(cst.c(dbar(d), a, bb));
                torsion_local.record(&[1, a, b, d], got[d].sub(&want_u));
                torsion_local.record(&[1, a, b, m + d], got[m + d].sub(&want_b));
            }
        }
    }

    Ok(ProductConnection {
        connection: conn,
        projection_form,
        parallel_p10,
        parallel_p01,
        parallel_h,
        torsion_projector,
        torsion_dj,
        torsion_local,
    })
}

/// `B⁰¹`, the Weingarten operators `W⁰¹`, and their certificates.
#[derive(Clone, Debug)]
pub struct SecondFundamental {
    /// `B(e_a, e_b) = B^c_ab e_c`, complex coefficients.
    pub b: Tensor3,
    /// `W_{e_s} e_x = W^c_{sx} e_c`.
    pub w: Tensor3,
    /// `p¹⁰(D_{p⁰¹s1} p⁰¹s2)` against `−½(D_{p⁰¹s1}J)J(p⁰¹s2)`.
    pub two_forms: Check,
    pub gauss: Check,
    pub weingarten_equation: Check,
    /// `½(D_{p⁰¹s1}J)J(p¹⁰s2)` against `−p⁰¹D_{p⁰¹s1}p¹⁰s2`.
    pub weingarten_forms: Check,
    /// `B(f̄_a, f̄_b) = Γ^d_{āb̄} f_d`, zero on other type pairs.
    pub local_b: Check,
    /// `W_{f_b} f̄_a = −Γ^{d̄}_{āb} f̄_d`, zero on other type pairs.
    pub local_w: Check,
}

impl SecondFundamental {
    pub fn is_zero(&self) -> bool {
        self.b.is_zero()
    }

    pub fn passed(&self) -> bool {
        [
            &self.two_forms,
            &self.gauss,
            &self.weingarten_equation,
            &self.weingarten_forms,
            &self.local_b,
            &self.local_w,
        ]
        .iter()
        .all(|c| c.passed())
    }
}

pub fn second_fundamental(data: &HermitianData, product: &ProductConnection) -> SecondFundamental {
    let r = data.rank();
    let dt = |s1: &Section, s2: &Section| product.connection.cov_deriv(s1, s2).expect("rank checked");
    let bsec = |s1: &Section, s2: &Section| data.p10(&data.d(&data.p01(s1), &data.p01(s2)));
    let wsec = |s: &Section, x: &Section| data.p01(&data.d(&data.p01(x), &data.p10(s))).neg();
    let bimg: Vec<Vec<Section>> = (0..r)
        .map(|a| (0..r).map(|b| bsec(&data.basis(a), &data.basis(b))).collect())
        .collect();
    let wimg: Vec<Vec<Section>> = (0..r)
        .map(|s| (0..r).map(|x| wsec(&data.basis(s), &data.basis(x))).collect())
        .collect();
    let b = Tensor3::from_fn(r, |c, a, bb| bimg[a][bb].0[c].clone());
    let w = Tensor3::from_fn(r, |c, s, x| wimg[s][x].0[c].clone());

    let mut two_forms = Check::new("second_fundamental_two_forms");
    let mut gauss = Check::new("gauss_equation");
    let mut weingarten_equation = Check::new("weingarten_equation");
    let mut weingarten_forms = Check::new("weingarten_two_forms");
    for a in 0..r {
        let x = data.p01(&data.basis(a));
        for c in 0..r {
            let ec = data.basis(c);
            let y = data.p01(&ec);
            let z = data.p10(&ec);
            let dj_y = data.dj(&x, &data.j.apply(&y)).scale(&half());
            let dj_z = data.dj(&x, &data.j.apply(&z)).scale(&half());
            record_section(&mut two_forms, &[a, c], &bimg[a][c].add(&dj_y));
            record_section(&mut gauss, &[a, c], &data.d(&x, &y).sub(&dt(&x, &y)).add(&dj_y));
            record_section(&mut weingarten_equation, &[a, c], &data.d(&x, &z).sub(&dt(&x, &z)).add(&dj_z));
            record_section(&mut weingarten_forms, &[c, a], &wimg[c][a].sub(&dj_z));
        }
    }

    let m = data.frame.m();
    let size = data.frame.size();
    let fs: Vec<Section> = (0..size).map(|k| data.frame.element(k)).collect();
    let lcc = data.lc.in_complex_frame(&data.frame);
    let mut local_b = Check::new("second_fundamental_local");
    let mut local_w = Check::new("weingarten_local");
    for x in 0..size {
        for y in 0..size {
            let got = data.complex_coords(&b.apply(&fs[x], &fs[y]));
            let both_barred = x >= m && y >= m;
            for d in 0..size {
                let want = if both_barred && d < m {
                    lcc.gamma(d, x, y).clone()
                } else {
                    Scalar::zero()
                };
                local_b.record(&[x, y, d], got[d].sub(&want));
            }
            // W_{f_y} f_x
            let got = data.complex_coords(&w.apply(&fs[y], &fs[x]));
            let shape = y < m && x >= m;
            for d in 0..size {
                let want = if shape && d >= m {
                    lcc.gamma(d, x, y).neg()
                } else {
                    Scalar::zero()
                };
                local_w.record(&[y, x, d], got[d].sub(&want));
            }
        }
    }

    SecondFundamental {
        b,
        w,
        two_forms,
        gauss,
        weingarten_equation,
        weingarten_forms,
        local_b,
        local_w,
    }
}

/// `h(W_{s3} s1, s2) − h(s3, B(s1, s2))` over frame triples. The real
/// family uses `e_a`, the complex family the frame `f_A, f̄_A`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualityReport {
    pub real_frame: Check,
    pub complex_frame: Check,
}

pub fn weingarten_duality(data: &HermitianData, sf: &SecondFundamental) -> DualityReport {
    let r = data.rank();
    let fam = |name: &str, secs: &[Section]| {
        let mut check = Check::new(name);
        for (x, s1) in secs.iter().enumerate() {
            for (y, s2) in secs.iter().enumerate() {
                let bxy = sf.b.apply(s1, s2);
                for (z, s3) in secs.iter().enumerate() {
                    let lhs = data.h(&sf.w.apply(s3, s1), s2);
                    check.record(&[x, y, z], lhs.sub(&data.h(s3, &bxy)));
                }
            }
        }
        check
    };
    let real: Vec<Section> = (0..r).map(|a| data.basis(a)).collect();
    let complex: Vec<Section> = (0..data.frame.size()).map(|a| data.frame.element(a)).collect();
    DualityReport {
        real_frame: fam("weingarten_duality_real", &real),
        complex_frame: fam("weingarten_duality_complex", &complex),
    }
}

/// Mean curvature section `H = g^{kl} B(e_k, e_l)` and the 1-form
/// `k(s) = g^{kl} h(W_s e_k, e_l)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeanCurvature {
    pub h: Section,
    pub k: EForm,
    pub minimal: bool,
}

pub fn mean_curvature(data: &HermitianData, sf: &SecondFundamental) -> MeanCurvature {
    let r = data.rank();
    let ginv = data.g.inverse();
    let mut h = Section::zero(r);
    for k in 0..r {
        for l in 0..r {
            if !ginv[k][l].is_zero() {
                h = h.add(&sf.b.apply(&data.basis(k), &data.basis(l)).scale(&ginv[k][l]));
            }
        }
    }
    let comps: Vec<Scalar> = (0..r)
        .map(|s| {
            let mut acc = Scalar::zero();
            for k in 0..r {
                for l in 0..r {
                    if !ginv[k][l].is_zero() {
                        let v = data.h(&sf.w.apply(&data.basis(s), &data.basis(k)), &data.basis(l));
                        acc = acc.add(&v.mul(&ginv[k][l]));
                    }
                }
            }
            acc
        })
        .collect();
    MeanCurvature {
        minimal: h.is_zero(),
        h,
        k: EForm::covector(&comps),
    }
}

/// A printed identity `lhs = c · rhs` checked with the printed constant and
/// with the constant read off the data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantCheck {
    pub printed: Scalar,
    pub printed_residual: Check,
    /// `None` when every `rhs` value is zero.
    pub observed: Option<Scalar>,
    pub observed_residual: Check,
    pub both_sides_zero: bool,
}

impl ConstantCheck {
    fn build(name: &str, printed: Scalar, pairs: Vec<(Vec<usize>, Scalar, Scalar)>) -> ConstantCheck {
        let observed = pairs
            .iter()
            .find(|(_, _, rhs)| !rhs.is_zero())
            .and_then(|(_, lhs, rhs)| lhs.checked_div(rhs).ok());
        let mut printed_residual = Check::new(format!("{name}_printed"));
        let mut observed_residual = Check::new(format!("{name}_observed"));
        let mut both_sides_zero = true;
        for (at, lhs, rhs) in &pairs {
            both_sides_zero &= lhs.is_zero() && rhs.is_zero();
            printed_residual.record(at, lhs.sub(&rhs.mul(&printed)));
            match &observed {
                Some(c) => observed_residual.record(at, lhs.sub(&rhs.mul(c))),
                None => observed_residual.record(at, lhs.clone()),
            }
        }
        ConstantCheck {
            printed,
            printed_residual,
            observed,
            observed_residual,
            both_sides_zero,
        }
    }
}

/// The identities linking `B⁰¹` with `N_J`, `DΦ`, and `J`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentitySuite {
    /// `Im B(s1,s2) = Re B(s1, J s2)`.
    pub im_re: Check,
    /// `g(Re B(s1,s2), s3)` against the Nijenhuis combination, printed `1/16`.
    pub nijenhuis_formula: ConstantCheck,
    /// `g(Re B(s1,s2), s3)` against the `DΦ` combination, printed `−1/8`.
    pub dphi_formula: ConstantCheck,
    /// `B(Js1, Js2) + B(s1, s2)`.
    pub j_anti_invariance: Check,
    /// `N` against `Re(B(s1,s2) − B(s2,s1))`, printed `16`.
    pub nijenhuis_from_alt: ConstantCheck,
    /// `g(p⁰¹s1, p⁰¹s2)`.
    pub isotropy: Check,
    pub integrable: bool,
    pub totally_geodesic: bool,
    pub totally_umbilical: bool,
    pub minimal: bool,
    /// `B⁰¹ = 0 ⇔ N = 0`.
    pub vanishing_equivalence: bool,
    /// `alt B⁰¹ = 0 ⇔ N = 0`.
    pub symmetry_equivalence: bool,
}

pub fn identity_suite(data: &HermitianData, sf: &SecondFundamental, mean: &MeanCurvature) -> Result<IdentitySuite, ProdError> {
    let r = data.rank();
    let st = &data.structure;
    let g = &data.g;
    let j = &data.j;
    let e: Vec<Section> = (0..r).map(|a| data.basis(a)).collect();
    let je: Vec<Section> = (0..r).map(|a| j.image(a)).collect();
    let nij = nijenhuis(st, j)?;
    let n = |s1: &Section, s2: &Section| nij.tensor.apply(s1, s2);
    let re = |s: &Section| Section(s.0.iter().map(Scalar::re).collect());
    let im = |s: &Section| Section(s.0.iter().map(Scalar::im).collect());
    let phi = |s1: &Section, s2: &Section| g.pair(s1, &j.apply(s2));
    let dphi = |x: &Section, y: &Section, z: &Section| {
        st.derive_along(x, &phi(y, z))
            .sub(&phi(&data.d(x, y), z))
            .sub(&phi(y, &data.d(x, z)))
    };

    let mut im_re = Check::new("im_re_relation");
    let mut anti = Check::new("j_anti_invariance");
    let mut isotropy = Check::new("isotropy");
    let mut nij_pairs = Vec::new();
    let mut dphi_pairs = Vec::new();
    let mut alt_pairs = Vec::new();
    let mut alt_zero = true;
    for a in 0..r {
        for b in 0..r {
            let bab = sf.b.apply(&e[a], &e[b]);
            record_section(&mut im_re, &[a, b], &im(&bab).sub(&re(&sf.b.apply(&e[a], &je[b]))));
            record_section(&mut anti, &[a, b], &sf.b.apply(&je[a], &je[b]).add(&bab));
            isotropy.record(&[a, b], g.pair(&data.p01(&e[a]), &data.p01(&e[b])));
            let alt = bab.sub(&sf.b.apply(&e[b], &e[a]));
            alt_zero &= alt.is_zero();
            let nab = n(&e[a], &e[b]);
            for c in 0..r {
                alt_pairs.push((vec![a, b, c], nab.0[c].clone(), re(&alt).0[c].clone()));
                let lhs = g.pair(&re(&bab), &e[c]);
                let nsum = g
                    .pair(&nab, &e[c])
                    .add(&g.pair(&n(&e[b], &je[c]), &je[a]))
                    .sub(&g.pair(&n(&je[c], &e[a]), &je[b]));
                nij_pairs.push((vec![a, b, c], lhs.clone(), nsum));
                let dsum = dphi(&je[a], &e[b], &e[c]).add(&dphi(&e[a], &je[b], &e[c]));
                dphi_pairs.push((vec![a, b, c], lhs, dsum));
            }
        }
    }
    let integrable = nij.integrable();
    let totally_geodesic = sf.is_zero();
    Ok(IdentitySuite {
        im_re,
        nijenhuis_formula: ConstantCheck::build("nijenhuis_formula", Scalar::ratio(1, 16), nij_pairs),
        dphi_formula: ConstantCheck::build("dphi_formula", Scalar::ratio(-1, 8), dphi_pairs),
        j_anti_invariance: anti,
        nijenhuis_from_alt: ConstantCheck::build("nijenhuis_from_alt", Scalar::int(16), alt_pairs),
        totally_umbilical: totally_geodesic && isotropy.passed(),
        isotropy,
        integrable,
        totally_geodesic,
        minimal: mean.minimal,
        vanishing_equivalence: totally_geodesic == integrable,
        symmetry_equivalence: alt_zero == integrable,
    })
}

/// Everything computed for one Hermitian structure.
#[derive(Clone, Debug)]
pub struct ProductGeometry {
    pub data: HermitianData,
    pub product: ProductConnection,
    pub second: SecondFundamental,
    pub duality: DualityReport,
    pub mean: MeanCurvature,
    pub identities: IdentitySuite,
}

pub fn product_geometry(st: &Structure, j: &EndoField, g: &Metric) -> Result<ProductGeometry, ProdError> {
    let data = HermitianData::new(st, j, g)?;
    let product = product_connection(&data)?;
    let second = second_fundamental(&data, &product);
    let duality = weingarten_duality(&data, &second);
    let mean = mean_curvature(&data, &second);
    let identities = identity_suite(&data, &second, &mean)?;
    Ok(ProductGeometry {
        data,
        product,
        second,
        duality,
        mean,
        identities,
    })
}
