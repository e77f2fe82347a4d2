use super::metric::{fundamental_form, hermitian_check, levi_civita, Metric};
use super::{Connection, ConnectionError, Curvature};
use crate::algebroid::matrix::{self, Matrix};
use crate::algebroid::Structure;
use crate::check::Check;
use crate::eforms::d_e;
use crate::expr::Scalar;
use crate::jstruct::{nijenhuis, ComplexFrame, EndoField};
use serde::Serialize;

/// `g_{ab̄} = g(f_a, f̄_b)` on a complex frame, with `g^{b̄a}`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianBlock {
    m: usize,
    h: Matrix,
    h_inv: Matrix,
    /// `g(f_a,f_b) = g(f̄_a,f̄_b) = 0` and `g_{ab̄} = conj(g_{bā})`.
    pub checks: Check,
}

impl HermitianBlock {
    pub fn new(frame: &ComplexFrame, g: &Metric) -> Result<HermitianBlock, ConnectionError> {
        let m = frame.m();
        let full = g.reframe(frame.rows())?;
        let mut checks = Check::new("hermitian_block");
        for a in 0..m {
            for b in 0..m {
                check_pair(&mut checks, &[0, a, b], full.get(a, b));
                check_pair(&mut checks, &[1, a, b], full.get(m + a, m + b));
                check_pair(&mut checks, &[2, a, b], &full.get(a, m + b).sub(&full.get(b, m + a).conj()));
            }
        }
        let h: Matrix = (0..m).map(|a| (0..m).map(|b| full.get(a, m + b).clone()).collect()).collect();
        let h_inv = matrix::inverse(&h).ok_or(ConnectionError::SingularMetric)?;
        Ok(HermitianBlock { m, h, h_inv, checks })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `g_{ab̄}`.
    pub fn h(&self, a: usize, b: usize) -> &Scalar {
        &self.h[a][b]
    }

    /// `g^{b̄a}`, so that `Σ_b g_{ab̄} g^{b̄c} = δ_a^c`.
    pub fn inv(&self, b: usize, a: usize) -> &Scalar {
        &self.h_inv[b][a]
    }
}

fn check_pair(check: &mut Check, at: &[usize], v: &Scalar) {
    check.record(at, v.clone());
}

/// Kähler-case coefficient identities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KahlerCoefficients {
    /// `Γ^{d̄}_ab = 0`.
    pub mixed_unbarred_vanish: Check,
    /// `Γ^d_{ab̄} = 0`.
    pub unbarred_barred_vanish: Check,
    /// `Γ^d_{āb} = C^d_{āb}`.
    pub barred_first_is_bracket: Check,
    /// `Γ^d_ab = g^{c̄d}(ρ_a g_{bc̄} + C^{ē}_{c̄a} g_{bē})`.
    pub reduced_unbarred: Check,
}

impl KahlerCoefficients {
    pub fn passed(&self) -> bool {
        self.mixed_unbarred_vanish.passed()
            && self.unbarred_barred_vanish.passed()
            && self.barred_first_is_bracket.passed()
            && self.reduced_unbarred.passed()
    }
}

/// Levi-Civita connection on a complex frame with its cross-checks.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexLeviCivita {
    pub frame: ComplexFrame,
    pub block: HermitianBlock,
    /// Koszul construction directly on the complex frame.
    pub connection: Connection,
    /// Real-frame connection against its frame transform.
    pub transform_agreement: Check,
    /// The four printed coefficient families against `connection`.
    pub formula_families: [Check; 4],
    /// `Γ^C_AB = conj(Γ^{C̄}_{ĀB̄})`.
    pub conjugation: Check,
    pub kahler: Option<KahlerCoefficients>,
}

type Family = Vec<((usize, usize, usize), Scalar)>;

/// Coefficients `Γ^d_ab, Γ^d_{ab̄}, Γ^d_{āb}, Γ^{d̄}_ab` as printed.
fn printed_families(cs: &Structure, blk: &HermitianBlock) -> [Family; 4] {
    let m = blk.m;
    let bar = |a: usize| m + a;
    // g(f_A, f_B) with only mixed entries nonzero.
    let gg = |a: usize, b: usize| -> Scalar {
        match (a >= m, b >= m) {
            (false, true) => blk.h(a, b - m).clone(),
            (true, false) => blk.h(b, a - m).clone(),
            _ => Scalar::zero(),
        }
    };
    let half = Scalar::ratio(1, 2);
    let raise = |d: usize, f: &dyn Fn(usize) -> Scalar| -> Scalar {
        let mut acc = Scalar::zero();
        for c in 0..m {
            let gi = blk.inv(c, d);
            if !gi.is_zero() {
                acc = acc.add(&gi.mul(&f(c)));
            }
        }
        acc.mul(&half)
    };
    let mut fam: [Family; 4] = Default::default();
    for a in 0..m {
        for b in 0..m {
            for d in 0..m {
                let v1 = raise(d, &|c| {
                    let mut t = cs.derive(a, &gg(b, bar(c))).add(&cs.derive(b, &gg(a, bar(c))));
                    for e in 0..m {
                        t = t
                            .add(&cs.c(e, a, b).mul(&gg(e, bar(c))))
                            .sub(&cs.c(bar(e), b, bar(c)).mul(&gg(a, bar(e))))
                            .add(&cs.c(bar(e), bar(c), a).mul(&gg(b, bar(e))));
                    }
                    t
                });
                fam[0].push(((d, a, b), v1));
                let v2 = raise(d, &|c| {
                    let mut t = cs.derive(bar(b), &gg(a, bar(c))).sub(&cs.derive(bar(c), &gg(a, bar(b))));
                    for e in 0..m {
                        t = t
                            .add(&cs.c(e, a, bar(b)).mul(&gg(e, bar(c))))
                            .sub(&cs.c(bar(e), bar(b), bar(c)).mul(&gg(a, bar(e))))
                            .add(&cs.c(e, bar(c), a).mul(&gg(e, bar(b))));
                    }
                    t
                });
                fam[1].push(((d, a, bar(b)), v2));
                let v3 = raise(d, &|c| {
                    let mut t = cs.derive(bar(a), &gg(b, bar(c))).sub(&cs.derive(bar(c), &gg(b, bar(a))));
                    for e in 0..m {
                        t = t
                            .add(&cs.c(e, bar(a), b).mul(&gg(e, bar(c))))
                            .sub(&cs.c(e, b, bar(c)).mul(&gg(e, bar(a))))
                            .add(&cs.c(bar(e), bar(c), bar(a)).mul(&gg(b, bar(e))));
                    }
                    t
                });
                fam[2].push(((d, bar(a), b), v3));
                // g^{d̄c} is the conjugate-transposed inverse entry.
                let mut v4 = Scalar::zero();
                for c in 0..m {
                    let gi = blk.inv(d, c);
                    if gi.is_zero() {
                        continue;
                    }
                    let mut t = Scalar::zero();
                    for e in 0..m {
                        t = t
                            .add(&cs.c(bar(e), a, b).mul(&gg(c, bar(e))))
                            .sub(&cs.c(bar(e), b, c).mul(&gg(a, bar(e))))
                            .add(&cs.c(bar(e), c, a).mul(&gg(b, bar(e))));
                    }
                    v4 = v4.add(&gi.mul(&t));
                }
                fam[3].push(((bar(d), a, b), v4.mul(&half)));
            }
        }
    }
    fam
}

/// Levi-Civita coefficients on `frame`, by direct Koszul construction, by
/// transforming the real-frame connection, and by the printed formulas.
pub fn levi_civita_complex_frame(
    st: &Structure,
    j: &EndoField,
    g: &Metric,
    frame: &ComplexFrame,
) -> Result<ComplexLeviCivita, ConnectionError> {
    let herm = hermitian_check(g, j)?;
    if let Some(f) = herm.first_failure() {
        return Err(ConnectionError::NotHermitian(format!(
            "g(Je_a,Je_b) - g(e_a,e_b) = {} at {:?}",
            f.value, f.at
        )));
    }
    let m = frame.m();
    let n = frame.size();
    let cs = frame.structure();
    let block = HermitianBlock::new(frame, g)?;
    let cg = g.reframe(frame.rows())?;
    let connection = levi_civita(cs, &cg)?.with_tag(super::FrameTag::Complex { m });
    let transformed = levi_civita(st, g)?.in_complex_frame(frame);

    let mut transform_agreement = Check::new("complex_frame_transform");
    let mut conjugation = Check::new("complex_conjugation_symmetry");
    for c in 0..n {
        for a in 0..n {
            for b in 0..n {
                transform_agreement.record(&[c, a, b], connection.gamma(c, a, b).sub(transformed.gamma(c, a, b)));
                let mirrored = connection.gamma(frame.bar(c), frame.bar(a), frame.bar(b)).conj();
                conjugation.record(&[c, a, b], connection.gamma(c, a, b).sub(&mirrored));
            }
        }
    }

    let names = [
        "formula_unbarred",
        "formula_unbarred_barred",
        "formula_barred_unbarred",
        "formula_barred_target",
    ];
    let fams = printed_families(cs, &block);
    let formula_families: [Check; 4] = std::array::from_fn(|k| {
        let mut check = Check::new(names[k]);
        for ((d, a, b), v) in &fams[k] {
            check.record(&[*d, *a, *b], v.sub(connection.gamma(*d, *a, *b)));
        }
        check
    });

    let kahler_input = nijenhuis(st, j)?.integrable() && d_e(st, &fundamental_form(g, j))?.is_zero();
    let kahler = kahler_input.then(|| {
        let mut k = KahlerCoefficients {
            mixed_unbarred_vanish: Check::new("kahler_gamma_barred_target_vanishes"),
            unbarred_barred_vanish: Check::new("kahler_gamma_unbarred_barred_vanishes"),
            barred_first_is_bracket: Check::new("kahler_gamma_barred_first_is_bracket"),
            reduced_unbarred: Check::new("kahler_gamma_unbarred_reduced"),
        };
        for a in 0..m {
            for b in 0..m {
                for d in 0..m {
                    k.mixed_unbarred_vanish.record(&[m + d, a, b], connection.gamma(m + d, a, b).clone());
                    k.unbarred_barred_vanish.record(&[d, a, m + b], connection.gamma(d, a, m + b).clone());
                    k.barred_first_is_bracket.record(
                        &[d, m + a, b],
                        connection.gamma(d, m + a, b).sub(cs.c(d, m + a, b)),
                    );
                    let mut reduced = Scalar::zero();
                    for c in 0..m {
                        let mut t = cs.derive(a, block.h(b, c));
                        for e in 0..m {
                            t = t.add(&cs.c(m + e, m + c, a).mul(block.h(b, e)));
                        }
                        reduced = reduced.add(&block.inv(c, d).mul(&t));
                    }
                    k.reduced_unbarred
                        .record(&[d, a, b], reduced.sub(connection.gamma(d, a, b)));
                }
            }
        }
        k
    });

    Ok(ComplexLeviCivita {
        frame: frame.clone(),
        block,
        connection,
        transform_agreement,
        formula_families,
        conjugation,
        kahler,
    })
}

/// Curvature identities of the complex-frame Levi-Civita connection of a
/// Kählerian structure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KahlerCurvatureReport {
    /// `R^{d̄}_{ab̄,c̄}` against `ρ_a(Γ^{d̄}_{b̄c̄}) − C^{ē}_{ab̄} Γ^{d̄}_{ēc̄}`.
    pub printed_mixed_formula: Check,
    /// `R^{d̄}_{āb̄,c̄} = conj(R^d_{ab,c})`.
    pub conjugate_family: Check,
    /// `R^d_{ab̄,c} = −conj(R^{d̄}_{bā,c̄})`.
    pub mixed_relation: Check,
    /// Components that change type (`R^{D}_{AB,C}` with `D`, `C` of
    /// different type) and the `R^{d̄}_{ab,c̄}`, `R^d_{āb̄,c}` families.
    pub outside_families: Check,
    /// `R^a_{aā,a} / g_{aā}` for each `a`.
    pub holomorphic_ratios: Vec<Scalar>,
    #[serde(skip)]
    pub curvature: Curvature,
}

pub fn kahler_complex_curvature(lc: &ComplexLeviCivita) -> Result<KahlerCurvatureReport, ConnectionError> {
    if lc.kahler.is_none() {
        return Err(ConnectionError::NotKahler("N != 0 or dΦ != 0".into()));
    }
    let conn = &lc.connection;
    let cs = conn.structure();
    let m = lc.frame.m();
    let bar = |a: usize| m + a;
    let r = conn.curvature();
    let mut printed_mixed_formula = Check::new("kahler_curvature_mixed_formula");
    let mut conjugate_family = Check::new("kahler_curvature_conjugate_family");
    let mut mixed_relation = Check::new("kahler_curvature_mixed_relation");
    let mut outside_families = Check::new("kahler_curvature_outside_families");
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    let mut printed = cs.derive(a, conn.gamma(bar(d), bar(b), bar(c)));
                    for e in 0..m {
                        printed = printed.sub(&cs.c(bar(e), a, bar(b)).mul(conn.gamma(bar(d), bar(e), bar(c))));
                    }
                    printed_mixed_formula.record(&[bar(d), a, bar(b), bar(c)], printed.sub(r.get(bar(d), a, bar(b), bar(c))));
                    conjugate_family.record(
                        &[bar(d), bar(a), bar(b), bar(c)],
                        r.get(bar(d), bar(a), bar(b), bar(c)).sub(&r.get(d, a, b, c).conj()),
                    );
                    mixed_relation.record(
                        &[d, a, bar(b), c],
                        r.get(d, a, bar(b), c).add(&r.get(bar(d), b, bar(a), bar(c)).conj()),
                    );
                    outside_families.record(&[bar(d), a, b, bar(c)], r.get(bar(d), a, b, bar(c)).clone());
                    outside_families.record(&[d, bar(a), bar(b), c], r.get(d, bar(a), bar(b), c).clone());
                }
            }
        }
    }
    let n = 2 * m;
    for dd in 0..n {
        for aa in 0..n {
            for bb in 0..n {
                for cc in 0..n {
                    if (dd >= m) != (cc >= m) {
                        outside_families.record(&[dd, aa, bb, cc], r.get(dd, aa, bb, cc).clone());
                    }
                }
            }
        }
    }
    let holomorphic_ratios = (0..m)
        .map(|a| r.get(a, a, bar(a), a).checked_div(lc.block.h(a, a)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(KahlerCurvatureReport {
        printed_mixed_formula,
        conjugate_family,
        mixed_relation,
        outside_families,
        holomorphic_ratios,
        curvature: r,
    })
}
