use super::{Connection, ConnectionError};
use crate::algebroid::matrix::{self, Matrix};
use crate::algebroid::{Section, Structure};
use crate::check::Check;
use crate::eforms::{d_e, EForm};
use crate::expr::{is_zero, Sampling, Scalar, ZeroStatus};
use crate::jstruct::{nijenhuis, nijenhuis_of, EndoField};
use serde::Serialize;

/// A symmetric bilinear form `g_ab = g(e_a, e_b)` with exact inverse.
///
/// Over complex frames this is the complex-bilinear extension of a real
/// metric; Hermitian pairings are read off as `g(f_a, f̄_b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric {
    g: Matrix,
    inverse: Matrix,
    det: Scalar,
}

impl Metric {
    pub fn new(g: Matrix) -> Result<Metric, ConnectionError> {
        let r = g.len();
        if let Some(row) = g.iter().find(|row| row.len() != r) {
            return Err(ConnectionError::FrameMismatch {
                expected: r,
                found: row.len(),
            });
        }
        for a in 0..r {
            for b in a + 1..r {
                if g[a][b] != g[b][a] {
                    return Err(ConnectionError::NotSymmetric { a, b });
                }
            }
        }
        let det = matrix::determinant(&g);
        let inverse = matrix::inverse(&g).ok_or(ConnectionError::SingularMetric)?;
        Ok(Metric { g, inverse, det })
    }

    pub fn rank(&self) -> usize {
        self.g.len()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.g
    }

    pub fn inverse(&self) -> &Matrix {
        &self.inverse
    }

    pub fn determinant(&self) -> &Scalar {
        &self.det
    }

    pub fn get(&self, a: usize, b: usize) -> &Scalar {
        &self.g[a][b]
    }

    /// Sampled nondegeneracy status of the determinant.
    pub fn nondegeneracy(&self, cfg: &Sampling) -> Result<ZeroStatus, ConnectionError> {
        Ok(is_zero(&self.det, cfg)?)
    }

    /// `g(s1, s2)`, bilinear.
    pub fn pair(&self, s1: &Section, s2: &Section) -> Scalar {
        let v = matrix::times_col(&self.g, &s2.0);
        s1.0.iter()
            .zip(&v)
            .filter(|(x, y)| !x.is_zero() && !y.is_zero())
            .map(|(x, y)| x.mul(y))
            .sum()
    }

    /// The metric in the frame `f_A = rows[A][a] e_a`.
    pub fn reframe(&self, rows: &Matrix) -> Result<Metric, ConnectionError> {
        Metric::new(matrix::mul(&matrix::mul(rows, &self.g), &matrix::transpose(rows)))
    }

    fn require(&self, st: &Structure) -> Result<(), ConnectionError> {
        if st.rank() != self.rank() {
            return Err(ConnectionError::FrameMismatch {
                expected: st.rank(),
                found: self.rank(),
            });
        }
        Ok(())
    }
}

/// `2 g(∇_a e_b, e_c)` from the Koszul formula.
fn koszul_lower(st: &Structure, g: &Metric, c: usize, a: usize, b: usize) -> Scalar {
    let r = st.rank();
    let mut acc = st
        .derive(a, g.get(b, c))
        .add(&st.derive(b, g.get(a, c)))
        .sub(&st.derive(c, g.get(a, b)));
    for e in 0..r {
        let t = st
            .c(e, a, b)
            .mul(g.get(e, c))
            .sub(&st.c(e, b, c).mul(g.get(e, a)))
            .add(&st.c(e, c, a).mul(g.get(e, b)));
        acc = acc.add(&t);
    }
    acc
}

fn raise(st: &Structure, g: &Metric, lower: impl Fn(usize, usize, usize) -> Scalar) -> Connection {
    let r = st.rank();
    let half = Scalar::ratio(1, 2);
    let mut low = vec![vec![vec![Scalar::zero(); r]; r]; r];
    for (c, plane) in low.iter_mut().enumerate() {
        for (a, row) in plane.iter_mut().enumerate() {
            for (b, slot) in row.iter_mut().enumerate() {
                *slot = lower(c, a, b);
            }
        }
    }
    Connection::from_fn(st.clone(), |d, a, b| {
        let mut acc = Scalar::zero();
        for (c, plane) in low.iter().enumerate() {
            let gi = &g.inverse()[d][c];
            if !gi.is_zero() && !plane[a][b].is_zero() {
                acc = acc.add(&gi.mul(&plane[a][b]));
            }
        }
        acc.mul(&half)
    })
}

/// The torsion-free metric connection, from the Koszul formula.
pub fn levi_civita(st: &Structure, g: &Metric) -> Result<Connection, ConnectionError> {
    g.require(st)?;
    Ok(raise(st, g, |c, a, b| koszul_lower(st, g, c, a, b)))
}

/// The coefficient formula exactly as printed, including its sign on the
/// `C^e_bc g_ed` term. Kept as a diagnostic: it agrees with [`levi_civita`]
/// only when the structure functions vanish.
pub fn levi_civita_literal(st: &Structure, g: &Metric) -> Result<Connection, ConnectionError> {
    g.require(st)?;
    let r = st.rank();
    // Γ^a_bc = ½ g^{ad}(ρ_b g_cd + ρ_c g_bd − ρ_d g_bc + C^e_dc g_eb + C^e_db g_ec − C^e_bc g_ed)
    Ok(raise(st, g, |d, b, c| {
        let mut acc = st
            .derive(b, g.get(c, d))
            .add(&st.derive(c, g.get(b, d)))
            .sub(&st.derive(d, g.get(b, c)));
        for e in 0..r {
            let t = st
                .c(e, d, c)
                .mul(g.get(e, b))
                .add(&st.c(e, d, b).mul(g.get(e, c)))
                .sub(&st.c(e, b, c).mul(g.get(e, d)));
            acc = acc.add(&t);
        }
        acc
    }))
}

pub fn torsion_free_check(conn: &Connection) -> Check {
    let t = conn.torsion();
    let r = conn.rank();
    let mut check = Check::new("torsion_free");
    for c in 0..r {
        for a in 0..r {
            for b in a + 1..r {
                check.record(&[c, a, b], t.get(c, a, b).clone());
            }
        }
    }
    check
}

/// `ρ_a g_bc − g(∇_a e_b, e_c) − g(e_b, ∇_a e_c)` on frame triples.
pub fn metric_compat_check(conn: &Connection, g: &Metric) -> Result<Check, ConnectionError> {
    g.require(conn.structure())?;
    let r = conn.rank();
    let st = conn.structure();
    let mut check = Check::new("metric_compatible");
    for a in 0..r {
        for b in 0..r {
            for c in b..r {
                let mut v = st.derive(a, g.get(b, c));
                for d in 0..r {
                    v = v
                        .sub(&conn.gamma(d, a, b).mul(g.get(d, c)))
                        .sub(&conn.gamma(d, a, c).mul(g.get(b, d)));
                }
                check.record(&[a, b, c], v);
            }
        }
    }
    Ok(check)
}

/// The defining Koszul identity evaluated through brackets and covariant
/// derivatives, independently of how `conn` was built.
pub fn koszul_check(conn: &Connection, g: &Metric) -> Result<Check, ConnectionError> {
    g.require(conn.structure())?;
    let st = conn.structure();
    let r = conn.rank();
    let e = |a: usize| Section::basis(r, a);
    let mut check = Check::new("koszul_identity");
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                let (s1, s2, s3) = (e(a), e(b), e(c));
                let lhs = g.pair(&conn.cov_deriv(&s1, &s2)?, &s3).mul(&Scalar::int(2));
                let rhs = st
                    .derive_along(&s1, &g.pair(&s2, &s3))
                    .add(&st.derive_along(&s2, &g.pair(&s1, &s3)))
                    .sub(&st.derive_along(&s3, &g.pair(&s1, &s2)))
                    .add(&g.pair(&st.bracket(&s3, &s1)?, &s2))
                    .add(&g.pair(&st.bracket(&s3, &s2)?, &s1))
                    .add(&g.pair(&st.bracket(&s1, &s2)?, &s3));
                check.record(&[a, b, c], lhs.sub(&rhs));
            }
        }
    }
    Ok(check)
}

/// `(∇_a J) e_b = ∇_a(J e_b) − J(∇_a e_b)` on frame pairs.
pub fn almost_complex_check(conn: &Connection, j: &EndoField) -> Result<Check, ConnectionError> {
    let r = conn.rank();
    if j.rank() != r {
        return Err(ConnectionError::FrameMismatch {
            expected: r,
            found: j.rank(),
        });
    }
    let mut check = Check::new("almost_complex_connection");
    for a in 0..r {
        for b in 0..r {
            let ea = Section::basis(r, a);
            let v = conn
                .cov_deriv(&ea, &j.image(b))?
                .sub(&j.apply(&conn.on_frame(a, b)));
            for (c, x) in v.0.into_iter().enumerate() {
                check.record(&[a, b, c], x);
            }
        }
    }
    Ok(check)
}

/// `g(J e_a, J e_b) − g(e_a, e_b)` on frame pairs.
pub fn hermitian_check(g: &Metric, j: &EndoField) -> Result<Check, ConnectionError> {
    let r = g.rank();
    if j.rank() != r {
        return Err(ConnectionError::FrameMismatch {
            expected: r,
            found: j.rank(),
        });
    }
    let mut check = Check::new("hermitian_metric");
    for a in 0..r {
        for b in a..r {
            check.record(&[a, b], g.pair(&j.image(a), &j.image(b)).sub(g.get(a, b)));
        }
    }
    Ok(check)
}

/// `Φ(s1, s2) = g(s1, J s2)`.
pub fn fundamental_form(g: &Metric, j: &EndoField) -> EForm {
    let r = g.rank();
    EForm::from_fn(r, 2, |t| g.pair(&Section::basis(r, t[0]), &j.image(t[1])))
}

/// Antisymmetry and `J`-invariance of `g(·, J·)`, checked on all frame pairs.
pub fn fundamental_form_checks(g: &Metric, j: &EndoField) -> Check {
    let r = g.rank();
    let phi = |s: &Section, t: &Section| g.pair(s, &j.apply(t));
    let mut check = Check::new("fundamental_form");
    for a in 0..r {
        for b in 0..r {
            let (ea, eb) = (Section::basis(r, a), Section::basis(r, b));
            check.record(&[0, a, b], phi(&ea, &eb).add(&phi(&eb, &ea)));
            check.record(&[1, a, b], phi(&j.apply(&ea), &j.apply(&eb)).sub(&phi(&ea, &eb)));
        }
    }
    check
}

/// Both sides of `2g((D_{s1}J)s2, s3) = dΦ(s1,Js2,Js3) − dΦ(s1,s2,s3) + g(N(s2,s3), Js1)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Vii5Report {
    pub residual: Check,
    /// Triples where the left-hand side is nonzero.
    pub nontrivial: usize,
}

pub fn vii5_residuals(st: &Structure, j: &EndoField, g: &Metric) -> Result<Vii5Report, ConnectionError> {
    let lc = levi_civita(st, g)?;
    let phi = fundamental_form(g, j);
    let dphi = d_e(st, &phi)?;
    let r = st.rank();
    let e = |a: usize| Section::basis(r, a);
    let mut residual = Check::new("vii5_identity");
    let mut nontrivial = 0;
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                let (s1, s2, s3) = (e(a), e(b), e(c));
                let dj = lc.cov_deriv(&s1, &j.apply(&s2))?.sub(&j.apply(&lc.cov_deriv(&s1, &s2)?));
                let lhs = g.pair(&dj, &s3).mul(&Scalar::int(2));
                if !lhs.is_zero() {
                    nontrivial += 1;
                }
                let rhs = dphi
                    .evaluate(&[s1.clone(), j.apply(&s2), j.apply(&s3)])?
                    .sub(&dphi.evaluate(&[s1.clone(), s2.clone(), s3.clone()])?)
                    .add(&g.pair(&nijenhuis_of(st, j, &s2, &s3)?, &j.apply(&s1)));
                residual.record(&[a, b, c], lhs.sub(&rhs));
            }
        }
    }
    Ok(Vii5Report { residual, nontrivial })
}

/// Hermitian, integrability, closedness and Levi-Civita statuses.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KahlerReport {
    pub hermitian: Check,
    pub fundamental_form: EForm,
    pub d_phi: EForm,
    pub integrable: bool,
    pub closed: bool,
    pub levi_civita_almost_complex: Check,
    /// `(D J = 0) ⇔ (N = 0 and dΦ = 0)` on this input.
    pub equivalence_holds: bool,
    pub vii5: Vii5Report,
    pub almost_kahler: bool,
    pub kahler: bool,
}

pub fn kahler_report(st: &Structure, j: &EndoField, g: &Metric) -> Result<KahlerReport, ConnectionError> {
    j.require_almost_complex()?;
    let hermitian = hermitian_check(g, j)?;
    if let Some(f) = hermitian.first_failure() {
        return Err(ConnectionError::NotHermitian(format!(
            "g(Je_a,Je_b) - g(e_a,e_b) = {} at {:?}",
            f.value, f.at
        )));
    }
    let phi = fundamental_form(g, j);
    let d_phi = d_e(st, &phi)?;
    let integrable = nijenhuis(st, j)?.integrable();
    let closed = d_phi.is_zero();
    let lc = levi_civita(st, g)?;
    let levi_civita_almost_complex = almost_complex_check(&lc, j)?;
    let equivalence_holds = levi_civita_almost_complex.passed() == (integrable && closed);
    let vii5 = vii5_residuals(st, j, g)?;
    Ok(KahlerReport {
        hermitian,
        fundamental_form: phi,
        d_phi,
        integrable,
        closed,
        levi_civita_almost_complex,
        equivalence_holds,
        vii5,
        almost_kahler: closed,
        kahler: closed && integrable,
    })
}
