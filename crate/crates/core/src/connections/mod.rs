//! Linear connections on algebroids: covariant derivatives, torsion,
//! curvature, Levi-Civita connections in real and complex frames, Kähler
//! diagnostics and sectional curvature.

mod complex;
mod metric;
mod sectional;

pub use complex::{
    kahler_complex_curvature, levi_civita_complex_frame, ComplexLeviCivita, HermitianBlock, KahlerCoefficients,
    KahlerCurvatureReport,
};
pub use metric::{
    almost_complex_check, fundamental_form, fundamental_form_checks, hermitian_check, kahler_report, koszul_check, levi_civita,
    levi_civita_literal, metric_compat_check, torsion_free_check, vii5_residuals, KahlerReport, Metric, Vii5Report,
};
pub use sectional::{curvature_skew_check, holomorphic_sectional, riemann4, sectional_curvature};

use crate::algebroid::matrix::Matrix;
use crate::algebroid::{AlgebroidError, Section, Structure};
use crate::eforms::{EForm, FormError};
use crate::expr::{ExprError, Scalar};
use crate::jstruct::{ComplexFrame, JError};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConnectionError {
    #[error("frame mismatch: expected rank {expected}, found {found}")]
    FrameMismatch { expected: usize, found: usize },
    #[error("metric is not symmetric at ({a}, {b})")]
    NotSymmetric { a: usize, b: usize },
    #[error("metric is structurally singular")]
    SingularMetric,
    #[error("metric is not Hermitian: {0}")]
    NotHermitian(String),
    #[error("structure is not Kählerian: {0}")]
    NotKahler(String),
    #[error("plane is structurally degenerate")]
    DegeneratePlane,
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
    #[error(transparent)]
    J(#[from] JError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Whether coefficients refer to the real frame or to a complex frame
/// `f_1..f_m, f̄_1..f̄_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FrameTag {
    Real,
    Complex { m: usize },
}

/// `∇_{e_a} e_b = Γ^c_ab e_c` over a frame with structure `st`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    structure: Structure,
    tag: FrameTag,
    gamma: Vec<Scalar>,
}

fn idx3(r: usize, c: usize, a: usize, b: usize) -> usize {
    (c * r + a) * r + b
}

impl Connection {
    /// `gamma[c][a][b] = Γ^c_ab`.
    pub fn new(structure: Structure, gamma: Vec<Vec<Vec<Scalar>>>) -> Result<Connection, ConnectionError> {
        let r = structure.rank();
        let found = gamma.len();
        if found != r || gamma.iter().any(|m| m.len() != r || m.iter().any(|row| row.len() != r)) {
            return Err(ConnectionError::FrameMismatch { expected: r, found });
        }
        Ok(Connection {
            structure,
            tag: FrameTag::Real,
            gamma: gamma.into_iter().flatten().flatten().collect(),
        })
    }

    pub fn from_fn(structure: Structure, mut f: impl FnMut(usize, usize, usize) -> Scalar) -> Connection {
        let r = structure.rank();
        let mut gamma = Vec::with_capacity(r * r * r);
        for c in 0..r {
            for a in 0..r {
                for b in 0..r {
                    gamma.push(f(c, a, b));
                }
            }
        }
        Connection {
            structure,
            tag: FrameTag::Real,
            gamma,
        }
    }

    pub fn zero(structure: Structure) -> Connection {
        Connection::from_fn(structure, |_, _, _| Scalar::zero())
    }

    pub fn with_tag(mut self, tag: FrameTag) -> Connection {
        self.tag = tag;
        self
    }

    pub fn tag(&self) -> FrameTag {
        self.tag
    }

    pub fn rank(&self) -> usize {
        self.structure.rank()
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn gamma(&self, c: usize, a: usize, b: usize) -> &Scalar {
        &self.gamma[idx3(self.rank(), c, a, b)]
    }

    /// `∇_{e_a} e_b`.
    pub fn on_frame(&self, a: usize, b: usize) -> Section {
        Section((0..self.rank()).map(|c| self.gamma(c, a, b).clone()).collect())
    }

    fn require(&self, s: &Section) -> Result<(), ConnectionError> {
        if s.rank() != self.rank() {
            return Err(ConnectionError::FrameMismatch {
                expected: self.rank(),
                found: s.rank(),
            });
        }
        Ok(())
    }

    /// `∇_{s1} s2 = (s1^a ρ^i_a ∂_i s2^c + Γ^c_ab s1^a s2^b) e_c`.
    pub fn cov_deriv(&self, s1: &Section, s2: &Section) -> Result<Section, ConnectionError> {
        self.require(s1)?;
        self.require(s2)?;
        let r = self.rank();
        let mut out: Vec<Scalar> = s2.0.iter().map(|f| self.structure.derive_along(s1, f)).collect();
        for a in (0..r).filter(|&a| !s1.0[a].is_zero()) {
            for b in (0..r).filter(|&b| !s2.0[b].is_zero()) {
                let w = s1.0[a].mul(&s2.0[b]);
                for (c, slot) in out.iter_mut().enumerate() {
                    let g = self.gamma(c, a, b);
                    if !g.is_zero() {
                        *slot = slot.add(&g.mul(&w));
                    }
                }
            }
        }
        Ok(Section(out))
    }

    /// `T^c_ab = Γ^c_ab − Γ^c_ba − C^c_ab`.
    pub fn torsion(&self) -> Tensor3 {
        let r = self.rank();
        Tensor3::from_fn(r, |c, a, b| {
            self.gamma(c, a, b).sub(self.gamma(c, b, a)).sub(self.structure.c(c, a, b))
        })
    }

    /// `R(e_a,e_b)e_c = R^d_{ab,c} e_d`.
    pub fn curvature(&self) -> Curvature {
        let r = self.rank();
        let st = &self.structure;
        let mut comps = Vec::with_capacity(r * r * r * r);
        for d in 0..r {
            for a in 0..r {
                for b in 0..r {
                    for c in 0..r {
                        let mut acc = st.derive(a, self.gamma(d, b, c)).sub(&st.derive(b, self.gamma(d, a, c)));
                        for e in 0..r {
                            let t = self
                                .gamma(e, b, c)
                                .mul(self.gamma(d, a, e))
                                .sub(&self.gamma(e, a, c).mul(self.gamma(d, b, e)))
                                .sub(&st.c(e, a, b).mul(self.gamma(d, e, c)));
                            acc = acc.add(&t);
                        }
                        comps.push(acc);
                    }
                }
            }
        }
        Curvature { rank: r, comps }
    }

    /// `∇ + S` for a `(2,1)` tensor `S^c_ab`.
    pub fn add_tensor(&self, s: &Tensor3) -> Connection {
        let mut out = self.clone();
        for (slot, v) in out.gamma.iter_mut().zip(&s.comps) {
            *slot = slot.add(v);
        }
        out
    }

    /// Coefficients in the frame `f_A = rows[A][a] e_a`, whose structure is
    /// `target` and whose inverse change of frame is `inverse`.
    pub fn reframe(&self, rows: &Matrix, inverse: &Matrix, target: &Structure) -> Connection {
        let r = self.rank();
        let images: Vec<Vec<Section>> = (0..r)
            .map(|a| {
                (0..r)
                    .map(|b| {
                        let f_a = Section(rows[a].clone());
                        let f_b = Section(rows[b].clone());
                        let v = self.cov_deriv(&f_a, &f_b).expect("rank matches");
                        Section(crate::algebroid::matrix::row_times(&v.0, inverse))
                    })
                    .collect()
            })
            .collect();
        Connection::from_fn(target.clone(), |c, a, b| images[a][b].0[c].clone())
    }

    /// The connection rewritten in a complex frame.
    pub fn in_complex_frame(&self, frame: &ComplexFrame) -> Connection {
        self.reframe(frame.rows(), frame.inverse(), frame.structure())
            .with_tag(FrameTag::Complex { m: frame.m() })
    }
}

/// A `(2,1)` tensor `T^c_ab`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3 {
    rank: usize,
    comps: Vec<Scalar>,
}

impl Tensor3 {
    pub fn from_fn(rank: usize, mut f: impl FnMut(usize, usize, usize) -> Scalar) -> Tensor3 {
        let mut comps = Vec::with_capacity(rank * rank * rank);
        for c in 0..rank {
            for a in 0..rank {
                for b in 0..rank {
                    comps.push(f(c, a, b));
                }
            }
        }
        Tensor3 { rank, comps }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, c: usize, a: usize, b: usize) -> &Scalar {
        &self.comps[idx3(self.rank, c, a, b)]
    }

    pub fn apply(&self, s1: &Section, s2: &Section) -> Section {
        let r = self.rank;
        let mut out = vec![Scalar::zero(); r];
        for a in (0..r).filter(|&a| !s1.0[a].is_zero()) {
            for b in (0..r).filter(|&b| !s2.0[b].is_zero()) {
                let w = s1.0[a].mul(&s2.0[b]);
                for (c, slot) in out.iter_mut().enumerate() {
                    let t = self.get(c, a, b);
                    if !t.is_zero() {
                        *slot = slot.add(&t.mul(&w));
                    }
                }
            }
        }
        Section(out)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Scalar::is_zero)
    }

    pub fn nonzero(&self) -> Vec<((usize, usize, usize), Scalar)> {
        let r = self.rank;
        let mut out = Vec::new();
        for c in 0..r {
            for a in 0..r {
                for b in 0..r {
                    let v = self.get(c, a, b);
                    if !v.is_zero() {
                        out.push(((c, a, b), v.clone()));
                    }
                }
            }
        }
        out
    }
}

/// Curvature components `R^d_{ab,c}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Curvature {
    rank: usize,
    comps: Vec<Scalar>,
}

impl Curvature {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, d: usize, a: usize, b: usize, c: usize) -> &Scalar {
        let r = self.rank;
        &self.comps[((d * r + a) * r + b) * r + c]
    }

    /// `R(s1,s2)s3`, assembled tensorially.
    pub fn apply(&self, s1: &Section, s2: &Section, s3: &Section) -> Section {
        let r = self.rank;
        let mut out = vec![Scalar::zero(); r];
        for a in (0..r).filter(|&a| !s1.0[a].is_zero()) {
            for b in (0..r).filter(|&b| !s2.0[b].is_zero()) {
                let w = s1.0[a].mul(&s2.0[b]);
                for c in (0..r).filter(|&c| !s3.0[c].is_zero()) {
                    let w = w.mul(&s3.0[c]);
                    for (d, slot) in out.iter_mut().enumerate() {
                        let v = self.get(d, a, b, c);
                        if !v.is_zero() {
                            *slot = slot.add(&v.mul(&w));
                        }
                    }
                }
            }
        }
        Section(out)
    }

    /// The curvature 2-form `R^b_a` with `R(s1,s2) e_a = R^b_a(s1,s2) e_b`.
    pub fn form(&self, b: usize, a: usize) -> EForm {
        EForm::from_fn(self.rank, 2, |t| self.get(b, t[0], t[1], a).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Scalar::is_zero)
    }

    /// First-pair antisymmetry residuals.
    pub fn antisymmetry(&self) -> crate::check::Check {
        let r = self.rank;
        let mut check = crate::check::Check::new("curvature_antisymmetry");
        for d in 0..r {
            for a in 0..r {
                for b in a..r {
                    for c in 0..r {
                        check.record(&[d, a, b, c], self.get(d, a, b, c).add(self.get(d, b, a, c)));
                    }
                }
            }
        }
        check
    }
}
