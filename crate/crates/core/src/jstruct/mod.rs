//! Almost complex structures on algebroids: Nijenhuis tensors, complex
//! frames, bigrading, integrability diagnostics and matched pairs.

mod frame;
mod integrability;
mod matched;
mod nijenhuis;

pub use frame::{bigrade, d_e_split, BigradedForm, ComplexFrame, DSplit};
pub use integrability::{infinitesimal_automorphism, integrability_report, IntegrabilityReport, ItemStatus};
pub use matched::{matched_pair, MatchedPairReport};
pub use nijenhuis::{nijenhuis, nijenhuis_of, NijenhuisReport, NijenhuisTensor};

use crate::algebroid::matrix::{self, Matrix};
use crate::algebroid::{AlgebroidError, Section};
use crate::check::Check;
use crate::eforms::FormError;
use crate::expr::{ComplexRational, Scalar};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JError {
    #[error("endomorphism must be {expected}x{expected}")]
    Shape { expected: usize },
    #[error("rank {0} is odd; an almost complex structure needs even rank")]
    OddRank(usize),
    #[error("J^2 + I has nonzero entry ({row}, {col}): {value}")]
    NotAlmostComplex { row: usize, col: usize, value: Scalar },
    #[error("J is not integrable: N^{c}_{a}{b} = {value}")]
    NotIntegrable { c: usize, a: usize, b: usize, value: Scalar },
    #[error("no J-adapted frame could be selected")]
    FrameSelection,
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// A bundle endomorphism `T(e_a) = T^b_a e_b`, stored as `matrix[b][a]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoField {
    matrix: Matrix,
}

impl EndoField {
    pub fn new(matrix: Matrix) -> Result<EndoField, JError> {
        let n = matrix.len();
        if matrix.iter().any(|r| r.len() != n) {
            return Err(JError::Shape { expected: n });
        }
        Ok(EndoField { matrix })
    }

    /// `T(e_a) = images[a]`.
    pub fn from_images(images: &[Section]) -> Result<EndoField, JError> {
        let n = images.len();
        if images.iter().any(|s| s.rank() != n) {
            return Err(JError::Shape { expected: n });
        }
        let matrix = (0..n).map(|b| images.iter().map(|s| s.0[b].clone()).collect()).collect();
        Ok(EndoField { matrix })
    }

    /// An almost complex structure; rejects odd rank and `J² ≠ −I`.
    pub fn almost_complex(matrix: Matrix) -> Result<EndoField, JError> {
        let j = EndoField::new(matrix)?;
        j.require_almost_complex()?;
        Ok(j)
    }

    pub fn identity(n: usize) -> EndoField {
        EndoField {
            matrix: matrix::identity(n),
        }
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `T^b_a`, the `e_b` component of `T(e_a)`.
    pub fn entry(&self, b: usize, a: usize) -> &Scalar {
        &self.matrix[b][a]
    }

    pub fn image(&self, a: usize) -> Section {
        Section(self.matrix.iter().map(|r| r[a].clone()).collect())
    }

    pub fn apply(&self, s: &Section) -> Section {
        Section(matrix::times_col(&self.matrix, &s.0))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &EndoField) -> EndoField {
        EndoField {
            matrix: matrix::mul(&self.matrix, &other.matrix),
        }
    }

    pub fn require_almost_complex(&self) -> Result<(), JError> {
        let n = self.rank();
        if n % 2 == 1 {
            return Err(JError::OddRank(n));
        }
        let sq = matrix::mul(&self.matrix, &self.matrix);
        for (row, r) in sq.iter().enumerate() {
            for (col, v) in r.iter().enumerate() {
                let value = if row == col { v.add(&Scalar::one()) } else { v.clone() };
                if !value.is_zero() {
                    return Err(JError::NotAlmostComplex { row, col, value });
                }
            }
        }
        Ok(())
    }
}

/// `p¹⁰ = ½(I − iJ)` and `p⁰¹ = ½(I + iJ)` in the real frame.
#[derive(Clone, Debug, PartialEq)]
pub struct Projectors {
    pub p10: EndoField,
    pub p01: EndoField,
}

impl Projectors {
    pub fn new(j: &EndoField) -> Projectors {
        let n = j.rank();
        let half = ComplexRational::from_ratio(1, 2);
        let build = |sign: i64| {
            let m = (0..n)
                .map(|b| {
                    (0..n)
                        .map(|a| {
                            let ij = j.entry(b, a).mul(&Scalar::i()).scale(&ComplexRational::from_int(sign));
                            let v = if a == b { Scalar::one().add(&ij) } else { ij };
                            v.scale(&half)
                        })
                        .collect()
                })
                .collect();
            EndoField { matrix: m }
        };
        Projectors {
            p10: build(-1),
            p01: build(1),
        }
    }

    /// Residuals of `p¹⁰+p⁰¹=I`, idempotence and mutual annihilation.
    pub fn algebra(&self) -> Check {
        let n = self.p10.rank();
        let id = matrix::identity(n);
        let sum: Matrix = (0..n)
            .map(|b| (0..n).map(|a| self.p10.matrix[b][a].add(&self.p01.matrix[b][a])).collect())
            .collect();
        let pairs: [(&str, Matrix, &Matrix); 5] = [
            ("sum", sum, &id),
            ("p10_idempotent", self.p10.compose(&self.p10).matrix, &self.p10.matrix),
            ("p01_idempotent", self.p01.compose(&self.p01).matrix, &self.p01.matrix),
            ("p10_p01", self.p10.compose(&self.p01).matrix, &matrix::zeros(n, n)),
            ("p01_p10", self.p01.compose(&self.p10).matrix, &matrix::zeros(n, n)),
        ];
        let mut check = Check::new("projector_algebra");
        for (k, (_, lhs, rhs)) in pairs.iter().enumerate() {
            for b in 0..n {
                for a in 0..n {
                    check.record(&[k, b, a], lhs[b][a].sub(&rhs[b][a]));
                }
            }
        }
        check
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn standard(n: usize) -> EndoField {
        let mut images = Vec::new();
        for k in 0..n / 2 {
            let mut u = vec![0; n];
            u[2 * k + 1] = 1;
            let mut v = vec![0; n];
            v[2 * k] = -1;
            images.push(Section::from_ints(&u));
            images.push(Section::from_ints(&v));
        }
        EndoField::from_images(&images).unwrap()
    }

    #[test]
    fn standard_structure_squares_to_minus_one() {
        let j = standard(4);
        j.require_almost_complex().unwrap();
        assert_eq!(j.apply(&Section::basis(4, 0)), Section::basis(4, 1));
    }

    #[test]
    fn rejects_non_complex_endomorphisms() {
        let j = EndoField::identity(2);
        assert!(matches!(j.require_almost_complex(), Err(JError::NotAlmostComplex { .. })));
        assert!(matches!(EndoField::identity(3).require_almost_complex(), Err(JError::OddRank(3))));
    }

    #[test]
    fn projector_algebra_holds() {
        let p = Projectors::new(&standard(4));
        assert!(p.algebra().passed());
    }
}
