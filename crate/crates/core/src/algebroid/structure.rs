//! Structure functions of an anchored bundle in a chosen local frame.
//!
//! The same data type serves the real frame of an algebroid and any complex
//! frame derived from it by [`Structure::reframe`].

use super::matrix::{self, Matrix};
use super::{AlgebroidError, Section, VectorField};
use crate::check::Check;
use crate::expr::Scalar;
use serde::Serialize;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Data {
    coords: Vec<String>,
    rank: usize,
    anchor: Vec<Vec<Scalar>>,
    bracket: Vec<Scalar>,
}

/// Anchors `ρ^i_a` and brackets `C^c_ab` of a frame `e_1..e_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure(Arc<Data>);

/// Structure-equation residuals.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    /// `ρ_a ρ^i_b − ρ_b ρ^i_a − ρ^i_c C^c_ab` at `(a, b, i)`.
    pub anchor_morphism: Check,
    /// `C^c_ab + C^c_ba` at `(a, b, c)`.
    pub antisymmetry: Check,
    /// Component `d` of the frame Jacobiator at `(a, b, c, d)`.
    pub jacobi: Check,
}

impl ValidationReport {
    pub fn valid(&self) -> bool {
        self.anchor_morphism.passed() && self.antisymmetry.passed() && self.jacobi.passed()
    }
}

impl Structure {
    /// Builds from an anchor `[a][i]` and a full bracket table `[c][a][b]`.
    pub fn new(
        coords: Vec<String>,
        anchor: Vec<Vec<Scalar>>,
        bracket: Vec<Vec<Vec<Scalar>>>,
    ) -> Result<Structure, AlgebroidError> {
        let rank = anchor.len();
        let n = coords.len();
        for row in &anchor {
            if row.len() != n {
                return Err(AlgebroidError::Shape(format!(
                    "anchor row has {} entries, chart has {n} coordinates",
                    row.len()
                )));
            }
        }
        if bracket.len() != rank || bracket.iter().any(|m| m.len() != rank || m.iter().any(|r| r.len() != rank)) {
            return Err(AlgebroidError::Shape(format!("bracket table must be {rank}x{rank}x{rank}")));
        }
        let mut flat = Vec::with_capacity(rank * rank * rank);
        for m in bracket {
            for r in m {
                flat.extend(r);
            }
        }
        Ok(Structure(Arc::new(Data {
            coords,
            rank,
            anchor,
            bracket: flat,
        })))
    }

    pub fn rank(&self) -> usize {
        self.0.rank
    }

    pub fn dim(&self) -> usize {
        self.0.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.0.coords
    }

    /// `ρ^i_a`.
    pub fn rho(&self, a: usize, i: usize) -> &Scalar {
        &self.0.anchor[a][i]
    }

    /// `C^c_ab`.
    pub fn c(&self, c: usize, a: usize, b: usize) -> &Scalar {
        let r = self.0.rank;
        &self.0.bracket[(c * r + a) * r + b]
    }

    pub fn anchor_rows(&self) -> &[Vec<Scalar>] {
        &self.0.anchor
    }

    /// `C^·_ab` as a section.
    pub fn frame_bracket(&self, a: usize, b: usize) -> Section {
        Section((0..self.rank()).map(|c| self.c(c, a, b).clone()).collect())
    }

    /// `ρ(e_a) f`.
    pub fn derive(&self, a: usize, f: &Scalar) -> Scalar {
        if f.is_constant() {
            return Scalar::zero();
        }
        let mut acc = Scalar::zero();
        for (i, x) in self.0.coords.iter().enumerate() {
            let r = &self.0.anchor[a][i];
            if !r.is_zero() && f.depends_on(x) {
                acc = acc.add(&r.mul(&f.diff(x)));
            }
        }
        acc
    }

    /// `ρ(s) f`.
    pub fn derive_along(&self, s: &Section, f: &Scalar) -> Scalar {
        if f.is_constant() {
            return Scalar::zero();
        }
        let mut acc = Scalar::zero();
        for (a, sa) in s.0.iter().enumerate() {
            if !sa.is_zero() {
                acc = acc.add(&sa.mul(&self.derive(a, f)));
            }
        }
        acc
    }

    fn check_rank(&self, s: &Section) -> Result<(), AlgebroidError> {
        if s.0.len() == self.rank() {
            Ok(())
        } else {
            Err(AlgebroidError::RankMismatch {
                expected: self.rank(),
                found: s.0.len(),
            })
        }
    }

    /// `ρ(s)` as a vector field.
    pub fn anchor_push(&self, s: &Section) -> Result<VectorField, AlgebroidError> {
        self.check_rank(s)?;
        let comps = (0..self.dim())
            .map(|i| {
                s.0.iter()
                    .enumerate()
                    .filter(|(_, sa)| !sa.is_zero())
                    .map(|(a, sa)| sa.mul(self.rho(a, i)))
                    .sum()
            })
            .collect();
        Ok(VectorField(comps))
    }

    /// Leibniz extension of the frame brackets.
    pub fn bracket(&self, s1: &Section, s2: &Section) -> Result<Section, AlgebroidError> {
        self.check_rank(s1)?;
        self.check_rank(s2)?;
        let r = self.rank();
        let mut out: Vec<Scalar> = (0..r)
            .map(|c| self.derive_along(s1, &s2.0[c]).sub(&self.derive_along(s2, &s1.0[c])))
            .collect();
        for a in 0..r {
            if s1.0[a].is_zero() {
                continue;
            }
            for b in 0..r {
                if s2.0[b].is_zero() {
                    continue;
                }
                let k = s1.0[a].mul(&s2.0[b]);
                for (c, o) in out.iter_mut().enumerate() {
                    let cab = self.c(c, a, b);
                    if !cab.is_zero() {
                        *o = o.add(&k.mul(cab));
                    }
                }
            }
        }
        Ok(Section(out))
    }

    /// `[[s1,s2],s3] + [[s2,s3],s1] + [[s3,s1],s2]`.
    pub fn jacobiator(&self, s1: &Section, s2: &Section, s3: &Section) -> Result<Section, AlgebroidError> {
        let t1 = self.bracket(&self.bracket(s1, s2)?, s3)?;
        let t2 = self.bracket(&self.bracket(s2, s3)?, s1)?;
        let t3 = self.bracket(&self.bracket(s3, s1)?, s2)?;
        Ok(t1.add(&t2).add(&t3))
    }

    /// Checks the structure equations.
    pub fn validate(&self) -> ValidationReport {
        let r = self.rank();
        let n = self.dim();
        let mut anchor_morphism = Check::new("anchor_morphism");
        let mut antisymmetry = Check::new("antisymmetry");
        let mut jacobi = Check::new("jacobi");
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    antisymmetry.record(&[a, b, c], self.c(c, a, b).add(self.c(c, b, a)));
                }
            }
        }
        for a in 0..r {
            for b in a + 1..r {
                for i in 0..n {
                    let lhs = self.derive(a, self.rho(b, i)).sub(&self.derive(b, self.rho(a, i)));
                    let rhs: Scalar = (0..r)
                        .filter(|&c| !self.c(c, a, b).is_zero())
                        .map(|c| self.rho(c, i).mul(self.c(c, a, b)))
                        .sum();
                    anchor_morphism.record(&[a, b, i], lhs.sub(&rhs));
                }
            }
        }
        for a in 0..r {
            for b in a + 1..r {
                for c in b + 1..r {
                    let j = self
                        .jacobiator(&Section::basis(r, a), &Section::basis(r, b), &Section::basis(r, c))
                        .expect("frame sections have matching rank");
                    for (d, v) in j.0.into_iter().enumerate() {
                        jacobi.record(&[a, b, c, d], v);
                    }
                }
            }
        }
        ValidationReport {
            anchor_morphism,
            antisymmetry,
            jacobi,
        }
    }

    /// Structure functions of the frame `f_A = Σ_a rows[A][a] e_a`.
    ///
    /// Returns the new structure and the inverse change-of-frame matrix, whose
    /// row `a` expresses `e_a` in the new frame.
    pub fn reframe(&self, rows: &Matrix) -> Result<(Structure, Matrix), AlgebroidError> {
        let r = self.rank();
        if rows.len() != r || rows.iter().any(|row| row.len() != r) {
            return Err(AlgebroidError::Shape(format!("frame change must be {r}x{r}")));
        }
        let inv = matrix::inverse(rows).ok_or(AlgebroidError::SingularFrame)?;
        let anchor: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|row| {
                self.anchor_push(&Section(row.clone()))
                    .expect("rank checked")
                    .0
            })
            .collect();
        let mut bracket = vec![vec![vec![Scalar::zero(); r]; r]; r];
        for a in 0..r {
            for b in a + 1..r {
                let v = self
                    .bracket(&Section(rows[a].clone()), &Section(rows[b].clone()))
                    .expect("rank checked");
                let w = matrix::row_times(&v.0, &inv);
                for (c, wc) in w.into_iter().enumerate() {
                    bracket[c][b][a] = wc.neg();
                    bracket[c][a][b] = wc;
                }
            }
        }
        Ok((Structure::new(self.coords().to_vec(), anchor, bracket)?, inv))
    }

    /// Renames coordinates in every structure function.
    pub fn rename(&self, names: &std::collections::BTreeMap<String, String>) -> Structure {
        let coords = self
            .coords()
            .iter()
            .map(|c| names.get(c).cloned().unwrap_or_else(|| c.clone()))
            .collect();
        let anchor = self
            .anchor_rows()
            .iter()
            .map(|row| row.iter().map(|s| s.rename(names)).collect())
            .collect();
        let bracket = self.0.bracket.iter().map(|s| s.rename(names)).collect();
        Structure(Arc::new(Data {
            coords,
            rank: self.rank(),
            anchor,
            bracket,
        }))
    }
}
