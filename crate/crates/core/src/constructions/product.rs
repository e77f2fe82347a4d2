use super::ConstructionError;
use crate::algebroid::matrix::{self, Matrix};
use crate::algebroid::{Algebroid, Chart, Section, Structure};
use crate::check::Check;
use crate::expr::Scalar;
use crate::jstruct::EndoField;
use std::collections::{BTreeMap, BTreeSet};

/// `A1 × A2` over the product chart.
#[derive(Clone, Debug)]
pub struct ProductAlgebroid {
    pub algebroid: Algebroid,
    pub first: Algebroid,
    pub second: Algebroid,
    /// Renaming applied to the second factor's coordinates.
    pub renamed: BTreeMap<String, String>,
}

fn fresh_names(taken: &BTreeSet<String>, coords: &[String]) -> BTreeMap<String, String> {
    let mut used = taken.clone();
    let mut out = BTreeMap::new();
    for c in coords {
        if used.contains(c) {
            let mut k = 2;
            let name = loop {
                let cand = format!("{c}_{k}");
                if !used.contains(&cand) && !coords.contains(&cand) {
                    break cand;
                }
                k += 1;
            };
            used.insert(name.clone());
            out.insert(c.clone(), name);
        } else {
            used.insert(c.clone());
        }
    }
    out
}

/// Direct product with block anchor and block brackets; coordinates of the
/// second factor are renamed on clashes.
pub fn direct_product(a1: &Algebroid, a2: &Algebroid, name: &str) -> Result<ProductAlgebroid, ConstructionError> {
    let taken: BTreeSet<String> = a1.chart().coords().iter().cloned().collect();
    let renamed = fresh_names(&taken, a2.chart().coords());
    let s1 = a1.structure();
    let s2 = a2.structure().rename(&renamed);
    let (r1, r2) = (s1.rank(), s2.rank());
    let (n1, n2) = (s1.dim(), s2.dim());
    let r = r1 + r2;
    let mut coords = s1.coords().to_vec();
    coords.extend(s2.coords().iter().cloned());
    let mut anchor = vec![vec![Scalar::zero(); n1 + n2]; r];
    for a in 0..r1 {
        for i in 0..n1 {
            anchor[a][i] = s1.rho(a, i).clone();
        }
    }
    for a in 0..r2 {
        for i in 0..n2 {
            anchor[r1 + a][n1 + i] = s2.rho(a, i).clone();
        }
    }
    let mut bracket = vec![vec![vec![Scalar::zero(); r]; r]; r];
    for c in 0..r1 {
        for a in 0..r1 {
            for b in 0..r1 {
                bracket[c][a][b] = s1.c(c, a, b).clone();
            }
        }
    }
    for c in 0..r2 {
        for a in 0..r2 {
            for b in 0..r2 {
                bracket[r1 + c][r1 + a][r1 + b] = s2.c(c, a, b).clone();
            }
        }
    }
    let chart = Chart::new(name, &coords)?;
    let structure = Structure::new(coords, anchor, bracket)?;
    Ok(ProductAlgebroid {
        algebroid: Algebroid::from_structure(chart, structure)?,
        first: a1.clone(),
        second: a2.clone(),
        renamed,
    })
}

fn block(m1: &Matrix, m2: &Matrix) -> Matrix {
    let (r1, r2) = (m1.len(), m2.len());
    let mut out = matrix::zeros(r1 + r2, r1 + r2);
    for i in 0..r1 {
        for k in 0..r1 {
            out[i][k] = m1[i][k].clone();
        }
    }
    for i in 0..r2 {
        for k in 0..r2 {
            out[r1 + i][r1 + k] = m2[i][k].clone();
        }
    }
    out
}

impl ProductAlgebroid {
    fn rank1(&self) -> usize {
        self.first.rank()
    }

    fn rename2(&self, m: &Matrix) -> Matrix {
        matrix::map(m, |s| s.rename(&self.renamed))
    }

    /// Block-diagonal endomorphism `T1 ⊕ T2`.
    pub fn product_endo(&self, t1: &EndoField, t2: &EndoField) -> Result<EndoField, ConstructionError> {
        Ok(EndoField::new(block(t1.matrix(), &self.rename2(t2.matrix())))?)
    }

    /// Block-diagonal metric `g1 ⊕ g2`.
    pub fn product_metric(&self, g1: &Matrix, g2: &Matrix) -> Matrix {
        block(g1, &self.rename2(g2))
    }

    pub fn inject_first(&self, s: &Section) -> Section {
        let mut v = s.0.clone();
        v.extend(std::iter::repeat_n(Scalar::zero(), self.second.rank()));
        Section(v)
    }

    pub fn inject_second(&self, s: &Section) -> Section {
        let mut v = vec![Scalar::zero(); self.rank1()];
        v.extend(s.0.iter().map(|x| x.rename(&self.renamed)));
        Section(v)
    }

    /// Injections preserve brackets and cross brackets of pulled-back
    /// sections vanish, on the given test sections.
    pub fn injection_check(&self, first: &[Section], second: &[Section]) -> Result<Check, ConstructionError> {
        let mut check = Check::new("product_injections");
        let prod = &self.algebroid;
        for (x, s) in first.iter().enumerate() {
            for (y, t) in first.iter().enumerate() {
                let lhs = prod.bracket(&self.inject_first(s), &self.inject_first(t))?;
                let rhs = self.inject_first(&self.first.bracket(s, t)?);
                for (c, v) in lhs.sub(&rhs).0.into_iter().enumerate() {
                    check.record(&[0, x, y, c], v);
                }
            }
        }
        for (x, s) in second.iter().enumerate() {
            for (y, t) in second.iter().enumerate() {
                let lhs = prod.bracket(&self.inject_second(s), &self.inject_second(t))?;
                let rhs = self.inject_second(&self.second.bracket(s, t)?);
                for (c, v) in lhs.sub(&rhs).0.into_iter().enumerate() {
                    check.record(&[1, x, y, c], v);
                }
            }
        }
        for (x, s) in first.iter().enumerate() {
            for (y, t) in second.iter().enumerate() {
                let v = prod.bracket(&self.inject_first(s), &self.inject_second(t))?;
                for (c, w) in v.0.into_iter().enumerate() {
                    check.record(&[2, x, y, c], w);
                }
            }
        }
        Ok(check)
    }
}
