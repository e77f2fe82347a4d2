//! Skew-symmetric forms over a frame, the wedge product and the
//! Chevalley-Eilenberg differential.
//!
//! Components are stored on strictly increasing multi-indices. The wedge
//! product is the shuffle sum without factorial prefactors, so that
//! `(e¹∧e²)(e_1, e_2) = 1`.

use crate::algebroid::{Section, Structure};
use crate::expr::{random_poly, PolyShape, Scalar};
use rand::Rng;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormError {
    #[error("forms live on frames of different sizes ({left} and {right})")]
    FrameMismatch { left: usize, right: usize },
    #[error("degree {degree} exceeds frame size {size}")]
    DegreeTooLarge { degree: usize, size: usize },
    #[error("expected {expected} arguments, got {found}")]
    ArgumentCount { expected: usize, found: usize },
    #[error("repeated index in {0:?} cannot carry a nonzero value")]
    RepeatedIndex(Vec<usize>),
    #[error("index {index} out of range for frame size {size}")]
    IndexOutOfRange { index: usize, size: usize },
}

/// A `p`-form over a frame of `size` elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EForm {
    size: usize,
    degree: usize,
    comps: BTreeMap<Vec<usize>, Scalar>,
}

impl serde::Serialize for EForm {
    /// Serialized as `{"size", "degree", "components": [{"index", "value"}]}`
    /// with 1-based indices.
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        #[derive(serde::Serialize)]
        struct Entry<'a> {
            index: Vec<usize>,
            value: &'a Scalar,
        }
        let comps: Vec<Entry> = self
            .comps
            .iter()
            .map(|(k, v)| Entry {
                index: k.iter().map(|a| a + 1).collect(),
                value: v,
            })
            .collect();
        let mut st = ser.serialize_struct("EForm", 3)?;
        st.serialize_field("size", &self.size)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("components", &comps)?;
        st.end()
    }
}

/// All strictly increasing `k`-tuples drawn from `0..n`.
pub fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for a in start..n {
            if n - a < k - cur.len() {
                break;
            }
            cur.push(a);
            go(a + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Sorts `idx`, returning the permutation sign, or `None` on a repeat.
pub fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = idx.to_vec();
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    Some((v, odd))
}

fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut joined = a.to_vec();
    joined.extend_from_slice(b);
    sort_with_sign(&joined)
}

impl EForm {
    pub fn zero(size: usize, degree: usize) -> EForm {
        EForm {
            size,
            degree,
            comps: BTreeMap::new(),
        }
    }

    /// The degree-0 form `f`.
    pub fn function(size: usize, f: Scalar) -> EForm {
        let mut w = EForm::zero(size, 0);
        w.set(&[], f).expect("empty index");
        w
    }

    /// `e^{a1} ∧ … ∧ e^{ap}`.
    pub fn basis(size: usize, idx: &[usize]) -> Result<EForm, FormError> {
        let mut w = EForm::zero(size, idx.len());
        w.set(idx, Scalar::one())?;
        Ok(w)
    }

    /// The 1-form with components `v`.
    pub fn covector(v: &[Scalar]) -> EForm {
        let mut w = EForm::zero(v.len(), 1);
        for (a, x) in v.iter().enumerate() {
            if !x.is_zero() {
                w.comps.insert(vec![a], x.clone());
            }
        }
        w
    }

    /// Builds a form from its values on increasing tuples.
    pub fn from_fn(size: usize, degree: usize, mut f: impl FnMut(&[usize]) -> Scalar) -> EForm {
        let mut w = EForm::zero(size, degree);
        for t in increasing_tuples(size, degree) {
            let v = f(&t);
            if !v.is_zero() {
                w.comps.insert(t, v);
            }
        }
        w
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Nonzero components on increasing multi-indices.
    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.comps.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    fn check_indices(&self, idx: &[usize]) -> Result<(), FormError> {
        if idx.len() != self.degree {
            return Err(FormError::ArgumentCount {
                expected: self.degree,
                found: idx.len(),
            });
        }
        match idx.iter().find(|&&a| a >= self.size) {
            Some(&index) => Err(FormError::IndexOutOfRange { index, size: self.size }),
            None => Ok(()),
        }
    }

    /// Component on an arbitrary index tuple, with the permutation sign.
    pub fn get(&self, idx: &[usize]) -> Result<Scalar, FormError> {
        self.check_indices(idx)?;
        Ok(match sort_with_sign(idx) {
            None => Scalar::zero(),
            Some((key, odd)) => match self.comps.get(&key) {
                None => Scalar::zero(),
                Some(v) if odd => v.neg(),
                Some(v) => v.clone(),
            },
        })
    }

    /// Sets the component on `idx` (and implicitly all its permutations).
    pub fn set(&mut self, idx: &[usize], value: Scalar) -> Result<(), FormError> {
        self.check_indices(idx)?;
        let Some((key, odd)) = sort_with_sign(idx) else {
            return if value.is_zero() {
                Ok(())
            } else {
                Err(FormError::RepeatedIndex(idx.to_vec()))
            };
        };
        let v = if odd { value.neg() } else { value };
        if v.is_zero() {
            self.comps.remove(&key);
        } else {
            self.comps.insert(key, v);
        }
        Ok(())
    }

    fn same_frame(&self, other: &EForm) -> Result<(), FormError> {
        if self.size == other.size {
            Ok(())
        } else {
            Err(FormError::FrameMismatch {
                left: self.size,
                right: other.size,
            })
        }
    }

    pub fn add(&self, other: &EForm) -> Result<EForm, FormError> {
        self.same_frame(other)?;
        if self.degree != other.degree {
            return Err(FormError::ArgumentCount {
                expected: self.degree,
                found: other.degree,
            });
        }
        let mut out = self.clone();
        for (k, v) in &other.comps {
            let s = match out.comps.get(k) {
                Some(x) => x.add(v),
                None => v.clone(),
            };
            if s.is_zero() {
                out.comps.remove(k);
            } else {
                out.comps.insert(k.clone(), s);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &EForm) -> Result<EForm, FormError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> EForm {
        self.map(|v| v.neg())
    }

    pub fn scale(&self, f: &Scalar) -> EForm {
        self.map(|v| v.mul(f))
    }

    pub fn conj(&self) -> EForm {
        self.map(Scalar::conj)
    }

    /// Applies `f` to every component, dropping zeros.
    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> EForm {
        EForm {
            size: self.size,
            degree: self.degree,
            comps: self
                .comps
                .iter()
                .map(|(k, v)| (k.clone(), f(v)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    /// Shuffle product.
    pub fn wedge(&self, other: &EForm) -> Result<EForm, FormError> {
        self.same_frame(other)?;
        let degree = self.degree + other.degree;
        let mut out = EForm::zero(self.size, degree);
        if degree > self.size {
            return Ok(out);
        }
        for (i, a) in &self.comps {
            for (j, b) in &other.comps {
                let Some((key, odd)) = merge_sign(i, j) else {
                    continue;
                };
                let t = a.mul(b);
                let t = if odd { t.neg() } else { t };
                let s = match out.comps.get(&key) {
                    Some(x) => x.add(&t),
                    None => t,
                };
                if s.is_zero() {
                    out.comps.remove(&key);
                } else {
                    out.comps.insert(key, s);
                }
            }
        }
        Ok(out)
    }

    /// Multilinear evaluation on `degree` sections (a sum of minors).
    pub fn evaluate(&self, sections: &[Section]) -> Result<Scalar, FormError> {
        if sections.len() != self.degree {
            return Err(FormError::ArgumentCount {
                expected: self.degree,
                found: sections.len(),
            });
        }
        if let Some(s) = sections.iter().find(|s| s.rank() != self.size) {
            return Err(FormError::FrameMismatch {
                left: self.size,
                right: s.rank(),
            });
        }
        let mut acc = Scalar::zero();
        for (idx, w) in &self.comps {
            let minor: Vec<Vec<Scalar>> = sections
                .iter()
                .map(|s| idx.iter().map(|&a| s.0[a].clone()).collect())
                .collect();
            let det = crate::algebroid::matrix::determinant(&minor);
            if !det.is_zero() {
                acc = acc.add(&w.mul(&det));
            }
        }
        Ok(acc)
    }

    /// Components restricted to multi-indices satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&[usize]) -> bool) -> EForm {
        EForm {
            size: self.size,
            degree: self.degree,
            comps: self
                .comps
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }
}

/// Differential of `ω` with respect to the frame data `st`.
///
/// `(dω)(e_0..e_p) = Σ_i (−1)^i ρ(e_i) ω(..ê_i..)
///                 + Σ_{i<j} (−1)^{i+j} ω([e_i,e_j], ..ê_i..ê_j..)`.
pub fn d_e(st: &Structure, omega: &EForm) -> Result<EForm, FormError> {
    let r = st.rank();
    if omega.size != r {
        return Err(FormError::FrameMismatch {
            left: r,
            right: omega.size,
        });
    }
    let p = omega.degree;
    let mut out = EForm::zero(r, p + 1);
    if p + 1 > r {
        return Ok(out);
    }
    for tuple in increasing_tuples(r, p + 1) {
        let mut acc = Scalar::zero();
        for i in 0..=p {
            let mut rest = tuple.clone();
            rest.remove(i);
            let w = omega.get(&rest)?;
            if w.is_constant() {
                continue;
            }
            let t = st.derive(tuple[i], &w);
            acc = if i % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
        }
        for i in 0..=p {
            for j in i + 1..=p {
                let mut rest: Vec<usize> = Vec::with_capacity(p);
                rest.push(0);
                rest.extend(
                    tuple
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != i && k != j)
                        .map(|(_, &a)| a),
                );
                let mut t = Scalar::zero();
                for c in 0..r {
                    let cc = st.c(c, tuple[i], tuple[j]);
                    if cc.is_zero() {
                        continue;
                    }
                    rest[0] = c;
                    let w = omega.get(&rest)?;
                    if !w.is_zero() {
                        t = t.add(&cc.mul(&w));
                    }
                }
                acc = if (i + j) % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
            }
        }
        if !acc.is_zero() {
            out.comps.insert(tuple, acc);
        }
    }
    Ok(out)
}

/// A random form whose components are random polynomials in `coords`.
pub fn random_form<R: Rng>(rng: &mut R, size: usize, degree: usize, coords: &[String], shape: PolyShape) -> EForm {
    EForm::from_fn(size, degree, |_| random_poly(rng, coords, shape))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::{Algebroid, Chart};
    use crate::expr::parse_with_coords;

    fn plane() -> Algebroid {
        let chart = Chart::new("plane", &["x", "y"]).unwrap();
        Algebroid::builder(chart, 2)
            .anchor(0, 0, Scalar::one())
            .anchor(1, 1, Scalar::one())
            .build()
            .unwrap()
    }

    fn heisenberg() -> Algebroid {
        let chart = Chart::new("line", &["t"]).unwrap();
        Algebroid::builder(chart, 4).bracket(0, 1, 2, Scalar::one()).build().unwrap()
    }

    fn s(t: &str) -> Scalar {
        parse_with_coords(t, &["x".to_string(), "y".to_string()]).unwrap()
    }

    #[test]
    fn wedge_conventions() {
        let e1 = EForm::basis(3, &[0]).unwrap();
        let e2 = EForm::basis(3, &[1]).unwrap();
        let e3 = EForm::basis(3, &[2]).unwrap();
        let w = e1.wedge(&e2).unwrap();
        let v = w
            .evaluate(&[Section::basis(3, 0), Section::basis(3, 1)])
            .unwrap();
        assert!(v.is_one());
        assert_eq!(e2.wedge(&e1).unwrap(), w.neg());
        let xe1 = e1.scale(&s("x"));
        let ye1 = e1.scale(&s("y"));
        assert!(xe1.wedge(&ye1).unwrap().is_zero());
        let left = w.wedge(&e3).unwrap();
        let right = e1.wedge(&e2.wedge(&e3).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn get_and_set_track_signs() {
        let mut w = EForm::zero(3, 2);
        w.set(&[2, 0], s("x")).unwrap();
        assert_eq!(w.get(&[0, 2]).unwrap(), s("-x"));
        assert!(w.get(&[1, 1]).unwrap().is_zero());
        assert!(matches!(w.get(&[0]), Err(FormError::ArgumentCount { .. })));
    }

    #[test]
    fn evaluate_on_repeated_section_vanishes() {
        let w = EForm::basis(2, &[0, 1]).unwrap().scale(&s("x + y"));
        let u = Section(vec![s("x"), s("y^2")]);
        assert!(w.evaluate(&[u.clone(), u]).unwrap().is_zero());
        let v = w
            .evaluate(&[Section::from_ints(&[1, 0]), Section::from_ints(&[0, 1])])
            .unwrap();
        assert_eq!(v, s("x + y"));
    }

    #[test]
    fn differential_examples() {
        let a = plane();
        let w = EForm::covector(&[Scalar::zero(), s("x")]);
        let dw = d_e(a.structure(), &w).unwrap();
        assert_eq!(dw, EForm::basis(2, &[0, 1]).unwrap());
        let f = EForm::function(2, s("x^2"));
        assert_eq!(d_e(a.structure(), &f).unwrap(), EForm::covector(&[s("2*x"), Scalar::zero()]));

        let h = heisenberg();
        let e3 = EForm::basis(4, &[2]).unwrap();
        let de3 = d_e(h.structure(), &e3).unwrap();
        assert_eq!(de3, EForm::basis(4, &[0, 1]).unwrap().neg());
    }

    #[test]
    fn top_degree_differential_is_zero() {
        let a = plane();
        let w = EForm::basis(2, &[0, 1]).unwrap().scale(&s("x*y"));
        assert!(d_e(a.structure(), &w).unwrap().is_zero());
    }

    #[test]
    fn tuple_enumeration() {
        assert_eq!(increasing_tuples(4, 2).len(), 6);
        assert_eq!(increasing_tuples(3, 0), vec![Vec::<usize>::new()]);
        assert!(increasing_tuples(2, 3).is_empty());
        assert_eq!(sort_with_sign(&[2, 0, 1]), Some((vec![0, 1, 2], false)));
        assert_eq!(sort_with_sign(&[1, 0]), Some((vec![0, 1], true)));
        assert_eq!(sort_with_sign(&[1, 1]), None);
    }
}
