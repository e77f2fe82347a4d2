use super::{EndoField, JError};
use crate::algebroid::matrix::{self, Matrix};
use crate::algebroid::{Section, Structure};
use crate::check::Check;
use crate::eforms::{d_e, EForm, FormError};
use crate::expr::Scalar;
use std::collections::BTreeMap;

/// The frame `f_1..f_m, f̄_1..f̄_m` of `E_C` with `f_a = u_a − i J u_a`.
///
/// Index `A < m` is unbarred, `A ≥ m` is barred (`f_{m+a} = f̄_a`).
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexFrame {
    m: usize,
    generators: Vec<Section>,
    rows: Matrix,
    inverse: Matrix,
    structure: Structure,
}

impl ComplexFrame {
    /// Greedy selection of real frame vectors `u_a` with `(u, Ju)` independent.
    pub fn adapted(st: &Structure, j: &EndoField) -> Result<ComplexFrame, JError> {
        j.require_almost_complex()?;
        let r = st.rank();
        let mut chosen: Vec<Section> = Vec::new();
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for k in 0..r {
            if chosen.len() * 2 == r {
                break;
            }
            let u = Section::basis(r, k);
            let mut trial = rows.clone();
            trial.push(u.0.clone());
            trial.push(j.apply(&u).0);
            if matrix::symbolic_rank(&trial) == trial.len() {
                rows = trial;
                chosen.push(u);
            }
        }
        if chosen.len() * 2 != r {
            return Err(JError::FrameSelection);
        }
        ComplexFrame::with_generators(st, j, chosen)
    }

    /// Frame built from caller-chosen generators `u_1..u_m`.
    pub fn with_generators(st: &Structure, j: &EndoField, generators: Vec<Section>) -> Result<ComplexFrame, JError> {
        let r = st.rank();
        let m = generators.len();
        if 2 * m != r || generators.iter().any(|u| u.rank() != r) {
            return Err(JError::Shape { expected: r });
        }
        let i = Scalar::i();
        let unbarred: Vec<Vec<Scalar>> = generators
            .iter()
            .map(|u| u.sub(&j.apply(u).scale(&i)).0)
            .collect();
        let mut rows = unbarred.clone();
        rows.extend(unbarred.iter().map(|row| row.iter().map(Scalar::conj).collect::<Vec<_>>()));
        let (structure, inverse) = st.reframe(&rows)?;
        Ok(ComplexFrame {
            m,
            generators,
            rows,
            inverse,
            structure,
        })
    }

    /// Complex rank `m`.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn size(&self) -> usize {
        2 * self.m
    }

    /// Index of the conjugate frame element.
    pub fn bar(&self, a: usize) -> usize {
        (a + self.m) % (2 * self.m)
    }

    pub fn is_barred(&self, a: usize) -> bool {
        a >= self.m
    }

    pub fn generators(&self) -> &[Section] {
        &self.generators
    }

    /// Row `A` expresses `f_A` in the real frame.
    pub fn rows(&self) -> &Matrix {
        &self.rows
    }

    /// Row `a` expresses `e_a` in the complex frame.
    pub fn inverse(&self) -> &Matrix {
        &self.inverse
    }

    /// Complex anchors and structure functions.
    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    /// `f_A` as a real-frame section.
    pub fn element(&self, a: usize) -> Section {
        Section(self.rows[a].clone())
    }

    /// Real-frame components to complex-frame components.
    pub fn to_complex(&self, s: &Section) -> Section {
        Section(matrix::row_times(&s.0, &self.inverse))
    }

    /// Complex-frame components to real-frame components.
    pub fn to_real(&self, s: &Section) -> Section {
        Section(matrix::row_times(&s.0, &self.rows))
    }

    /// A real-frame form rewritten in the complex frame.
    pub fn form_to_complex(&self, w: &EForm) -> Result<EForm, FormError> {
        let elems: Vec<Section> = (0..self.size()).map(|a| self.element(a)).collect();
        pull_back(w, &elems)
    }

    /// A complex-frame form rewritten in the real frame.
    pub fn form_to_real(&self, w: &EForm) -> Result<EForm, FormError> {
        let elems: Vec<Section> = (0..self.size()).map(|a| Section(self.inverse[a].clone())).collect();
        pull_back(w, &elems)
    }

    /// `J f_a = i f_a` and `J f̄_a = −i f̄_a` in the real frame.
    pub fn eigen_check(&self, j: &EndoField) -> Check {
        let mut check = Check::new("eigen_frame");
        let i = Scalar::i();
        for a in 0..self.size() {
            let f = self.element(a);
            let lam = if self.is_barred(a) { i.neg() } else { i.clone() };
            let res = j.apply(&f).sub(&f.scale(&lam));
            for (b, v) in res.0.into_iter().enumerate() {
                check.record(&[a, b], v);
            }
        }
        check
    }

    /// `conj(C^C_AB) = C^{C̄}_{ĀB̄}` and `conj(ρ(f_A)) = ρ(f̄_A)`.
    pub fn conjugation_symmetry(&self) -> Check {
        let st = &self.structure;
        let n = self.size();
        let mut check = Check::new("conjugation_symmetry");
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = st.c(c, a, b).conj();
                    check.record(&[c, a, b], lhs.sub(st.c(self.bar(c), self.bar(a), self.bar(b))));
                }
            }
            for i in 0..st.dim() {
                check.record(&[a, n + i], st.rho(a, i).conj().sub(st.rho(self.bar(a), i)));
            }
        }
        check
    }

    /// Anchors and brackets of `E^{1,0}` (or `E^{0,1}`) on its own frame.
    pub fn sub_structure(&self, barred: bool) -> Result<Structure, JError> {
        let m = self.m;
        let off = if barred { m } else { 0 };
        let st = &self.structure;
        let anchor = (0..m).map(|a| st.anchor_rows()[a + off].clone()).collect();
        let bracket = (0..m)
            .map(|c| {
                (0..m)
                    .map(|a| (0..m).map(|b| st.c(c + off, a + off, b + off).clone()).collect())
                    .collect()
            })
            .collect();
        Ok(Structure::new(st.coords().to_vec(), anchor, bracket)?)
    }
}

/// `(φ*ω)_{A..} = ω(s_A, ..)` for the frame `s_A`.
fn pull_back(w: &EForm, elems: &[Section]) -> Result<EForm, FormError> {
    let mut err = None;
    let out = EForm::from_fn(elems.len(), w.degree(), |idx| {
        let args: Vec<Section> = idx.iter().map(|&a| elems[a].clone()).collect();
        w.evaluate(&args).unwrap_or_else(|e| {
            err = Some(e);
            Scalar::zero()
        })
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Type decomposition of a complex-frame form.
#[derive(Clone, Debug, PartialEq)]
pub struct BigradedForm {
    pub size: usize,
    pub degree: usize,
    pub parts: BTreeMap<(usize, usize), EForm>,
}

impl BigradedForm {
    pub fn part(&self, p: usize, q: usize) -> EForm {
        self.parts
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(|| EForm::zero(self.size, self.degree))
    }

    /// Sum of all parts.
    pub fn reconstruct(&self) -> EForm {
        self.parts
            .values()
            .fold(EForm::zero(self.size, self.degree), |acc, w| acc.add(w).expect("same shape"))
    }
}

/// Splits `w` by the number of unbarred and barred slots.
pub fn bigrade(w: &EForm, m: usize) -> BigradedForm {
    let mut parts: BTreeMap<(usize, usize), EForm> = BTreeMap::new();
    for (idx, v) in w.components() {
        let p = idx.iter().filter(|&&a| a < m).count();
        let q = idx.len() - p;
        let part = parts
            .entry((p, q))
            .or_insert_with(|| EForm::zero(w.size(), w.degree()));
        part.set(idx, v.clone()).expect("index from a valid form");
    }
    BigradedForm {
        size: w.size(),
        degree: w.degree(),
        parts,
    }
}

/// The four type components of `d_E`.
#[derive(Clone, Debug, PartialEq)]
pub struct DSplit {
    /// Shift `(p+2, q−1)`.
    pub d_prime: EForm,
    /// Shift `(p+1, q)`.
    pub del: EForm,
    /// Shift `(p, q+1)`.
    pub del_bar: EForm,
    /// Shift `(p−1, q+2)`.
    pub d_second: EForm,
}

impl DSplit {
    pub fn total(&self) -> EForm {
        self.d_prime
            .add(&self.del)
            .and_then(|w| w.add(&self.del_bar))
            .and_then(|w| w.add(&self.d_second))
            .expect("same shape")
    }
}

/// `d_E = ∂′ + ∂ + ∂̄ + ∂″` on a complex-frame form.
pub fn d_e_split(frame: &ComplexFrame, w: &EForm) -> Result<DSplit, FormError> {
    let n = frame.size();
    let m = frame.m();
    let zero = EForm::zero(n, w.degree() + 1);
    let mut out = DSplit {
        d_prime: zero.clone(),
        del: zero.clone(),
        del_bar: zero.clone(),
        d_second: zero,
    };
    for ((p, q), piece) in bigrade(w, m).parts {
        let dw = d_e(frame.structure(), &piece)?;
        for ((p2, q2), part) in bigrade(&dw, m).parts {
            let target = match (p2 as isize - p as isize, q2 as isize - q as isize) {
                (2, -1) => &mut out.d_prime,
                (1, 0) => &mut out.del,
                (0, 1) => &mut out.del_bar,
                (-1, 2) => &mut out.d_second,
                _ => unreachable!("d_E raises total degree by one and p by at most two"),
            };
            *target = target.add(&part)?;
        }
    }
    Ok(out)
}
