use super::{EndoField, JError};
use crate::algebroid::{Section, Structure};
use crate::check::Check;
use crate::expr::Scalar;
use serde::Serialize;

/// Components `N^c_ab` of `N(e_a, e_b) = N^c_ab e_c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NijenhuisTensor {
    rank: usize,
    comps: Vec<Scalar>,
}

impl NijenhuisTensor {
    fn zeros(rank: usize) -> Self {
        NijenhuisTensor {
            rank,
            comps: vec![Scalar::zero(); rank * rank * rank],
        }
    }

    fn slot(&mut self, c: usize, a: usize, b: usize) -> &mut Scalar {
        &mut self.comps[(c * self.rank + a) * self.rank + b]
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `N^c_ab`.
    pub fn get(&self, c: usize, a: usize, b: usize) -> &Scalar {
        &self.comps[(c * self.rank + a) * self.rank + b]
    }

    /// `N(e_a, e_b)`.
    pub fn on_frame(&self, a: usize, b: usize) -> Section {
        Section((0..self.rank).map(|c| self.get(c, a, b).clone()).collect())
    }

    /// Tensorial evaluation on arbitrary sections.
    pub fn apply(&self, s1: &Section, s2: &Section) -> Section {
        let r = self.rank;
        let mut out = vec![Scalar::zero(); r];
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
                    let n = self.get(c, a, b);
                    if !n.is_zero() {
                        *o = o.add(&k.mul(n));
                    }
                }
            }
        }
        Section(out)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Scalar::is_zero)
    }

    /// First nonzero component as `(c, a, b, value)`.
    pub fn first_nonzero(&self) -> Option<(usize, usize, usize, Scalar)> {
        let r = self.rank;
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    let v = self.get(c, a, b);
                    if !v.is_zero() {
                        return Some((c, a, b, v.clone()));
                    }
                }
            }
        }
        None
    }
}

impl Serialize for NijenhuisTensor {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let r = self.rank;
        let nested: Vec<Vec<Vec<String>>> = (0..r)
            .map(|c| {
                (0..r)
                    .map(|a| (0..r).map(|b| self.get(c, a, b).to_string()).collect())
                    .collect()
            })
            .collect();
        nested.serialize(ser)
    }
}

/// Both computations of the Nijenhuis tensor and their comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NijenhuisReport {
    /// From the bracket definition applied to frame sections.
    pub tensor: NijenhuisTensor,
    /// From the local coefficient formula.
    pub coefficients: NijenhuisTensor,
    /// Component-wise difference of the two.
    pub agreement: Check,
    /// `N^c_ab + N^c_ba`.
    pub antisymmetry: Check,
}

impl NijenhuisReport {
    pub fn integrable(&self) -> bool {
        self.tensor.is_zero()
    }
}

/// `[Js1,Js2] − J[s1,Js2] − J[Js1,s2] − [s1,s2]`.
pub fn nijenhuis_of(st: &Structure, j: &EndoField, s1: &Section, s2: &Section) -> Result<Section, JError> {
    let js1 = j.apply(s1);
    let js2 = j.apply(s2);
    let a = st.bracket(&js1, &js2)?;
    let b = j.apply(&st.bracket(s1, &js2)?);
    let c = j.apply(&st.bracket(&js1, s2)?);
    let d = st.bracket(s1, s2)?;
    Ok(a.sub(&b).sub(&c).sub(&d))
}

fn coefficient_formula(st: &Structure, j: &EndoField) -> NijenhuisTensor {
    let r = st.rank();
    // jj(a, b) = J_a^b, the e_b component of J e_a.
    let jj = |a: usize, b: usize| j.entry(b, a);
    let mut out = NijenhuisTensor::zeros(r);
    let dj: Vec<Vec<Vec<Scalar>>> = (0..r)
        .map(|k| {
            (0..r)
                .map(|a| (0..r).map(|b| st.derive(k, jj(a, b))).collect())
                .collect()
        })
        .collect();
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                let mut acc = st.c(c, a, b).neg();
                for d in 0..r {
                    acc = acc.add(&dj[b][a][d].mul(jj(d, c)));
                    acc = acc.sub(&dj[a][b][d].mul(jj(d, c)));
                    acc = acc.add(&dj[d][b][c].mul(jj(a, d)));
                    acc = acc.sub(&dj[d][a][c].mul(jj(b, d)));
                    for e in 0..r {
                        let t1 = jj(a, d).mul(jj(e, c)).mul(st.c(e, b, d));
                        let t2 = jj(b, d).mul(jj(e, c)).mul(st.c(e, a, d));
                        let t3 = jj(b, e).mul(jj(a, d)).mul(st.c(c, d, e));
                        acc = acc.add(&t1).sub(&t2).add(&t3);
                    }
                }
                *out.slot(c, a, b) = acc;
            }
        }
    }
    out
}

/// Nijenhuis tensor by both routes.
pub fn nijenhuis(st: &Structure, j: &EndoField) -> Result<NijenhuisReport, JError> {
    let r = st.rank();
    if j.rank() != r {
        return Err(JError::Shape { expected: r });
    }
    j.require_almost_complex()?;
    let mut tensor = NijenhuisTensor::zeros(r);
    for a in 0..r {
        for b in 0..r {
            let n = nijenhuis_of(st, j, &Section::basis(r, a), &Section::basis(r, b))?;
            for (c, v) in n.0.into_iter().enumerate() {
                *tensor.slot(c, a, b) = v;
            }
        }
    }
    let coefficients = coefficient_formula(st, j);
    let mut agreement = Check::new("nijenhuis_routes_agree");
    let mut antisymmetry = Check::new("nijenhuis_antisymmetry");
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                agreement.record(&[c, a, b], tensor.get(c, a, b).sub(coefficients.get(c, a, b)));
                antisymmetry.record(&[c, a, b], tensor.get(c, a, b).add(tensor.get(c, b, a)));
            }
        }
    }
    Ok(NijenhuisReport {
        tensor,
        coefficients,
        agreement,
        antisymmetry,
    })
}
