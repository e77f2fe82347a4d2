use super::frame::ComplexFrame;
use super::nijenhuis::nijenhuis;
use super::{EndoField, JError};
use crate::algebroid::{Chart, Section, Structure, VectorField};
use crate::check::Check;
use crate::expr::Scalar;
use serde::Serialize;

/// Matched-pair identities for `(E^{1,0}, E^{0,1})` on frame sections.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatchedPairReport {
    /// Structure equations of `E^{1,0}` with its induced anchor and bracket.
    pub e10_algebroid: Check,
    /// Structure equations of `E^{0,1}`.
    pub e01_algebroid: Check,
    /// `[ρ(s), ρ(t)] = −ρ(∇_t s) + ρ(∇_s t)`.
    pub anchor_compatibility: Check,
    /// `∇_s` acting on brackets of `E^{0,1}`.
    pub module_e01: Check,
    /// `∇_t` acting on brackets of `E^{1,0}`.
    pub module_e10: Check,
}

impl MatchedPairReport {
    pub fn passed(&self) -> bool {
        self.e10_algebroid.passed()
            && self.e01_algebroid.passed()
            && self.anchor_compatibility.passed()
            && self.module_e01.passed()
            && self.module_e10.passed()
    }
}

struct Pair<'a> {
    cs: &'a Structure,
    m: usize,
}

impl Pair<'_> {
    fn keep(&self, s: &Section, barred: bool) -> Section {
        Section(
            s.0.iter()
                .enumerate()
                .map(|(a, v)| if (a >= self.m) == barred { v.clone() } else { Scalar::zero() })
                .collect(),
        )
    }

    fn bracket(&self, a: &Section, b: &Section) -> Section {
        self.cs.bracket(a, b).expect("complex frame sections")
    }

    /// `∇_t s = p¹⁰[t, s]` for `t` in `E^{0,1}`, `s` in `E^{1,0}`.
    fn act_on_10(&self, t: &Section, s: &Section) -> Section {
        self.keep(&self.bracket(t, s), false)
    }

    /// `∇_s t = p⁰¹[s, t]`.
    fn act_on_01(&self, s: &Section, t: &Section) -> Section {
        self.keep(&self.bracket(s, t), true)
    }

    fn br10(&self, a: &Section, b: &Section) -> Section {
        self.keep(&self.bracket(a, b), false)
    }

    fn br01(&self, a: &Section, b: &Section) -> Section {
        self.keep(&self.bracket(a, b), true)
    }

    fn anchor(&self, s: &Section) -> VectorField {
        self.cs.anchor_push(s).expect("complex frame sections")
    }
}

fn record(check: &mut Check, at: &[usize], v: Vec<Scalar>) {
    for (k, x) in v.into_iter().enumerate() {
        let mut idx = at.to_vec();
        idx.push(k);
        check.record(&idx, x);
    }
}

fn validation_check(name: &str, st: &Structure) -> Check {
    let rep = st.validate();
    let mut c = Check::new(name);
    c.absorb(rep.anchor_morphism);
    c.absorb(rep.antisymmetry);
    c.absorb(rep.jacobi);
    c
}

/// Verifies the matched-pair identities; requires integrable `j`.
pub fn matched_pair(st: &Structure, j: &EndoField) -> Result<MatchedPairReport, JError> {
    let nij = nijenhuis(st, j)?;
    if let Some((c, a, b, value)) = nij.tensor.first_nonzero() {
        return Err(JError::NotIntegrable { c, a, b, value });
    }
    let frame = ComplexFrame::adapted(st, j)?;
    let m = frame.m();
    let n = frame.size();
    let pair = Pair {
        cs: frame.structure(),
        m,
    };
    let chart = Chart::new("complexified", st.coords())?;
    let e = |a: usize| Section::basis(n, a);

    let mut anchor_compatibility = Check::new("anchor_compatibility");
    for a in 0..m {
        for b in 0..m {
            let s = e(a);
            let t = e(m + b);
            let lhs = pair.anchor(&s).bracket(&pair.anchor(&t), &chart);
            let r1 = pair.anchor(&pair.act_on_10(&t, &s));
            let r2 = pair.anchor(&pair.act_on_01(&s, &t));
            let res: Vec<Scalar> = (0..lhs.0.len())
                .map(|i| lhs.0[i].add(&r1.0[i]).sub(&r2.0[i]))
                .collect();
            record(&mut anchor_compatibility, &[a, m + b], res);
        }
    }

    let mut module_e01 = Check::new("module_identity_on_E01");
    let mut module_e10 = Check::new("module_identity_on_E10");
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                // s = f_a, t1 = f̄_b, t2 = f̄_c.
                let (s, t1, t2) = (e(a), e(m + b), e(m + c));
                let lhs = pair.act_on_01(&s, &pair.br01(&t1, &t2));
                let rhs = pair
                    .br01(&pair.act_on_01(&s, &t1), &t2)
                    .add(&pair.br01(&t1, &pair.act_on_01(&s, &t2)))
                    .add(&pair.act_on_01(&pair.act_on_10(&t2, &s), &t1))
                    .sub(&pair.act_on_01(&pair.act_on_10(&t1, &s), &t2));
                record(&mut module_e01, &[a, m + b, m + c], lhs.sub(&rhs).0);

                // t = f̄_a, s1 = f_b, s2 = f_c.
                let (t, s1, s2) = (e(m + a), e(b), e(c));
                let lhs = pair.act_on_10(&t, &pair.br10(&s1, &s2));
                let rhs = pair
                    .br10(&pair.act_on_10(&t, &s1), &s2)
                    .add(&pair.br10(&s1, &pair.act_on_10(&t, &s2)))
                    .add(&pair.act_on_10(&pair.act_on_01(&s2, &t), &s1))
                    .sub(&pair.act_on_10(&pair.act_on_01(&s1, &t), &s2));
                record(&mut module_e10, &[m + a, b, c], lhs.sub(&rhs).0);
            }
        }
    }

    Ok(MatchedPairReport {
        e10_algebroid: validation_check("E10_structure_equations", &frame.sub_structure(false)?),
        e01_algebroid: validation_check("E01_structure_equations", &frame.sub_structure(true)?),
        anchor_compatibility,
        module_e01,
        module_e10,
    })
}
