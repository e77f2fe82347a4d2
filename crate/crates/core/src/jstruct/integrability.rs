use super::frame::{d_e_split, ComplexFrame};
use super::nijenhuis::nijenhuis;
use super::{EndoField, JError};
use crate::algebroid::{Section, Structure};
use crate::check::Check;
use crate::eforms::{increasing_tuples, EForm};
use serde::Serialize;

/// One statement of the integrability theorem with its verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ItemStatus {
    pub statement: &'static str,
    pub holds: bool,
    pub check: Check,
}

impl ItemStatus {
    fn new(statement: &'static str, check: Check) -> Self {
        ItemStatus {
            statement,
            holds: check.passed(),
            check,
        }
    }
}

/// The five equivalent integrability statements, each checked independently.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegrabilityReport {
    pub items: Vec<ItemStatus>,
    /// All five verdicts coincide.
    pub consistent: bool,
    /// Verdict of the Nijenhuis statement, the defining one.
    pub integrable: bool,
}

fn record_form(check: &mut Check, prefix: &[usize], w: &EForm) {
    for (idx, v) in w.components() {
        let mut at = prefix.to_vec();
        at.extend_from_slice(idx);
        check.record(&at, v.clone());
    }
}

/// Runs the five statements on `(st, j)` over an adapted frame.
pub fn integrability_report(st: &Structure, j: &EndoField) -> Result<IntegrabilityReport, JError> {
    let frame = ComplexFrame::adapted(st, j)?;
    let cs = frame.structure();
    let m = frame.m();
    let n = frame.size();

    let mut closure_10 = Check::new("bracket_closes_on_E10");
    let mut closure_01 = Check::new("bracket_closes_on_E01");
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                closure_10.record(&[m + c, a, b], cs.c(m + c, a, b).clone());
                closure_01.record(&[c, m + a, m + b], cs.c(c, m + a, m + b).clone());
            }
        }
    }

    let mut first_order = Check::new("d_of_type_one_forms");
    for a in 0..n {
        let split = d_e_split(&frame, &EForm::basis(n, &[a])?)?;
        let leak = if a < m { &split.d_second } else { &split.d_prime };
        record_form(&mut first_order, &[a], leak);
    }

    let mut all_degrees = Check::new("d_preserves_type_shift");
    for deg in 1..n {
        for idx in increasing_tuples(n, deg) {
            let split = d_e_split(&frame, &EForm::basis(n, &idx)?)?;
            record_form(&mut all_degrees, &idx, &split.d_prime);
            record_form(&mut all_degrees, &idx, &split.d_second);
        }
    }

    let nij = nijenhuis(st, j)?;
    let mut vanishing = Check::new("nijenhuis_vanishes");
    let r = st.rank();
    for a in 0..r {
        for b in a + 1..r {
            for c in 0..r {
                vanishing.record(&[c, a, b], nij.tensor.get(c, a, b).clone());
            }
        }
    }

    let items = vec![
        ItemStatus::new("sections of E^{1,0} are bracket closed", closure_10),
        ItemStatus::new("sections of E^{0,1} are bracket closed", closure_01),
        ItemStatus::new("d_E maps (1,0) and (0,1) forms without (0,2)/(2,0) leakage", first_order),
        ItemStatus::new("d_E maps (p,q) into (p+1,q) + (p,q+1)", all_degrees),
        ItemStatus::new("the Nijenhuis tensor vanishes", vanishing),
    ];
    let integrable = items[4].holds;
    let consistent = items.iter().all(|i| i.holds == integrable);
    Ok(IntegrabilityReport {
        items,
        consistent,
        integrable,
    })
}

/// Residuals `[s, J e_b] − J[s, e_b]` over the frame.
pub fn infinitesimal_automorphism(st: &Structure, j: &EndoField, s: &Section) -> Result<Check, JError> {
    let r = st.rank();
    let mut check = Check::new("infinitesimal_automorphism");
    for b in 0..r {
        let eb = Section::basis(r, b);
        let res = st.bracket(s, &j.apply(&eb))?.sub(&j.apply(&st.bracket(s, &eb)?));
        for (c, v) in res.0.into_iter().enumerate() {
            check.record(&[b, c], v);
        }
    }
    Ok(check)
}
