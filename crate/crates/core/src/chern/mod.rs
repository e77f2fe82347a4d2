//! Chern forms of `E^{1,0}` built from an almost complex connection: the
//! block matrix of `J R` over an adapted frame `(u_a, J u_a)`, the complex
//! curvature matrix `iΦ = R + iR*`, and trace forms of their powers.

use crate::algebroid::matrix::{self, Matrix};
use crate::algebroid::{Section, Structure};
use crate::check::Check;
use crate::connections::{almost_complex_check, Connection, ConnectionError, Curvature};
use crate::eforms::{d_e, EForm, FormError};
use crate::expr::{ComplexRational, Scalar};
use crate::jstruct::{ComplexFrame, EndoField, JError};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChernError {
    #[error("connection does not preserve J ({0} nonzero residuals)")]
    NotAlmostComplex(usize),
    #[error("adapted frame is singular")]
    SingularFrame,
    #[error("order must be at least 1")]
    InvalidOrder,
    #[error(transparent)]
    Connection(#[from] ConnectionError),
    #[error(transparent)]
    J(#[from] JError),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// A square matrix of forms multiplied with the wedge product.
#[derive(Clone, Debug, PartialEq)]
pub struct FormMatrix {
    size: usize,
    entries: Vec<Vec<EForm>>,
}

impl FormMatrix {
    pub fn new(size: usize, entries: Vec<Vec<EForm>>) -> FormMatrix {
        FormMatrix { size, entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, b: usize, a: usize) -> &EForm {
        &self.entries[b][a]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(EForm::is_zero)
    }

    /// `(AB)[i][j] = Σ_k A[i][k] ∧ B[k][j]`.
    pub fn mul(&self, other: &FormMatrix) -> Result<FormMatrix, FormError> {
        let n = self.dim();
        let mut entries = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let mut acc = self.entries[i][0].wedge(&other.entries[0][j])?;
                for k in 1..n {
                    let (x, y) = (&self.entries[i][k], &other.entries[k][j]);
                    if x.is_zero() || y.is_zero() {
                        continue;
                    }
                    acc = acc.add(&x.wedge(y)?)?;
                }
                row.push(acc);
            }
            entries.push(row);
        }
        Ok(FormMatrix { size: self.size, entries })
    }

    pub fn pow(&self, k: usize) -> Result<FormMatrix, FormError> {
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn trace(&self) -> Result<EForm, FormError> {
        let mut acc = self.entries[0][0].clone();
        for k in 1..self.dim() {
            acc = acc.add(&self.entries[k][k])?;
        }
        Ok(acc)
    }
}

/// Blocks `R^b_a`, `R^{b*}_a` of the matrix of `J R` over `(u_a, u_{a*} = J u_a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockCurvature {
    pub m: usize,
    pub r: FormMatrix,
    pub rstar: FormMatrix,
    /// The full `2m × 2m` matrix of `J R` as computed.
    pub full: FormMatrix,
    /// Residuals of the pattern `[[R, −R*], [R*, R]]`.
    pub pattern: Check,
}

impl BlockCurvature {
    /// `[[R, −R*], [R*, R]]` assembled from the blocks.
    pub fn block(&self) -> FormMatrix {
        let m = self.m;
        let entries = (0..2 * m)
            .map(|b| {
                (0..2 * m)
                    .map(|a| match (b < m, a < m) {
                        (true, true) => self.r.entries[b][a].clone(),
                        (true, false) => self.rstar.entries[b][a - m].neg(),
                        (false, true) => self.rstar.entries[b - m][a].clone(),
                        (false, false) => self.r.entries[b - m][a - m].clone(),
                    })
                    .collect()
            })
            .collect();
        FormMatrix::new(self.r.size, entries)
    }
}

/// `iΦ = R + iR*` with `Φ^b_a = R^{b*}_a − iR^b_a`.
#[derive(Clone, Debug, PartialEq)]
pub struct IPhiMatrix {
    pub matrix: FormMatrix,
    /// `iΦ` against the curvature of the restriction to `E^{1,0}` in the
    /// complex frame, including vanishing of the `E^{0,1}` components.
    pub restricted_agreement: Check,
}

fn require_almost_complex(conn: &Connection, j: &EndoField) -> Result<(), ChernError> {
    let check = almost_complex_check(conn, j)?;
    if !check.passed() {
        return Err(ChernError::NotAlmostComplex(check.failures.len()));
    }
    Ok(())
}

/// Expands `v` in the frame whose rows are `rows`, given the inverse.
fn coords_in(v: &Section, inverse: &Matrix) -> Vec<Scalar> {
    matrix::row_times(&v.0, inverse)
}

/// Matrix of 2-forms `M[B][A](e_x, e_y)` = `B`-th coordinate of `op(R(e_x,e_y) frame_A)`.
fn curvature_matrix(
    curv: &Curvature,
    frame: &[Section],
    inverse: &Matrix,
    op: impl Fn(&Section) -> Section,
) -> FormMatrix {
    let r = curv.rank();
    let n = frame.len();
    let mut comps: Vec<Vec<Vec<(usize, usize, Scalar)>>> = vec![vec![Vec::new(); n]; n];
    for x in 0..r {
        for y in x + 1..r {
            let (ex, ey) = (Section::basis(r, x), Section::basis(r, y));
            for (a, fa) in frame.iter().enumerate() {
                let c = coords_in(&op(&curv.apply(&ex, &ey, fa)), inverse);
                for (b, v) in c.into_iter().enumerate().take(n) {
                    comps[b][a].push((x, y, v));
                }
            }
        }
    }
    let entries = comps
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|list| {
                    let mut w = EForm::zero(r, 2);
                    for (x, y, v) in list {
                        w.set(&[x, y], v).expect("degree-2 index");
                    }
                    w
                })
                .collect()
        })
        .collect();
    FormMatrix::new(r, entries)
}

/// The adapted real frame `u_1..u_m, Ju_1..Ju_m` of a complex frame.
fn adapted_rows(j: &EndoField, frame: &ComplexFrame) -> Result<(Vec<Section>, Matrix), ChernError> {
    let mut rows: Vec<Section> = frame.generators().to_vec();
    rows.extend(frame.generators().iter().map(|u| j.apply(u)));
    let m: Matrix = rows.iter().map(|s| s.0.clone()).collect();
    let inverse = matrix::inverse(&m).ok_or(ChernError::SingularFrame)?;
    Ok((rows, inverse))
}

pub fn block_curvature(conn: &Connection, j: &EndoField, frame: &ComplexFrame) -> Result<BlockCurvature, ChernError> {
    require_almost_complex(conn, j)?;
    let m = frame.m();
    let (rows, inverse) = adapted_rows(j, frame)?;
    let full = curvature_matrix(&conn.curvature(), &rows, &inverse, |s| j.apply(s));
    let mut pattern = Check::new("block_pattern");
    let record = |check: &mut Check, at: [usize; 2], w: EForm| {
        for (idx, v) in w.components() {
            check.record(&[at[0], at[1], idx[0], idx[1]], v.clone());
        }
        if w.is_zero() {
            check.record(&at, Scalar::zero());
        }
    };
    for b in 0..m {
        for a in 0..m {
            record(&mut pattern, [b, m + a], full.entries[b][m + a].add(&full.entries[m + b][a])?);
            record(&mut pattern, [m + b, m + a], full.entries[m + b][m + a].sub(&full.entries[b][a])?);
        }
    }
    let pick = |db: usize| {
        let entries = (0..m).map(|b| (0..m).map(|a| full.entries[db + b][a].clone()).collect()).collect();
        FormMatrix::new(conn.rank(), entries)
    };
    Ok(BlockCurvature {
        m,
        r: pick(0),
        rstar: pick(m),
        full: full.clone(),
        pattern,
    })
}

pub fn iphi(conn: &Connection, j: &EndoField, frame: &ComplexFrame) -> Result<IPhiMatrix, ChernError> {
    let blocks = block_curvature(conn, j, frame)?;
    let m = blocks.m;
    let i = Scalar::i();
    let entries: Vec<Vec<EForm>> = (0..m)
        .map(|b| {
            (0..m)
                .map(|a| blocks.r.entries[b][a].add(&blocks.rstar.entries[b][a].scale(&i)))
                .collect::<Result<_, _>>()
        })
        .collect::<Result<_, _>>()?;
    let matrix = FormMatrix::new(conn.rank(), entries);
    // Direct curvature of the restriction, in the complex frame.
    let elements: Vec<Section> = (0..frame.size()).map(|a| frame.element(a)).collect();
    let restricted = curvature_matrix(&conn.curvature(), &elements[..m], frame.inverse(), Section::clone);
    let mut agreement = Check::new("iphi_restricted_curvature");
    for b in 0..m {
        for a in 0..m {
            let phi = restricted.entries[b][a].scale(&i);
            let w = matrix.entries[b][a].sub(&phi)?;
            for x in 0..conn.rank() {
                for y in x + 1..conn.rank() {
                    agreement.record(&[b, a, x, y], w.get(&[x, y])?);
                }
            }
        }
    }
    let r = conn.curvature();
    let rk = conn.rank();
    for x in 0..rk {
        for y in x + 1..rk {
            let (ex, ey) = (Section::basis(rk, x), Section::basis(rk, y));
            for (a, fa) in elements[..m].iter().enumerate() {
                let c = coords_in(&r.apply(&ex, &ey, fa), frame.inverse());
                for b in m..2 * m {
                    agreement.record(&[b, a, x, y], c[b].clone());
                }
            }
        }
    }
    Ok(IPhiMatrix {
        matrix,
        restricted_agreement: agreement,
    })
}

/// Which side of the trace comparison a form came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChernSource {
    Iphi,
    Block,
}

/// A trace form of order `k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChernForm {
    pub order: usize,
    pub source: ChernSource,
    pub form: EForm,
}

pub fn chern_form(
    blocks: &BlockCurvature,
    phi: &IPhiMatrix,
    k: usize,
    source: ChernSource,
) -> Result<ChernForm, ChernError> {
    if k == 0 {
        return Err(ChernError::InvalidOrder);
    }
    let form = match source {
        ChernSource::Iphi => phi.matrix.pow(k)?.trace()?,
        ChernSource::Block => blocks.block().pow(k)?.trace()?.scale(&Scalar::ratio(1, 2)),
    };
    Ok(ChernForm { order: k, source, form })
}

/// Comparison of both trace forms at one order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChernComparison {
    pub order: usize,
    pub trace_iphi: EForm,
    /// `½ trace(block^k)`.
    pub half_trace_block: EForm,
    /// `trace((iΦ)^k) − ½ trace(block^k)`.
    pub equality: Check,
    /// `Re trace((iΦ)^k) − ½ trace(block^k)`.
    pub real_part_equality: Check,
    pub imaginary_part_zero: bool,
    /// Constant `c` with `trace((iΦ)^k) = c · trace(block^k)`, when both are
    /// nonzero and proportional.
    pub factor: Option<Scalar>,
    pub closed: Check,
    pub vanishes: bool,
}

fn difference_check(name: &str, w: &EForm) -> Check {
    let mut check = Check::new(name);
    let size = w.size();
    for idx in crate::eforms::increasing_tuples(size, w.degree()) {
        check.record(&idx, w.get(&idx).expect("valid index"));
    }
    if check.evaluated == 0 {
        check.record(&[], Scalar::zero());
    }
    check
}

fn proportionality(x: &EForm, y: &EForm) -> Option<Scalar> {
    let (idx, yv) = y.components().find(|(_, v)| !v.is_zero())?;
    let c = x.get(idx).ok()?.checked_div(yv).ok()?;
    if !c.is_constant() || c.is_zero() {
        return None;
    }
    x.sub(&y.scale(&c)).ok()?.is_zero().then_some(c)
}

pub fn compare_orders(
    st: &Structure,
    blocks: &BlockCurvature,
    phi: &IPhiMatrix,
    k: usize,
) -> Result<ChernComparison, ChernError> {
    let a = chern_form(blocks, phi, k, ChernSource::Iphi)?.form;
    let b = chern_form(blocks, phi, k, ChernSource::Block)?.form;
    let full_block = b.scale(&Scalar::constant(ComplexRational::from_int(2)));
    let equality = difference_check("chern_trace_equality", &a.sub(&b)?);
    let re = a.map(Scalar::re);
    let im = a.map(Scalar::im);
    let real_part_equality = difference_check("chern_real_part_equality", &re.sub(&b)?);
    let mut closed = Check::new("chern_closed");
    for (tag, w) in [(0usize, &a), (1, &b)] {
        if w.degree() < st.rank() {
            for (idx, v) in d_e(st, w)?.components() {
                let mut at = vec![tag];
                at.extend(idx);
                closed.record(&at, v.clone());
            }
        }
        closed.record(&[tag], Scalar::zero());
    }
    Ok(ChernComparison {
        order: k,
        vanishes: a.is_zero() && b.is_zero(),
        factor: proportionality(&a, &full_block),
        trace_iphi: a,
        half_trace_block: b,
        equality,
        real_part_equality,
        imaginary_part_zero: im.is_zero(),
        closed,
    })
}

/// Block data, `iΦ`, and trace comparisons for orders `1..=max_order`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChernReport {
    pub m: usize,
    pub block_pattern: Check,
    pub restricted_agreement: Check,
    pub orders: Vec<ChernComparison>,
}

impl ChernReport {
    pub fn passed(&self) -> bool {
        self.block_pattern.passed()
            && self.restricted_agreement.passed()
            && self.orders.iter().all(|o| o.equality.passed() && o.closed.passed())
    }
}

pub fn chern_report(
    conn: &Connection,
    j: &EndoField,
    frame: &ComplexFrame,
    max_order: usize,
) -> Result<ChernReport, ChernError> {
    let blocks = block_curvature(conn, j, frame)?;
    let phi = iphi(conn, j, frame)?;
    let orders = (1..=max_order)
        .map(|k| compare_orders(conn.structure(), &blocks, &phi, k))
        .collect::<Result<_, _>>()?;
    Ok(ChernReport {
        m: blocks.m,
        block_pattern: blocks.pattern,
        restricted_agreement: phi.restricted_agreement,
        orders,
    })
}
