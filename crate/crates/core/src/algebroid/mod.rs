//! Charts, Lie algebroid structure data, sections and the bracket.

pub mod matrix;
mod structure;

pub use structure::{Structure, ValidationReport};

use crate::expr::{sample_points, ExprError, Func, Scalar};
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebroidError {
    #[error("duplicate coordinate '{0}'")]
    DuplicateCoordinate(String),
    #[error("'{0}' is not a valid coordinate name")]
    InvalidCoordinate(String),
    #[error("expected {expected} components, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("bracket [e{a}, e{a}] must vanish")]
    DiagonalBracket { a: usize },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("frame change matrix is structurally singular")]
    SingularFrame,
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// An ordered list of distinct coordinate symbols.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chart {
    name: String,
    coords: Vec<String>,
}

fn valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && s != "i"
        && Func::from_name(s).is_none()
}

impl Chart {
    pub fn new<S: AsRef<str>>(name: &str, coords: &[S]) -> Result<Chart, AlgebroidError> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(coords.len());
        for c in coords {
            let c = c.as_ref();
            if !valid_identifier(c) {
                return Err(AlgebroidError::InvalidCoordinate(c.to_string()));
            }
            if !seen.insert(c.to_string()) {
                return Err(AlgebroidError::DuplicateCoordinate(c.to_string()));
            }
            out.push(c.to_string());
        }
        Ok(Chart {
            name: name.to_string(),
            coords: out,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn contains(&self, coord: &str) -> bool {
        self.coords.iter().any(|c| c == coord)
    }
}

/// Component vector of a section in some frame.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Section(pub Vec<Scalar>);

impl Section {
    pub fn zero(rank: usize) -> Section {
        Section(vec![Scalar::zero(); rank])
    }

    /// The frame section `e_a`.
    pub fn basis(rank: usize, a: usize) -> Section {
        let mut s = Section::zero(rank);
        s.0[a] = Scalar::one();
        s
    }

    pub fn from_ints(v: &[i64]) -> Section {
        Section(v.iter().map(|&k| Scalar::int(k)).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[Scalar] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &Section) -> Section {
        Section(self.0.iter().zip(&other.0).map(|(a, b)| a.add(b)).collect())
    }

    pub fn sub(&self, other: &Section) -> Section {
        Section(self.0.iter().zip(&other.0).map(|(a, b)| a.sub(b)).collect())
    }

    pub fn neg(&self) -> Section {
        Section(self.0.iter().map(Scalar::neg).collect())
    }

    pub fn scale(&self, f: &Scalar) -> Section {
        Section(self.0.iter().map(|a| a.mul(f)).collect())
    }

    pub fn conj(&self) -> Section {
        Section(self.0.iter().map(Scalar::conj).collect())
    }
}

/// Component vector of a vector field on a chart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VectorField(pub Vec<Scalar>);

impl VectorField {
    /// `X(f) = X^i ∂_i f`.
    pub fn apply(&self, chart: &Chart, f: &Scalar) -> Scalar {
        self.0
            .iter()
            .zip(chart.coords())
            .filter(|(x, _)| !x.is_zero())
            .map(|(x, c)| x.mul(&f.diff(c)))
            .sum()
    }

    /// Ordinary Lie bracket of vector fields.
    pub fn bracket(&self, other: &VectorField, chart: &Chart) -> VectorField {
        VectorField(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(x, y)| self.apply(chart, y).sub(&other.apply(chart, x)))
                .collect(),
        )
    }
}

/// A Lie algebroid (or a candidate one) declared over a single chart.
#[derive(Clone, Debug, PartialEq)]
pub struct Algebroid {
    chart: Chart,
    structure: Structure,
    labels: Vec<String>,
}

/// Generic rank of the anchor at a sampled point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenericRank {
    pub rank: usize,
    pub point: String,
}

impl Algebroid {
    /// Starts a builder with zero anchor and zero bracket.
    pub fn builder(chart: Chart, rank: usize) -> AlgebroidBuilder {
        AlgebroidBuilder {
            anchor: vec![vec![Scalar::zero(); chart.dim()]; rank],
            bracket: vec![vec![vec![Scalar::zero(); rank]; rank]; rank],
            chart,
            rank,
            labels: None,
            error: None,
        }
    }

    /// Wraps prebuilt structure data; `C` is used as given.
    pub fn from_structure(chart: Chart, structure: Structure) -> Result<Algebroid, AlgebroidError> {
        if structure.coords() != chart.coords() {
            return Err(AlgebroidError::Shape("structure coordinates differ from chart".into()));
        }
        if structure.rank() == 0 {
            return Err(AlgebroidError::ZeroRank);
        }
        let labels = (1..=structure.rank()).map(|a| format!("e{a}")).collect();
        Ok(Algebroid {
            chart,
            structure,
            labels,
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn rank(&self) -> usize {
        self.structure.rank()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Algebroid, AlgebroidError> {
        if labels.len() != self.rank() {
            return Err(AlgebroidError::RankMismatch {
                expected: self.rank(),
                found: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn validate(&self) -> ValidationReport {
        self.structure.validate()
    }

    pub fn anchor_push(&self, s: &Section) -> Result<VectorField, AlgebroidError> {
        self.structure.anchor_push(s)
    }

    pub fn bracket(&self, s1: &Section, s2: &Section) -> Result<Section, AlgebroidError> {
        self.structure.bracket(s1, s2)
    }

    pub fn jacobiator(&self, s1: &Section, s2: &Section, s3: &Section) -> Result<Section, AlgebroidError> {
        self.structure.jacobiator(s1, s2, s3)
    }

    /// Rank of `ρ^i_a` at a random rational point that avoids poles.
    pub fn generic_rank(&self, seed: u64) -> Result<GenericRank, AlgebroidError> {
        let coords = self.chart.coords().to_vec();
        for p in sample_points(&coords, 32, seed) {
            let mut rows = Vec::with_capacity(self.rank());
            let mut ok = true;
            'rows: for a in 0..self.rank() {
                let mut row = Vec::with_capacity(coords.len());
                for i in 0..coords.len() {
                    match crate::expr::eval_exact(self.structure.rho(a, i), &p) {
                        Ok(v) => row.push(v),
                        Err(ExprError::Pole { .. }) => {
                            ok = false;
                            break 'rows;
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
                rows.push(row);
            }
            if ok {
                return Ok(GenericRank {
                    rank: matrix::constant_rank(&rows),
                    point: p.to_string(),
                });
            }
        }
        Err(ExprError::AllSamplesPoles { attempts: 32 }.into())
    }

    /// `ρ(s) f` for a section `s`.
    pub fn derive_along(&self, s: &Section, f: &Scalar) -> Scalar {
        self.structure.derive_along(s, f)
    }
}

/// Incremental constructor that keeps `C` antisymmetric.
#[derive(Clone, Debug)]
pub struct AlgebroidBuilder {
    chart: Chart,
    rank: usize,
    anchor: Vec<Vec<Scalar>>,
    bracket: Vec<Vec<Vec<Scalar>>>,
    labels: Option<Vec<String>>,
    error: Option<AlgebroidError>,
}

impl AlgebroidBuilder {
    fn in_range(&mut self, index: usize, size: usize) -> bool {
        if index >= size {
            self.error.get_or_insert(AlgebroidError::IndexOutOfRange { index, size });
            false
        } else {
            true
        }
    }

    /// Sets `ρ^i_a` (zero-based indices).
    pub fn anchor(mut self, a: usize, i: usize, value: Scalar) -> Self {
        let (r, n) = (self.rank, self.chart.dim());
        if self.in_range(a, r) && self.in_range(i, n) {
            self.anchor[a][i] = value;
        }
        self
    }

    /// Sets the whole anchor row of `e_a`.
    pub fn anchor_row(mut self, a: usize, row: Vec<Scalar>) -> Self {
        if row.len() != self.chart.dim() {
            self.error.get_or_insert(AlgebroidError::RankMismatch {
                expected: self.chart.dim(),
                found: row.len(),
            });
        } else if self.in_range(a, self.rank) {
            self.anchor[a] = row;
        }
        self
    }

    /// Sets `C^c_ab = value` and `C^c_ba = −value` (zero-based indices).
    pub fn bracket(mut self, a: usize, b: usize, c: usize, value: Scalar) -> Self {
        let r = self.rank;
        if self.in_range(a, r) && self.in_range(b, r) && self.in_range(c, r) {
            if a == b {
                if !value.is_zero() {
                    self.error.get_or_insert(AlgebroidError::DiagonalBracket { a: a + 1 });
                }
            } else {
                self.bracket[c][b][a] = value.neg();
                self.bracket[c][a][b] = value;
            }
        }
        self
    }

    pub fn labels(mut self, labels: Vec<String>) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn build(self) -> Result<Algebroid, AlgebroidError> {
        if let Some(e) = self.error {
            return Err(e);
        }
        if self.rank == 0 {
            return Err(AlgebroidError::ZeroRank);
        }
        let structure = Structure::new(self.chart.coords().to_vec(), self.anchor, self.bracket)?;
        let alg = Algebroid::from_structure(self.chart, structure)?;
        match self.labels {
            Some(l) => alg.with_labels(l),
            None => Ok(alg),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ComplexRational;

    fn cr(n: i64, d: i64) -> Scalar {
        Scalar::constant(ComplexRational::from_ratio(n, d))
    }
    use crate::expr::parse_scalar;

    fn tangent_r2() -> Algebroid {
        let chart = Chart::new("r2", &["x", "y"]).unwrap();
        Algebroid::builder(chart, 2)
            .anchor(0, 0, Scalar::one())
            .anchor(1, 1, Scalar::one())
            .build()
            .unwrap()
    }

    fn heisenberg(broken: bool) -> Algebroid {
        let chart = Chart::new("line", &["t"]).unwrap();
        let mut b = Algebroid::builder(chart, 4).bracket(0, 1, 2, Scalar::one());
        if broken {
            b = b.bracket(0, 2, 0, Scalar::one());
        }
        b.build().unwrap()
    }

    #[test]
    fn chart_rejects_bad_names() {
        assert!(matches!(Chart::new("c", &["x", "x"]), Err(AlgebroidError::DuplicateCoordinate(_))));
        assert!(matches!(Chart::new("c", &["i"]), Err(AlgebroidError::InvalidCoordinate(_))));
        assert!(matches!(Chart::new("c", &["sin"]), Err(AlgebroidError::InvalidCoordinate(_))));
        assert!(Chart::new("c", &[] as &[&str]).is_ok());
    }

    #[test]
    fn validation_examples() {
        assert!(tangent_r2().validate().valid());
        assert!(heisenberg(false).validate().valid());
        let report = heisenberg(true).validate();
        assert!(!report.valid());
        let f = report.jacobi.first_failure().unwrap();
        assert_eq!(f.at, vec![0, 1, 2, 2]);
        assert_eq!(f.value, Scalar::int(-1));
        assert_eq!(report.jacobi.failures.len(), 1);
    }

    #[test]
    fn bracket_examples() {
        let a = tangent_r2();
        let x = parse_scalar("x", a.chart()).unwrap();
        let s = a
            .bracket(&Section::basis(2, 0), &Section(vec![x, Scalar::zero()]))
            .unwrap();
        assert_eq!(s, Section::basis(2, 0));
        let h = heisenberg(false);
        assert_eq!(h.bracket(&Section::basis(4, 0), &Section::basis(4, 1)).unwrap(), Section::basis(4, 2));
    }

    #[test]
    fn anchor_push_examples() {
        let a = tangent_r2();
        let s = Section(vec![Scalar::coord("x"), Scalar::coord("y")]);
        assert_eq!(a.anchor_push(&s).unwrap().0, s.0);
        let h = heisenberg(false);
        assert!(h.anchor_push(&Section::from_ints(&[1, 2, 3, 4])).unwrap().0.iter().all(Scalar::is_zero));
        assert!(matches!(
            a.anchor_push(&Section::from_ints(&[1])),
            Err(AlgebroidError::RankMismatch { .. })
        ));
    }

    #[test]
    fn generic_rank_of_tangent_bundle() {
        assert_eq!(tangent_r2().generic_rank(42).unwrap().rank, 2);
        assert_eq!(heisenberg(false).generic_rank(42).unwrap().rank, 0);
    }

    #[test]
    fn builder_antisymmetrizes() {
        let h = heisenberg(false);
        assert_eq!(h.structure().c(2, 1, 0), &Scalar::int(-1));
        let chart = Chart::new("p", &[] as &[&str]).unwrap();
        let err = Algebroid::builder(chart, 2).bracket(0, 0, 1, Scalar::one()).build();
        assert!(matches!(err, Err(AlgebroidError::DiagonalBracket { .. })));
    }

    #[test]
    fn reframe_preserves_brackets() {
        let h = heisenberg(false);
        let rows = vec![
            vec![cr(1, 1), cr(1, 1), cr(0, 1), cr(0, 1)],
            vec![cr(0, 1), cr(1, 1), cr(0, 1), cr(0, 1)],
            vec![cr(0, 1), cr(0, 1), cr(2, 1), cr(0, 1)],
            vec![cr(0, 1), cr(0, 1), cr(0, 1), cr(1, 1)],
        ];
        let (s, _) = h.structure().reframe(&rows).unwrap();
        // [e1+e2, e2] = e3 = f3 / 2
        assert_eq!(s.c(2, 0, 1), &cr(1, 2));
        assert!(s.validate().valid());
    }
}
