use super::ConstructionError;
use crate::algebroid::matrix::{self, Matrix};
use crate::algebroid::{Algebroid, Chart, Section, Structure};
use crate::check::Check;
use crate::expr::Scalar;
use crate::jstruct::EndoField;

/// Restriction of a trivial ambient bundle of rank `r` through a projector.
///
/// The ambient bundle carries the flat derivative of `R^r`-valued functions;
/// `ambient_anchor[a]` is the chart vector field of the ambient frame
/// element `e_a` on the image of the projector.
#[derive(Clone, Debug)]
pub struct ProjectorRestriction {
    pub algebroid: Algebroid,
    /// `projector[b][a]`: component `b` of `Π e_a`.
    pub projector: Matrix,
    pub j: Option<EndoField>,
    /// `Π ∘ J = J ∘ Π`, when an ambient `J` is present.
    pub commutes_with_j: Option<bool>,
}

impl ProjectorRestriction {
    fn st(&self) -> &Structure {
        self.algebroid.structure()
    }

    pub fn project(&self, s: &Section) -> Section {
        Section(matrix::times_col(&self.projector, &s.0))
    }

    /// `[X, Y]` of `R^r`-valued functions along the induced anchor.
    pub fn ambient_bracket(&self, x: &Section, y: &Section) -> Section {
        let st = self.st();
        Section(
            (0..x.rank())
                .map(|c| st.derive_along(x, &y.0[c]).sub(&st.derive_along(y, &x.0[c])))
                .collect(),
        )
    }

    /// `Π[s1,s2] − [Πs1, Πs2]` with the induced bracket on the left.
    pub fn flatness_residual(&self, s1: &Section, s2: &Section) -> Result<Section, ConstructionError> {
        let induced = self.project(&self.algebroid.bracket(s1, s2)?);
        let ambient = self.ambient_bracket(&self.project(s1), &self.project(s2));
        Ok(induced.sub(&ambient))
    }

    /// `Π[s1', s2']' − [Πs1, Πs2]` where `[,]'` brackets the constant
    /// extensions of frame sections in the ambient bundle (always zero).
    pub fn extension_residual(&self, a: usize, b: usize) -> Section {
        let r = self.algebroid.rank();
        let ambient = self.ambient_bracket(
            &self.project(&Section::basis(r, a)),
            &self.project(&Section::basis(r, b)),
        );
        ambient.neg()
    }
}

/// Builds the restricted algebroid with anchor `ρ∘Π` and bracket
/// `[Πe_a, Πe_b]` on the frame.
pub fn projector_restriction(
    chart: Chart,
    projector: Matrix,
    ambient_anchor: Vec<Vec<Scalar>>,
    ambient_j: Option<EndoField>,
) -> Result<ProjectorRestriction, ConstructionError> {
    let r = projector.len();
    let n = chart.dim();
    if projector.iter().any(|row| row.len() != r) {
        return Err(ConstructionError::Shape(format!("projector must be {r}x{r}")));
    }
    if ambient_anchor.len() != r || ambient_anchor.iter().any(|row| row.len() != n) {
        return Err(ConstructionError::Shape(format!("ambient anchor must be {r}x{n}")));
    }
    let sq = matrix::mul(&projector, &projector);
    for b in 0..r {
        for a in 0..r {
            let value = sq[b][a].sub(&projector[b][a]);
            if !value.is_zero() {
                return Err(ConstructionError::NotIdempotent { row: b, col: a, value });
            }
        }
    }
    let anchor: Vec<Vec<Scalar>> = (0..r)
        .map(|a| {
            (0..n)
                .map(|i| {
                    (0..r)
                        .filter(|&b| !projector[b][a].is_zero())
                        .map(|b| projector[b][a].mul(&ambient_anchor[b][i]))
                        .sum()
                })
                .collect()
        })
        .collect();
    let provisional = Structure::new(
        chart.coords().to_vec(),
        anchor.clone(),
        vec![vec![vec![Scalar::zero(); r]; r]; r],
    )?;
    let mut bracket = vec![vec![vec![Scalar::zero(); r]; r]; r];
    for a in 0..r {
        for b in a + 1..r {
            for c in 0..r {
                let v = provisional
                    .derive(a, &projector[c][b])
                    .sub(&provisional.derive(b, &projector[c][a]));
                bracket[c][b][a] = v.neg();
                bracket[c][a][b] = v;
            }
        }
    }
    let structure = Structure::new(chart.coords().to_vec(), anchor, bracket)?;
    let algebroid = Algebroid::from_structure(chart, structure)?;
    let commutes_with_j = ambient_j.as_ref().map(|j| {
        let pj = matrix::mul(&projector, j.matrix());
        let jp = matrix::mul(j.matrix(), &projector);
        pj == jp
    });
    Ok(ProjectorRestriction {
        algebroid,
        projector,
        j: ambient_j,
        commutes_with_j,
    })
}

/// Residuals `Π[e_a,e_b] − [Πe_a,Πe_b]` on frame pairs.
pub fn flatness_check(pr: &ProjectorRestriction) -> Result<Check, ConstructionError> {
    let r = pr.algebroid.rank();
    let mut check = Check::new("projector_flatness");
    for a in 0..r {
        for b in a + 1..r {
            let res = pr.flatness_residual(&Section::basis(r, a), &Section::basis(r, b))?;
            for (c, v) in res.0.into_iter().enumerate() {
                check.record(&[a, b, c], v);
            }
        }
    }
    Ok(check)
}
