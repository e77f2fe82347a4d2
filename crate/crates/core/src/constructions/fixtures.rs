//! The built-in fixture catalog.

use super::projector::{projector_restriction, ProjectorRestriction};
use super::{direct_product, prolong, ConstructionError};
use crate::algebroid::matrix::{self, Matrix};
use crate::algebroid::{Algebroid, Chart, Section};
use crate::expr::{parse_with_coords, Scalar};
use crate::jstruct::EndoField;

/// An algebroid with optional almost complex structure and metric.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub algebroid: Algebroid,
    pub j: Option<EndoField>,
    /// `metric[a][b] = g(e_a, e_b)`.
    pub metric: Option<Matrix>,
}

/// Base names accepted by [`fixture`]; composite names are built from them.
pub const BASE_NAMES: [&str; 7] = [
    "flat_r2",
    "flat_r4",
    "heis_j",
    "heis_broken",
    "warped_r4",
    "conformal_sphere_chart",
    "s3_projector",
];

/// The six valid fixtures of the standard suite.
pub const SUITE: [&str; 6] = [
    "flat_r2",
    "flat_r4",
    "heis_j",
    "warped_r4",
    "conformal_sphere_chart",
    "s3_projector",
];

fn p(text: &str, coords: &[&str]) -> Scalar {
    let coords: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
    parse_with_coords(text, &coords).expect("catalog expressions parse")
}

/// `J e_{2k} = e_{2k+1}` on consecutive pairs.
pub fn standard_j(rank: usize) -> EndoField {
    let mut images = Vec::with_capacity(rank);
    for k in 0..rank / 2 {
        images.push(Section::basis(rank, 2 * k + 1));
        images.push(Section::basis(rank, 2 * k).neg());
    }
    EndoField::from_images(&images).expect("square")
}

fn diagonal(entries: Vec<Scalar>) -> Matrix {
    let n = entries.len();
    let mut m = matrix::zeros(n, n);
    for (k, v) in entries.into_iter().enumerate() {
        m[k][k] = v;
    }
    m
}

fn tangent(name: &str, coords: &[&str]) -> Result<Algebroid, ConstructionError> {
    let chart = Chart::new(name, coords)?;
    let n = coords.len();
    let mut b = Algebroid::builder(chart, n);
    for k in 0..n {
        b = b.anchor(k, k, Scalar::one());
    }
    Ok(b.build()?)
}

fn flat_r2() -> Result<Fixture, ConstructionError> {
    Ok(Fixture {
        name: "flat_r2".into(),
        algebroid: tangent("flat_r2", &["x", "y"])?,
        j: Some(standard_j(2)),
        metric: Some(matrix::identity(2)),
    })
}

fn flat_r4() -> Result<Fixture, ConstructionError> {
    Ok(Fixture {
        name: "flat_r4".into(),
        algebroid: tangent("flat_r4", &["x1", "x2", "x3", "x4"])?,
        j: Some(standard_j(4)),
        metric: Some(matrix::identity(4)),
    })
}

/// Heisenberg algebra plus a central line over a one-dimensional chart.
pub fn heisenberg() -> Result<Algebroid, ConstructionError> {
    let chart = Chart::new("heis", &["t"])?;
    Ok(Algebroid::builder(chart, 4).bracket(0, 1, 2, Scalar::one()).build()?)
}

/// A non-integrable almost complex structure on the Heisenberg algebroid,
/// with a compatible metric.
fn heis_j() -> Result<Fixture, ConstructionError> {
    let ints = |v: [i64; 4]| Section::from_ints(&v);
    let j = EndoField::from_images(&[
        ints([1, 0, 2, 0]),
        ints([0, -1, 0, 1]),
        ints([-1, 0, -1, 0]),
        ints([0, -2, 0, 1]),
    ])?;
    let g: Matrix = [[2, 0, -1, 0], [0, 1, 0, 1], [-1, 0, 1, 0], [0, 1, 0, 2]]
        .iter()
        .map(|row| row.iter().map(|&v| Scalar::int(v)).collect())
        .collect();
    Ok(Fixture {
        name: "heis_j".into(),
        algebroid: heisenberg()?,
        j: Some(j),
        metric: Some(g),
    })
}

/// The Heisenberg data with an extra bracket that breaks the Jacobi identity.
fn heis_broken() -> Result<Fixture, ConstructionError> {
    let chart = Chart::new("heis_broken", &["t"])?;
    let algebroid = Algebroid::builder(chart, 4)
        .bracket(0, 1, 2, Scalar::one())
        .bracket(0, 2, 0, Scalar::one())
        .build()?;
    Ok(Fixture {
        name: "heis_broken".into(),
        algebroid,
        j: None,
        metric: None,
    })
}

/// `g = diag(f, f, 1, 1)` with `f = 1 + (x3)²` on the tangent algebroid.
fn warped_r4() -> Result<Fixture, ConstructionError> {
    let c = ["x1", "x2", "x3", "x4"];
    let f = p("1 + x3^2", &c);
    let j = EndoField::from_images(&[
        Section::basis(4, 1).neg(),
        Section::basis(4, 0),
        Section::basis(4, 3).neg(),
        Section::basis(4, 2),
    ])?;
    Ok(Fixture {
        name: "warped_r4".into(),
        algebroid: tangent("warped_r4", &c)?,
        j: Some(j),
        metric: Some(diagonal(vec![f.clone(), f, Scalar::one(), Scalar::one()])),
    })
}

/// The round metric `4/(1+x²+y²)² (dx² + dy²)` on a stereographic chart.
fn conformal_sphere_chart() -> Result<Fixture, ConstructionError> {
    let c = ["x", "y"];
    let lambda = p("4/(1 + x^2 + y^2)^2", &c);
    Ok(Fixture {
        name: "conformal_sphere_chart".into(),
        algebroid: tangent("conformal_sphere_chart", &c)?,
        j: Some(standard_j(2)),
        metric: Some(diagonal(vec![lambda.clone(), lambda])),
    })
}

/// Stereographic embedding `p(u)` of the unit three-sphere in `R^4`.
pub fn s3_embedding() -> Vec<Scalar> {
    let c = ["u1", "u2", "u3"];
    let r2 = "(u1^2 + u2^2 + u3^2)";
    vec![
        p(&format!("2*u1/(1 + {r2})"), &c),
        p(&format!("2*u2/(1 + {r2})"), &c),
        p(&format!("2*u3/(1 + {r2})"), &c),
        p(&format!("({r2} - 1)/({r2} + 1)"), &c),
    ]
}

/// The rank-4 trivial bundle over `S^3` restricted through the orthogonal
/// tangential projector, with the canonical `J` of `C^2`.
pub fn s3_restriction() -> Result<ProjectorRestriction, ConstructionError> {
    let chart = Chart::new("s3_projector", &["u1", "u2", "u3"])?;
    let pts = s3_embedding();
    let projector: Matrix = (0..4)
        .map(|b| {
            (0..4)
                .map(|a| {
                    let pp = pts[b].mul(&pts[a]);
                    if a == b {
                        Scalar::one().sub(&pp)
                    } else {
                        pp.neg()
                    }
                })
                .collect()
        })
        .collect();
    let lambda_inv = p("(1 + u1^2 + u2^2 + u3^2)^2/4", &["u1", "u2", "u3"]);
    let ambient_anchor: Vec<Vec<Scalar>> = (0..4)
        .map(|a| {
            chart
                .coords()
                .iter()
                .map(|u| pts[a].diff(u).mul(&lambda_inv))
                .collect()
        })
        .collect();
    projector_restriction(chart, projector, ambient_anchor, Some(standard_j(4)))
}

fn s3_projector() -> Result<Fixture, ConstructionError> {
    let pr = s3_restriction()?;
    Ok(Fixture {
        name: "s3_projector".into(),
        algebroid: pr.algebroid,
        j: pr.j,
        metric: Some(matrix::identity(4)),
    })
}

fn split_args(inner: &str) -> Option<(&str, &str)> {
    let mut depth = 0usize;
    for (k, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.checked_sub(1)?,
            ',' if depth == 0 => return Some((inner[..k].trim(), inner[k + 1..].trim())),
            _ => {}
        }
    }
    None
}

/// Looks up a catalog entry, including `prolong(<name>)` and
/// `product(<name>,<name>)`.
pub fn fixture(name: &str) -> Result<Fixture, ConstructionError> {
    let name = name.trim();
    if let Some(inner) = name.strip_prefix("prolong(").and_then(|s| s.strip_suffix(')')) {
        let base = fixture(inner)?;
        let pro = prolong(&base.algebroid)?;
        let j = match &base.j {
            Some(j) => Some(pro.complete_lift_endo(j)?),
            None => None,
        };
        let metric = base.metric.as_ref().map(|g| pro.complete_lift_metric(g));
        return Ok(Fixture {
            name: name.to_string(),
            algebroid: pro.algebroid,
            j,
            metric,
        });
    }
    if let Some(inner) = name.strip_prefix("product(").and_then(|s| s.strip_suffix(')')) {
        let (a, b) = split_args(inner).ok_or_else(|| ConstructionError::UnknownFixture(name.to_string()))?;
        let (fa, fb) = (fixture(a)?, fixture(b)?);
        let prod = direct_product(&fa.algebroid, &fb.algebroid, name)?;
        let j = match (&fa.j, &fb.j) {
            (Some(x), Some(y)) => Some(prod.product_endo(x, y)?),
            _ => None,
        };
        let metric = match (&fa.metric, &fb.metric) {
            (Some(x), Some(y)) => Some(prod.product_metric(x, y)),
            _ => None,
        };
        return Ok(Fixture {
            name: name.to_string(),
            algebroid: prod.algebroid,
            j,
            metric,
        });
    }
    match name {
        "flat_r2" => flat_r2(),
        "flat_r4" => flat_r4(),
        "heis_j" => heis_j(),
        "heis_broken" => heis_broken(),
        "warped_r4" => warped_r4(),
        "conformal_sphere_chart" => conformal_sphere_chart(),
        "s3_projector" => s3_projector(),
        _ => Err(ConstructionError::UnknownFixture(name.to_string())),
    }
}
