//! Symbolic scalars over chart coordinates with exact complex-rational
//! constants.
//!
//! Every [`Scalar`] is kept as a reduced ratio of polynomials whose variables
//! are the coordinates and opaque transcendental atoms, so structural equality
//! decides equality inside that fragment.

mod eval;
mod number;
mod parse;
mod poly;
mod print;
mod random;
mod scalar;
mod zero;

pub use eval::{eval, eval_exact, eval_float, FloatPoint, Point, Value};
pub use number::ComplexRational;
pub use parse::{normalize, parse_tree, parse_with_coords, Expr};
pub use poly::{Atom, Func, Monomial, Poly, Var};
pub use random::{random_constant, random_poly, PolyShape};
pub use scalar::Scalar;
pub use zero::{is_zero, random_rational, sample_points, Sampling, Witness, ZeroStatus};

use crate::algebroid::Chart;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown identifier '{name}' at {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("division by zero{}", pos.map(|p| format!(" at {p}")).unwrap_or_default())]
    DivisionByZero { pos: Option<usize> },
    #[error("exponent at {pos} is not an integer constant")]
    NonIntegerExponent { pos: usize },
    #[error("log of zero")]
    LogOfZero,
    #[error("pole at {point}")]
    Pole { point: String },
    #[error("transcendental atom requires floating evaluation")]
    NeedsFloat,
    #[error("point does not assign coordinate '{0}'")]
    MissingCoordinate(String),
    #[error("coordinate '{0}' is not in the chart")]
    NotInChart(String),
    #[error("every sampled point hit a pole ({attempts} attempts)")]
    AllSamplesPoles { attempts: usize },
}

/// Parses `text` over the coordinates of `chart` into canonical form.
pub fn parse_scalar(text: &str, chart: &Chart) -> Result<Scalar, ExprError> {
    parse_with_coords(text, chart.coords())
}

/// Partial derivative with a chart-membership check.
pub fn differentiate(s: &Scalar, coord: &str, chart: &Chart) -> Result<Scalar, ExprError> {
    if !chart.coords().iter().any(|c| c == coord) {
        return Err(ExprError::NotInChart(coord.to_string()));
    }
    Ok(s.diff(coord))
}

/// Complex conjugation.
pub fn conjugate(s: &Scalar) -> Scalar {
    s.conj()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart() -> Chart {
        Chart::new("plane", &["x", "y"]).unwrap()
    }

    fn p(s: &str) -> Scalar {
        parse_scalar(s, &chart()).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(p("x^2 + 3/2*y").to_string(), "x^2 + 3/2*y");
        assert_eq!(p("i*i"), Scalar::int(-1));
        assert!(p("sin(x)/sin(x)").is_one());
    }

    #[test]
    fn derivative_examples() {
        let c = chart();
        assert_eq!(differentiate(&p("x^2*y"), "x", &c).unwrap(), p("2*x*y"));
        assert!(differentiate(&p("sin(x)"), "y", &c).unwrap().is_zero());
        assert_eq!(differentiate(&p("exp(2*x)"), "x", &c).unwrap(), p("2*exp(2*x)"));
        assert!(matches!(differentiate(&p("x"), "z", &c), Err(ExprError::NotInChart(_))));
    }

    #[test]
    fn transcendental_derivative_rules() {
        let c = chart();
        assert_eq!(differentiate(&p("sin(x)"), "x", &c).unwrap(), p("cos(x)"));
        assert_eq!(differentiate(&p("cos(x)"), "x", &c).unwrap(), p("-sin(x)"));
        assert_eq!(differentiate(&p("log(x^2+1)"), "x", &c).unwrap(), p("2*x/(x^2+1)"));
        assert_eq!(
            differentiate(&p("sqrt(x*y)"), "x", &c).unwrap(),
            p("y/(2*sqrt(x*y))")
        );
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(p("x + x"), p("2*x"));
        assert_eq!(p("(x^2-y^2)/(x-y)"), p("x+y"));
        assert!(p("sin(x)*cos(x) - cos(x)*sin(x)").is_zero());
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate(&p("i*x")), p("-i*x"));
        assert_eq!(conjugate(&p("3/2")), p("3/2"));
        assert_eq!(conjugate(&p("x - i*y")), p("x + i*y"));
        assert_eq!(conjugate(&p("exp(i*x)")), p("exp(-i*x)"));
    }

    #[test]
    fn folding_of_trivial_atoms() {
        assert!(p("sin(0)").is_zero());
        assert!(p("exp(x-x)").is_one());
        assert_eq!(p("sqrt(9/4)"), p("3/2"));
        assert!(p("sqrt(2)").has_atoms());
    }
}
