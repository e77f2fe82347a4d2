//! Exact and floating evaluation at points.

use super::number::ComplexRational;
use super::poly::{Func, Poly, Var};
use super::scalar::Scalar;
use super::ExprError;
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Coordinate assignment with exact rational values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Point(pub BTreeMap<String, ComplexRational>);

impl Point {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, coord: &str, value: ComplexRational) -> Self {
        self.0.insert(coord.to_string(), value);
        self
    }

    pub fn to_float(&self) -> FloatPoint {
        FloatPoint(self.0.iter().map(|(k, v)| (k.clone(), v.to_complex64())).collect())
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Coordinate assignment with floating values.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FloatPoint(pub BTreeMap<String, Complex64>);

/// Result of evaluation: exact when no transcendental atom is involved.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(ComplexRational),
    Float(Complex64),
}

impl Value {
    pub fn to_complex64(&self) -> Complex64 {
        match self {
            Value::Exact(c) => c.to_complex64(),
            Value::Float(z) => *z,
        }
    }
}

fn missing(name: &str) -> ExprError {
    ExprError::MissingCoordinate(name.to_string())
}

fn poly_exact(p: &Poly, pt: &Point) -> Result<ComplexRational, ExprError> {
    let mut acc = ComplexRational::zero();
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for (v, e) in &m.0 {
            let x = match v {
                Var::Coord(n) => pt.0.get(n.as_ref()).ok_or_else(|| missing(n))?,
                Var::Atom(_) => return Err(ExprError::NeedsFloat),
            };
            t = &t * &x.pow(*e);
        }
        acc = &acc + &t;
    }
    Ok(acc)
}

/// Exact evaluation; fails with `NeedsFloat` when atoms are present.
pub fn eval_exact(s: &Scalar, pt: &Point) -> Result<ComplexRational, ExprError> {
    let d = poly_exact(s.den(), pt)?;
    if d.is_zero() {
        return Err(ExprError::Pole { point: pt.to_string() });
    }
    let n = poly_exact(s.num(), pt)?;
    Ok(n.checked_div(&d).expect("nonzero"))
}

fn apply_float(f: Func, z: Complex64) -> Complex64 {
    match f {
        Func::Sin => z.sin(),
        Func::Cos => z.cos(),
        Func::Exp => z.exp(),
        Func::Log => z.ln(),
        Func::Sqrt => z.sqrt(),
    }
}

fn poly_float(p: &Poly, pt: &FloatPoint) -> Result<Complex64, ExprError> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (m, c) in p.terms() {
        let mut t = c.to_complex64();
        for (v, e) in &m.0 {
            let x = match v {
                Var::Coord(n) => *pt.0.get(n.as_ref()).ok_or_else(|| missing(n))?,
                Var::Atom(a) => apply_float(a.func, eval_float(&a.arg, pt)?),
            };
            t *= x.powu(*e);
        }
        acc += t;
    }
    if !acc.re.is_finite() || !acc.im.is_finite() {
        return Err(ExprError::Pole { point: format!("{:?}", pt.0) });
    }
    Ok(acc)
}

/// Floating evaluation.
pub fn eval_float(s: &Scalar, pt: &FloatPoint) -> Result<Complex64, ExprError> {
    let d = poly_float(s.den(), pt)?;
    if d.norm() == 0.0 {
        return Err(ExprError::Pole { point: format!("{:?}", pt.0) });
    }
    let n = poly_float(s.num(), pt)?;
    let v = n / d;
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(ExprError::Pole { point: format!("{:?}", pt.0) });
    }
    Ok(v)
}

/// Exact when possible, floating when atoms force it.
pub fn eval(s: &Scalar, pt: &Point) -> Result<Value, ExprError> {
    if s.has_atoms() {
        eval_float(s, &pt.to_float()).map(Value::Float)
    } else {
        eval_exact(s, pt).map(Value::Exact)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse::parse_with_coords;

    fn xy() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn exact_values() {
        let s = parse_with_coords("x^2 + y", &xy()).unwrap();
        let p = Point::new()
            .with("x", ComplexRational::from_int(2))
            .with("y", ComplexRational::from_int(1));
        assert_eq!(eval(&s, &p).unwrap(), Value::Exact(ComplexRational::from_int(5)));
        let t = parse_with_coords("i*x", &xy()).unwrap();
        let q = Point::new().with("x", ComplexRational::from_int(3));
        assert_eq!(
            eval(&t, &q).unwrap(),
            Value::Exact(&ComplexRational::from_int(3) * &ComplexRational::i())
        );
    }

    #[test]
    fn pole_is_reported() {
        let s = parse_with_coords("1/x", &xy()).unwrap();
        let p = Point::new().with("x", ComplexRational::zero());
        assert!(matches!(eval(&s, &p), Err(ExprError::Pole { .. })));
    }

    #[test]
    fn atoms_force_float() {
        let s = parse_with_coords("sin(x)", &xy()).unwrap();
        let p = Point::new().with("x", ComplexRational::from_int(1));
        match eval(&s, &p).unwrap() {
            Value::Float(z) => assert!((z.re - 1f64.sin()).abs() < 1e-15),
            v => panic!("expected float, got {v:?}"),
        }
    }
}
