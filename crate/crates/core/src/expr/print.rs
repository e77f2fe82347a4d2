//! Deterministic printer emitting the parser's grammar.

use super::poly::{Monomial, Poly, Var};
use super::scalar::Scalar;
use std::fmt;

fn monomial_str(m: &Monomial) -> String {
    m.0.iter()
        .map(|(v, e)| {
            let base = match v {
                Var::Coord(n) => n.to_string(),
                Var::Atom(a) => format!("{}({})", a.func.name(), a.arg),
            };
            if *e == 1 {
                base
            } else {
                format!("{base}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Terms from the leading (highest) monomial down.
fn poly_str(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().rev().enumerate() {
        let term = if m.is_one() {
            c.to_string()
        } else if c.is_one() {
            monomial_str(m)
        } else if (-c).is_one() {
            format!("-{}", monomial_str(m))
        } else {
            format!("{}*{}", c, monomial_str(m))
        };
        if k == 0 {
            out.push_str(&term);
        } else if let Some(rest) = term.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&term);
        }
    }
    out
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = poly_str(self.num());
        if self.den().is_one() {
            return write!(f, "{n}");
        }
        let n = if self.num().len() > 1 { format!("({n})") } else { n };
        let d = self.den();
        let single_factor = d.len() == 1 && d.leading().is_some_and(|(m, _)| m.0.len() == 1);
        let ds = poly_str(d);
        if single_factor {
            write!(f, "{n}/{ds}")
        } else {
            write!(f, "{n}/({ds})")
        }
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::parse::parse_with_coords;

    fn p(s: &str) -> String {
        parse_with_coords(s, &["x".to_string(), "y".to_string()])
            .unwrap()
            .to_string()
    }

    #[test]
    fn prints_sorted_terms() {
        assert_eq!(p("3/2*y + x^2"), "x^2 + 3/2*y");
        assert_eq!(p("y - x"), "-x + y");
        assert_eq!(p("i*i"), "-1");
        assert_eq!(p("1/(x*y)"), "1/(x*y)");
        assert_eq!(p("(x+1)/x^2"), "(x + 1)/x^2");
        assert_eq!(p("(1+2*i)*x"), "(1 + 2*i)*x");
        assert_eq!(p("sin(2*x)^2"), "sin(2*x)^2");
    }
}
