//! Recursive-descent parser for the scalar expression grammar.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' unary)?
//! atom  := integer | ident | ident '(' expr ')' | '(' expr ')'
//! ```

use super::number::ComplexRational;
use super::poly::Func;
use super::scalar::Scalar;
use super::ExprError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

/// Raw syntax tree, before normalization.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(ComplexRational),
    Coord(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, Box<Expr>, usize),
    Call(Func, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().expect("digits")), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if "+-*/^".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else if c == '(' {
            out.push((Tok::LParen, i));
            i += 1;
        } else if c == ')' {
            out.push((Tok::RParen, i));
            i += 1;
        } else {
            return Err(ExprError::Syntax {
                pos: i,
                message: format!("unexpected character '{c}'"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    coords: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        self.at += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.bump();
            let rhs = self.term()?;
            lhs = if c == '+' {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            let pos = self.pos();
            self.bump();
            let rhs = self.unary()?;
            lhs = if c == '*' {
                Expr::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Div(Box::new(lhs), Box::new(rhs), pos)
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Op('+')) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            let pos = self.pos();
            self.bump();
            let exp = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp), pos));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Expr::Num(ComplexRational::from_real(BigRational::from_integer(n)))),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                if let Some(Tok::LParen) = self.peek() {
                    let func = Func::from_name(&name).ok_or_else(|| ExprError::UnknownIdentifier {
                        name: name.clone(),
                        pos,
                    })?;
                    self.bump();
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                if name == "i" {
                    Ok(Expr::Num(ComplexRational::i()))
                } else if self.coords.contains(&name) {
                    Ok(Expr::Coord(name))
                } else {
                    Err(ExprError::UnknownIdentifier { name, pos })
                }
            }
            Some(t) => Err(ExprError::Syntax {
                pos,
                message: format!("unexpected token {}", describe(&t)),
            }),
            None => Err(ExprError::Syntax {
                pos,
                message: "unexpected end of input".into(),
            }),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ExprError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::RParen) => Ok(()),
            _ => Err(ExprError::Syntax {
                pos,
                message: "expected ')'".into(),
            }),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("'{n}'"),
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Op(c) => format!("'{c}'"),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
    }
}

/// Parses text into a raw tree. Identifiers must be among `coords`, `i`, or a
/// registered function name followed by `(`.
pub fn parse_tree(text: &str, coords: &[String]) -> Result<Expr, ExprError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.chars().count(),
        coords,
    };
    let e = p.expr()?;
    if p.at < p.toks.len() {
        let pos = p.pos();
        let t = p.bump().expect("token present");
        return Err(ExprError::Syntax {
            pos,
            message: format!("unexpected token {}", describe(&t)),
        });
    }
    Ok(e)
}

/// Reduces a raw tree to canonical form.
pub fn normalize(e: &Expr) -> Result<Scalar, ExprError> {
    Ok(match e {
        Expr::Num(c) => Scalar::constant(c.clone()),
        Expr::Coord(n) => Scalar::coord(n),
        Expr::Neg(a) => normalize(a)?.neg(),
        Expr::Add(a, b) => normalize(a)?.add(&normalize(b)?),
        Expr::Sub(a, b) => normalize(a)?.sub(&normalize(b)?),
        Expr::Mul(a, b) => normalize(a)?.mul(&normalize(b)?),
        Expr::Div(a, b, pos) => {
            let d = normalize(b)?;
            if d.is_zero() {
                return Err(ExprError::DivisionByZero { pos: Some(*pos) });
            }
            normalize(a)?.checked_div(&d)?
        }
        Expr::Pow(a, b, pos) => {
            let exp = normalize(b)?;
            let k = exp
                .as_constant()
                .and_then(|c| c.as_integer())
                .and_then(|n| n.to_i64())
                .ok_or(ExprError::NonIntegerExponent { pos: *pos })?;
            let base = normalize(a)?;
            if k < 0 && base.is_zero() {
                return Err(ExprError::DivisionByZero { pos: Some(*pos) });
            }
            base.pow(k)?
        }
        Expr::Call(f, a) => Scalar::apply(*f, &normalize(a)?)?,
    })
}

/// Parses and normalizes an expression over the given coordinates.
pub fn parse_with_coords(text: &str, coords: &[String]) -> Result<Scalar, ExprError> {
    normalize(&parse_tree(text, coords)?)
}

impl Scalar {
    /// A raw tree whose normalization is `self`.
    pub fn to_expr(&self) -> Expr {
        use super::poly::{Poly, Var};
        fn poly_expr(p: &Poly) -> Expr {
            let mut acc: Option<Expr> = None;
            for (m, c) in p.terms().rev() {
                let mut t = Expr::Num(c.clone());
                for (v, e) in &m.0 {
                    let base = match v {
                        Var::Coord(n) => Expr::Coord(n.to_string()),
                        Var::Atom(a) => Expr::Call(a.func, Box::new(a.arg.to_expr())),
                    };
                    let f = if *e == 1 {
                        base
                    } else {
                        Expr::Pow(
                            Box::new(base),
                            Box::new(Expr::Num(ComplexRational::from_int(*e as i64))),
                            0,
                        )
                    };
                    t = Expr::Mul(Box::new(t), Box::new(f));
                }
                acc = Some(match acc {
                    None => t,
                    Some(a) => Expr::Add(Box::new(a), Box::new(t)),
                });
            }
            acc.unwrap_or(Expr::Num(ComplexRational::zero()))
        }
        let n = poly_expr(self.num());
        if self.den().is_one() {
            n
        } else {
            Expr::Div(Box::new(n), Box::new(poly_expr(self.den())), 0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn power_is_right_associative_and_binds_tightest() {
        let s = parse_with_coords("2^3^2", &xy()).unwrap();
        assert_eq!(s, Scalar::int(512));
        let t = parse_with_coords("-x^2", &xy()).unwrap();
        assert_eq!(t, Scalar::coord("x").mul(&Scalar::coord("x")).neg());
    }

    #[test]
    fn errors_carry_positions() {
        match parse_with_coords("x + z", &xy()) {
            Err(ExprError::UnknownIdentifier { name, pos }) => {
                assert_eq!(name, "z");
                assert_eq!(pos, 4);
            }
            other => panic!("unexpected {other:?}"),
        }
        match parse_with_coords("x / (y - y)", &xy()) {
            Err(ExprError::DivisionByZero { pos: Some(2) }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_with_coords("x +", &xy()),
            Err(ExprError::Syntax { pos: 3, .. })
        ));
        assert!(matches!(
            parse_with_coords("x^y", &xy()),
            Err(ExprError::NonIntegerExponent { .. })
        ));
        assert!(matches!(
            parse_with_coords("foo(x)", &xy()),
            Err(ExprError::UnknownIdentifier { .. })
        ));
    }

    #[test]
    fn negative_exponents_invert() {
        let s = parse_with_coords("x^-2 * x^2", &xy()).unwrap();
        assert!(s.is_one());
    }
}
