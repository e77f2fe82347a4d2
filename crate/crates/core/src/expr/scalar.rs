//! Canonical scalar expressions: reduced ratios of polynomials in chart
//! coordinates and transcendental atoms.

use super::number::ComplexRational;
use super::poly::{Atom, Func, Monomial, Poly, Var};
use super::ExprError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Frac {
    num: Poly,
    den: Poly,
}

/// Immutable scalar in canonical form.
///
/// The representation is `num / den` with `gcd(num, den) = 1` and `den` having
/// leading coefficient one, so structural equality is mathematical equality
/// inside the rational fragment (atoms count as independent variables).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar(Arc<Frac>);

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", self)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    fn raw(num: Poly, den: Poly) -> Scalar {
        Scalar(Arc::new(Frac { num, den }))
    }

    pub fn zero() -> Scalar {
        Self::raw(Poly::zero(), Poly::one())
    }

    pub fn one() -> Scalar {
        Self::int(1)
    }

    pub fn int(n: i64) -> Scalar {
        Self::constant(ComplexRational::from_int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Scalar {
        Self::constant(ComplexRational::from_ratio(n, d))
    }

    pub fn i() -> Scalar {
        Self::constant(ComplexRational::i())
    }

    pub fn constant(c: ComplexRational) -> Scalar {
        Self::raw(Poly::constant(c), Poly::one())
    }

    pub fn coord(name: &str) -> Scalar {
        Self::raw(Poly::var(Var::coord(name)), Poly::one())
    }

    pub fn from_poly(p: Poly) -> Scalar {
        Self::raw(p, Poly::one())
    }

    /// Builds `num / den` in canonical form.
    pub fn from_frac(num: Poly, den: Poly) -> Result<Scalar, ExprError> {
        if den.is_zero() {
            return Err(ExprError::DivisionByZero { pos: None });
        }
        if num.is_zero() {
            return Ok(Scalar::zero());
        }
        if let Some(c) = den.as_constant() {
            let inv = c.inv().expect("nonzero constant");
            return Ok(Self::raw(num.scale(&inv), Poly::one()));
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        };
        let lc = den.leading().expect("nonzero").1.clone();
        let inv = lc.inv().expect("nonzero leading coefficient");
        Ok(Self::raw(num.scale(&inv), den.scale(&inv)))
    }

    pub fn num(&self) -> &Poly {
        &self.0.num
    }

    pub fn den(&self) -> &Poly {
        &self.0.den
    }

    pub fn is_zero(&self) -> bool {
        self.0.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.den.is_one() && self.0.num.is_one()
    }

    pub fn as_constant(&self) -> Option<ComplexRational> {
        if self.0.den.is_one() {
            self.0.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.den.is_one()
    }

    /// True when every numeric coefficient is real and every atom argument is real.
    pub fn is_real(&self) -> bool {
        fn poly_real(p: &Poly) -> bool {
            p.terms().all(|(m, c)| {
                c.is_real()
                    && m.vars().all(|v| match v {
                        Var::Coord(_) => true,
                        Var::Atom(a) => a.arg.is_real(),
                    })
            })
        }
        poly_real(self.num()) && poly_real(self.den())
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (n1, d1, n2, d2) = (self.num(), self.den(), other.num(), other.den());
        if d1.is_one() && d2.is_one() {
            return Self::raw(n1.add(n2), Poly::one());
        }
        if d1 == d2 {
            return Self::from_frac(n1.add(n2), d1.clone()).expect("nonzero denominator");
        }
        let g = d1.gcd(d2);
        let (c1, c2) = (d1.div_exact(&g).expect("divides"), d2.div_exact(&g).expect("divides"));
        let num = n1.mul(&c2).add(&n2.mul(&c1));
        let den = d1.mul(&c2);
        Self::from_frac(num, den).expect("nonzero denominator")
    }

    pub fn neg(&self) -> Scalar {
        if self.is_zero() {
            return self.clone();
        }
        Self::raw(self.num().neg(), self.den().clone())
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let (n1, d1, n2, d2) = (self.num(), self.den(), other.num(), other.den());
        if d1.is_one() && d2.is_one() {
            return Self::raw(n1.mul(n2), Poly::one());
        }
        let g1 = n1.gcd(d2);
        let g2 = n2.gcd(d1);
        let a = n1.div_exact(&g1).expect("divides");
        let b = n2.div_exact(&g2).expect("divides");
        let c = d1.div_exact(&g2).expect("divides");
        let d = d2.div_exact(&g1).expect("divides");
        let num = a.mul(&b);
        let den = c.mul(&d);
        let lc = den.leading().expect("nonzero").1.clone();
        if lc.is_one() {
            Self::raw(num, den)
        } else {
            let inv = lc.inv().expect("nonzero");
            Self::raw(num.scale(&inv), den.scale(&inv))
        }
    }

    pub fn scale(&self, k: &ComplexRational) -> Scalar {
        if k.is_zero() || self.is_zero() {
            return Scalar::zero();
        }
        Self::raw(self.num().scale(k), self.den().clone())
    }

    pub fn inv(&self) -> Result<Scalar, ExprError> {
        Self::from_frac(self.den().clone(), self.num().clone())
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, ExprError> {
        Ok(self.mul(&other.inv()?))
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<Scalar, ExprError> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let e = e as u32;
        Ok(Self::raw(self.num().pow(e), self.den().pow(e)))
    }

    /// `func(self)` with exact folding of trivial values (`sin 0`, `exp 0`, `log 1`,
    /// square roots of rational squares); otherwise an opaque atom.
    pub fn apply(func: Func, arg: &Scalar) -> Result<Scalar, ExprError> {
        if let Some(c) = arg.as_constant() {
            match func {
                Func::Sin if c.is_zero() => return Ok(Scalar::zero()),
                Func::Cos | Func::Exp if c.is_zero() => return Ok(Scalar::one()),
                Func::Log if c.is_zero() => return Err(ExprError::LogOfZero),
                Func::Log if c.is_one() => return Ok(Scalar::zero()),
                Func::Sqrt => {
                    if let Some(r) = exact_sqrt(&c) {
                        return Ok(Scalar::constant(r));
                    }
                }
                _ => {}
            }
        }
        let atom = Atom { func, arg: arg.clone() };
        Ok(Self::raw(Poly::var(Var::Atom(Arc::new(atom))), Poly::one()))
    }

    /// All polynomial variables of numerator and denominator.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut v = self.num().vars();
        v.extend(self.den().vars());
        v
    }

    /// Every coordinate name occurring anywhere, including inside atoms.
    pub fn coords(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for v in self.vars() {
            match v {
                Var::Coord(n) => {
                    out.insert(n.to_string());
                }
                Var::Atom(a) => out.extend(a.arg.coords()),
            }
        }
        out
    }

    pub fn has_atoms(&self) -> bool {
        self.vars().iter().any(|v| matches!(v, Var::Atom(_)))
    }

    pub fn depends_on(&self, coord: &str) -> bool {
        self.vars().iter().any(|v| var_depends_on(v, coord))
    }

    /// Exact partial derivative with respect to a coordinate.
    pub fn diff(&self, coord: &str) -> Scalar {
        let vars = self.vars();
        let relevant: Vec<(Var, Scalar)> = vars
            .iter()
            .filter(|v| var_depends_on(v, coord))
            .map(|v| (v.clone(), var_derivative(v, coord)))
            .collect();
        if relevant.is_empty() {
            return Scalar::zero();
        }
        let dpoly = |p: &Poly| -> Scalar {
            let mut acc = Scalar::zero();
            for (v, dv) in &relevant {
                let part = p.partial(v);
                if !part.is_zero() {
                    acc = acc.add(&Scalar::from_poly(part).mul(dv));
                }
            }
            acc
        };
        let dn = dpoly(self.num());
        if self.den().is_one() {
            return dn;
        }
        let dd = dpoly(self.den());
        let n = Scalar::from_poly(self.num().clone());
        let d = Scalar::from_poly(self.den().clone());
        let top = dn.mul(&d).sub(&n.mul(&dd));
        top.checked_div(&d.mul(&d)).expect("nonzero denominator")
    }

    /// Complex conjugate: `i ↦ -i`; coordinates are real.
    pub fn conj(&self) -> Scalar {
        if self.is_real() {
            return self.clone();
        }
        let map = |v: &Var| -> Scalar {
            match v {
                Var::Coord(_) => Scalar::from_poly(Poly::var(v.clone())),
                Var::Atom(a) => Scalar::apply(a.func, &a.arg.conj()).expect("conjugate atom"),
            }
        };
        let n = rebuild(&self.num().conj_coeffs(), &map);
        let d = rebuild(&self.den().conj_coeffs(), &map);
        n.checked_div(&d).expect("nonzero denominator")
    }

    /// Real part `(s + conj s)/2`.
    pub fn re(&self) -> Scalar {
        self.add(&self.conj()).scale(&ComplexRational::from_ratio(1, 2))
    }

    /// Imaginary part `(s - conj s)/(2i)`.
    pub fn im(&self) -> Scalar {
        let half_inv_i = ComplexRational::new(BigRational::zero(), BigRational::new((-1).into(), 2.into()));
        self.sub(&self.conj()).scale(&half_inv_i)
    }

    /// Substitutes coordinates by scalars; unmapped coordinates are kept.
    pub fn substitute(&self, map: &BTreeMap<String, Scalar>) -> Result<Scalar, ExprError> {
        if map.is_empty() || !self.coords().iter().any(|c| map.contains_key(c)) {
            return Ok(self.clone());
        }
        let f = |v: &Var| -> Scalar {
            match v {
                Var::Coord(n) => map
                    .get(n.as_ref())
                    .cloned()
                    .unwrap_or_else(|| Scalar::from_poly(Poly::var(v.clone()))),
                Var::Atom(a) => {
                    let u = a.arg.substitute(map).unwrap_or_else(|_| a.arg.clone());
                    Scalar::apply(a.func, &u).unwrap_or_else(|_| Scalar::zero())
                }
            }
        };
        let n = rebuild(self.num(), &f);
        let d = rebuild(self.den(), &f);
        n.checked_div(&d)
    }

    /// Renames coordinates.
    pub fn rename(&self, names: &BTreeMap<String, String>) -> Scalar {
        let map: BTreeMap<String, Scalar> =
            names.iter().map(|(a, b)| (a.clone(), Scalar::coord(b))).collect();
        self.substitute(&map).expect("renaming cannot create poles")
    }
}

fn exact_sqrt(c: &ComplexRational) -> Option<ComplexRational> {
    if !c.is_real() || c.re.is_negative() {
        return None;
    }
    let n: &BigInt = c.re.numer();
    let d: &BigInt = c.re.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(ComplexRational::from_real(BigRational::new(rn, rd)))
    } else {
        None
    }
}

fn var_depends_on(v: &Var, coord: &str) -> bool {
    match v {
        Var::Coord(n) => n.as_ref() == coord,
        Var::Atom(a) => a.arg.depends_on(coord),
    }
}

fn var_derivative(v: &Var, coord: &str) -> Scalar {
    match v {
        Var::Coord(n) => {
            if n.as_ref() == coord {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        }
        Var::Atom(a) => {
            let u = &a.arg;
            let du = u.diff(coord);
            let outer = match a.func {
                Func::Sin => Scalar::apply(Func::Cos, u).expect("cos"),
                Func::Cos => Scalar::apply(Func::Sin, u).expect("sin").neg(),
                Func::Exp => Scalar::from_poly(Poly::var(v.clone())),
                Func::Log => u.inv().expect("log argument is nonzero"),
                Func::Sqrt => Scalar::from_poly(Poly::var(v.clone()))
                    .scale(&ComplexRational::from_int(2))
                    .inv()
                    .expect("sqrt atom is nonzero"),
            };
            outer.mul(&du)
        }
    }
}

/// Re-evaluates a polynomial with each variable replaced through `f`.
fn rebuild(p: &Poly, f: &dyn Fn(&Var) -> Scalar) -> Scalar {
    let mut cache: BTreeMap<Var, Scalar> = BTreeMap::new();
    let mut acc = Scalar::zero();
    for (m, c) in p.terms() {
        let mut t = Scalar::constant(c.clone());
        for (v, e) in &m.0 {
            let base = cache.entry(v.clone()).or_insert_with(|| f(v)).clone();
            t = t.mul(&base.pow(*e as i64).expect("nonnegative power"));
        }
        acc = acc.add(&t);
    }
    acc
}

impl Monomial {
    pub fn to_scalar(&self) -> Scalar {
        Scalar::from_poly(Poly::term(self.clone(), ComplexRational::one()))
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::add(self, rhs)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::sub(self, rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::mul(self, rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a.add(&b))
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::int(n)
    }
}

impl From<ComplexRational> for Scalar {
    fn from(c: ComplexRational) -> Scalar {
        Scalar::constant(c)
    }
}
