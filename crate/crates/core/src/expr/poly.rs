//! Sparse multivariate polynomials over [`ComplexRational`], with exact
//! division and a recursive primitive-PRS gcd.

use super::number::ComplexRational;
use super::scalar::Scalar;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// Registered transcendental functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    pub const ALL: [Func; 5] = [Func::Sin, Func::Cos, Func::Exp, Func::Log, Func::Sqrt];
}

/// An opaque transcendental atom `func(arg)` with a canonical argument.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub func: Func,
    pub arg: Scalar,
}

/// A polynomial variable: a chart coordinate or a transcendental atom.
/// Coordinates sort before atoms; coordinates sort by name.
#[derive(Clone, Debug)]
pub enum Var {
    Coord(Arc<str>),
    Atom(Arc<Atom>),
}

impl Var {
    pub fn coord(name: &str) -> Var {
        Var::Coord(Arc::from(name))
    }
}

impl PartialEq for Var {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Var {}

impl std::hash::Hash for Var {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match self {
            Var::Coord(name) => {
                0u8.hash(state);
                name.hash(state);
            }
            Var::Atom(atom) => {
                1u8.hash(state);
                atom.hash(state);
            }
        }
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Var::Coord(a), Var::Coord(b)) => a.cmp(b),
            (Var::Coord(_), Var::Atom(_)) => Ordering::Less,
            (Var::Atom(_), Var::Coord(_)) => Ordering::Greater,
            (Var::Atom(a), Var::Atom(b)) => {
                if Arc::ptr_eq(a, b) {
                    Ordering::Equal
                } else {
                    a.cmp(b)
                }
            }
        }
    }
}

/// A power product, stored as `(var, exponent)` pairs sorted by variable with
/// positive exponents. Ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| *e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: &Var) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < *v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == *v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v.clone(), e - f)),
                }
            } else {
                out.push((v.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Drops variable `v`, returning the remaining monomial and the exponent of `v`.
    pub fn split_off(&self, v: &Var) -> (Monomial, u32) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|(w, k)| {
                if w == v {
                    e = *k;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        (Monomial(rest), e)
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.0.iter().map(|(v, _)| v)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.degree().cmp(&other.degree());
        if d != Ordering::Equal {
            return d;
        }
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        i += 1;
                        j += 1;
                    }
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                },
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (None, None) => return Ordering::Equal,
            }
        }
    }
}

/// Sparse polynomial: map from monomial to nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, ComplexRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(ComplexRational::one())
    }

    pub fn constant(c: ComplexRational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: ComplexRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v), ComplexRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn as_constant(&self) -> Option<ComplexRational> {
        if self.is_zero() {
            Some(ComplexRational::zero())
        } else if self.terms.len() == 1 {
            self.terms.get(&Monomial::one()).cloned()
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &ComplexRational)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Monomial, &ComplexRational)> {
        self.terms.iter().next_back()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for v in m.vars() {
                out.insert(v.clone());
            }
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: ComplexRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (big, small) = if self.len() >= other.len() { (self, other) } else { (other, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn scale(&self, k: &ComplexRational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        if k.is_one() {
            return self.clone();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, k: &ComplexRational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(n, c)| (n.mul(m), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.inv()?));
        }
        let (ld, lc) = d.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let lc_inv = lc.inv()?;
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some((lm, lcr)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let t = lm.div(&ld)?;
            let k = &lcr * &lc_inv;
            r = r.sub(&d.mul_term(&t, &k));
            q.add_term(t, k);
        }
        Some(q)
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// Coefficients with respect to `v`: `self = Σ_k coeffs[k] v^k`.
    pub fn coeffs_in(&self, v: &Var) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let (rest, e) = m.split_off(v);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    fn from_coeffs_in(v: &Var, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let vk = if k == 0 {
                Monomial::one()
            } else {
                Monomial(vec![(v.clone(), k as u32)])
            };
            for (m, a) in &c.terms {
                out.add_term(m.mul(&vk), a.clone());
            }
        }
        out
    }

    /// Partial derivative with respect to a polynomial variable.
    pub fn partial(&self, v: &Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let reduced: Vec<(Var, u32)> = m
                .0
                .iter()
                .filter_map(|(w, k)| {
                    if w == v {
                        (k > &1).then(|| (w.clone(), k - 1))
                    } else {
                        Some((w.clone(), *k))
                    }
                })
                .collect();
            out.add_term(Monomial(reduced), c * &ComplexRational::from_int(e as i64));
        }
        out
    }

    pub fn conj_coeffs(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }

    /// Greatest common divisor, normalized to leading coefficient one
    /// (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        gcd(self, other)
    }
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }
    if a.len() == 1 {
        return monomial_gcd(a, b);
    }
    if b.len() == 1 {
        return monomial_gcd(b, a);
    }
    let va = a.vars();
    let vb = b.vars();
    if va.is_disjoint(&vb) {
        return Poly::one();
    }
    // A common factor only involves shared variables: strip the others via contents.
    if let Some(v) = va.difference(&vb).next() {
        return gcd(&content_in(a, v), b);
    }
    if let Some(v) = vb.difference(&va).next() {
        return gcd(a, &content_in(b, v));
    }
    if b.len() <= a.len() && a.div_exact(b).is_some() {
        return b.monic();
    }
    if a.len() < b.len() && b.div_exact(a).is_some() {
        return a.monic();
    }
    // A variable along which the univariate images are coprime cannot occur in the gcd.
    if let Some(v) = va.iter().find(|v| images_coprime(a, b, v)) {
        return gcd(&content_in(a, v), &content_in(b, v));
    }
    let v = va
        .iter()
        .min_by_key(|v| a.degree_in(v).max(b.degree_in(v)))
        .expect("nonconstant polynomial has a variable")
        .clone();
    let ca = content_in(a, &v);
    let cb = content_in(b, &v);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd(&ca, &cb);
    let g = prs_gcd(&pa, &pb, &v);
    c.mul(&g).monic()
}

/// Evaluates every variable except `v` at `point(var)`, giving coefficients in `v`.
fn image_in(p: &Poly, v: &Var, point: &dyn Fn(&Var) -> ComplexRational) -> Vec<ComplexRational> {
    let mut out = vec![ComplexRational::zero(); p.degree_in(v) as usize + 1];
    for (m, c) in p.terms() {
        let mut t = c.clone();
        let mut k = 0;
        for (w, e) in &m.0 {
            if w == v {
                k = *e as usize;
            } else {
                t = &t * &point(w).pow(*e);
            }
        }
        out[k] = &out[k] + &t;
    }
    out
}

fn trim(p: &mut Vec<ComplexRational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Degree of the gcd of two dense univariate polynomials.
fn univariate_gcd_degree(mut a: Vec<ComplexRational>, mut b: Vec<ComplexRational>) -> usize {
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let lb = b.last().expect("nonempty").inv().expect("nonzero leading coefficient");
        while a.len() >= b.len() {
            let q = a.last().expect("nonempty") * &lb;
            let shift = a.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                a[shift + i] = &a[shift + i] - &(&q * c);
            }
            a.pop();
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// True when specializing the other variables proves `v` absent from `gcd(a, b)`.
/// The image gcd bounds the true degree in `v` whenever both leading
/// coefficients survive the specialization.
fn images_coprime(a: &Poly, b: &Poly, v: &Var) -> bool {
    let la = a.coeffs_in(v).pop().expect("nonzero");
    let lb = b.coeffs_in(v).pop().expect("nonzero");
    let order: Vec<Var> = a.vars().union(&b.vars()).cloned().collect();
    for attempt in 0..3i64 {
        let point = |w: &Var| {
            let k = order.iter().position(|u| u == w).unwrap_or(0) as i64;
            ComplexRational::from_int(2 + (k * 7 + attempt * 11 + k * k * 3) % 29)
        };
        let ia = image_in(a, v, &point);
        let ib = image_in(b, v, &point);
        let ok = |l: &Poly| image_in(l, v, &point).iter().any(|c| !c.is_zero());
        if !ok(&la) || !ok(&lb) {
            continue;
        }
        return univariate_gcd_degree(ia, ib) == 0;
    }
    false
}

fn monomial_gcd(m: &Poly, p: &Poly) -> Poly {
    let (mono, _) = m.leading().expect("single term");
    let mut exps: Vec<(Var, u32)> = mono.0.clone();
    for (t, _) in p.terms() {
        for (v, e) in exps.iter_mut() {
            *e = (*e).min(t.exponent(v));
        }
    }
    exps.retain(|(_, e)| *e > 0);
    Poly::term(Monomial(exps), ComplexRational::one())
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
fn content_in(p: &Poly, v: &Var) -> Poly {
    let mut coeffs: Vec<Poly> = p.coeffs_in(v).into_iter().filter(|c| !c.is_zero()).collect();
    coeffs.sort_by_key(|c| c.len());
    let mut g = Poly::zero();
    for c in coeffs {
        g = gcd(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_in(p: &Poly, v: &Var) -> Poly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides").monic()
}

fn prs_gcd(a: &Poly, b: &Poly, v: &Var) -> Poly {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    loop {
        let r = pseudo_rem(&a, &b, v);
        if r.is_zero() {
            return primitive_in(&b, v);
        }
        if r.degree_in(v) == 0 {
            return Poly::one();
        }
        a = b;
        b = primitive_in(&r, v);
    }
}

fn pseudo_rem(a: &Poly, b: &Poly, v: &Var) -> Poly {
    let bc = b.coeffs_in(v);
    let db = bc.len() - 1;
    let lb = bc[db].clone();
    let mut r = a.clone();
    loop {
        let rc = r.coeffs_in(v);
        let dr = rc.len() - 1;
        if r.is_zero() || dr < db {
            return r;
        }
        let lr = rc[dr].clone();
        let shift = Poly::from_coeffs_in(
            v,
            &std::iter::repeat_n(Poly::zero(), dr - db)
                .chain(std::iter::once(lr))
                .collect::<Vec<_>>(),
        );
        r = lb.mul(&r).sub(&shift.mul(b));
    }
}
