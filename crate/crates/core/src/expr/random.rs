//! Reproducible random scalars for property checks.

use super::number::ComplexRational;
use super::scalar::Scalar;
use rand::Rng;

/// Shape of generated polynomials.
#[derive(Clone, Copy, Debug)]
pub struct PolyShape {
    pub terms: usize,
    pub max_degree: u32,
    pub coef_bound: i64,
}

impl Default for PolyShape {
    fn default() -> Self {
        PolyShape {
            terms: 3,
            max_degree: 2,
            coef_bound: 5,
        }
    }
}

/// A random polynomial with small integer coefficients over `coords`.
pub fn random_poly<R: Rng>(rng: &mut R, coords: &[String], shape: PolyShape) -> Scalar {
    let mut acc = Scalar::zero();
    for _ in 0..shape.terms.max(1) {
        let c = rng.gen_range(-shape.coef_bound..=shape.coef_bound);
        let mut t = Scalar::int(c);
        if !coords.is_empty() {
            let deg = rng.gen_range(0..=shape.max_degree);
            for _ in 0..deg {
                let k = rng.gen_range(0..coords.len());
                t = t.mul(&Scalar::coord(&coords[k]));
            }
        }
        acc = acc.add(&t);
    }
    acc
}

/// A random nonzero rational constant with bounded numerator and denominator.
pub fn random_constant<R: Rng>(rng: &mut R, bound: i64) -> Scalar {
    loop {
        let n = rng.gen_range(-bound..=bound);
        if n != 0 {
            let d = rng.gen_range(1..=bound);
            return Scalar::constant(ComplexRational::from_ratio(n, d));
        }
    }
}
