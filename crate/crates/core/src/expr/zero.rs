//! Zero testing: structural first, random-point sampling as fallback.

use super::eval::{eval, Point};
use super::number::ComplexRational;
use super::scalar::Scalar;
use super::ExprError;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Sampling parameters for the probabilistic fallback.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sampling {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling {
            samples: 8,
            seed: 42,
            tol: 1e-9,
        }
    }
}

/// A sample point where the value is numerically nonzero.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub point: String,
    pub value_re: f64,
    pub value_im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status")]
pub enum ZeroStatus {
    StructurallyZero,
    /// Not zero in canonical form. `witness` is set when some sample exceeded the
    /// tolerance; `all_samples_vanish` flags an identity outside the decidable
    /// fragment (for example `sin(x)^2 + cos(x)^2 - 1`).
    ProbablyNonzero {
        witness: Option<Witness>,
        all_samples_vanish: bool,
    },
}

impl ZeroStatus {
    pub fn is_zero(&self) -> bool {
        matches!(self, ZeroStatus::StructurallyZero)
    }
}

/// Draws a rational with numerator and denominator magnitude at most 97.
pub fn random_rational(rng: &mut ChaCha8Rng) -> ComplexRational {
    let n: i64 = rng.gen_range(-97..=97);
    let d: i64 = rng.gen_range(1..=97);
    ComplexRational::from_ratio(n, d)
}

/// `count` reproducible random points over `coords`.
pub fn sample_points(coords: &[String], count: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut p = Point::new();
            for c in coords {
                p.0.insert(c.clone(), random_rational(&mut rng));
            }
            p
        })
        .collect()
}

/// Structural zero test with sampled witness search.
pub fn is_zero(s: &Scalar, cfg: &Sampling) -> Result<ZeroStatus, ExprError> {
    if s.is_zero() {
        return Ok(ZeroStatus::StructurallyZero);
    }
    let coords: Vec<String> = s.coords().into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut evaluated = 0;
    let mut attempts = 0;
    let max_attempts = (cfg.samples.max(1)) * 20;
    let mut witness = None;
    while evaluated < cfg.samples.max(1) && attempts < max_attempts {
        attempts += 1;
        let mut p = Point::new();
        for c in &coords {
            p.0.insert(c.clone(), random_rational(&mut rng));
        }
        let v: Complex64 = match eval(s, &p) {
            Ok(v) => v.to_complex64(),
            Err(ExprError::Pole { .. }) => continue,
            Err(e) => return Err(e),
        };
        evaluated += 1;
        if v.norm() > cfg.tol && witness.is_none() {
            witness = Some(Witness {
                point: p.to_string(),
                value_re: v.re,
                value_im: v.im,
            });
        }
    }
    if evaluated == 0 {
        return Err(ExprError::AllSamplesPoles { attempts });
    }
    let all_samples_vanish = witness.is_none();
    Ok(ZeroStatus::ProbablyNonzero {
        witness,
        all_samples_vanish,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse::parse_with_coords;

    fn p(s: &str) -> Scalar {
        parse_with_coords(s, &["x".to_string(), "y".to_string()]).unwrap()
    }

    #[test]
    fn polynomial_identity_is_structural() {
        let s = p("(x+y)^2 - x^2 - 2*x*y - y^2");
        assert_eq!(is_zero(&s, &Sampling::default()).unwrap(), ZeroStatus::StructurallyZero);
    }

    #[test]
    fn nonzero_has_witness() {
        match is_zero(&p("x*y - 1"), &Sampling::default()).unwrap() {
            ZeroStatus::ProbablyNonzero {
                witness: Some(_),
                all_samples_vanish: false,
            } => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn trig_identity_is_flagged() {
        match is_zero(&p("sin(x)^2 + cos(x)^2 - 1"), &Sampling::default()).unwrap() {
            ZeroStatus::ProbablyNonzero {
                witness: None,
                all_samples_vanish: true,
            } => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
