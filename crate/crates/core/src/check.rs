//! Residual bookkeeping shared by every verification routine.

use crate::expr::Scalar;
use serde::Serialize;

/// A nonzero residual together with the frame indices it was found at.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residual {
    pub at: Vec<usize>,
    pub value: Scalar,
}

/// Outcome of a family of structural zero tests.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub evaluated: usize,
    pub failures: Vec<Residual>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            evaluated: 0,
            failures: Vec::new(),
        }
    }

    /// Records one residual; only nonzero values are kept.
    pub fn record(&mut self, at: &[usize], value: Scalar) {
        self.evaluated += 1;
        if !value.is_zero() {
            self.failures.push(Residual {
                at: at.to_vec(),
                value,
            });
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&Residual> {
        self.failures.first()
    }

    /// Merges another family into this one.
    pub fn absorb(&mut self, other: Check) {
        self.evaluated += other.evaluated;
        self.failures.extend(other.failures);
    }
}

/// Outcome of a pointwise floating-point test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericCheck {
    pub name: String,
    pub points: usize,
    pub max_abs: f64,
    pub tol: f64,
}

impl NumericCheck {
    pub fn new(name: impl Into<String>, tol: f64) -> Self {
        NumericCheck {
            name: name.into(),
            points: 0,
            max_abs: 0.0,
            tol,
        }
    }

    pub fn record(&mut self, magnitude: f64) {
        self.points += 1;
        if magnitude.is_nan() {
            self.max_abs = f64::INFINITY;
        } else {
            self.max_abs = self.max_abs.max(magnitude);
        }
    }

    pub fn passed(&self) -> bool {
        self.points > 0 && self.max_abs <= self.tol
    }
}

/// Largest modulus of `residuals` at each of `count` sample points over
/// `coords`; points where some residual has a pole are skipped.
pub fn sampled_check(
    name: &str,
    residuals: &[Scalar],
    coords: &[String],
    count: usize,
    seed: u64,
    tol: f64,
) -> Result<NumericCheck, crate::expr::ExprError> {
    use crate::expr::{eval, sample_points, ExprError};
    let mut check = NumericCheck::new(name, tol);
    'points: for p in sample_points(coords, count, seed) {
        let mut worst: f64 = 0.0;
        for s in residuals {
            match eval(s, &p) {
                Ok(v) => worst = worst.max(v.to_complex64().norm()),
                Err(ExprError::Pole { .. }) => continue 'points,
                Err(e) => return Err(e),
            }
        }
        check.record(worst);
    }
    Ok(check)
}
