//! Algebroids built from other algebroids: prolongations with their lifts,
//! direct products, projector restrictions and the fixture catalog.

pub mod fixtures;
mod product;
mod projector;
mod prolongation;

pub use fixtures::{fixture, Fixture, BASE_NAMES, SUITE};
pub use product::{direct_product, ProductAlgebroid};
pub use projector::{flatness_check, projector_restriction, ProjectorRestriction};
pub use prolongation::{prolong, Prolongation};

use crate::algebroid::AlgebroidError;
use crate::connections::ConnectionError;
use crate::expr::{ExprError, Scalar};
use crate::jstruct::JError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructionError {
    #[error("unknown fixture '{0}'")]
    UnknownFixture(String),
    #[error("projector is not idempotent at ({row}, {col}): {value}")]
    NotIdempotent { row: usize, col: usize, value: Scalar },
    #[error("shape error: {0}")]
    Shape(String),
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
    #[error(transparent)]
    J(#[from] JError),
    #[error(transparent)]
    Connection(#[from] ConnectionError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}
