//! Symbolic calculus for almost complex, Hermitian and Kählerian Lie
//! algebroids declared over coordinate charts.

#![allow(clippy::needless_range_loop)]

pub mod algebroid;
pub mod check;
pub mod chern;
pub mod cli;
pub mod connections;
pub mod constructions;
pub mod eforms;
pub mod expr;
pub mod jstruct;
pub mod prodgeom;
