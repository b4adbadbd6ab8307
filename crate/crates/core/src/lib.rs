//! Finite models of bornological and coarse spaces, with a sequence model of
//! points at infinity over the integers and numerical checks for slow
//! oscillation.

pub mod asymptotic;
pub mod audit;
pub mod borno;
pub mod coarse;
pub mod enumerate;
pub mod error;
pub mod foundations;
pub mod linear;
pub mod maps;

pub use error::{Error, Result};
pub use foundations::{Carrier, Partition, Point, PointSet, Relation};
