//! Exact computations in p-adic Hodge theory.
//!
//! All arithmetic is over exact rationals, cyclotomic fields, finite fields
//! and totally ramified number fields; nothing is approximated by floats.

pub mod bdr_jet;
pub mod error;
pub mod factor;
pub mod filtered_phi;
pub mod linalg;
pub mod newton_polygon;
pub mod padic_core;
pub mod poly;
pub mod ramification;
pub mod rational;
pub mod representations;
pub mod tilt;

pub use error::{Error, Result};
