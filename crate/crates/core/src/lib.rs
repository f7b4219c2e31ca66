//! Finite-field workbench for `[q+1, 2, q]` MDS codes over GF(q) and their
//! GF(p) subfield codes.

pub mod error;
pub mod galois;
pub mod lincode;
pub mod construct;
pub mod subfield;
pub mod charsums;
pub mod verify;

pub use error::{Error, Result};
pub use galois::{make_field, Elem, FieldElement, FiniteField};
