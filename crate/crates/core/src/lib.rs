//! Exact construction of Weil representations of finite symplectic groups
//! and their similitude extensions, together with machine checks of the
//! structural identities they satisfy.
//!
//! All scalars are elements of cyclotomic fields with rational coordinates;
//! nothing in the crate uses floating point.

pub mod cyclotomic;
pub mod error;
pub mod field;
pub mod galois_ring;
pub mod group_ext;
pub mod group;
pub mod heisenberg;
pub mod linalg;
pub mod rep;
pub mod ring;
pub mod suite;
pub mod symplectic;
pub mod weil_even;
pub mod weil_odd;

pub use cyclotomic::CyclotomicNumber;
pub use error::{Error, Result};
