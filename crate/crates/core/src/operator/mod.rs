//! Differential operators with elliptic or Laurent coefficients.

pub mod commuting;
pub mod diffop;
pub mod global;
pub mod indicial;

pub use commuting::find_commuting;
pub use diffop::{DiffOp, DiffRing};
pub use global::{
    cyclic_l0, gap_indices, localize, parse_operator, third_order_from_gaps, CurveKind, EllipticOp, LocalOp,
};
pub use indicial::{homogeneous_integrable, indicial_polynomial, IndexData};
