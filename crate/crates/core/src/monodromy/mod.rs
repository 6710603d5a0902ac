//! Frobenius-method obstructions to trivial local monodromy.

pub mod constraints;
pub mod frobenius;
pub mod special;

pub use constraints::{trivial_monodromy_constraints, Condition, ConstraintSet, Mode, MonodromyOutcome};
pub use frobenius::{frobenius_solve, FrobeniusSeries, Obstruction};
pub use special::{second_order_conditions, two_gap_conditions};
