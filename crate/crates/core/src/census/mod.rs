//! Brute-force computations over finite matrix groups.
//!
//! Everything here is independent of [`crate::widthred`]: the width minima
//! come from breadth-first search over the whole finite group, so they can
//! be used as an oracle for the traces the reduction pipeline emits.

mod identity;
mod sumset;
mod table;
mod width;

pub use identity::{sum_identity_symbolic, verify_sum_identity, SumIdentityCheck};
pub use sumset::{sum_set_census, SumSetLevel, SumSetReport};
pub use table::{enumerate_sl, sl_order, FiniteGroupTable};
pub use width::{width_bfs, width_census, WidthRow, WidthSummary};

use thiserror::Error;

use crate::matrix::MatrixError;
use crate::ring::RingSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("group order {order} exceeds the budget {budget}")]
    BudgetExceeded { order: u128, budget: usize },
    #[error("{0} is not a finite ring")]
    NotFinite(RingSpec),
    #[error("enumerated {found} elements but the closed form gives {expected}")]
    OrderMismatch { expected: u128, found: usize },
    #[error("sigma is central")]
    CentralInput,
    #[error("sigma is not congruent to the identity modulo the ideal")]
    NotCongruent,
    #[error("matrix is not in the enumerated group")]
    NotInGroup,
    #[error("sum sets need integer generators and a modulus >= 2")]
    BadSumSetInput,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}
