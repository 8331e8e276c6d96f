//! Membership, factorization and functional calculus for products of two
//! positive semidefinite matrices.

pub mod calculus;
pub mod corpus;
pub mod dilation;
pub mod error;
pub mod factorization;
pub mod lab;
pub mod linalg;
pub mod membership;
pub mod tol;

pub use error::{Error, Result};
pub use factorization::{optimal_pair, Factorization};
pub use linalg::{CMatrix, Subspace, C64};
pub use membership::{classify_subclass, is_l2p, Confidence, MembershipVerdict, Subclass};
pub use tol::{Tolerances, TOL_ANGLE};
