//! Exact maximum-likelihood decoding of binary linear block codes.
//!
//! The decoder is a branch-and-bound search over partial assignments of code
//! positions. Lower bounds come from adaptive LP decoding with parity-inequality
//! cuts (including cuts from redundant parity checks), upper bounds from
//! sum-product decoding followed by ordered-statistics re-encoding. The same
//! search computes the minimum distance of a code when the all-zero word is
//! excluded and the LLRs are all ones.

pub mod alist;
pub mod bnb;
pub mod builtin;
pub mod channel;
pub mod code;
pub mod cuts;
pub mod error;
pub mod gf2;
pub mod lp;
pub mod sim;
pub mod sp_osd;

pub use code::{ConstraintSet, LinearCode};
pub use error::{CodeError, DecodeError, LpError};
pub use gf2::BitMatrix;
