//! Social group utility maximization (SGUM) games on coupled social/physical
//! wireless scenarios.
//!
//! Each user maximizes its own utility plus the tie-weighted utilities of its
//! social neighbors. The crate covers three instantiations of that idea:
//!
//! * spectrum access: interference-minimizing channel selection, which is a
//!   potential game; a randomized distributed update chain (Glauber dynamics)
//!   samples its Gibbs stationary law, and exact chain analytics (generator,
//!   stationary distribution, mixing/spectral diagnostics) are available on
//!   enumerable state spaces ([`spectrum`], [`glauber`], [`chain`],
//!   [`equilibrium`]);
//! * power control: SINR log-utilities with a closed-form two-user equilibrium
//!   and a supermodular best-response iteration for many users ([`power`]);
//! * random access: slotted contention probabilities with closed-form
//!   equilibrium and social optimum ([`random_access`]).

// Validation deliberately writes `!(x > 0.0)` so NaN inputs are rejected
// along with nonpositive ones.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chain;
pub mod equilibrium;
mod error;
pub mod glauber;
pub mod power;
pub mod random_access;
pub mod social;
pub mod spectrum;

pub use error::{Error, Result};
