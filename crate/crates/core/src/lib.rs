//! Smooth-number counting and the analytic machinery around it: Dickman's
//! ρ, de Bruijn's Λ(x, y), the correction factor G(s, y), explicit-formula
//! sums over zeta zeros and a Monte Carlo model of the resulting bias.

pub mod bias;
pub mod debruijn;
pub mod error;
pub mod gfactor;
pub mod par;
pub mod primes;
pub mod quad;
pub mod smoothcount;
pub mod specfun;
pub mod sum;
pub mod zeta;

pub use error::{Error, Result};
