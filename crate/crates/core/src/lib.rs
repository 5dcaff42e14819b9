//! Verification laboratory for the joint distribution of polynomial-like
//! multiplicative functions in coprime residue classes.
//!
//! The crate is organised bottom-up:
//!
//! - [`polynomials`]: exact integer polynomials, resultants, discriminants
//!   and root finding modulo primes.
//! - [`families`]: nice families, good primes and `delta(q)`.
//! - [`multfun`]: multiplicative functions with explicit prime-power rules,
//!   segmented smallest-prime-factor sieves and semismooth counts.
//! - [`chargroup`]: Dirichlet characters modulo odd prime powers and their
//!   CRT composition.
//! - [`charsum`]: brute-force complete character sums and audits of the
//!   Weil, Cochrane and combined prime-power bounds.
//! - [`lab`]: the experiment layer (`V_m` counts, joint distribution runs,
//!   sieve lemma checks and the range-limit construction).

pub mod arith;
pub mod chargroup;
pub mod charsum;
pub mod error;
pub mod families;
pub mod lab;
pub mod multfun;
pub mod polynomials;

pub use error::{Error, Result};
