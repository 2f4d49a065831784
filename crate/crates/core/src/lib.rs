//! Exact computation of the absolute Riemann-Roch data of Arakelov divisors
//! on the compactified `Spec Z`.
//!
//! Every decision is taken on exact rationals: quantities that are naturally
//! logarithms (the degree of a divisor, the archimedean coefficient) are
//! carried multiplicatively, and comparisons with `log 3` become comparisons
//! with powers of three.
//!
//! The crate is organised bottom-up:
//!
//! * [`exact_arith`] positive rationals and exact `log_3` ceilings,
//! * [`balanced_ternary`] the `{-1, 0, 1}` numeral system,
//! * [`divisor`] Arakelov divisors, their degree, lattice and `H^0` set,
//! * [`h0`] and [`h1`] the two cohomology dimensions with explicit
//!   generating sets and exhaustive verifiers,
//! * [`tolerance`] finite tolerance modules and the brute-force dimension
//!   oracle,
//! * [`rr`] the Riemann-Roch identity and duality checks,
//! * [`cli`] text formats, reports and sweep drivers used by the binary.

pub mod balanced_ternary;
pub mod cli;
pub mod divisor;
pub mod error;
pub mod exact_arith;
pub mod h0;
pub mod h1;
pub mod primes;
pub mod rr;
pub mod tolerance;

pub use balanced_ternary::{BalancedTernary, Trit};
pub use divisor::{ArakelovDivisor, LogValue, Sign};
pub use error::{Error, Result};
pub use exact_arith::PosRational;
pub use h0::{GenSetReport, SpecialCase};
pub use h1::CircleGenSet;
pub use rr::{RRReport, SerreReport};
pub use tolerance::FiniteToleranceModule;
