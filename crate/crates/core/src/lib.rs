//! Finite radical rings `Z_n[r^(1/m)] = Z_n[x]/(x^m - r)` and the factorization
//! of `x^m - r` over finite fields.
//!
//! - [`numth`]: modular arithmetic, primality, factorization, orders.
//! - [`gfq`]: finite fields `F_{p^k}`.
//! - [`factor`]: polynomials over `F_q`, irreducibility and factorization.
//! - [`ring`]: ring elements, unital matrices, units and zero divisors.
//! - [`structure`]: field verdicts, power maps, splitting and counting.
//! - [`cli`]: the `radring` command line and its verification suites.

pub mod cli;
pub mod error;
pub mod factor;
pub mod gfq;
pub mod numth;
pub mod ring;
pub mod structure;

pub use error::{Error, Result};
pub use gfq::{FieldSpec, FqElement};
pub use ring::{RingElement, RingParams};

/// Caps on enumerative work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest accepted `m` for ring operations.
    pub max_m: usize,
    /// Largest set (`n^m`, `q`, ...) enumerated element by element.
    pub enum_cap: u64,
    /// Largest ring searched for a zero-divisor witness.
    pub witness_cap: u64,
    /// Largest number of candidate divisors tried by the brute-force factorizer.
    pub brute_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_m: 12, enum_cap: 1_000_000, witness_cap: 1_000_000, brute_cap: 1_000_000 }
    }
}

impl Limits {
    /// All enumeration caps set to `cap`.
    pub fn with_cap(cap: u64) -> Self {
        Limits { enum_cap: cap, witness_cap: cap, brute_cap: cap, ..Limits::default() }
    }
}
