//! Order of appearance in the Fibonacci sequence.
//!
//! For a positive integer `n`, the order (or rank) of appearance `z(n)` is the
//! smallest index `j ≥ 1` such that `n` divides the Fibonacci number `F_j`
//! (with `F_0 = 0`, `F_1 = 1`). This crate computes `z` two ways — a
//! brute-force scan over Fibonacci residues and a fast backend that composes
//! prime-power values through lcm — iterates `z` to its fixed points
//! (`5^k` and `12·5^k`), and ships empirical verification suites for the
//! identities the implementation relies on.
//!
//! Module map:
//! - [`arithmetic`] — bignum plumbing: gcd/lcm, primality, factorization,
//!   p-adic valuation, fixed-point form classifier.
//! - [`fibonacci`] — Fibonacci residues by fast doubling, exact small values,
//!   p-adic valuation of Fibonacci numbers.
//! - [`rank`] — `z(n)` itself: the oracle scan, the factorization-composed
//!   fast backend, and the prime-power cache.
//! - [`dynamics`] — trajectories of repeated `z`, fixed-point orders under
//!   both counting conventions, and first-`n`-with-order search.
//! - [`verify`] — named check suites with structured reports.
//! - [`cli`] — the `fibrank` command-line front end.

pub mod arithmetic;
pub mod cli;
pub mod dynamics;
mod error;
pub mod fibonacci;
pub mod rank;
pub mod verify;

pub use error::{Error, Result};

/// Arbitrary-precision non-negative integer. All quantities in this crate
/// (inputs, z-values, Fibonacci residues) are `Nat`s; decimal-string
/// round-tripping is exact.
pub type Nat = num_bigint::BigUint;

/// Shorthand for building a `Nat` from a machine word.
pub fn nat(value: u64) -> Nat {
    Nat::from(value)
}

/// Parse a `Nat` from a plain decimal string (digits only, no sign, no
/// whitespace).
pub fn parse_nat(s: &str) -> Result<Nat> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::InvalidInput(format!(
            "not a decimal natural number: {s:?}"
        )));
    }
    s.parse::<Nat>()
        .map_err(|e| Error::InvalidInput(format!("cannot parse {s:?}: {e}")))
}
