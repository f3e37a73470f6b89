//! Fibonacci residues and values: `F_k mod m` by fast doubling, exact small
//! Fibonacci numbers, and the p-adic valuation of `F_j`.
//!
//! Indices follow `F_0 = 0`, `F_1 = 1`, `F_n = F_{n-1} + F_{n-2}`. The
//! doubling step uses `F_{2t} = F_t (2 F_{t+1} - F_t)` and
//! `F_{2t+1} = F_t^2 + F_{t+1}^2`, reduced mod `m` throughout, which keeps the
//! whole computation in O(log k) modular multiplications. Moduli that fit a
//! machine word take a u64/u128 path; anything wider runs on `Nat` directly.

use num_traits::{One, ToPrimitive, Zero};

use crate::arithmetic::{is_prime, p_adic_valuation};
use crate::{nat, Error, Nat, Result};

/// Exact Fibonacci values are capped here to guard against runaway memory;
/// they exist for test oracles, not bulk computation.
pub const FIB_EXACT_CAP: u32 = 10_000;

/// A consecutive Fibonacci residue pair `(F_k mod m, F_{k+1} mod m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibPairMod {
    pub index: Nat,
    pub modulus: Nat,
    pub pair: (Nat, Nat),
}

fn require_modulus(m: &Nat) -> Result<()> {
    if m < &nat(2) {
        return Err(Error::InvalidInput(format!(
            "fibonacci residues need a modulus >= 2, got {m}"
        )));
    }
    Ok(())
}

fn pair_mod_u64(k: &Nat, m: u64) -> (u64, u64) {
    let mw = m as u128;
    let (mut a, mut b) = (0u128, 1 % mw); // F_0, F_1
    let bits = k.bits();
    for i in (0..bits).rev() {
        // double: (F_t, F_{t+1}) -> (F_2t, F_2t+1)
        let t = (2 * b + mw - a) % mw;
        let f2 = a * t % mw;
        let f21 = (a * a + b * b) % mw;
        if k.bit(i) {
            a = f21;
            b = (f2 + f21) % mw;
        } else {
            a = f2;
            b = f21;
        }
    }
    (a as u64, b as u64)
}

fn pair_mod_big(k: &Nat, m: &Nat) -> (Nat, Nat) {
    let mut a = Nat::zero();
    let mut b = Nat::one() % m;
    let bits = k.bits();
    for i in (0..bits).rev() {
        let t = (&b * 2u32 + m - &a) % m;
        let f2 = &a * t % m;
        let f21 = (&a * &a + &b * &b) % m;
        if k.bit(i) {
            b = (&f2 + &f21) % m;
            a = f21;
        } else {
            a = f2;
            b = f21;
        }
    }
    (a, b)
}

/// `(F_k mod m, F_{k+1} mod m)` in O(log k) modular steps.
pub fn fib_pair_mod(k: &Nat, m: &Nat) -> Result<FibPairMod> {
    require_modulus(m)?;
    let pair = match m.to_u64() {
        Some(mw) => {
            let (a, b) = pair_mod_u64(k, mw);
            (nat(a), nat(b))
        }
        None => pair_mod_big(k, m),
    };
    Ok(FibPairMod {
        index: k.clone(),
        modulus: m.clone(),
        pair,
    })
}

/// `F_k mod m`; the first component of [`fib_pair_mod`].
pub fn fib_mod(k: &Nat, m: &Nat) -> Result<Nat> {
    Ok(fib_pair_mod(k, m)?.pair.0)
}

/// Exact `F_k` by iteration, for `k ≤ 10^4`.
pub fn fib_exact(k: u32) -> Result<Nat> {
    if k > FIB_EXACT_CAP {
        return Err(Error::InvalidInput(format!(
            "fib_exact capped at {FIB_EXACT_CAP}, got {k}"
        )));
    }
    let mut a = Nat::zero();
    let mut b = Nat::one();
    for _ in 0..k {
        let c = &a + &b;
        a = b;
        b = c;
    }
    Ok(a)
}

/// `min(ν_p(F_j), cap)` for prime `p`: the p-adic valuation of `F_j`,
/// saturated at `cap`.
///
/// Computed from `F_j mod p^cap`, so `F_j` itself is never materialized; a
/// zero residue reports exactly `cap`, never more.
pub fn fib_valuation(j: &Nat, p: &Nat, cap: u32) -> Result<u32> {
    if j.is_zero() {
        return Err(Error::InvalidInput("fib_valuation requires j >= 1".into()));
    }
    if cap == 0 {
        return Err(Error::InvalidInput("fib_valuation requires cap >= 1".into()));
    }
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!(
            "fib_valuation requires a prime base, got {p}"
        )));
    }
    let modulus = p.pow(cap);
    let residue = fib_mod(j, &modulus)?;
    if residue.is_zero() {
        return Ok(cap);
    }
    p_adic_valuation(&residue, p)
}
