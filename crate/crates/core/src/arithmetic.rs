//! Bignum plumbing: gcd/lcm, primality, factorization, p-adic valuation, and
//! the fixed-point form classifier.
//!
//! Everything here is deterministic — identical inputs give identical outputs
//! across runs and thread counts. The factorizer runs trial division by a
//! fixed table of small primes, then a Brent-cycle splitter whose parameters
//! are derived from the input, with the total splitter iteration count capped
//! by an explicit effort budget. Exceeding the budget is a reported error,
//! never a partial or silently wrong answer.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::{nat, Error, Nat, Result};

/// Default cap on total splitter iterations inside [`factorize`].
///
/// Large enough to split any 64-bit semiprime with plenty of slack; inputs
/// that survive it are far outside this crate's desk scale.
pub const DEFAULT_FACTOR_BUDGET: u64 = 4_000_000;

/// Trial division strips every prime below this bound before the splitter
/// runs, so any composite the splitter sees exceeds the bound squared.
const TRIAL_DIVISION_BOUND: u64 = 4096;

fn small_primes() -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let limit = TRIAL_DIVISION_BOUND as usize;
        let mut composite = vec![false; limit];
        let mut primes = Vec::new();
        for p in 2..limit {
            if !composite[p] {
                primes.push(p as u64);
                for m in (p * p..limit).step_by(p) {
                    composite[m] = true;
                }
            }
        }
        primes
    })
}

/// Greatest common divisor; `gcd(a, 0) = a` and `gcd(0, 0) = 0`.
pub fn gcd(a: &Nat, b: &Nat) -> Nat {
    a.gcd(b)
}

/// Least common multiple of two positive integers. Zero arguments are
/// rejected rather than mapped to 0.
pub fn lcm(a: &Nat, b: &Nat) -> Result<Nat> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidInput("lcm requires positive arguments".into()));
    }
    Ok(a / a.gcd(b) * b)
}

/// lcm over any number of positive integers; the empty product is 1.
pub fn lcm_many<'a, I>(items: I) -> Result<Nat>
where
    I: IntoIterator<Item = &'a Nat>,
{
    let mut acc = Nat::one();
    for item in items {
        acc = lcm(&acc, item)?;
    }
    Ok(acc)
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Witness set proven deterministic for all n < 3.3·10^24, which covers u64.
const MR_WITNESSES_U64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn miller_rabin_u64(n: u64, witness: u64) -> bool {
    // true = "probably prime for this witness"
    let d = n - 1;
    let r = d.trailing_zeros();
    let d = d >> r;
    let mut x = pow_mod_u64(witness, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..r {
        x = mul_mod_u64(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES_U64 {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    MR_WITNESSES_U64.iter().all(|&w| miller_rabin_u64(n, w))
}

/// Exact deterministic primality test for anything that fits a machine word
/// (Miller–Rabin over a witness set proven complete beyond u64).
///
/// For wider values the verdict comes from Miller–Rabin over the fixed
/// witness set of the first 25 primes — still deterministic and reproducible,
/// and cross-tested against the factorizer, but not certified the way the
/// word-size path is.
pub fn is_prime(n: &Nat) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    // multi-word path
    for &p in small_primes().iter().take(25) {
        if (n % nat(p)).is_zero() {
            return false; // n > u64, so n != p
        }
    }
    let one = Nat::one();
    let n_minus_1 = n - &one;
    let r = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> r;
    'witness: for &w in small_primes().iter().take(25) {
        let mut x = nat(w).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..r {
            x = x.modpow(&nat(2), n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A complete prime factorization: primes strictly increasing, exponents
/// positive, and the product of `prime^exponent` reconstructs `n`.
/// `n = 1` has an empty factor list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    n: Nat,
    factors: Vec<(Nat, u32)>,
}

impl Factorization {
    pub fn n(&self) -> &Nat {
        &self.n
    }

    /// `(prime, exponent)` pairs in strictly increasing prime order.
    pub fn factors(&self) -> &[(Nat, u32)] {
        &self.factors
    }

    /// Recompute the product of `prime^exponent`; equals `n` by construction.
    pub fn product(&self) -> Nat {
        self.factors
            .iter()
            .fold(Nat::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    /// All divisors of `n`, sorted ascending. Exponential in the number of
    /// prime factors, intended for the small inputs of the prime path.
    pub fn divisors(&self) -> Vec<Nat> {
        let mut out = vec![Nat::one()];
        for (p, e) in &self.factors {
            let base = out.clone();
            let mut power = Nat::one();
            for _ in 0..*e {
                power *= p;
                out.extend(base.iter().map(|d| d * &power));
            }
        }
        out.sort();
        out
    }
}

/// Brent-cycle splitter over machine words. Returns a nontrivial factor of
/// `n`, which must be odd, composite, and free of factors below the trial
/// division bound. Decrements `budget` per polynomial step.
fn brent_split_u64(n: u64, budget: &mut u64) -> Result<u64> {
    // deterministic parameter schedule: a tiny xorshift keyed on (n, attempt)
    let mut seed = n ^ 0x9e37_79b9_7f4a_7c15;
    let mut next = || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        seed
    };
    loop {
        let c = next() % (n - 3) + 1;
        let mut y = next() % (n - 3) + 2;
        let step = |v: u64| ((v as u128 * v as u128 + c as u128) % n as u128) as u64;
        let m = 128u64;
        let mut g = 1u64;
        let mut r = 1u64;
        let mut q = 1u64;
        let mut x = 0u64;
        let mut ys = 0u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = step(y);
            }
            let mut k = 0u64;
            while k < r && g == 1 {
                ys = y;
                let steps = m.min(r - k);
                if *budget < steps {
                    return Err(Error::ResourceExceeded {
                        what: format!("factoring effort while splitting {n}"),
                        limit: "splitter iteration budget".into(),
                    });
                }
                *budget -= steps;
                for _ in 0..steps {
                    y = step(y);
                    q = mul_mod_u64(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            // backtrack one batch, taking gcd every step
            g = 1;
            while g == 1 {
                if *budget == 0 {
                    return Err(Error::ResourceExceeded {
                        what: format!("factoring effort while splitting {n}"),
                        limit: "splitter iteration budget".into(),
                    });
                }
                *budget -= 1;
                ys = step(ys);
                g = x.abs_diff(ys).gcd(&n);
            }
        }
        if g != n {
            return Ok(g);
        }
        // degenerate cycle for this parameter choice; try the next one
    }
}

/// Same splitter over wide integers; only reached when a composite cofactor
/// does not fit a machine word.
fn brent_split_big(n: &Nat, budget: &mut u64) -> Result<Nat> {
    let mut seed = n.to_u64_digits().first().copied().unwrap_or(1) ^ 0x9e37_79b9_7f4a_7c15;
    let mut next = || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        seed
    };
    loop {
        let c = nat(next() | 1);
        let mut y = nat(next() | 2) % n;
        let m = 64u64;
        let mut g = Nat::one();
        let mut r = 1u64;
        let mut q = Nat::one();
        let mut x = Nat::zero();
        let mut ys = Nat::zero();
        let step = |v: &Nat| -> Nat { (v * v + &c) % n };
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            let mut k = 0u64;
            while k < r && g.is_one() {
                ys = y.clone();
                let steps = m.min(r - k);
                if *budget < steps {
                    return Err(Error::ResourceExceeded {
                        what: format!("factoring effort while splitting {n}"),
                        limit: "splitter iteration budget".into(),
                    });
                }
                *budget -= steps;
                for _ in 0..steps {
                    y = step(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            g = Nat::one();
            while g.is_one() {
                if *budget == 0 {
                    return Err(Error::ResourceExceeded {
                        what: format!("factoring effort while splitting {n}"),
                        limit: "splitter iteration budget".into(),
                    });
                }
                *budget -= 1;
                ys = step(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
            }
        }
        if &g != n {
            return Ok(g);
        }
    }
}

fn factor_word(n: u64, acc: &mut BTreeMap<Nat, u32>, budget: &mut u64) -> Result<()> {
    // n carries no prime below the trial bound
    if n == 1 {
        return Ok(());
    }
    if is_prime_u64(n) {
        *acc.entry(nat(n)).or_insert(0) += 1;
        return Ok(());
    }
    let d = brent_split_u64(n, budget)?;
    factor_word(d, acc, budget)?;
    factor_word(n / d, acc, budget)
}

fn factor_wide(n: Nat, acc: &mut BTreeMap<Nat, u32>, budget: &mut u64) -> Result<()> {
    if n.is_one() {
        return Ok(());
    }
    if let Some(v) = n.to_u64() {
        return factor_word(v, acc, budget);
    }
    if is_prime(&n) {
        *acc.entry(n).or_insert(0) += 1;
        return Ok(());
    }
    let d = brent_split_big(&n, budget)?;
    let rest = &n / &d;
    factor_wide(d, acc, budget)?;
    factor_wide(rest, acc, budget)
}

/// Factor `n ≥ 1` completely, spending at most `budget` splitter iterations.
///
/// Deterministic: the splitter's parameter schedule is derived from the input.
/// On budget exhaustion the call fails; it never returns a partial result.
pub fn factorize(n: &Nat, budget: u64) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::InvalidInput("factorize requires n >= 1".into()));
    }
    let mut acc: BTreeMap<Nat, u32> = BTreeMap::new();
    let mut rest = n.clone();
    let mut remaining = budget;
    for &p in small_primes() {
        if rest.is_one() {
            break;
        }
        let pn = nat(p);
        // all factors below p are gone, so p^2 > rest means rest is prime
        if &pn * &pn > rest {
            break;
        }
        while (&rest % &pn).is_zero() {
            rest /= &pn;
            *acc.entry(pn.clone()).or_insert(0) += 1;
        }
    }
    if !rest.is_one() {
        if let Some(v) = rest.to_u64() {
            if v < TRIAL_DIVISION_BOUND * TRIAL_DIVISION_BOUND {
                // below the trial horizon anything left is prime
                *acc.entry(nat(v)).or_insert(0) += 1;
            } else {
                factor_word(v, &mut acc, &mut remaining)?;
            }
        } else {
            factor_wide(rest, &mut acc, &mut remaining)?;
        }
    }
    Ok(Factorization {
        n: n.clone(),
        factors: acc.into_iter().collect(),
    })
}

/// Largest `v` with `p^v | n`, for `n ≥ 1` and prime `p`.
pub fn p_adic_valuation(n: &Nat, p: &Nat) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::InvalidInput(
            "p-adic valuation of 0 is infinite".into(),
        ));
    }
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!(
            "p-adic valuation requires a prime base, got {p}"
        )));
    }
    let mut v = 0u32;
    let mut rest = n.clone();
    loop {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() {
            return Ok(v);
        }
        rest = q;
        v += 1;
    }
}

/// Classification of an integer against the two fixed-point shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedPointForm {
    /// `n = 5^k`
    PowerOfFive(u32),
    /// `n = 12·5^k`
    TwelveTimesPowerOfFive(u32),
    Neither,
}

/// Decide whether `n` is `5^k`, `12·5^k`, or neither, by stripping factors of
/// five and comparing the residue against 1 and 12. Exactly one tag applies.
pub fn classify_fixed_point_form(n: &Nat) -> FixedPointForm {
    if n.is_zero() {
        return FixedPointForm::Neither;
    }
    let five = nat(5);
    let mut k = 0u32;
    let mut rest = n.clone();
    loop {
        let (q, r) = rest.div_rem(&five);
        if !r.is_zero() {
            break;
        }
        rest = q;
        k += 1;
    }
    if rest.is_one() {
        FixedPointForm::PowerOfFive(k)
    } else if rest == nat(12) {
        FixedPointForm::TwelveTimesPowerOfFive(k)
    } else {
        FixedPointForm::Neither
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fact(n: u64) -> Factorization {
        factorize(&nat(n), DEFAULT_FACTOR_BUDGET).unwrap()
    }

    /// Trial-division oracle, independent of the production factorizer.
    fn trial_division_oracle(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut d = 2u64;
        while d * d <= n {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            if e > 0 {
                out.push((d, e));
            }
            d += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn gcd_small_cases() {
        assert_eq!(gcd(&nat(12), &nat(18)), nat(6));
        assert_eq!(gcd(&nat(7), &nat(0)), nat(7));
        assert_eq!(gcd(&nat(0), &nat(0)), nat(0));
        assert_eq!(gcd(&nat(59833), &nat(59833)), nat(59833));
    }

    #[test]
    fn lcm_small_cases() {
        assert_eq!(lcm(&nat(6), &nat(25)).unwrap(), nat(150));
        assert_eq!(lcm(&nat(4), &nat(6)).unwrap(), nat(12));
        assert!(lcm(&nat(0), &nat(3)).is_err());
        assert!(lcm(&nat(3), &nat(0)).is_err());
    }

    #[test]
    fn lcm_many_pairwise_coprime_and_empty() {
        let items = [nat(3), nat(4), nat(25)];
        assert_eq!(lcm_many(items.iter()).unwrap(), nat(300));
        assert_eq!(lcm_many(std::iter::empty()).unwrap(), nat(1));
    }

    #[test]
    fn is_prime_small_cases() {
        assert!(is_prime(&nat(2)));
        assert!(!is_prime(&nat(1)));
        assert!(!is_prime(&nat(0)));
        // 59833: verdict fixed by the trial-division oracle
        let oracle_says_prime = trial_division_oracle(59833) == vec![(59833, 1)];
        assert!(oracle_says_prime);
        assert!(is_prime(&nat(59833)));
    }

    #[test]
    fn is_prime_matches_trial_division_up_to_20000() {
        for n in 0..20_000u64 {
            let by_oracle = n >= 2 && trial_division_oracle(n).len() == 1 && {
                let (p, e) = trial_division_oracle(n)[0];
                p == n && e == 1
            };
            assert_eq!(is_prime(&nat(n)), by_oracle, "disagreement at {n}");
        }
    }

    #[test]
    fn is_prime_multiword_fixtures_match_factorizer() {
        // 2^89-1 and 2^107-1 are prime; 2^83-1 and 2^97-1 are not
        let m = |e: u32| (Nat::one() << e) - Nat::one();
        assert!(is_prime(&m(89)));
        assert!(is_prime(&m(107)));
        assert!(!is_prime(&m(83)));
        assert!(!is_prime(&m(97)));
        // policy cross-check: factor a few >64-bit values and compare verdicts
        for n in [m(83), m(89), m(65) * nat(3), m(71) * nat(11)] {
            let f = factorize(&n, 200_000_000).unwrap();
            let single_prime = f.factors().len() == 1 && f.factors()[0].1 == 1;
            assert_eq!(is_prime(&n), single_prime, "policy mismatch at {n}");
        }
    }

    #[test]
    fn factorize_small_cases() {
        assert_eq!(
            fact(12).factors(),
            &[(nat(2), 2), (nat(3), 1)],
            "12 = 2^2 * 3"
        );
        assert!(fact(1).factors().is_empty());
        let f = fact(59833);
        assert_eq!(f.product(), nat(59833));
        assert_eq!(f.factors(), &[(nat(59833), 1)]);
    }

    #[test]
    fn factorize_round_trips_exhaustively_to_1e5() {
        for n in 1..=100_000u64 {
            let f = fact(n);
            assert_eq!(f.product(), nat(n), "product mismatch at {n}");
            for (p, e) in f.factors() {
                assert!(is_prime(p), "non-prime factor {p} of {n}");
                assert!(*e >= 1);
            }
            // strictly increasing primes
            for w in f.factors().windows(2) {
                assert!(w[0].0 < w[1].0);
            }
        }
    }

    #[test]
    fn factorize_smooth_wide_values() {
        // the parametric family shape 3 * 5^m * 2^(m-2k)
        let n = nat(3) * nat(5).pow(24) * nat(2).pow(20);
        let f = factorize(&n, DEFAULT_FACTOR_BUDGET).unwrap();
        assert_eq!(
            f.factors(),
            &[(nat(2), 20), (nat(3), 1), (nat(5), 24)]
        );
        assert_eq!(f.product(), n);
    }

    #[test]
    fn factorize_splits_word_size_semiprime() {
        let n = nat(1_000_003) * nat(998_117); // both prime, above trial bound
        let f = factorize(&n, DEFAULT_FACTOR_BUDGET).unwrap();
        assert_eq!(f.factors(), &[(nat(998_117), 1), (nat(1_000_003), 1)]);
    }

    #[test]
    fn factorize_budget_exhaustion_is_an_error_not_a_partial_result() {
        let n = nat(1_000_003) * nat(998_117);
        match factorize(&n, 1) {
            Err(Error::ResourceExceeded { .. }) => {}
            other => panic!("expected ResourceExceeded, got {other:?}"),
        }
    }

    #[test]
    fn factorize_rejects_zero() {
        assert!(factorize(&nat(0), 10).is_err());
    }

    #[test]
    fn divisors_are_sorted_and_complete() {
        let f = fact(88);
        let expected: Vec<Nat> = [1u64, 2, 4, 8, 11, 22, 44, 88].map(nat).to_vec();
        assert_eq!(f.divisors(), expected);
        assert_eq!(fact(1).divisors(), vec![nat(1)]);
    }

    #[test]
    fn p_adic_valuation_small_cases() {
        assert_eq!(p_adic_valuation(&nat(45), &nat(3)).unwrap(), 2);
        assert_eq!(p_adic_valuation(&nat(7), &nat(5)).unwrap(), 0);
        // F_5 = 5
        assert_eq!(p_adic_valuation(&nat(5), &nat(5)).unwrap(), 1);
        assert!(p_adic_valuation(&nat(0), &nat(3)).is_err());
        assert!(p_adic_valuation(&nat(10), &nat(4)).is_err());
    }

    #[test]
    fn classify_small_cases() {
        assert_eq!(
            classify_fixed_point_form(&nat(1)),
            FixedPointForm::PowerOfFive(0)
        );
        assert_eq!(
            classify_fixed_point_form(&nat(60)),
            FixedPointForm::TwelveTimesPowerOfFive(1)
        );
        assert_eq!(classify_fixed_point_form(&nat(24)), FixedPointForm::Neither);
        assert_eq!(
            classify_fixed_point_form(&nat(3125)),
            FixedPointForm::PowerOfFive(5)
        );
        assert_eq!(
            classify_fixed_point_form(&nat(12)),
            FixedPointForm::TwelveTimesPowerOfFive(0)
        );
    }

    #[test]
    fn classify_agrees_with_family_enumeration() {
        let bound = 200_000u64;
        let mut family = std::collections::BTreeSet::new();
        let mut p = 1u64;
        while p <= bound {
            family.insert(p);
            if 12 * p <= bound {
                family.insert(12 * p);
            }
            p *= 5;
        }
        for n in 1..=bound {
            let classified = classify_fixed_point_form(&nat(n)) != FixedPointForm::Neither;
            assert_eq!(classified, family.contains(&n), "mismatch at {n}");
        }
    }

    proptest! {
        #[test]
        fn gcd_times_lcm_equals_product(a in 1u64..10_000, b in 1u64..10_000) {
            let (a, b) = (nat(a), nat(b));
            let g = gcd(&a, &b);
            let l = lcm(&a, &b).unwrap();
            prop_assert_eq!(g * l, a * b);
        }

        #[test]
        fn factorize_round_trips_on_random_words(n in 1u64..4_000_000_000) {
            let f = factorize(&nat(n), DEFAULT_FACTOR_BUDGET).unwrap();
            prop_assert_eq!(f.product(), nat(n));
            for (p, _) in f.factors() {
                prop_assert!(is_prime(p));
            }
        }

        #[test]
        fn classifier_round_trips_constructed_family_members(k in 0u32..20, twelve: bool) {
            let n = if twelve { nat(12) * nat(5).pow(k) } else { nat(5).pow(k) };
            let form = classify_fixed_point_form(&n);
            if twelve {
                prop_assert_eq!(form, FixedPointForm::TwelveTimesPowerOfFive(k));
            } else {
                prop_assert_eq!(form, FixedPointForm::PowerOfFive(k));
            }
        }
    }
}
