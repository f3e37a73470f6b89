//! Empirical verification suites.
//!
//! Each suite quantifies one identity or law over a finite range and returns
//! a [`VerificationReport`]: what was checked, how many instances, whether
//! all of them held, and up to twenty counterexamples when they did not. A
//! falsified universal usually has many witnesses; the cap keeps reports
//! readable while `passed` stays faithful.
//!
//! Suites are deterministic (the one randomized check uses a fixed seed that
//! is part of its definition) and sequential; shrinking any range parameter
//! can only remove checked instances, never turn a passing suite into a
//! failing one.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::arithmetic::{classify_fixed_point_form, gcd, is_prime, lcm, FixedPointForm};
use crate::dynamics::{
    fixed_point_order, iterate_z, trajectory, OrderConvention, DEFAULT_ITERATION_CAP,
};
use crate::rank::{z_bruteforce, z_fast, z_prime, ZContext};
use crate::{nat, Error, Nat, Result};

/// Reports keep at most this many counterexamples.
pub const COUNTEREXAMPLE_CAP: usize = 20;

/// Seed for the randomized lcm-law pairs. Fixed by definition: the sampled
/// pairs are part of what the suite means, so reports are reproducible.
const LCM_LAW_SEED: u64 = 0x00F1_B5EE_D001;
const LCM_LAW_RANDOM_PAIRS: usize = 256;

/// One falsifying instance: the input that failed, what was expected, what
/// actually happened.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub input: String,
    pub expected: String,
    pub actual: String,
}

/// Outcome of one suite over one parameter choice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub parameters: BTreeMap<String, String>,
    pub checked: u64,
    pub passed: bool,
    pub counterexamples: Vec<Counterexample>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    /// Human-readable rendering: one headline, then notes and
    /// counterexamples indented beneath it.
    pub fn to_text(&self) -> String {
        let params = self
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(", ");
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let mut out = format!(
            "[{verdict}] {} — {} instances checked ({params})",
            self.suite, self.checked
        );
        for note in &self.notes {
            out.push_str(&format!("\n       note: {note}"));
        }
        for ce in &self.counterexamples {
            out.push_str(&format!(
                "\n       counterexample: input={} expected={} actual={}",
                ce.input, ce.expected, ce.actual
            ));
        }
        out
    }
}

struct ReportBuilder {
    suite: &'static str,
    parameters: BTreeMap<String, String>,
    checked: u64,
    failures: u64,
    counterexamples: Vec<Counterexample>,
    notes: Vec<String>,
}

impl ReportBuilder {
    fn new(suite: &'static str) -> Self {
        ReportBuilder {
            suite,
            parameters: BTreeMap::new(),
            checked: 0,
            failures: 0,
            counterexamples: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn param(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    /// Record one checked instance; `detail` is only evaluated on failure.
    fn check<F>(&mut self, ok: bool, detail: F)
    where
        F: FnOnce() -> (String, String, String),
    {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.counterexamples.len() < COUNTEREXAMPLE_CAP {
                let (input, expected, actual) = detail();
                self.counterexamples.push(Counterexample {
                    input,
                    expected,
                    actual,
                });
            }
        }
    }

    fn check_eq<T: PartialEq + std::fmt::Display>(
        &mut self,
        expected: &T,
        actual: &T,
        input: impl FnOnce() -> String,
    ) {
        let ok = expected == actual;
        self.check(ok, || (input(), expected.to_string(), actual.to_string()));
    }

    fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    fn finish(mut self) -> Result<VerificationReport> {
        if self.checked == 0 {
            return Err(Error::InvalidInput(format!(
                "suite {} checked nothing; empty ranges are a usage error",
                self.suite
            )));
        }
        if self.failures as usize > COUNTEREXAMPLE_CAP {
            self.note(format!(
                "{} further counterexamples beyond the first {COUNTEREXAMPLE_CAP} suppressed",
                self.failures as usize - COUNTEREXAMPLE_CAP
            ));
        }
        Ok(VerificationReport {
            suite: self.suite.to_string(),
            parameters: self.parameters,
            checked: self.checked,
            passed: self.failures == 0,
            counterexamples: self.counterexamples,
            notes: self.notes,
        })
    }
}

fn five_free_part(x: &Nat) -> Nat {
    let five = nat(5);
    let mut rest = x.clone();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&rest, &five);
        if !num_traits::Zero::is_zero(&r) {
            return rest;
        }
        rest = q;
    }
}

fn is_six_times_power_of_five(n: u64) -> bool {
    n.is_multiple_of(6)
        && matches!(
            classify_fixed_point_form(&nat(n / 6)),
            FixedPointForm::PowerOfFive(_)
        )
}

fn format_set(values: &[u64]) -> String {
    let inner = values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    format!("[{inner}]")
}

/// Both directions of the fixed-point characterization on `[1, N]`: every
/// `n` with `z(n) = n` has the `5^k` or `12·5^k` shape and every integer of
/// either shape is fixed.
pub fn verify_fixed_point_characterization(
    n_max: u64,
    ctx: &ZContext,
) -> Result<VerificationReport> {
    if n_max < 12 {
        return Err(Error::InvalidInput(
            "characterization needs N >= 12 so both shapes appear".into(),
        ));
    }
    let mut report = ReportBuilder::new("fixed-points").param("n", n_max);
    let mut fixed_points = Vec::new();
    for n in 1..=n_max {
        let value = nat(n);
        let by_z = ctx.z(&value)?.z == value;
        let by_form = classify_fixed_point_form(&value) != FixedPointForm::Neither;
        if by_z {
            fixed_points.push(n);
        }
        report.check(by_z == by_form, || {
            (
                format!("n={n}"),
                "z(n)=n agrees with the 5^k / 12*5^k classifier".into(),
                format!("z(n)=n: {by_z}, classifier match: {by_form}"),
            )
        });
    }
    report.note(format!("fixed points found: {}", format_set(&fixed_points)));
    report.finish()
}

/// `z(n) ≤ 2n` on `[1, N]`, with equality exactly at `n = 6·5^k`.
pub fn verify_z_upper_bound(n_max: u64, ctx: &ZContext) -> Result<VerificationReport> {
    if n_max == 0 {
        return Err(Error::InvalidInput("upper bound sweep needs N >= 1".into()));
    }
    let mut report = ReportBuilder::new("upper-bound").param("n", n_max);
    let mut equality = Vec::new();
    for n in 1..=n_max {
        let z = ctx.z(&nat(n))?.z;
        let bound = nat(2 * n);
        let is_equal = z == bound;
        if is_equal {
            equality.push(n);
        }
        let within = z <= bound;
        let equality_ok = is_equal == is_six_times_power_of_five(n);
        report.check(within && equality_ok, || {
            (
                format!("n={n}"),
                "z(n) <= 2n with equality exactly at 6*5^k".into(),
                format!("z(n) = {z}"),
            )
        });
    }
    report.note(format!("equality set: {}", format_set(&equality)));
    report.finish()
}

/// For every prime `p < P`: `z(p) ≤ p+1`, and `gcd(p, z(p)) = 1` unless
/// `p = 5`.
pub fn verify_prime_laws(p_max: u64, ctx: &ZContext) -> Result<VerificationReport> {
    if p_max < 3 {
        return Err(Error::InvalidInput("prime laws need P >= 3".into()));
    }
    let mut report = ReportBuilder::new("prime-laws").param("p", p_max);
    for p in 2..p_max {
        let pn = nat(p);
        if !is_prime(&pn) {
            continue;
        }
        let zp = z_prime(&pn, &ctx.config)?.z;
        report.check(zp <= nat(p + 1), || {
            (
                format!("p={p}"),
                "z(p) <= p+1".into(),
                format!("z(p) = {zp}"),
            )
        });
        if p != 5 {
            let g = gcd(&pn, &zp);
            report.check_eq(&nat(1), &g, || format!("p={p}, z(p)={zp}"));
        }
    }
    report.finish()
}

/// Every index `j ≤ 4n` whose Fibonacci residue vanishes mod `n` is a
/// multiple of `z(n)`, for `n` in `[2, N]`.
pub fn verify_divisibility(n_max: u64, ctx: &ZContext) -> Result<VerificationReport> {
    if n_max < 2 {
        return Err(Error::InvalidInput("divisibility sweep needs N >= 2".into()));
    }
    let mut report = ReportBuilder::new("divisibility").param("n", n_max);
    for n in 2..=n_max {
        let z = ctx.z(&nat(n))?.z.to_u64().expect("z(n) <= 2n fits u64");
        let mut a = 1 % n;
        let mut b = 1 % n;
        for j in 1..=4 * n {
            if a == 0 {
                report.check(j % z == 0, || {
                    (
                        format!("n={n}, j={j}"),
                        format!("z(n) = {z} divides j"),
                        format!("j mod z = {}", j % z),
                    )
                });
            }
            let c = (a + b) % n;
            a = b;
            b = c;
        }
    }
    report.finish()
}

/// The composed fast backend equals the brute-force oracle on `[1, N]`.
pub fn verify_backend_equivalence(n_max: u64, ctx: &ZContext) -> Result<VerificationReport> {
    if n_max == 0 {
        return Err(Error::InvalidInput("equivalence sweep needs N >= 1".into()));
    }
    let mut report = ReportBuilder::new("backend-equivalence").param("n", n_max);
    for n in 1..=n_max {
        let value = nat(n);
        let fast = z_fast(&value, &ctx.cache, &ctx.config)?.z;
        let oracle = z_bruteforce(&value, &ctx.config)?.z;
        report.check_eq(&oracle, &fast, || format!("n={n}"));
    }
    report.finish()
}

/// The power-of-two laws, plus the companion closed form for powers of
/// three: `z(2^a) = 3·2^{a-2}` for `a ≥ 3`, `z(3^b) = 4·3^{b-1}`,
/// `z^k(2^a) = lcm(3·2^{a-2k}, 4)` for `k ≥ 2`, order `⌈a/2⌉ - 1` for
/// `a ≥ 4`, and the small-`a` base facts.
pub fn verify_power2_formulas(a_max: u32, ctx: &ZContext) -> Result<VerificationReport> {
    if a_max < 4 {
        return Err(Error::InvalidInput("power-of-two laws need A >= 4".into()));
    }
    let mut report = ReportBuilder::new("power2").param("a", a_max);
    let two = nat(2);
    let three = nat(3);
    // closed forms, exact arithmetic
    for a in 3..=a_max {
        let expected = &three * two.pow(a - 2);
        let actual = ctx.z(&two.pow(a))?.z;
        report.check_eq(&expected, &actual, || format!("z(2^{a})"));
    }
    for b in 1..=a_max {
        let expected = nat(4) * three.pow(b - 1);
        let actual = ctx.z(&three.pow(b))?.z;
        report.check_eq(&expected, &actual, || format!("z(3^{b})"));
    }
    // base iterate facts below the general formulas
    for (start, steps) in [(2u64, 4u32), (4, 2), (8, 2), (16, 1)] {
        let actual = iterate_z(&nat(start), steps, ctx)?;
        report.check_eq(&nat(12), &actual, || format!("z^{steps}({start})"));
    }
    // iterate formula and order formula
    for a in 4..=a_max {
        let mut x = two.pow(a);
        let mut iterates = Vec::with_capacity(a as usize);
        for _ in 0..a {
            x = ctx.z(&x)?.z;
            iterates.push(x.clone());
        }
        for k in 2..=a {
            let expected = lcm(&(&three * two.pow(a.saturating_sub(2 * k))), &nat(4))?;
            report.check_eq(&expected, &iterates[k as usize - 1], || {
                format!("z^{k}(2^{a})")
            });
        }
        let order = fixed_point_order(&two.pow(a), OrderConvention::Table2, ctx)?;
        report.check_eq(&(a.div_ceil(2) - 1), &order, || format!("order(2^{a})"));
    }
    report.finish()
}

/// `z^k(10^m) = 3·5^m·2^{m-2k}` whenever `1 ≤ k` and `2k+2 ≤ m`; `k = 0` is
/// the identity iterate.
pub fn verify_power10_formula(k_max: u32, m_max: u32, ctx: &ZContext) -> Result<VerificationReport> {
    if m_max < 4 {
        return Err(Error::InvalidInput("power-of-ten law needs M >= 4".into()));
    }
    let mut report = ReportBuilder::new("power10").param("k", k_max).param("m", m_max);
    let ten = nat(10);
    for m in 4..=m_max {
        let start = ten.pow(m);
        report.check_eq(&start, &iterate_z(&start, 0, ctx)?, || {
            format!("z^0(10^{m})")
        });
        let k_top = k_max.min((m - 2) / 2);
        let mut x = start;
        for k in 1..=k_top {
            x = ctx.z(&x)?.z;
            let expected = nat(3) * nat(5).pow(m) * nat(2).pow(m - 2 * k);
            report.check_eq(&expected, &x, || format!("z^{k}(10^{m})"));
        }
    }
    report.finish()
}

/// Fixed point order of `5^r·10^{2k+2}` is exactly `k`, for `k` in
/// `[1, K]` and `r` in `[0, R]` — a finite witness that every order is
/// realized, and stays realized under extra powers of five.
pub fn verify_order_family(k_max: u32, r_max: u32, ctx: &ZContext) -> Result<VerificationReport> {
    if k_max < 1 {
        return Err(Error::InvalidInput("order family needs K >= 1".into()));
    }
    let mut report = ReportBuilder::new("order-family")
        .param("k", k_max)
        .param("r", r_max);
    for k in 1..=k_max {
        for r in 0..=r_max {
            let n = nat(5).pow(r) * nat(10).pow(2 * k + 2);
            let order = fixed_point_order(&n, OrderConvention::Table2, ctx)?;
            report.check_eq(&k, &order, || format!("order(5^{r} * 10^{})", 2 * k + 2));
        }
    }
    report.finish()
}

/// Writing `z^i(5^a·n) = c·5^t` with `gcd(c, 5) = 1`, the 5-free part `c`
/// depends only on `i` and `n`, never on `a`.
pub fn verify_coefficient_stability(
    samples: &[Nat],
    a_max: u32,
    i_max: u32,
    ctx: &ZContext,
) -> Result<VerificationReport> {
    if samples.is_empty() || i_max < 1 {
        return Err(Error::InvalidInput(
            "coefficient stability needs samples and I >= 1".into(),
        ));
    }
    let mut report = ReportBuilder::new("coefficient-stability")
        .param("a", a_max)
        .param("i", i_max)
        .param("samples", samples.len());
    for n in samples {
        if num_traits::Zero::is_zero(n) {
            return Err(Error::InvalidInput("samples must be >= 1".into()));
        }
        // one iterate chain per 5-power multiplier
        let mut chains: Vec<Vec<Nat>> = Vec::with_capacity(a_max as usize + 1);
        for a in 0..=a_max {
            let mut x = nat(5).pow(a) * n;
            let mut chain = Vec::with_capacity(i_max as usize);
            for _ in 0..i_max {
                x = ctx.z(&x)?.z;
                chain.push(x.clone());
            }
            chains.push(chain);
        }
        for i in 1..=i_max {
            let reference = five_free_part(&chains[0][i as usize - 1]);
            for a in 0..=a_max {
                let c = five_free_part(&chains[a as usize][i as usize - 1]);
                report.check_eq(&reference, &c, || {
                    format!("5-free part of z^{i}(5^{a} * {n})")
                });
            }
        }
    }
    report.finish()
}

/// `2^a·5^b` terminates at the fixed point `12·5^b`, with the explicit step
/// counts `z²(4·5^b) = 12·5^b` and `z⁴(2·5^b) = 12·5^b`.
pub fn verify_terminal_family(a_max: u32, b_max: u32, ctx: &ZContext) -> Result<VerificationReport> {
    if a_max < 1 {
        return Err(Error::InvalidInput("terminal family needs A >= 1".into()));
    }
    let mut report = ReportBuilder::new("terminal-family")
        .param("a", a_max)
        .param("b", b_max);
    let five = nat(5);
    for b in 0..=b_max {
        let target = nat(12) * five.pow(b);
        for a in 1..=a_max {
            let n = nat(2).pow(a) * five.pow(b);
            let t = trajectory(&n, DEFAULT_ITERATION_CAP, ctx)?;
            report.check_eq(&target, &t.terminal, || format!("terminal(2^{a} * 5^{b})"));
        }
        let two_steps = iterate_z(&(nat(4) * five.pow(b)), 2, ctx)?;
        report.check_eq(&target, &two_steps, || format!("z^2(4 * 5^{b})"));
        let four_steps = iterate_z(&(nat(2) * five.pow(b)), 4, ctx)?;
        report.check_eq(&target, &four_steps, || format!("z^4(2 * 5^{b})"));
    }
    report.note(
        "the four-step chain from 2*5^b ends at 12*5^b for every checked b; \
         a constant terminal 12 would be correct only at b=0",
    );
    report.finish()
}

/// `z^k(ab) = lcm(z^k(a), z^k(b))` for every coprime split `ab ≤ N` with
/// `a, b > 1` and every `k ≤ K`, plus seeded random checks of
/// `z(lcm(m₁, m₂)) = lcm(z(m₁), z(m₂))`.
pub fn verify_lcm_multiplicativity(
    n_max: u64,
    k_max: u32,
    ctx: &ZContext,
) -> Result<VerificationReport> {
    if n_max < 6 {
        return Err(Error::InvalidInput(
            "lcm split needs N >= 6 for a nontrivial coprime split".into(),
        ));
    }
    let mut report = ReportBuilder::new("lcm-split").param("n", n_max).param("k", k_max);
    // z^k for every value that can appear on either side of a split
    let mut table: Vec<Vec<Nat>> = Vec::with_capacity(n_max as usize + 1);
    table.push(Vec::new()); // index 0 unused
    for x in 1..=n_max {
        let mut row = Vec::with_capacity(k_max as usize + 1);
        let mut value = nat(x);
        row.push(value.clone());
        for _ in 0..k_max {
            value = ctx.z(&value)?.z;
            row.push(value.clone());
        }
        table.push(row);
    }
    fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            let t = b;
            b = a % b;
            a = t;
        }
        a
    }
    for a in 2..=n_max {
        if a * a > n_max {
            break;
        }
        for b in a..=n_max / a {
            if gcd_u64(a, b) != 1 {
                continue;
            }
            let product = a * b;
            for k in 0..=k_max {
                let combined = lcm(&table[a as usize][k as usize], &table[b as usize][k as usize])?;
                report.check_eq(&table[product as usize][k as usize], &combined, || {
                    format!("z^{k}({a} * {b})")
                });
            }
        }
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(LCM_LAW_SEED);
    for _ in 0..LCM_LAW_RANDOM_PAIRS {
        let m1 = rng.gen_range(1..=n_max);
        let m2 = rng.gen_range(1..=n_max);
        let l = lcm(&nat(m1), &nat(m2))?;
        let lhs = ctx.z(&l)?.z;
        let rhs = lcm(&ctx.z(&nat(m1))?.z, &ctx.z(&nat(m2))?.z)?;
        report.check_eq(&lhs, &rhs, || format!("z(lcm({m1}, {m2}))"));
    }
    report.finish()
}

/// Every `n ≤ N` reaches a fixed point within `cap` iterations; the report
/// notes the maximum observed order.
pub fn verify_termination(n_max: u64, cap: u32, ctx: &ZContext) -> Result<VerificationReport> {
    if n_max == 0 || cap == 0 {
        return Err(Error::InvalidInput(
            "termination sweep needs N >= 1 and cap >= 1".into(),
        ));
    }
    let mut report = ReportBuilder::new("termination").param("n", n_max).param("cap", cap);
    let mut max_order = 0u32;
    let mut max_at = 0u64;
    for n in 1..=n_max {
        match trajectory(&nat(n), cap, ctx) {
            Ok(t) => {
                if t.order_table2 > max_order {
                    max_order = t.order_table2;
                    max_at = n;
                }
                report.check(true, || unreachable!());
            }
            Err(Error::IterationCapExceeded { partial, .. }) => {
                report.check(false, || {
                    (
                        format!("n={n}"),
                        format!("a fixed point within {cap} iterations"),
                        format!("chain still open after {} iterates", partial.len()),
                    )
                });
            }
            Err(other) => return Err(other),
        }
    }
    report.note(format!(
        "maximum observed order {max_order}, first at n = {max_at}"
    ));
    report.finish()
}

/// Golden iteration table for `n = 1..12`; the terminal of each chain is its
/// fixed point.
const GOLDEN_SMALL_TRAJECTORIES: &[(u64, &[u64])] = &[
    (1, &[1]),
    (2, &[3, 4, 6, 12]),
    (3, &[4, 6, 12]),
    (4, &[6, 12]),
    (5, &[5]),
    (6, &[12]),
    (7, &[8, 6, 12]),
    (8, &[6, 12]),
    (9, &[12]),
    (10, &[15, 20, 30, 60]),
    (11, &[10, 15, 20, 30, 60]),
    (12, &[12]),
];

/// Golden `(k, first n with order k, its fixed point)` rows for `k = 1..10`.
const GOLDEN_FIRST_BY_ORDER: &[(u32, u64, u64)] = &[
    (1, 1, 1),
    (2, 4, 12),
    (3, 3, 12),
    (4, 2, 12),
    (5, 11, 60),
    (6, 89, 60),
    (7, 1069, 60),
    (8, 2137, 60),
    (9, 4273, 60),
    (10, 59833, 60),
];

/// Recompute the trajectories of `n = 1..12` and compare them cell-by-cell
/// against the built-in golden table.
pub fn reproduce_trajectory_table(ctx: &ZContext) -> Result<VerificationReport> {
    let mut report = ReportBuilder::new("table1");
    for (n, golden) in GOLDEN_SMALL_TRAJECTORIES {
        let t = trajectory(&nat(*n), DEFAULT_ITERATION_CAP, ctx)?;
        let golden_chain: Vec<Nat> = golden.iter().map(|v| nat(*v)).collect();
        let chain_ok = t.iterates == golden_chain;
        let terminal_ok = t.terminal == nat(*golden.last().expect("golden rows are nonempty"));
        report.check(chain_ok && terminal_ok, || {
            (
                format!("n={n}"),
                format!("chain {:?}", golden),
                format!(
                    "chain [{}]",
                    t.iterates
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
            )
        });
    }
    report.finish()
}

/// Sweep `n` upward, record the first integer with each order `k ≤ k_max`,
/// and compare `(n, fixed point)` pairs against the built-in golden rows.
pub fn reproduce_order_table(
    k_max: u32,
    search_limit: &Nat,
    ctx: &ZContext,
) -> Result<VerificationReport> {
    if !(1..=10).contains(&k_max) {
        return Err(Error::InvalidInput(
            "golden order rows exist for k in 1..=10".into(),
        ));
    }
    let limit = search_limit.to_u64().ok_or_else(|| Error::ResourceExceeded {
        what: format!("order-table sweep up to {search_limit}"),
        limit: "search limits beyond u64 are not scannable".into(),
    })?;
    let mut report = ReportBuilder::new("table2")
        .param("kmax", k_max)
        .param("limit", limit);
    let mut first: BTreeMap<u32, (u64, Nat)> = BTreeMap::new();
    for n in 1..=limit {
        if first.len() == k_max as usize {
            break;
        }
        let t = trajectory(&nat(n), DEFAULT_ITERATION_CAP, ctx)?;
        if t.order_table2 <= k_max {
            first.entry(t.order_table2).or_insert((n, t.terminal));
        }
    }
    for (k, golden_n, golden_fp) in GOLDEN_FIRST_BY_ORDER.iter().take(k_max as usize) {
        let Some((found_n, found_fp)) = first.get(k) else {
            return Err(Error::NotFound {
                k: *k,
                search_limit: search_limit.clone(),
            });
        };
        report.check(
            found_n == golden_n && *found_fp == nat(*golden_fp),
            || {
                (
                    format!("k={k}"),
                    format!("(n, fp) = ({golden_n}, {golden_fp})"),
                    format!("(n, fp) = ({found_n}, {found_fp})"),
                )
            },
        );
    }
    report.finish()
}

/// Default sample list for the coefficient-stability suite: small integers
/// mixing primes, prime powers, units, and the table rows.
pub fn default_stability_samples() -> Vec<Nat> {
    [1u64, 2, 3, 4, 6, 7, 8, 9, 10, 11, 12, 18, 24, 59, 89, 100]
        .iter()
        .map(|v| nat(*v))
        .collect()
}

/// Suite identifiers accepted by [`run_suite`], in `verify all` order.
pub const SUITE_NAMES: &[&str] = &[
    "fixed-points",
    "upper-bound",
    "prime-laws",
    "divisibility",
    "backend-equivalence",
    "power2",
    "power10",
    "order-family",
    "coefficient-stability",
    "terminal-family",
    "lcm-split",
    "termination",
    "table1",
    "table2",
];

/// Parameter names a suite accepts via `name=value` overrides.
pub fn suite_params(name: &str) -> &'static [&'static str] {
    match name {
        "fixed-points" | "upper-bound" | "divisibility" | "backend-equivalence" => &["n"],
        "prime-laws" => &["p"],
        "power2" => &["a"],
        "power10" => &["k", "m"],
        "order-family" => &["k", "r"],
        "coefficient-stability" => &["a", "i", "samples"],
        "terminal-family" => &["a", "b"],
        "lcm-split" => &["n", "k"],
        "termination" => &["n", "cap"],
        "table1" => &[],
        "table2" => &["kmax", "limit"],
        _ => &[],
    }
}

/// What each suite certifies, for the `verify all` coverage header.
pub fn coverage_ledger() -> Vec<(&'static str, &'static str)> {
    vec![
        ("fixed-points", "z(n) = n exactly for n = 5^k and n = 12*5^k"),
        ("upper-bound", "z(n) <= 2n with equality exactly at n = 6*5^k"),
        ("prime-laws", "z(p) <= p+1, and gcd(p, z(p)) = 1 for p != 5"),
        ("divisibility", "n | F_j implies z(n) | j"),
        (
            "backend-equivalence",
            "z(n) = lcm of prime-power images, z(p^e) = p^max(e-a,0) * z(p)",
        ),
        (
            "power2",
            "z(2^a) = 3*2^(a-2), z(3^b) = 4*3^(b-1), z^k(2^a) = lcm(3*2^(a-2k), 4), order(2^a) = ceil(a/2) - 1",
        ),
        ("power10", "z^k(10^m) = 3*5^m*2^(m-2k) for k >= 1, 2k+2 <= m"),
        (
            "order-family",
            "order(5^r * 10^(2k+2)) = k: every order is realized, at every 5-power multiple",
        ),
        (
            "coefficient-stability",
            "the 5-free part of z^i(5^a * n) does not depend on a",
        ),
        (
            "terminal-family",
            "2^a * 5^b terminates at 12*5^b; z^2(4*5^b) = z^4(2*5^b) = 12*5^b",
        ),
        (
            "lcm-split",
            "z^k(ab) = lcm(z^k(a), z^k(b)) for coprime a,b; z(lcm(m1,m2)) = lcm(z(m1), z(m2))",
        ),
        (
            "termination",
            "every n reaches a fixed point within the iteration cap (bounded witness sweep)",
        ),
        ("table1", "golden iteration chains for n = 1..12"),
        ("table2", "golden first n with each order k = 1..10"),
    ]
}

fn param_u64(params: &BTreeMap<String, String>, key: &str, default: u64) -> Result<u64> {
    match params.get(key) {
        None => Ok(default),
        Some(raw) => raw.parse().map_err(|_| {
            Error::InvalidInput(format!("parameter {key}={raw} is not an unsigned integer"))
        }),
    }
}

fn param_u32(params: &BTreeMap<String, String>, key: &str, default: u32) -> Result<u32> {
    param_u64(params, key, default as u64).and_then(|v| {
        u32::try_from(v)
            .map_err(|_| Error::InvalidInput(format!("parameter {key}={v} is too large")))
    })
}

fn reject_unknown_params(params: &BTreeMap<String, String>, allowed: &[&str]) -> Result<()> {
    for key in params.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::InvalidInput(format!(
                "unknown parameter {key:?}; this suite accepts {allowed:?}"
            )));
        }
    }
    Ok(())
}

/// Run one suite by name with `name=value` parameters (defaults fill in
/// whatever is missing).
pub fn run_suite(
    name: &str,
    params: &BTreeMap<String, String>,
    ctx: &ZContext,
) -> Result<VerificationReport> {
    if !SUITE_NAMES.contains(&name) {
        return Err(Error::InvalidInput(format!(
            "unknown suite {name:?}; known suites: {SUITE_NAMES:?}"
        )));
    }
    reject_unknown_params(params, suite_params(name))?;
    match name {
        "fixed-points" => {
            verify_fixed_point_characterization(param_u64(params, "n", 100_000)?, ctx)
        }
        "upper-bound" => verify_z_upper_bound(param_u64(params, "n", 100_000)?, ctx),
        "prime-laws" => verify_prime_laws(param_u64(params, "p", 10_000)?, ctx),
        "divisibility" => verify_divisibility(param_u64(params, "n", 2_000)?, ctx),
        "backend-equivalence" => verify_backend_equivalence(param_u64(params, "n", 20_000)?, ctx),
        "power2" => verify_power2_formulas(param_u32(params, "a", 60)?, ctx),
        "power10" => verify_power10_formula(
            param_u32(params, "k", 11)?,
            param_u32(params, "m", 24)?,
            ctx,
        ),
        "order-family" => {
            verify_order_family(param_u32(params, "k", 6)?, param_u32(params, "r", 4)?, ctx)
        }
        "coefficient-stability" => {
            let samples = match params.get("samples") {
                None => default_stability_samples(),
                Some(raw) => raw
                    .split(',')
                    .map(crate::parse_nat)
                    .collect::<Result<Vec<_>>>()?,
            };
            verify_coefficient_stability(
                &samples,
                param_u32(params, "a", 3)?,
                param_u32(params, "i", 6)?,
                ctx,
            )
        }
        "terminal-family" => {
            verify_terminal_family(param_u32(params, "a", 20)?, param_u32(params, "b", 6)?, ctx)
        }
        "lcm-split" => verify_lcm_multiplicativity(
            param_u64(params, "n", 5_000)?,
            param_u32(params, "k", 10)?,
            ctx,
        ),
        "termination" => verify_termination(
            param_u64(params, "n", 100_000)?,
            param_u32(params, "cap", DEFAULT_ITERATION_CAP)?,
            ctx,
        ),
        "table1" => reproduce_trajectory_table(ctx),
        "table2" => reproduce_order_table(
            param_u32(params, "kmax", 10)?,
            &nat(param_u64(params, "limit", 100_000)?),
            ctx,
        ),
        _ => unreachable!("membership checked above"),
    }
}
