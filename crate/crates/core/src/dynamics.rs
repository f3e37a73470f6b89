//! Repeated application of `z`: trajectories, fixed-point detection, fixed
//! point order, and the first-`n`-with-order search.
//!
//! Every positive integer reaches a fixed point (`5^k` or `12·5^k`) after
//! finitely many applications of `z`. Nothing here assumes that: iteration is
//! capped, and blowing the cap produces an error carrying the partial chain —
//! a counterexample candidate rather than a spin.

use crate::arithmetic::{classify_fixed_point_form, FixedPointForm};
use crate::rank::{Backend, ZContext};
use crate::{Error, Nat, Result};
use num_traits::ToPrimitive;

/// Default bound on trajectory length. Orders observed at desk scale stay
/// around ten; two hundred leaves generous headroom while still converting a
/// runaway orbit into a loud error.
pub const DEFAULT_ITERATION_CAP: u32 = 200;

/// How to count the iterations that bring `n` to a fixed point.
///
/// The two conventions disagree only on fixed points themselves: `Def2`
/// assigns them order 0, while `Table2` counts the first application
/// (`z(n) = n`), so their order is 1. Both are first-class; neither is
/// canonical.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderConvention {
    Def2,
    Table2,
}

/// The orbit of `n` under `z`, up to its terminal fixed point.
///
/// `iterates` holds `z(n), z²(n), …` ending at the first fixed point reached;
/// a fixed starting point yields the single-element chain `[n]`. No iterate
/// before the last is fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub start: Nat,
    pub iterates: Vec<Nat>,
    pub terminal: Nat,
    /// 0 when `start` is fixed, else the minimal `k ≥ 1` with `z^k` fixed.
    pub order_def2: u32,
    /// Minimal `k ≥ 1` with `z^k` fixed; equals `max(order_def2, 1)`.
    pub order_table2: u32,
}

/// Does `z(n) = n`?
///
/// Under the `CrossCheck` backend the answer is also compared against the
/// `5^k` / `12·5^k` form classifier; disagreement is an error — it would be a
/// counterexample to the fixed-point characterization.
pub fn is_fixed_point(n: &Nat, ctx: &ZContext) -> Result<bool> {
    let by_z = ctx.z(n)?.z == *n;
    if ctx.backend == Backend::CrossCheck {
        let by_form = classify_fixed_point_form(n) != FixedPointForm::Neither;
        if by_z != by_form {
            return Err(Error::FormMismatch {
                n: n.clone(),
                by_z,
                by_form,
            });
        }
    }
    Ok(by_z)
}

/// Iterate `z` from `n` until a fixed point, recording the full chain.
pub fn trajectory(n: &Nat, cap: u32, ctx: &ZContext) -> Result<Trajectory> {
    if num_traits::Zero::is_zero(n) {
        return Err(Error::InvalidInput("trajectory requires n >= 1".into()));
    }
    if cap == 0 {
        return Err(Error::InvalidInput("iteration cap must be >= 1".into()));
    }
    let first = ctx.z(n)?.z;
    if first == *n {
        return Ok(Trajectory {
            start: n.clone(),
            iterates: vec![n.clone()],
            terminal: n.clone(),
            order_def2: 0,
            order_table2: 1,
        });
    }
    let mut iterates = vec![first.clone()];
    let mut current = first;
    loop {
        let next = ctx.z(&current)?.z;
        if next == current {
            break;
        }
        if iterates.len() as u32 >= cap {
            return Err(Error::IterationCapExceeded {
                start: n.clone(),
                cap,
                partial: iterates,
            });
        }
        iterates.push(next.clone());
        current = next;
    }
    let order = iterates.len() as u32;
    Ok(Trajectory {
        start: n.clone(),
        iterates,
        terminal: current,
        order_def2: order,
        order_table2: order,
    })
}

/// Fixed point order of `n` under the chosen convention, with the default
/// iteration cap.
pub fn fixed_point_order(n: &Nat, convention: OrderConvention, ctx: &ZContext) -> Result<u32> {
    let t = trajectory(n, DEFAULT_ITERATION_CAP, ctx)?;
    Ok(match convention {
        OrderConvention::Def2 => t.order_def2,
        OrderConvention::Table2 => t.order_table2,
    })
}

/// The fixed point at which the orbit of `n` ends.
pub fn terminal_fixed_point(n: &Nat, ctx: &ZContext) -> Result<Nat> {
    Ok(trajectory(n, DEFAULT_ITERATION_CAP, ctx)?.terminal)
}

/// Apply `z` exactly `k` times (no fixed-point detection; `k = 0` is the
/// identity).
pub fn iterate_z(n: &Nat, k: u32, ctx: &ZContext) -> Result<Nat> {
    let mut current = n.clone();
    for _ in 0..k {
        current = ctx.z(&current)?.z;
    }
    Ok(current)
}

/// Smallest `n ≤ search_limit` whose fixed point order is exactly `k`, under
/// the Table-2 counting convention (fixed points have order 1).
pub fn smallest_n_with_order(k: u32, search_limit: &Nat, ctx: &ZContext) -> Result<Nat> {
    if k == 0 {
        return Err(Error::InvalidInput(
            "order search counts k >= 1 (Table-2 convention)".into(),
        ));
    }
    let limit = search_limit.to_u64().ok_or_else(|| Error::ResourceExceeded {
        what: format!("order search up to {search_limit}"),
        limit: "search limits beyond u64 are not scannable".into(),
    })?;
    for n in 1..=limit {
        let candidate = crate::nat(n);
        if fixed_point_order(&candidate, OrderConvention::Table2, ctx)? == k {
            return Ok(candidate);
        }
    }
    Err(Error::NotFound {
        k,
        search_limit: search_limit.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat;

    fn ctx() -> ZContext {
        ZContext::new(Backend::Fast)
    }

    fn chain(n: u64) -> Vec<u64> {
        trajectory(&nat(n), DEFAULT_ITERATION_CAP, &ctx())
            .unwrap()
            .iterates
            .iter()
            .map(|x| x.to_u64().unwrap())
            .collect()
    }

    #[test]
    fn fixed_point_detection() {
        let ctx = ctx();
        assert!(is_fixed_point(&nat(12), &ctx).unwrap());
        assert!(!is_fixed_point(&nat(10), &ctx).unwrap());
        assert!(is_fixed_point(&nat(5).pow(5), &ctx).unwrap(), "3125 = 5^5");
    }

    #[test]
    fn fixed_point_detection_cross_checks_the_classifier() {
        let ctx = ZContext::new(Backend::CrossCheck);
        assert!(is_fixed_point(&nat(12), &ctx).unwrap());
        assert!(!is_fixed_point(&nat(24), &ctx).unwrap());
        // poisoned cache makes z(5) = 4; the classifier still says 5 is fixed
        let poisoned = ZContext::new(Backend::Fast);
        poisoned.cache.insert(nat(5), 1, nat(4));
        let poisoned = ZContext {
            backend: Backend::CrossCheck,
            ..poisoned
        };
        match is_fixed_point(&nat(5), &poisoned) {
            Err(Error::BackendMismatch { .. }) => {} // oracle catches it first
            Err(Error::FormMismatch { .. }) => {}
            other => panic!("poisoned cache went unnoticed: {other:?}"),
        }
    }

    #[test]
    fn trajectories_match_known_chains() {
        // golden chains confirmed by the oracle scan
        assert_eq!(chain(2), vec![3, 4, 6, 12]);
        assert_eq!(chain(11), vec![10, 15, 20, 30, 60]);
        assert_eq!(chain(5), vec![5]);
        assert_eq!(chain(7), vec![8, 6, 12]);
        let t = trajectory(&nat(2), 200, &ctx()).unwrap();
        assert_eq!(t.terminal, nat(12));
        assert_eq!(t.order_table2, 4);
        assert_eq!(t.order_def2, 4);
        let f = trajectory(&nat(5), 200, &ctx()).unwrap();
        assert_eq!((f.order_def2, f.order_table2), (0, 1));
        assert_eq!(f.terminal, nat(5));
    }

    #[test]
    fn trajectory_invariants_hold_on_a_sweep() {
        let ctx = ctx();
        for n in 1..=400u64 {
            let t = trajectory(&nat(n), DEFAULT_ITERATION_CAP, &ctx).unwrap();
            // consecutive pairs satisfy y = z(x), starting from z(start)
            if t.order_def2 > 0 {
                assert_eq!(t.iterates[0], ctx.z(&t.start).unwrap().z);
            }
            for w in t.iterates.windows(2) {
                assert_eq!(w[1], ctx.z(&w[0]).unwrap().z, "chain break at n={n}");
            }
            // terminal is the last iterate and is fixed
            assert_eq!(Some(&t.terminal), t.iterates.last());
            assert_eq!(ctx.z(&t.terminal).unwrap().z, t.terminal);
            // terminal classifies as one of the two fixed-point forms
            assert_ne!(
                classify_fixed_point_form(&t.terminal),
                FixedPointForm::Neither,
                "terminal {} of n={n} has unexpected form",
                t.terminal
            );
            // no earlier iterate is fixed
            for x in &t.iterates[..t.iterates.len() - 1] {
                assert_ne!(ctx.z(x).unwrap().z, *x, "premature fixed point in chain of {n}");
            }
            // convention bookkeeping
            assert_eq!(t.order_table2, t.order_def2.max(1));
            assert_eq!(t.iterates.len() as u32, t.order_table2);
        }
    }

    #[test]
    fn absorption_once_fixed_always_fixed() {
        let ctx = ctx();
        for n in [2u64, 10, 89, 3125] {
            let terminal = terminal_fixed_point(&nat(n), &ctx).unwrap();
            let mut x = terminal.clone();
            for _ in 0..5 {
                x = ctx.z(&x).unwrap().z;
                assert_eq!(x, terminal);
            }
        }
    }

    #[test]
    fn orders_match_both_conventions() {
        let ctx = ctx();
        assert_eq!(
            fixed_point_order(&nat(1), OrderConvention::Table2, &ctx).unwrap(),
            1
        );
        assert_eq!(
            fixed_point_order(&nat(1), OrderConvention::Def2, &ctx).unwrap(),
            0
        );
        assert_eq!(
            fixed_point_order(&nat(89), OrderConvention::Table2, &ctx).unwrap(),
            6
        );
        assert_eq!(
            fixed_point_order(&nat(89), OrderConvention::Def2, &ctx).unwrap(),
            6
        );
    }

    #[test]
    fn terminals_match_known_values() {
        let ctx = ctx();
        assert_eq!(terminal_fixed_point(&nat(11), &ctx).unwrap(), nat(60));
        assert_eq!(terminal_fixed_point(&nat(7), &ctx).unwrap(), nat(12));
        let big = nat(5).pow(9);
        assert_eq!(terminal_fixed_point(&big, &ctx).unwrap(), big);
    }

    #[test]
    fn search_finds_first_n_with_each_small_order() {
        let ctx = ctx();
        let limit = nat(100_000);
        assert_eq!(smallest_n_with_order(1, &limit, &ctx).unwrap(), nat(1));
        assert_eq!(smallest_n_with_order(4, &limit, &ctx).unwrap(), nat(2));
        assert_eq!(smallest_n_with_order(5, &limit, &ctx).unwrap(), nat(11));
        assert_eq!(smallest_n_with_order(7, &limit, &ctx).unwrap(), nat(1069));
    }

    #[test]
    fn search_reports_not_found_within_limit() {
        match smallest_n_with_order(5, &nat(10), &ctx()) {
            Err(Error::NotFound { k, search_limit }) => {
                assert_eq!(k, 5);
                assert_eq!(search_limit, nat(10));
            }
            other => panic!("expected NotFound, got {other:?}"),
        }
        assert!(smallest_n_with_order(0, &nat(10), &ctx()).is_err());
    }

    #[test]
    fn cap_exceeded_carries_the_partial_chain() {
        match trajectory(&nat(2), 2, &ctx()) {
            Err(Error::IterationCapExceeded { start, cap, partial }) => {
                assert_eq!(start, nat(2));
                assert_eq!(cap, 2);
                assert_eq!(partial, vec![nat(3), nat(4)]);
            }
            other => panic!("expected IterationCapExceeded, got {other:?}"),
        }
        // a cap of exactly the order succeeds
        assert!(trajectory(&nat(2), 4, &ctx()).is_ok());
        assert!(trajectory(&nat(2), 3, &ctx()).is_err());
    }

    #[test]
    fn iterate_z_is_plain_repeated_application() {
        let ctx = ctx();
        assert_eq!(iterate_z(&nat(10), 0, &ctx).unwrap(), nat(10));
        assert_eq!(iterate_z(&nat(10), 1, &ctx).unwrap(), nat(15));
        assert_eq!(iterate_z(&nat(10), 4, &ctx).unwrap(), nat(60));
        // keeps applying at the fixed point
        assert_eq!(iterate_z(&nat(10), 9, &ctx).unwrap(), nat(60));
    }

    #[test]
    fn coprime_split_commutes_with_iteration() {
        let ctx = ctx();
        for a in 2..=20u64 {
            for b in 2..=20u64 {
                if crate::arithmetic::gcd(&nat(a), &nat(b)) != nat(1) {
                    continue;
                }
                for k in 0..=5u32 {
                    let lhs = iterate_z(&nat(a * b), k, &ctx).unwrap();
                    let rhs = crate::arithmetic::lcm(
                        &iterate_z(&nat(a), k, &ctx).unwrap(),
                        &iterate_z(&nat(b), k, &ctx).unwrap(),
                    )
                    .unwrap();
                    assert_eq!(lhs, rhs, "split failed at a={a} b={b} k={k}");
                }
            }
        }
    }

    #[test]
    fn zero_and_zero_cap_are_rejected(){
        assert!(trajectory(&nat(0), 10, &ctx()).is_err());
        assert!(trajectory(&nat(2), 0, &ctx()).is_err());
    }
}
