//! Exact threshold payments.
//!
//! The threshold bid of a winner is the supremum of the bids at which it
//! would still win, everyone else's bids held fixed. For the cheapest-set
//! rule it has a closed form. For the combinatorial vertex-cover rules we
//! exploit that every win/lose breakpoint lies on a known rational
//! lattice: all of their comparisons are sums of the other bids with ±1
//! coefficients (local-ratio, the repair pass) or bid-to-degree ratios
//! (greedy), so with q the common denominator of the other bids, every
//! breakpoint is a multiple of 1/q respectively 1/(q·lcm(1..n)). Bisecting
//! to a bracket narrower than one lattice step leaves a single candidate,
//! and one probe strictly between the last winning and first losing
//! lattice point decides whether the supremum is attained at the lower or
//! the upper end.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::rational::Rat;
use crate::system::{enumerate_feasible, first_monopolist, Agent, CostVector, SetSystem};

use super::{allocate, Rule};

/// Computes the winner's exact threshold bid under the rule.
pub fn threshold_payment(
    rule: &Rule,
    system: &SetSystem,
    bids: &CostVector,
    e: Agent,
    caps: &Caps,
) -> Result<Rat> {
    if bids.len() != system.n() {
        return Err(Error::DimensionMismatch(format!(
            "{} bids for {} agents",
            bids.len(),
            system.n()
        )));
    }
    if e >= system.n() {
        return Err(Error::DimensionMismatch(format!(
            "agent {e} out of range for {} agents",
            system.n()
        )));
    }
    if let Some(agent) = first_monopolist(system, caps)? {
        return Err(Error::MonopolyDetected(agent));
    }
    if !allocate(rule, system, bids, caps)?.contains(&e) {
        return Err(Error::NotAWinner(e));
    }
    match rule {
        Rule::Vcg => vcg_threshold(system, bids, e, caps),
        _ => bisect_threshold(rule, system, bids, e, caps),
    }
}

/// Closed form for the cheapest-set rule: the winner may raise its bid
/// until the cheapest set containing it ties with the cheapest set
/// avoiding it, so the threshold is
/// `min over T avoiding e of b(T)  −  min over T containing e of b(T − e)`.
fn vcg_threshold(
    system: &SetSystem,
    bids: &CostVector,
    e: Agent,
    caps: &Caps,
) -> Result<Rat> {
    // The full family is needed: the cheapest set containing e need not be
    // inclusion-minimal.
    let mut best_without: Option<Rat> = None;
    let mut best_with: Option<Rat> = None;
    for t in enumerate_feasible(system, false, caps)? {
        if t.contains(&e) {
            let rest = bids.total(t.iter().copied().filter(|&f| f != e));
            if best_with.as_ref().is_none_or(|b| &rest < b) {
                best_with = Some(rest);
            }
        } else {
            let cost = bids.total(t.iter().copied());
            if best_without.as_ref().is_none_or(|b| &cost < b) {
                best_without = Some(cost);
            }
        }
    }
    let without = best_without.ok_or(Error::MonopolyDetected(e))?;
    let with = best_with.ok_or(Error::NotAWinner(e))?;
    Ok(without - with)
}

/// The lattice step that is guaranteed to contain every win/lose
/// breakpoint for the combinatorial rules.
fn lattice_unit(rule: &Rule, system: &SetSystem, bids: &CostVector, e: Agent) -> Rat {
    let mut q = BigInt::one();
    for (i, b) in bids.as_slice().iter().enumerate() {
        if i != e {
            q = q.lcm(b.denom());
        }
    }
    if rule.contains_greedy() {
        // Greedy compares bids scaled by uncovered degrees, which range
        // over 1..n; fold their least common multiple into the lattice.
        let mut scale = BigInt::one();
        for d in 1..system.n().max(2) {
            scale = scale.lcm(&BigInt::from(d));
        }
        q *= scale;
    }
    Rat::from_big(BigInt::one(), q).expect("nonzero lattice denominator")
}

fn on_grid(k: &BigInt, unit: &Rat) -> Rat {
    Rat::from_big(k.clone(), BigInt::one()).expect("integer") * unit
}

fn bisect_threshold(
    rule: &Rule,
    system: &SetSystem,
    bids: &CostVector,
    e: Agent,
    caps: &Caps,
) -> Result<Rat> {
    let unit = lattice_unit(rule, system, bids, e);
    let wins = |bid: Rat| -> Result<bool> {
        let mut trial = bids.as_slice().to_vec();
        trial[e] = bid;
        let trial = CostVector::new(trial)?;
        Ok(allocate(rule, system, &trial, caps)?.contains(&e))
    };

    // A winner keeps winning at any lower bid, so the floor of its current
    // bid in lattice coordinates must win too.
    let mut lo: BigInt = (bids.get(e) / &unit).floor().numer().clone();
    if lo < BigInt::zero() {
        lo = BigInt::zero();
    }
    if !wins(on_grid(&lo, &unit))? {
        return Err(Error::NotMonotone(e));
    }

    // Find a losing lattice point: start just past the sum of everyone
    // else's bids and keep doubling. Every rule here eventually drops an
    // agent whose bid dwarfs all others, so a monotone rule must lose
    // within a few doublings.
    let others: Rat = bids
        .as_slice()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != e)
        .map(|(_, b)| b)
        .sum();
    let mut hi: BigInt = (&others / &unit).floor().numer().clone() + BigInt::one();
    if hi <= lo {
        hi = &lo + BigInt::one();
    }
    let mut doublings = 0;
    while wins(on_grid(&hi, &unit))? {
        hi *= 2;
        doublings += 1;
        if doublings > 64 {
            return Err(Error::NotMonotone(e));
        }
    }

    let mut depth = 0;
    while &hi - &lo > BigInt::one() {
        if depth >= caps.bisection_depth {
            return Err(Error::BisectionInconclusive {
                lo: on_grid(&lo, &unit).to_string(),
                hi: on_grid(&hi, &unit).to_string(),
            });
        }
        depth += 1;
        let mid = (&lo + &hi) / BigInt::from(2);
        if wins(on_grid(&mid, &unit))? {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    // lo wins, hi = lo + 1 loses, and the threshold is one of the two
    // lattice points. Probing halfway between them tells which: a win
    // there means winning bids approach hi (a supremum that is not
    // attained), a loss pins the threshold at lo.
    let low_bid = on_grid(&lo, &unit);
    let high_bid = on_grid(&hi, &unit);
    let midpoint = (&low_bid + &high_bid) / Rat::int(2);
    Ok(if wins(midpoint)? { high_bid } else { low_bid })
}
