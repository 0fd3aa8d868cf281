//! The four payment benchmarks.
//!
//! Fix the cheapest feasible set S. Over bid vectors b on S satisfying the
//! witness conditions (per-agent floors, the comparison constraints against
//! every other feasible set, and — made explicit for the minima — a tight
//! comparison for every winner), the benchmarks are
//!
//! * `TuMin`  — minimize total bids, floors at zero;
//! * `NtuMin` — minimize total bids, floors at cost;
//! * `NtuMax` — maximize total bids, floors at cost;
//! * `TuMax`  — maximize total bids, floors at zero.
//!
//! For the maxima the tightness condition costs nothing: at an optimum
//! every winner already sits in a tight comparison, else its bid could be
//! nudged up. The minima genuinely need it — without tightness the floors
//! themselves would be optimal — and are computed by enumerating the ways
//! tight comparisons can cover S, solving one small LP per cover, and
//! taking the least value. Everything is exact.

mod shift;
mod vc_witness;

pub use shift::{shift_costs, CostShift, ShiftOutcome};
pub use vc_witness::{vc_ntumax_witness, vc_tumax_witness};

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::ratlp::{solve_lp, LinearProgram, LpResult, Relation, Sense};
use crate::rational::Rat;
use crate::system::{
    cheapest_feasible_set, first_monopolist, min_feasible_cost, Agent, AgentSet, BidVector,
    CostVector, SetSystem,
};
use crate::witness::{type2_constraints, Mode, Type2Constraint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundKind {
    TuMin,
    NtuMin,
    NtuMax,
    TuMax,
}

impl BoundKind {
    pub const ALL: [BoundKind; 4] =
        [BoundKind::TuMin, BoundKind::NtuMin, BoundKind::NtuMax, BoundKind::TuMax];

    pub fn mode(self) -> Mode {
        match self {
            BoundKind::TuMin | BoundKind::TuMax => Mode::Tu,
            BoundKind::NtuMin | BoundKind::NtuMax => Mode::Ntu,
        }
    }

    pub fn is_min(self) -> bool {
        matches!(self, BoundKind::TuMin | BoundKind::NtuMin)
    }
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            BoundKind::TuMin => "tumin",
            BoundKind::NtuMin => "ntumin",
            BoundKind::NtuMax => "ntumax",
            BoundKind::TuMax => "tumax",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PaymentBound {
    pub kind: BoundKind,
    pub value: Rat,
    pub witness: BidVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AllBounds {
    pub chosen_set: AgentSet,
    pub tumin: PaymentBound,
    pub ntumin: PaymentBound,
    pub ntumax: PaymentBound,
    pub tumax: PaymentBound,
}

impl AllBounds {
    pub fn get(&self, kind: BoundKind) -> &PaymentBound {
        match kind {
            BoundKind::TuMin => &self.tumin,
            BoundKind::NtuMin => &self.ntumin,
            BoundKind::NtuMax => &self.ntumax,
            BoundKind::TuMax => &self.tumax,
        }
    }
}

/// One benchmark at the canonical (lexicographically least cheapest) set.
pub fn payment_bound(
    system: &SetSystem,
    costs: &CostVector,
    kind: BoundKind,
    caps: &Caps,
) -> Result<PaymentBound> {
    let s = canonical_set(system, costs, caps)?;
    payment_bound_for_set(system, costs, &s, kind, caps)
}

/// One benchmark at a caller-chosen set, which must be feasible and tie
/// the minimum cost (the benchmarks are defined only at cheapest sets; the
/// transfer variants genuinely depend on which tied set is picked).
pub fn payment_bound_for_set(
    system: &SetSystem,
    costs: &CostVector,
    s: &AgentSet,
    kind: BoundKind,
    caps: &Caps,
) -> Result<PaymentBound> {
    let ctx = BoundContext::build(system, costs, s, caps)?;
    let (value, witness) = match kind {
        BoundKind::NtuMax | BoundKind::TuMax => ctx.solve_max(kind.mode())?,
        BoundKind::NtuMin | BoundKind::TuMin => ctx.solve_min(kind.mode(), caps)?,
    };
    Ok(PaymentBound { kind, value, witness })
}

/// All four benchmarks at the canonical set.
pub fn all_bounds(system: &SetSystem, costs: &CostVector, caps: &Caps) -> Result<AllBounds> {
    let s = canonical_set(system, costs, caps)?;
    all_bounds_for_set(system, costs, &s, caps)
}

/// All four benchmarks at a chosen cheapest set, sharing the constraint
/// and cover computations. The chain TuMin <= NtuMin <= NtuMax <= TuMax is
/// checked before returning: weaker floors widen the feasible region.
pub fn all_bounds_for_set(
    system: &SetSystem,
    costs: &CostVector,
    s: &AgentSet,
    caps: &Caps,
) -> Result<AllBounds> {
    let ctx = BoundContext::build(system, costs, s, caps)?;
    let (tumin_v, tumin_w) = ctx.solve_min(Mode::Tu, caps)?;
    let (ntumin_v, ntumin_w) = ctx.solve_min(Mode::Ntu, caps)?;
    let (ntumax_v, ntumax_w) = ctx.solve_max(Mode::Ntu)?;
    let (tumax_v, tumax_w) = ctx.solve_max(Mode::Tu)?;
    if !(tumin_v <= ntumin_v && ntumin_v <= ntumax_v && ntumax_v <= tumax_v) {
        return Err(Error::InvariantViolated(format!(
            "benchmark chain out of order: {tumin_v}, {ntumin_v}, {ntumax_v}, {tumax_v}"
        )));
    }
    Ok(AllBounds {
        chosen_set: s.clone(),
        tumin: PaymentBound { kind: BoundKind::TuMin, value: tumin_v, witness: tumin_w },
        ntumin: PaymentBound { kind: BoundKind::NtuMin, value: ntumin_v, witness: ntumin_w },
        ntumax: PaymentBound { kind: BoundKind::NtuMax, value: ntumax_v, witness: ntumax_w },
        tumax: PaymentBound { kind: BoundKind::TuMax, value: tumax_v, witness: tumax_w },
    })
}

fn canonical_set(system: &SetSystem, costs: &CostVector, caps: &Caps) -> Result<AgentSet> {
    cheapest_feasible_set(system, costs, caps)
}

/// Shared per-set state: the winner list and the pruned comparison
/// constraints.
/// Objective value, LP point, and the tightness cover that produced them.
type CoverSolution = (Rat, Vec<Rat>, Vec<usize>);

struct BoundContext<'a> {
    costs: &'a CostVector,
    vars: Vec<Agent>,
    constraints: Vec<Type2Constraint>,
}

impl<'a> BoundContext<'a> {
    fn build(
        system: &SetSystem,
        costs: &'a CostVector,
        s: &AgentSet,
        caps: &Caps,
    ) -> Result<BoundContext<'a>> {
        if let Some(agent) = first_monopolist(system, caps)? {
            return Err(Error::MonopolyDetected(agent));
        }
        if !system.contains(s) {
            return Err(Error::InvalidInstance(format!("chosen set {s:?} is not feasible")));
        }
        let min_cost = min_feasible_cost(system, costs, caps)?;
        let s_cost = costs.total(s.iter().copied());
        if s_cost != min_cost {
            return Err(Error::InvalidInstance(format!(
                "chosen set costs {s_cost}, cheaper feasible set exists at {min_cost}"
            )));
        }
        let constraints = type2_constraints(system, costs, s, caps)?;
        if constraints.len() > caps.cover_constraints {
            return Err(Error::CapExceeded(caps.cover_constraints));
        }
        let vars: Vec<Agent> = s.iter().copied().collect();
        // Monopoly-freeness puts every winner into some comparison.
        for &e in &vars {
            if !constraints.iter().any(|c| c.lhs.contains(&e)) {
                return Err(Error::InvariantViolated(format!(
                    "agent {e} appears in no comparison constraint"
                )));
            }
        }
        Ok(BoundContext { costs, vars, constraints })
    }

    fn floors(&self, mode: Mode) -> Vec<Rat> {
        match mode {
            Mode::Ntu => self.vars.iter().map(|&e| self.costs.get(e).clone()).collect(),
            Mode::Tu => vec![Rat::zero(); self.vars.len()],
        }
    }

    fn lp(&self, sense: Sense, mode: Mode, tight: &[usize]) -> LinearProgram {
        let n = self.vars.len();
        let mut lp = LinearProgram::new(n, sense, vec![Rat::one(); n]);
        lp.lower_bounds = self.floors(mode);
        for (i, c) in self.constraints.iter().enumerate() {
            let coeffs: Vec<Rat> = self
                .vars
                .iter()
                .map(|e| if c.lhs.contains(e) { Rat::one() } else { Rat::zero() })
                .collect();
            let rel = if tight.binary_search(&i).is_ok() { Relation::Eq } else { Relation::Le };
            lp.push_row(coeffs, rel, c.rhs.clone());
        }
        lp
    }

    fn to_bids(&self, point: &[Rat]) -> BidVector {
        BidVector::from_pairs(
            self.vars.iter().copied().zip(point.iter().cloned()),
        )
    }

    fn solve_max(&self, mode: Mode) -> Result<(Rat, BidVector)> {
        let lp = self.lp(Sense::Maximize, mode, &[]);
        let LpResult::Optimal { value, point } = solve_lp(&lp)? else {
            return Err(Error::InvariantViolated(
                "maximization did not reach an optimum on a monopoly-free system".into(),
            ));
        };
        // Every winner must now sit in a tight comparison; if not, its bid
        // had room to grow, contradicting optimality.
        for &e in &self.vars {
            let covered = self.constraints.iter().any(|c| {
                c.lhs.contains(&e)
                    && self
                        .vars
                        .iter()
                        .zip(point.iter())
                        .filter(|(v, _)| c.lhs.contains(v))
                        .map(|(_, b)| b)
                        .sum::<Rat>()
                        == c.rhs
            });
            if !covered {
                return Err(Error::InvariantViolated(format!(
                    "maximum witness leaves agent {e} without a tight comparison"
                )));
            }
        }
        Ok((value, self.to_bids(&point)))
    }

    fn solve_min(&self, mode: Mode, caps: &Caps) -> Result<(Rat, BidVector)> {
        let covers = minimal_covers(&self.vars, &self.constraints, caps)?;
        let solved: Vec<Option<CoverSolution>> = covers
            .par_iter()
            .map(|cover| {
                let lp = self.lp(Sense::Minimize, mode, cover);
                match solve_lp(&lp) {
                    Ok(LpResult::Optimal { value, point }) => {
                        Ok(Some((value, point, cover.clone())))
                    }
                    Ok(_) => Ok(None), // this tightness pattern is unattainable
                    Err(e) => Err(e),
                }
            })
            .collect::<Result<_>>()?;
        let best = solved
            .into_iter()
            .flatten()
            .min_by(|a, b| a.cmp(b))
            .ok_or_else(|| {
                Error::InvariantViolated("no tightness pattern is attainable".into())
            })?;
        Ok((best.0, self.to_bids(&best.1)))
    }
}

/// All inclusion-minimal ways to cover the winners with constraint
/// left-hand sides (plus possibly some redundant covers, which cannot
/// lower the minimum: more tight rows only shrink the region). Constraints
/// that are some winner's only option are pre-committed.
fn minimal_covers(
    vars: &[Agent],
    constraints: &[Type2Constraint],
    caps: &Caps,
) -> Result<Vec<Vec<usize>>> {
    let options: Vec<Vec<usize>> = vars
        .iter()
        .map(|e| {
            (0..constraints.len())
                .filter(|&i| constraints[i].lhs.contains(e))
                .collect::<Vec<_>>()
        })
        .collect();
    let mut forced: Vec<usize> = options
        .iter()
        .filter(|opts| opts.len() == 1)
        .map(|opts| opts[0])
        .collect();
    forced.sort_unstable();
    forced.dedup();

    fn rec(
        options: &[Vec<usize>],
        chosen: &mut Vec<usize>,
        found: &mut HashSet<Vec<usize>>,
        budget: &mut usize,
        cap: usize,
    ) -> Result<()> {
        if *budget == 0 {
            return Err(Error::CapExceeded(cap));
        }
        *budget -= 1;
        // First winner not yet covered by a chosen constraint.
        let uncovered = options
            .iter()
            .position(|opts| !opts.iter().any(|i| chosen.contains(i)));
        match uncovered {
            None => {
                let mut key = chosen.clone();
                key.sort_unstable();
                found.insert(key);
                Ok(())
            }
            Some(idx) => {
                for &opt in &options[idx] {
                    chosen.push(opt);
                    rec(options, chosen, found, budget, cap)?;
                    chosen.pop();
                }
                Ok(())
            }
        }
    }

    let mut found: HashSet<Vec<usize>> = HashSet::new();
    let mut budget = caps.enumeration;
    let mut chosen = forced.clone();
    rec(&options, &mut chosen, &mut found, &mut budget, caps.enumeration)?;

    let mut out: Vec<Vec<usize>> = found.into_iter().collect();
    out.sort();
    Ok(out)
}
