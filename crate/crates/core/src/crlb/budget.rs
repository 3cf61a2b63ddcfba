//! Collection time and the fixed-budget trade-off.
//!
//! All durations here are integer multiples of the slot duration `T`, so the
//! repetition count `I` and the remainder `F` are exact.

use num_rational::Rational64;
use serde::Serialize;

use super::{CrlbError, CrlbReport, ScenarioParams};
use crate::topology::{Antenna, Topology};

/// Limit of the mid-referenced daisy ratio `d̄ / I` as `M → ∞`.
pub const DAISY_RATIO_LIMIT: Rational64 = Rational64::new_raw(1, 2);

/// `T_arb` in slots: `2 · N_max`, the length of the optimal schedule.
pub fn time_to_collect(t: &Topology) -> u64 {
    2 * t.max_degree() as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RepetitionBudget {
    /// `I = ⌊budget / T_arb⌋`.
    pub repetitions: u64,
    /// `F = budget mod T_arb`, in slots.
    pub remainder_slots: u64,
}

pub fn repetition_budget(
    budget_slots: u64,
    round_slots: u64,
) -> Result<RepetitionBudget, CrlbError> {
    if round_slots == 0 || budget_slots < round_slots {
        return Err(CrlbError::InsufficientBudget {
            budget_slots,
            round_slots,
        });
    }
    Ok(RepetitionBudget {
        repetitions: budget_slots / round_slots,
        remainder_slots: budget_slots % round_slots,
    })
}

/// Average bounds `d̄ ρ / I` when `budget_slots` are available; the leftover
/// `F` is recorded in the report but not spent.
pub fn budgeted_average_crlb(
    t: &Topology,
    s: &ScenarioParams,
    budget_slots: u64,
) -> Result<CrlbReport, CrlbError> {
    let budget = repetition_budget(budget_slots, time_to_collect(t))?;
    CrlbReport::from_distances(t, s, budget.repetitions, budget.remainder_slots)
}

/// `d̄ = (M − 2f)/2 + (f − 1)²/(M − 1) + 1` for the daisy chain referenced at `f`.
pub fn daisy_mean_distance(m: usize, f: Antenna) -> Result<Rational64, CrlbError> {
    if m < 2 || f == 0 || f > m {
        return Err(CrlbError::InvalidAntennaCount(m));
    }
    let (m, f) = (m as i64, f as i64);
    Ok(Rational64::new(m - 2 * f, 2)
        + Rational64::new((f - 1) * (f - 1), m - 1)
        + Rational64::from_integer(1))
}

/// Reference position `⌊(M + 1)/2⌋` minimizing the daisy mean distance,
/// together with that minimum.
pub fn optimal_reference(m: usize) -> Result<(Antenna, Rational64), CrlbError> {
    let f = m.div_ceil(2);
    Ok((f, daisy_mean_distance(m, f)?))
}

/// `d̄ / I` for the mid-referenced daisy under a `2(M − 1)T` budget:
/// `(M + 1)/(2M − 2)` for odd `M`, `M² / (2M² − 6M + 4)` for even `M`.
pub fn daisy_budget_ratio(m: usize) -> Result<Rational64, CrlbError> {
    if m < 3 {
        return Err(CrlbError::InvalidAntennaCount(m));
    }
    let m = m as i64;
    Ok(if m % 2 == 1 {
        Rational64::new(m + 1, 2 * m - 2)
    } else {
        Rational64::new(m * m, 2 * m * m - 6 * m + 4)
    })
}
