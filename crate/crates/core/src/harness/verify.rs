//! Exhaustive checks of the wiring optimality results over all labeled trees.
//!
//! Everything here is deterministic: the reports are pure functions of `m`
//! (and the reference) through Prüfer enumeration.

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::Serialize;

use crate::crlb::{daisy_budget_ratio, time_to_collect, CrlbError};
use crate::rational::{serialize_ratio, to_f64};
use crate::topology::{enumerate_trees, Antenna, Topology, TopologyError, DEFAULT_ENUMERATION_CAP};

/// With `2(M − 1)` measurements: which trees minimize the mean calibration
/// distance (and hence the average bound `d̄ ρ`)?
#[derive(Debug, Clone, Serialize)]
pub struct StarOptimalityReport {
    pub m: usize,
    pub reference: Antenna,
    pub tree_count: usize,
    #[serde(serialize_with = "serialize_ratio")]
    pub min_mean_distance: Rational64,
    /// Edge lists of every minimizing tree.
    pub minimizers: Vec<Vec<(Antenna, Antenna)>>,
    /// `d̄` value (as `p/q`) to number of trees attaining it.
    pub distribution: BTreeMap<String, usize>,
    /// The only minimizer is the star centered at the reference, at `d̄ = 1`.
    pub passed: bool,
}

pub fn verify_star_optimality(
    m: usize,
    reference: Antenna,
) -> Result<StarOptimalityReport, TopologyError> {
    let mut distribution: BTreeMap<Rational64, usize> = BTreeMap::new();
    let mut minimizers = Vec::new();
    let mut best: Option<Rational64> = None;
    let mut tree_count = 0;
    for t in enumerate_trees(m, reference)? {
        tree_count += 1;
        let mean = t.calibration_distances().mean;
        *distribution.entry(mean).or_default() += 1;
        match best {
            Some(b) if mean > b => {}
            Some(b) if mean == b => minimizers.push(t),
            _ => {
                best = Some(mean);
                minimizers = vec![t];
            }
        }
    }
    let min_mean_distance = best.expect("at least one tree");
    let passed = min_mean_distance == Rational64::from_integer(1)
        && minimizers.len() == 1
        && minimizers[0].is_reference_star();
    Ok(StarOptimalityReport {
        m,
        reference,
        tree_count,
        min_mean_distance,
        minimizers: minimizers.iter().map(|t| t.edges().to_vec()).collect(),
        distribution: distribution
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
        passed,
    })
}

/// Collection time `2 N_max T` against `[4T, 2(M − 1)T]` for every tree.
#[derive(Debug, Clone, Serialize)]
pub struct TimeBoundsReport {
    pub m: usize,
    pub tree_count: usize,
    pub min_slots: u64,
    pub max_slots: u64,
    pub path_count: usize,
    pub star_count: usize,
    /// Trees hitting the lower bound.
    pub lower_equality_count: usize,
    /// Trees hitting the upper bound.
    pub upper_equality_count: usize,
    /// Trees whose schedule was valid with exactly `2 N_max` slots.
    pub valid_schedules: usize,
    pub violations: Vec<String>,
    pub passed: bool,
}

pub fn verify_time_bounds(m: usize) -> Result<TimeBoundsReport, TopologyError> {
    if m < 3 {
        return Err(TopologyError::InvalidAntennaCount(m));
    }
    let (low, high) = (4u64, 2 * (m as u64 - 1));
    let mut report = TimeBoundsReport {
        m,
        tree_count: 0,
        min_slots: u64::MAX,
        max_slots: 0,
        path_count: 0,
        star_count: 0,
        lower_equality_count: 0,
        upper_equality_count: 0,
        valid_schedules: 0,
        violations: Vec::new(),
        passed: false,
    };
    for t in enumerate_trees(m, 1)? {
        report.tree_count += 1;
        let slots = time_to_collect(&t);
        report.min_slots = report.min_slots.min(slots);
        report.max_slots = report.max_slots.max(slots);
        let (path, star) = (t.is_path(), t.is_star());
        report.path_count += path as usize;
        report.star_count += star as usize;
        report.lower_equality_count += (slots == low) as usize;
        report.upper_equality_count += (slots == high) as usize;

        let mut fail = |why: &str| report.violations.push(format!("{:?}: {why}", t.edges()));
        if slots < low || slots > high {
            fail("collection time outside bounds");
        }
        if (slots == low) != path {
            fail("lower equality does not match path shape");
        }
        if (slots == high) != star {
            fail("upper equality does not match star shape");
        }
        let schedule = t.measurement_schedule(1.0);
        match schedule.validate(&t) {
            Ok(()) if schedule.slot_count() as u64 == slots => report.valid_schedules += 1,
            Ok(()) => fail("schedule length differs from 2 N_max"),
            Err(e) => fail(&format!("invalid schedule: {e}")),
        }
    }
    report.passed = report.violations.is_empty();
    Ok(report)
}

/// Brute-force search for the best wiring under a `2(M − 1)T` budget.
#[derive(Debug, Clone, Serialize)]
pub struct ExhaustiveDaisyCheck {
    pub tree_count: usize,
    /// Smallest `d̄ / I` over all trees.
    #[serde(serialize_with = "serialize_ratio")]
    pub best_ratio: Rational64,
    pub minimizer_count: usize,
    /// Every minimizer is a daisy chain referenced at a central position.
    pub minimizers_are_central_daisies: bool,
    /// The reference-centered star attains the minimum.
    pub star_attains_minimum: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DaisyEntry {
    pub m: usize,
    /// `d̄ / I` of the mid-referenced daisy.
    #[serde(serialize_with = "serialize_ratio")]
    pub ratio: Rational64,
    pub ratio_value: f64,
    /// `ratio < 1`: the daisy beats the star's `d̄ / I = 1`.
    pub daisy_beats_star: bool,
    pub exhaustive: Option<ExhaustiveDaisyCheck>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DaisyOptimalityReport {
    pub entries: Vec<DaisyEntry>,
    pub passed: bool,
}

/// `d̄ / I` of a tree under a budget of `2(M − 1)` slots.
fn budgeted_ratio(t: &Topology) -> Rational64 {
    let budget = 2 * (t.m() as u64 - 1);
    let reps = budget / time_to_collect(t);
    t.calibration_distances().mean / Rational64::from_integer(reps as i64)
}

/// Position (1-based from either end) of the reference along a path.
fn reference_position(t: &Topology) -> Option<usize> {
    if !t.is_path() {
        return None;
    }
    let end = (1..=t.m()).find(|&k| t.degree(k) == 1)?;
    let traversal_from_end = Topology::from_edges(t.m(), end, t.edges().iter().copied()).ok()?;
    Some(traversal_from_end.traversal().depth[t.reference()] + 1)
}

fn exhaustive_check(m: usize) -> Result<ExhaustiveDaisyCheck, TopologyError> {
    let mut best: Option<Rational64> = None;
    let mut minimizers: Vec<Topology> = Vec::new();
    let mut tree_count = 0;
    for t in enumerate_trees(m, 1)? {
        tree_count += 1;
        let r = budgeted_ratio(&t);
        match best {
            Some(b) if r > b => {}
            Some(b) if r == b => minimizers.push(t),
            _ => {
                best = Some(r);
                minimizers = vec![t];
            }
        }
    }
    let central = m.div_ceil(2);
    let mirrored = m + 1 - central;
    let minimizers_are_central_daisies = minimizers.iter().all(|t| {
        reference_position(t).is_some_and(|p| p == central || p == mirrored)
    });
    Ok(ExhaustiveDaisyCheck {
        tree_count,
        best_ratio: best.expect("at least one tree"),
        minimizer_count: minimizers.len(),
        minimizers_are_central_daisies,
        star_attains_minimum: minimizers.iter().any(Topology::is_reference_star),
    })
}

/// For every `m`: the closed-form ratio beats the star exactly when `m ≥ 5`,
/// and for `m` within the enumeration cap the brute-force optimum agrees.
pub fn verify_daisy_optimality(
    ms: impl IntoIterator<Item = usize>,
) -> Result<DaisyOptimalityReport, crate::Error> {
    let mut entries = Vec::new();
    for m in ms {
        let ratio = daisy_budget_ratio(m)?;
        let daisy_beats_star = ratio < Rational64::from_integer(1);
        let mut passed = daisy_beats_star == (m >= 5);
        let exhaustive = if m <= DEFAULT_ENUMERATION_CAP {
            let check = exhaustive_check(m)?;
            passed &= if m >= 5 {
                check.best_ratio == ratio && check.minimizers_are_central_daisies
            } else {
                check.best_ratio == ratio.min(Rational64::from_integer(1)) && check.star_attains_minimum
            };
            Some(check)
        } else {
            None
        };
        entries.push(DaisyEntry {
            m,
            ratio,
            ratio_value: to_f64(ratio),
            daisy_beats_star,
            exhaustive,
            passed,
        });
    }
    if entries.is_empty() {
        return Err(CrlbError::InvalidAntennaCount(0).into());
    }
    let passed = entries.iter().all(|e| e.passed);
    Ok(DaisyOptimalityReport { entries, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_optimality_small_cases() {
        let r = verify_star_optimality(5, 1).unwrap();
        assert_eq!(r.tree_count, 125);
        assert!(r.passed);
        assert_eq!(r.minimizers, vec![vec![(1, 2), (1, 3), (1, 4), (1, 5)]]);
        assert_eq!(r.distribution.values().sum::<usize>(), 125);

        let r = verify_star_optimality(4, 2).unwrap();
        assert_eq!(r.tree_count, 16);
        assert_eq!(r.distribution["1"], 1);
        assert!(r.passed);

        // Three antennas: the path centered at the reference is the star.
        let r = verify_star_optimality(3, 1).unwrap();
        assert_eq!(r.tree_count, 3);
        assert_eq!(r.distribution["1"], 1);
        assert_eq!(r.distribution["3/2"], 2);
        assert!(r.passed);
    }

    #[test]
    fn time_bounds_small_cases() {
        let r = verify_time_bounds(5).unwrap();
        assert!(r.passed, "{:?}", r.violations);
        assert_eq!((r.min_slots, r.max_slots), (4, 8));
        assert_eq!(r.lower_equality_count, 60);
        assert_eq!(r.upper_equality_count, 5);
        assert_eq!(r.valid_schedules, 125);

        let r = verify_time_bounds(3).unwrap();
        assert!(r.passed);
        assert_eq!((r.min_slots, r.max_slots), (4, 4));
        assert!(verify_time_bounds(2).is_err());
    }

    #[test]
    fn daisy_optimality_entries() {
        let r = verify_daisy_optimality([4, 5, 6]).unwrap();
        assert!(r.passed);
        let e4 = &r.entries[0];
        assert_eq!(e4.ratio, Rational64::new(4, 3));
        assert!(!e4.daisy_beats_star);
        assert!(e4.exhaustive.as_ref().unwrap().star_attains_minimum);
        let e5 = &r.entries[1];
        assert_eq!(e5.ratio_value, 0.75);
        assert_eq!(e5.exhaustive.as_ref().unwrap().tree_count, 125);
        assert!(e5.exhaustive.as_ref().unwrap().minimizers_are_central_daisies);
    }

    #[test]
    fn reference_positions() {
        let t = Topology::from_edges(5, 2, [(1, 3), (3, 2), (2, 5), (5, 4)]).unwrap();
        assert_eq!(reference_position(&t), Some(3));
        assert_eq!(reference_position(&Topology::daisy(5, 1).unwrap()), Some(1));
        assert_eq!(reference_position(&Topology::star(5, 1).unwrap()), None);
    }
}
