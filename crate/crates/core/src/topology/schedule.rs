//! Parallel measurement scheduling.
//!
//! Every line is sounded once in each direction. An antenna has a single
//! half-duplex transceiver, so within one slot each antenna takes part in at
//! most one measurement. A proper edge coloring of the tree with `N_max`
//! colors gives `N_max` groups of disjoint lines; each group costs two slots
//! (one per direction), for `2 * N_max` slots in total.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Antenna, Topology};

/// A directed measurement `(transmitter, receiver)`.
pub type Measurement = (Antenna, Antenna);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    /// Seconds per slot.
    pub slot_duration: f64,
    pub slots: Vec<Vec<Measurement>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleError {
    #[error("antenna {antenna} used twice in slot {slot}")]
    AntennaReused { slot: usize, antenna: Antenna },
    #[error("measurement {0:?} is not a directed line of the topology")]
    NotAnEdge(Measurement),
    #[error("measurement {0:?} scheduled more than once")]
    Repeated(Measurement),
    #[error("measurement {0:?} never scheduled")]
    Missing(Measurement),
}

/// Greedy root-down edge coloring with exactly `N_max` colors.
///
/// Edges are returned as `(parent, child)` with the tree rooted at the
/// reference. Each node hands its child edges the smallest colors not used
/// by its own parent edge, children in ascending order.
pub fn edge_coloring(t: &Topology) -> Vec<((Antenna, Antenna), usize)> {
    let traversal = t.traversal();
    let mut parent_color = vec![usize::MAX; t.m() + 1];
    let mut colored = Vec::with_capacity(t.m() - 1);
    for &node in &traversal.order {
        let forbidden = parent_color[node];
        let mut color = 0;
        for child in t.children(node, &traversal) {
            if color == forbidden {
                color += 1;
            }
            parent_color[child] = color;
            colored.push(((node, child), color));
            color += 1;
        }
    }
    colored
}

impl Schedule {
    /// Schedule achieving `2 * N_max` slots.
    ///
    /// Slot `2c` sounds every line of color `c` from parent to child and
    /// slot `2c + 1` the reverse; measurements within a slot are ordered by
    /// transmitter.
    pub fn for_topology(t: &Topology, slot_duration: f64) -> Self {
        let colors = t.max_degree();
        let mut slots = vec![Vec::new(); 2 * colors];
        for ((parent, child), color) in edge_coloring(t) {
            slots[2 * color].push((parent, child));
            slots[2 * color + 1].push((child, parent));
        }
        for slot in &mut slots {
            slot.sort_unstable();
        }
        Schedule {
            slot_duration,
            slots,
        }
    }

    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    /// `T_arb`: total collection time in seconds.
    pub fn collection_time(&self) -> f64 {
        self.slots.len() as f64 * self.slot_duration
    }

    /// Checks half-duplex disjointness and exact coverage of both
    /// directions of every line.
    pub fn validate(&self, t: &Topology) -> Result<(), ScheduleError> {
        let mut done = BTreeSet::new();
        for (slot_index, slot) in self.slots.iter().enumerate() {
            let mut busy = BTreeSet::new();
            for &(tx, rx) in slot {
                if !t.is_interconnected(tx, rx) {
                    return Err(ScheduleError::NotAnEdge((tx, rx)));
                }
                for antenna in [tx, rx] {
                    if !busy.insert(antenna) {
                        return Err(ScheduleError::AntennaReused {
                            slot: slot_index,
                            antenna,
                        });
                    }
                }
                if !done.insert((tx, rx)) {
                    return Err(ScheduleError::Repeated((tx, rx)));
                }
            }
        }
        for &(p, q) in t.edges() {
            for m in [(p, q), (q, p)] {
                if !done.contains(&m) {
                    return Err(ScheduleError::Missing(m));
                }
            }
        }
        Ok(())
    }
}

impl Topology {
    pub fn measurement_schedule(&self, slot_duration: f64) -> Schedule {
        Schedule::for_topology(self, slot_duration)
    }
}
