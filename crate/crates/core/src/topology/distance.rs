use num_rational::Rational64;
use serde::Serialize;

use super::{Antenna, Topology};
use crate::rational::serialize_ratio;

/// Calibration distance of every ordinary antenna.
///
/// `d_m` counts the antennas on the calibration path of `m`, excluding the
/// reference and including `m`, i.e. its hop distance from the reference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceProfile {
    /// Ordinary antennas, ascending.
    pub antennas: Vec<Antenna>,
    /// `distances[i]` belongs to `antennas[i]`.
    pub distances: Vec<u64>,
    #[serde(serialize_with = "serialize_ratio")]
    pub mean: Rational64,
}

impl DistanceProfile {
    pub(super) fn of(t: &Topology) -> Self {
        let traversal = t.traversal();
        let antennas: Vec<_> = t.ordinary_antennas().collect();
        let distances: Vec<u64> = antennas
            .iter()
            .map(|&k| traversal.depth[k] as u64)
            .collect();
        let total: u64 = distances.iter().sum();
        let mean = Rational64::new(total as i64, antennas.len() as i64);
        DistanceProfile {
            antennas,
            distances,
            mean,
        }
    }

    pub fn distance(&self, antenna: Antenna) -> Option<u64> {
        self.antennas
            .binary_search(&antenna)
            .ok()
            .map(|i| self.distances[i])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_has_unit_distances() {
        let p = Topology::star(5, 1).unwrap().calibration_distances();
        assert_eq!(p.distances, vec![1, 1, 1, 1]);
        assert_eq!(p.mean, Rational64::from_integer(1));
    }

    #[test]
    fn mid_referenced_daisy() {
        let p = Topology::daisy(5, 3).unwrap().calibration_distances();
        assert_eq!(p.antennas, vec![1, 2, 4, 5]);
        assert_eq!(p.distances, vec![2, 1, 1, 2]);
        assert_eq!(p.mean, Rational64::new(3, 2));
        assert_eq!(p.distance(5), Some(2));
        assert_eq!(p.distance(3), None);
    }

    #[test]
    fn end_referenced_daisy() {
        let p = Topology::daisy(5, 1).unwrap().calibration_distances();
        assert_eq!(p.distances, vec![1, 2, 3, 4]);
        assert_eq!(p.mean, Rational64::new(5, 2));
    }

    #[test]
    fn mean_serializes_as_fraction() {
        let p = Topology::daisy(5, 1).unwrap().calibration_distances();
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(v["mean"], "5/2");
    }
}
