//! Exhaustive enumeration of labeled trees via Prüfer sequences.

use super::{Antenna, Topology, TopologyError};

/// Largest antenna count enumerated unless raised explicitly (`8^6` trees).
pub const DEFAULT_ENUMERATION_CAP: usize = 8;

/// Iterator over all `m^(m-2)` labeled trees on `1..=m`, each carrying the
/// same reference antenna.
#[derive(Debug, Clone)]
pub struct TreeEnumerator {
    m: usize,
    reference: Antenna,
    /// Current Prüfer sequence (0-based labels), `None` once exhausted.
    sequence: Option<Vec<usize>>,
}

impl TreeEnumerator {
    pub fn new(m: usize, reference: Antenna) -> Result<Self, TopologyError> {
        Self::with_cap(m, reference, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_cap(m: usize, reference: Antenna, cap: usize) -> Result<Self, TopologyError> {
        // Validates m and the reference.
        Topology::star(m, reference)?;
        if m > cap {
            return Err(TopologyError::EnumerationCapExceeded { m, cap });
        }
        Ok(TreeEnumerator {
            m,
            reference,
            sequence: Some(vec![0; m - 2]),
        })
    }

    /// Number of trees the enumerator yields in total, `m^(m-2)`.
    pub fn count_total(&self) -> u64 {
        (self.m as u64).pow((self.m - 2) as u32)
    }

    fn advance(&mut self) {
        let Some(seq) = self.sequence.as_mut() else {
            return;
        };
        for digit in seq.iter_mut().rev() {
            *digit += 1;
            if *digit < self.m {
                return;
            }
            *digit = 0;
        }
        self.sequence = None;
    }
}

/// Decodes a Prüfer sequence over 0-based labels into 1-based edges.
pub fn decode_pruefer(m: usize, sequence: &[usize]) -> Vec<(Antenna, Antenna)> {
    debug_assert_eq!(sequence.len(), m.saturating_sub(2));
    let mut degree = vec![1usize; m];
    for &s in sequence {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(m - 1);
    for &s in sequence {
        let leaf = (0..m).find(|&k| degree[k] == 1).expect("a leaf always exists");
        edges.push((leaf + 1, s + 1));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let mut rest = (0..m).filter(|&k| degree[k] == 1);
    let (u, v) = (rest.next().unwrap(), rest.next().unwrap());
    edges.push((u + 1, v + 1));
    edges
}

impl Iterator for TreeEnumerator {
    type Item = Topology;

    fn next(&mut self) -> Option<Topology> {
        let seq = self.sequence.as_ref()?;
        let edges = decode_pruefer(self.m, seq);
        self.advance();
        Some(Topology::from_edges(self.m, self.reference, edges).expect("Prüfer decoding yields a tree"))
    }
}

/// All labeled trees on `m` antennas with the given reference.
pub fn enumerate_trees(m: usize, reference: Antenna) -> Result<TreeEnumerator, TopologyError> {
    TreeEnumerator::new(m, reference)
}
