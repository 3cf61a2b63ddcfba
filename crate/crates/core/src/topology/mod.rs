//! Interconnection strategies: spanning trees over the antenna array.
//!
//! A [`Topology`] is a labeled tree on antennas `1..=m` with a designated
//! reference antenna. With exactly `m - 1` transmission lines a wiring lets
//! every antenna reach the reference if and only if it is a spanning tree, so
//! that is the only shape accepted here.

mod distance;
mod enumerate;
pub mod schedule;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use distance::DistanceProfile;
pub use enumerate::{decode_pruefer, enumerate_trees, TreeEnumerator, DEFAULT_ENUMERATION_CAP};
pub use schedule::{Schedule, ScheduleError};

/// 1-based antenna index.
pub type Antenna = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("antenna count must be at least 2, got {0}")]
    InvalidAntennaCount(usize),
    #[error("antenna index {index} out of range 1..={m}")]
    IndexOutOfRange { index: usize, m: usize },
    #[error("self-loop on antenna {0}")]
    SelfLoop(Antenna),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(Antenna, Antenna),
    #[error("expected {expected} edges for a spanning tree, found {found}")]
    WrongEdgeCount { expected: usize, found: usize },
    #[error("not effective: antenna {unreachable} has no calibration path to reference {reference}")]
    NotEffective { unreachable: Antenna, reference: Antenna },
    #[error("tree enumeration for m = {m} exceeds the cap of {cap} antennas")]
    EnumerationCapExceeded { m: usize, cap: usize },
}

/// A validated spanning tree on `m` antennas with a reference antenna.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TopologyFile", into = "TopologyFile")]
pub struct Topology {
    m: usize,
    reference: Antenna,
    /// Normalized `(min, max)` pairs, sorted.
    edges: Vec<(Antenna, Antenna)>,
    /// `adjacency[k]` lists the neighbors of antenna `k` in ascending order.
    /// Slot 0 is unused.
    adjacency: Vec<Vec<Antenna>>,
}

/// On-disk form: `{"m": 7, "reference": 3, "edges": [[3, 1], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TopologyFile {
    pub m: usize,
    pub reference: Antenna,
    pub edges: Vec<(Antenna, Antenna)>,
}

impl TryFrom<TopologyFile> for Topology {
    type Error = TopologyError;

    fn try_from(f: TopologyFile) -> Result<Self, Self::Error> {
        Topology::from_edges(f.m, f.reference, f.edges)
    }
}

impl From<Topology> for TopologyFile {
    fn from(t: Topology) -> Self {
        TopologyFile {
            m: t.m,
            reference: t.reference,
            edges: t.edges,
        }
    }
}

/// Breadth-first traversal from the reference, children in ascending order.
#[derive(Debug, Clone)]
pub struct Traversal {
    /// Visit order, starting with the reference.
    pub order: Vec<Antenna>,
    /// `parent[k]` is `None` for the reference (and for slot 0).
    pub parent: Vec<Option<Antenna>>,
    /// Hop count from the reference.
    pub depth: Vec<usize>,
}

fn check_basic(m: usize, reference: Antenna) -> Result<(), TopologyError> {
    if m < 2 {
        return Err(TopologyError::InvalidAntennaCount(m));
    }
    if reference == 0 || reference > m {
        return Err(TopologyError::IndexOutOfRange { index: reference, m });
    }
    Ok(())
}

impl Topology {
    /// Every ordinary antenna wired directly to the reference.
    pub fn star(m: usize, reference: Antenna) -> Result<Self, TopologyError> {
        check_basic(m, reference)?;
        let edges = (1..=m)
            .filter(|&k| k != reference)
            .map(|k| (reference, k))
            .collect::<Vec<_>>();
        Self::from_edges(m, reference, edges)
    }

    /// The path `1 - 2 - ... - m`; labels are positions along the chain.
    pub fn daisy(m: usize, reference: Antenna) -> Result<Self, TopologyError> {
        check_basic(m, reference)?;
        let edges = (1..m).map(|k| (k, k + 1)).collect::<Vec<_>>();
        Self::from_edges(m, reference, edges)
    }

    /// Validates an arbitrary edge list as a spanning tree.
    pub fn from_edges(
        m: usize,
        reference: Antenna,
        edges: impl IntoIterator<Item = (Antenna, Antenna)>,
    ) -> Result<Self, TopologyError> {
        check_basic(m, reference)?;
        let mut seen = BTreeSet::new();
        for (p, q) in edges {
            for index in [p, q] {
                if index == 0 || index > m {
                    return Err(TopologyError::IndexOutOfRange { index, m });
                }
            }
            if p == q {
                return Err(TopologyError::SelfLoop(p));
            }
            if !seen.insert((p.min(q), p.max(q))) {
                return Err(TopologyError::DuplicateEdge(p, q));
            }
        }
        if seen.len() != m - 1 {
            return Err(TopologyError::WrongEdgeCount {
                expected: m - 1,
                found: seen.len(),
            });
        }

        let edges: Vec<_> = seen.into_iter().collect();
        let mut adjacency = vec![Vec::new(); m + 1];
        for &(p, q) in &edges {
            adjacency[p].push(q);
            adjacency[q].push(p);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let topology = Topology {
            m,
            reference,
            edges,
            adjacency,
        };

        // m - 1 edges: connected <=> acyclic <=> spanning tree.
        let traversal = topology.traversal();
        if traversal.order.len() != m {
            let mut reached = vec![false; m + 1];
            for &k in &traversal.order {
                reached[k] = true;
            }
            let unreachable = (1..=m).find(|&k| !reached[k]).unwrap_or(reference);
            return Err(TopologyError::NotEffective {
                unreachable,
                reference,
            });
        }
        Ok(topology)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn reference(&self) -> Antenna {
        self.reference
    }

    /// Edges as normalized `(min, max)` pairs in ascending order.
    pub fn edges(&self) -> &[(Antenna, Antenna)] {
        &self.edges
    }

    pub fn neighbors(&self, antenna: Antenna) -> &[Antenna] {
        &self.adjacency[antenna]
    }

    pub fn degree(&self, antenna: Antenna) -> usize {
        self.adjacency[antenna].len()
    }

    /// `N_max`: the largest number of direct neighbors of any antenna.
    pub fn max_degree(&self) -> usize {
        (1..=self.m).map(|k| self.degree(k)).max().unwrap_or(0)
    }

    /// Antennas other than the reference, ascending.
    pub fn ordinary_antennas(&self) -> impl Iterator<Item = Antenna> + '_ {
        (1..=self.m).filter(move |&k| k != self.reference)
    }

    pub fn is_interconnected(&self, p: Antenna, q: Antenna) -> bool {
        self.adjacency
            .get(p)
            .is_some_and(|n| n.binary_search(&q).is_ok())
    }

    /// Dense 0/1 interconnection matrix, row/column `k - 1` for antenna `k`.
    pub fn interconnection_matrix(&self) -> DMatrix<u8> {
        let mut a = DMatrix::zeros(self.m, self.m);
        for &(p, q) in &self.edges {
            a[(p - 1, q - 1)] = 1;
            a[(q - 1, p - 1)] = 1;
        }
        a
    }

    /// The interconnection matrix with the reference row and column removed.
    pub fn reduced_interconnection_matrix(&self) -> DMatrix<u8> {
        self.interconnection_matrix()
            .remove_row(self.reference - 1)
            .remove_column(self.reference - 1)
    }

    /// Every ordinary antenna adjacent to the reference.
    pub fn is_reference_star(&self) -> bool {
        self.degree(self.reference) == self.m - 1
    }

    /// Star around any center (for `m <= 3` every tree qualifies).
    pub fn is_star(&self) -> bool {
        self.max_degree() == self.m - 1
    }

    /// The edge set forms a single path.
    pub fn is_path(&self) -> bool {
        self.max_degree() <= 2
    }

    pub fn traversal(&self) -> Traversal {
        let mut parent = vec![None; self.m + 1];
        let mut depth = vec![0; self.m + 1];
        let mut visited = vec![false; self.m + 1];
        let mut order = Vec::with_capacity(self.m);
        let mut queue = VecDeque::from([self.reference]);
        visited[self.reference] = true;
        while let Some(node) = queue.pop_front() {
            order.push(node);
            for &child in &self.adjacency[node] {
                if !visited[child] {
                    visited[child] = true;
                    parent[child] = Some(node);
                    depth[child] = depth[node] + 1;
                    queue.push_back(child);
                }
            }
        }
        Traversal {
            order,
            parent,
            depth,
        }
    }

    /// Children of `node` when the tree is rooted at the reference.
    pub fn children<'a>(
        &'a self,
        node: Antenna,
        traversal: &'a Traversal,
    ) -> impl Iterator<Item = Antenna> + 'a {
        let parent = traversal.parent[node];
        self.adjacency[node]
            .iter()
            .copied()
            .filter(move |&c| Some(c) != parent)
    }

    pub fn calibration_distances(&self) -> DistanceProfile {
        DistanceProfile::of(self)
    }

    /// Splits the tree into calibration paths walking away from the reference.
    ///
    /// When only the reference branches, these are exactly the daisy-chain
    /// subnetworks. Otherwise one path per leaf is returned, and shared
    /// prefixes appear in several chains.
    pub fn decompose_chains(&self) -> Vec<Vec<Antenna>> {
        let traversal = self.traversal();
        let mut chains = Vec::new();
        let mut stack: Vec<(Antenna, Vec<Antenna>)> = self
            .children(self.reference, &traversal)
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .map(|c| (c, vec![c]))
            .collect();
        while let Some((node, path)) = stack.pop() {
            let children: Vec<_> = self.children(node, &traversal).collect();
            if children.is_empty() {
                chains.push(path);
                continue;
            }
            for &c in children.iter().rev() {
                let mut next = path.clone();
                next.push(c);
                stack.push((c, next));
            }
        }
        chains
    }

    /// A short label: `star`, `daisy`, or `tree`.
    pub fn kind_label(&self) -> &'static str {
        if self.is_reference_star() {
            "star"
        } else if self.is_path() && self.edges.iter().all(|&(p, q)| q == p + 1) {
            "daisy"
        } else {
            "tree"
        }
    }
}

impl fmt::Debug for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Topology")
            .field("m", &self.m)
            .field("reference", &self.reference)
            .field("edges", &self.edges)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_branch_tree() -> Topology {
        Topology::from_edges(7, 3, [(3, 1), (1, 2), (3, 4), (4, 5), (3, 6), (6, 7)]).unwrap()
    }

    #[test]
    fn star_edges() {
        let t = Topology::star(5, 1).unwrap();
        assert_eq!(t.edges(), &[(1, 2), (1, 3), (1, 4), (1, 5)]);
        let big = Topology::star(129, 64).unwrap();
        assert_eq!(big.edges().len(), 128);
        assert!(big.edges().iter().all(|&(p, q)| p == 64 || q == 64));
    }

    #[test]
    fn two_antennas_star_equals_daisy() {
        assert_eq!(Topology::star(2, 1).unwrap(), Topology::daisy(2, 1).unwrap());
        assert_eq!(Topology::star(2, 1).unwrap().edges(), &[(1, 2)]);
    }

    #[test]
    fn daisy_edges_independent_of_reference() {
        let a = Topology::daisy(5, 1).unwrap();
        let b = Topology::daisy(5, 3).unwrap();
        assert_eq!(a.edges(), b.edges());
        assert_eq!(a.edges(), &[(1, 2), (2, 3), (3, 4), (4, 5)]);
        assert_eq!(b.reference(), 3);
        let big = Topology::daisy(129, 64).unwrap();
        assert_eq!(big.edges().len(), 128);
        assert_eq!(big.reference(), 64);
    }

    #[test]
    fn constructor_argument_errors() {
        assert_eq!(Topology::star(1, 1), Err(TopologyError::InvalidAntennaCount(1)));
        assert_eq!(
            Topology::daisy(4, 5),
            Err(TopologyError::IndexOutOfRange { index: 5, m: 4 })
        );
        assert_eq!(
            Topology::star(4, 0),
            Err(TopologyError::IndexOutOfRange { index: 0, m: 4 })
        );
    }

    #[test]
    fn from_edges_accepts_three_branch_tree() {
        let t = three_branch_tree();
        assert_eq!(t.degree(3), 3);
        assert_eq!(t.max_degree(), 3);
    }

    #[test]
    fn from_edges_rejections() {
        assert_eq!(
            Topology::from_edges(4, 1, [(1, 2), (3, 4), (1, 2)]),
            Err(TopologyError::DuplicateEdge(1, 2))
        );
        assert_eq!(
            Topology::from_edges(4, 1, [(1, 2), (2, 3)]),
            Err(TopologyError::WrongEdgeCount { expected: 3, found: 2 })
        );
        assert_eq!(
            Topology::from_edges(4, 1, [(1, 1), (2, 3), (3, 4)]),
            Err(TopologyError::SelfLoop(1))
        );
        assert_eq!(
            Topology::from_edges(4, 1, [(1, 2), (2, 9), (3, 4)]),
            Err(TopologyError::IndexOutOfRange { index: 9, m: 4 })
        );
        // Three edges, but a triangle plus an isolated antenna.
        assert_eq!(
            Topology::from_edges(4, 1, [(1, 2), (2, 3), (1, 3)]),
            Err(TopologyError::NotEffective {
                unreachable: 4,
                reference: 1
            })
        );
        assert!(matches!(
            Topology::from_edges(4, 1, [(2, 1), (1, 2), (3, 4)]),
            Err(TopologyError::DuplicateEdge(1, 2))
        ));
    }

    #[test]
    fn max_degree_extremes() {
        assert_eq!(Topology::daisy(6, 3).unwrap().max_degree(), 2);
        assert_eq!(Topology::star(6, 1).unwrap().max_degree(), 5);
    }

    #[test]
    fn chains_of_three_branch_tree() {
        assert_eq!(
            three_branch_tree().decompose_chains(),
            vec![vec![1, 2], vec![4, 5], vec![6, 7]]
        );
    }

    #[test]
    fn chains_of_mid_referenced_daisy() {
        let chains = Topology::daisy(129, 64).unwrap().decompose_chains();
        let lengths: Vec<_> = chains.iter().map(Vec::len).collect();
        assert_eq!(lengths, vec![63, 65]);
        assert_eq!(chains[0][0], 63);
        assert_eq!(chains[1][0], 65);
    }

    #[test]
    fn chains_of_star() {
        assert_eq!(
            Topology::star(5, 1).unwrap().decompose_chains(),
            vec![vec![2], vec![3], vec![4], vec![5]]
        );
    }

    #[test]
    fn chains_of_branching_tree_duplicate_prefix() {
        // 1 - 2 branches into 3 and 4.
        let t = Topology::from_edges(4, 1, [(1, 2), (2, 3), (2, 4)]).unwrap();
        assert_eq!(t.decompose_chains(), vec![vec![2, 3], vec![2, 4]]);
    }

    #[test]
    fn interconnection_matrices() {
        let t = Topology::daisy(3, 1).unwrap();
        let a = t.interconnection_matrix();
        assert_eq!(a, DMatrix::from_row_slice(3, 3, &[0, 1, 0, 1, 0, 1, 0, 1, 0]));
        let reduced = t.reduced_interconnection_matrix();
        assert_eq!(reduced, DMatrix::from_row_slice(2, 2, &[0, 1, 1, 0]));
        assert!(Topology::star(4, 2)
            .unwrap()
            .reduced_interconnection_matrix()
            .iter()
            .all(|&x| x == 0));
    }

    #[test]
    fn json_round_trip_validates() {
        let json = r#"{"m": 7, "reference": 3, "edges": [[3,1],[1,2],[3,4],[4,5],[3,6],[6,7]]}"#;
        let t: Topology = serde_json::from_str(json).unwrap();
        assert_eq!(t, three_branch_tree());
        let bad = r#"{"m": 4, "reference": 1, "edges": [[1,2],[2,3]]}"#;
        assert!(serde_json::from_str::<Topology>(bad).is_err());
        let back: Topology = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn kind_labels() {
        assert_eq!(Topology::star(5, 2).unwrap().kind_label(), "star");
        assert_eq!(Topology::daisy(5, 2).unwrap().kind_label(), "daisy");
        assert_eq!(three_branch_tree().kind_label(), "tree");
    }
}
