//! Complete M-partite graphs with equal-sized sets and two marking layouts.
//!
//! Sets and vertices are indexed from zero. Within a set that carries marked
//! vertices, the first `n` vertices are the marked ones.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Where the marked vertices live.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MarkedSets {
    /// Every set holds `n` marked vertices.
    EverySet,
    /// Only set 0 holds marked vertices.
    OneSet,
}

impl MarkedSets {
    /// The numeric tag used on the command line and in file headers.
    pub fn tag(self) -> u8 {
        match self {
            MarkedSets::EverySet => 1,
            MarkedSets::OneSet => 2,
        }
    }

    pub fn from_tag(tag: u8) -> Result<Self> {
        match tag {
            1 => Ok(MarkedSets::EverySet),
            2 => Ok(MarkedSets::OneSet),
            other => Err(Error::InvalidConfig(format!("unknown case {other}"))),
        }
    }
}

impl fmt::Display for MarkedSets {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag())
    }
}

impl FromStr for MarkedSets {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tag: u8 = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("unknown case {s:?}")))?;
        MarkedSets::from_tag(tag)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId {
    pub set: usize,
    pub index: usize,
}

impl VertexId {
    pub const fn new(set: usize, index: usize) -> Self {
        VertexId { set, index }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.set, self.index)
    }
}

/// A search instance: `M` sets of `N` vertices with `n` marked per marked set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GraphConfig {
    sets: usize,
    set_size: usize,
    marked: usize,
    case: MarkedSets,
}

impl GraphConfig {
    pub fn new(sets: usize, set_size: usize, marked: usize, case: MarkedSets) -> Result<Self> {
        if sets < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 sets, got M={sets}"
            )));
        }
        if case == MarkedSets::OneSet && sets < 3 {
            return Err(Error::InvalidConfig(format!(
                "marks confined to one set need M >= 3, got M={sets}"
            )));
        }
        if set_size == 0 {
            return Err(Error::InvalidConfig(
                "sets must be non-empty (N >= 1)".into(),
            ));
        }
        if marked > set_size {
            return Err(Error::InvalidConfig(format!(
                "n={marked} marked vertices do not fit in a set of N={set_size}"
            )));
        }
        let m = sets as u64;
        let n = set_size as u64;
        m.checked_mul(m - 1)
            .and_then(|x| x.checked_mul(n))
            .and_then(|x| x.checked_mul(n))
            .ok_or_else(|| Error::InvalidConfig("edge space dimension overflows u64".into()))?;
        Ok(GraphConfig {
            sets,
            set_size,
            marked,
            case,
        })
    }

    pub fn every_set(sets: usize, set_size: usize, marked: usize) -> Result<Self> {
        Self::new(sets, set_size, marked, MarkedSets::EverySet)
    }

    pub fn one_set(sets: usize, set_size: usize, marked: usize) -> Result<Self> {
        Self::new(sets, set_size, marked, MarkedSets::OneSet)
    }

    /// Number of sets, `M`.
    pub fn sets(&self) -> usize {
        self.sets
    }

    /// Vertices per set, `N`.
    pub fn set_size(&self) -> usize {
        self.set_size
    }

    /// Marked vertices per marked set, `n`.
    pub fn marked(&self) -> usize {
        self.marked
    }

    /// Unmarked vertices in a marked set, `w = N - n`.
    pub fn unmarked(&self) -> usize {
        self.set_size - self.marked
    }

    pub fn case(&self) -> MarkedSets {
        self.case
    }

    pub fn vertex_count(&self) -> usize {
        self.sets * self.set_size
    }

    /// Every vertex is adjacent to all vertices outside its own set.
    pub fn degree(&self) -> u64 {
        (self.sets as u64 - 1) * self.set_size as u64
    }

    /// Number of ordered adjacent pairs, `M(M-1)N^2`.
    pub fn edge_space_dimension(&self) -> u64 {
        self.vertex_count() as u64 * self.degree()
    }

    pub fn total_marked(&self) -> usize {
        match self.case {
            MarkedSets::EverySet => self.sets * self.marked,
            MarkedSets::OneSet => self.marked,
        }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.set < self.sets && v.index < self.set_size
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                set: v.set,
                index: v.index,
                sets: self.sets,
                set_size: self.set_size,
            })
        }
    }

    pub fn is_marked(&self, v: VertexId) -> Result<bool> {
        self.check_vertex(v)?;
        Ok(self.marks(v.set, v.index))
    }

    /// Marking predicate without range checks; out-of-range input is unmarked.
    #[inline]
    pub(crate) fn marks(&self, set: usize, index: usize) -> bool {
        index < self.marked
            && match self.case {
                MarkedSets::EverySet => set < self.sets,
                MarkedSets::OneSet => set == 0,
            }
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.sets).flat_map(move |s| (0..self.set_size).map(move |i| VertexId::new(s, i)))
    }
}

impl fmt::Display for GraphConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "case={} M={} N={} n={}",
            self.case, self.sets, self.set_size, self.marked
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_examples() {
        assert_eq!(GraphConfig::every_set(4, 5, 0).unwrap().degree(), 15);
        assert_eq!(GraphConfig::every_set(2, 1, 0).unwrap().degree(), 1);
        assert_eq!(
            GraphConfig::every_set(1000, 10000, 0).unwrap().degree(),
            9_990_000
        );
    }

    #[test]
    fn edge_space_examples() {
        assert_eq!(
            GraphConfig::every_set(3, 2, 0)
                .unwrap()
                .edge_space_dimension(),
            24
        );
        assert_eq!(
            GraphConfig::every_set(3, 4, 0)
                .unwrap()
                .edge_space_dimension(),
            96
        );
        assert_eq!(
            GraphConfig::every_set(2, 1, 0)
                .unwrap()
                .edge_space_dimension(),
            2
        );
    }

    #[test]
    fn marking_examples() {
        let every = GraphConfig::every_set(4, 5, 2).unwrap();
        assert!(every.is_marked(VertexId::new(3, 1)).unwrap());
        assert!(!every.is_marked(VertexId::new(3, 2)).unwrap());

        let one = GraphConfig::one_set(4, 5, 2).unwrap();
        assert!(!one.is_marked(VertexId::new(1, 0)).unwrap());
        assert!(one.is_marked(VertexId::new(0, 1)).unwrap());

        for case in [MarkedSets::EverySet, MarkedSets::OneSet] {
            let cfg = GraphConfig::new(4, 5, 0, case).unwrap();
            assert!(cfg.vertices().all(|v| !cfg.is_marked(v).unwrap()));
        }
    }

    #[test]
    fn out_of_range_vertex_is_rejected() {
        let cfg = GraphConfig::every_set(3, 2, 1).unwrap();
        assert!(matches!(
            cfg.is_marked(VertexId::new(3, 0)),
            Err(Error::VertexOutOfRange { .. })
        ));
        assert!(cfg.is_marked(VertexId::new(0, 2)).is_err());
    }

    #[test]
    fn invalid_configs() {
        assert!(GraphConfig::every_set(1, 4, 0).is_err());
        assert!(GraphConfig::one_set(2, 4, 1).is_err());
        assert!(GraphConfig::every_set(3, 0, 0).is_err());
        assert!(GraphConfig::every_set(3, 4, 5).is_err());
        assert!(GraphConfig::every_set(3, 4, 4).is_ok());
    }

    #[test]
    fn exhaustive_counts_small_graphs() {
        for m in 2..=8 {
            for n_set in 1..=8 {
                for marked in 0..=n_set {
                    for case in [MarkedSets::EverySet, MarkedSets::OneSet] {
                        let Ok(cfg) = GraphConfig::new(m, n_set, marked, case) else {
                            continue;
                        };
                        let count = cfg
                            .vertices()
                            .filter(|&v| cfg.is_marked(v).unwrap())
                            .count();
                        assert_eq!(count, cfg.total_marked());
                        let expected = match case {
                            MarkedSets::EverySet => m * marked,
                            MarkedSets::OneSet => marked,
                        };
                        assert_eq!(count, expected);
                        assert_eq!(
                            cfg.edge_space_dimension(),
                            (m * n_set) as u64 * cfg.degree()
                        );
                        // brute-force arc count
                        let arcs = cfg
                            .vertices()
                            .flat_map(|u| cfg.vertices().map(move |v| (u, v)))
                            .filter(|(u, v)| u.set != v.set)
                            .count() as u64;
                        assert_eq!(arcs, cfg.edge_space_dimension());
                    }
                }
            }
        }
    }
}
