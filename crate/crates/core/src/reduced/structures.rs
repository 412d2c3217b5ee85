//! `K_r`-embeddable structures: a set of clusters, each receiving one or two
//! vertices of `K_r`.

use std::fmt;

use serde::Serialize;

use super::Multigraph2;
use crate::error::{Error, Result};
use crate::graph::VertexSet;

/// Support clusters in increasing order with their multiplicities `i_K(v)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EmbStructure {
    pub support: Vec<usize>,
    pub mult: Vec<u8>,
}

impl EmbStructure {
    /// From `(cluster, multiplicity)` pairs in any order.
    pub fn new(mut assign: Vec<(usize, u8)>) -> Self {
        assign.sort_unstable();
        EmbStructure {
            support: assign.iter().map(|p| p.0).collect(),
            mult: assign.iter().map(|p| p.1).collect(),
        }
    }

    /// `i_K(v)`.
    pub fn load(&self, v: usize) -> u8 {
        match self.support.binary_search(&v) {
            Ok(i) => self.mult[i],
            Err(_) => 0,
        }
    }

    /// `r` such that this is a `K_r` structure.
    pub fn total(&self) -> usize {
        self.mult.iter().map(|&m| m as usize).sum()
    }

    /// Clusters with multiplicity 1.
    pub fn singles(&self) -> Vec<usize> {
        self.assigned(1)
    }

    /// Clusters with multiplicity 2.
    pub fn doubles(&self) -> Vec<usize> {
        self.assigned(2)
    }

    fn assigned(&self, m: u8) -> Vec<usize> {
        self.support
            .iter()
            .zip(&self.mult)
            .filter(|p| *p.1 == m)
            .map(|p| *p.0)
            .collect()
    }

    /// `(a, b)` with `a + b` support clusters and `a + 2b` vertices of `K_r`.
    pub fn shape(&self) -> (usize, usize) {
        let b = self.doubles().len();
        (self.support.len() - b, b)
    }

    /// Checks the definition directly: multiplicities in `{1, 2}`, every
    /// support pair joined, doubled pairs joined by a double-edge.
    pub fn is_valid(&self, r: &Multigraph2, rr: usize) -> bool {
        if self.support.is_empty()
            || self.total() != rr
            || self.support.windows(2).any(|w| w[0] >= w[1])
            || self.support.iter().any(|&v| v >= r.k())
            || self.mult.iter().any(|&m| m == 0 || m > 2)
        {
            return false;
        }
        for x in 0..self.support.len() {
            for y in x + 1..self.support.len() {
                let m = r.mult(self.support[x], self.support[y]);
                let need = if self.mult[x] == 2 && self.mult[y] == 2 { 2 } else { 1 };
                if m < need {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Display for EmbStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, m)) in self.support.iter().zip(&self.mult).enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "V{}:{}", v + 1, m)?;
        }
        f.write_str("}")
    }
}

/// Calls `visit` on every `K_rr` structure of `r` until it returns `true`.
/// Returns whether a visit stopped the walk.
pub fn for_each_structure(r: &Multigraph2, rr: usize, visit: &mut dyn FnMut(&EmbStructure) -> bool) -> bool {
    fn singles(
        r: &Multigraph2,
        doubled: &[usize],
        chosen: &mut Vec<usize>,
        from: usize,
        want: usize,
        visit: &mut dyn FnMut(&EmbStructure) -> bool,
    ) -> bool {
        if chosen.len() == want {
            let assign = doubled
                .iter()
                .map(|&v| (v, 2))
                .chain(chosen.iter().map(|&v| (v, 1)))
                .collect();
            return visit(&EmbStructure::new(assign));
        }
        for v in from..r.k() {
            if doubled.contains(&v) {
                continue;
            }
            if doubled.iter().chain(chosen.iter()).all(|&u| r.mult(u, v) >= 1) {
                chosen.push(v);
                let stop = singles(r, doubled, chosen, v + 1, want, visit);
                chosen.pop();
                if stop {
                    return true;
                }
            }
        }
        false
    }
    fn doubles(
        r: &Multigraph2,
        chosen: &mut Vec<usize>,
        from: usize,
        want: usize,
        a: usize,
        visit: &mut dyn FnMut(&EmbStructure) -> bool,
    ) -> bool {
        if chosen.len() == want {
            let d = chosen.clone();
            return singles(r, &d, &mut Vec::new(), 0, a, visit);
        }
        for v in from..r.k() {
            if chosen.iter().all(|&u| r.mult(u, v) == 2) {
                chosen.push(v);
                let stop = doubles(r, chosen, v + 1, want, a, visit);
                chosen.pop();
                if stop {
                    return true;
                }
            }
        }
        false
    }
    for b in 0..=rr / 2 {
        let a = rr - 2 * b;
        if doubles(r, &mut Vec::new(), 0, b, a, visit) {
            return true;
        }
    }
    false
}

/// All `K_rr` structures, sorted by support and then multiplicities.
pub fn enumerate_structures(r: &Multigraph2, rr: usize) -> Vec<EmbStructure> {
    let mut out = Vec::new();
    if rr > 0 {
        for_each_structure(r, rr, &mut |s| {
            out.push(s.clone());
            false
        });
    }
    out.sort();
    out
}

fn first_structure(r: &Multigraph2, rr: usize, accept: impl Fn(&EmbStructure) -> bool) -> Option<EmbStructure> {
    let mut found = None;
    for_each_structure(r, rr, &mut |s| {
        if accept(s) {
            found = Some(s.clone());
            true
        } else {
            false
        }
    });
    found
}

/// Outcome of looking for a `K_{rr+1}` structure doubling a given pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoubleEdgeSearch {
    pub structure: Option<EmbStructure>,
    /// Set when nothing was found although the minimum degree exceeds
    /// `(1 - 2/rr) 2k`, where a structure is guaranteed to exist.
    pub alarm: bool,
}

pub fn structure_containing_double_edge(
    r: &Multigraph2,
    rr: usize,
    pair: (usize, usize),
) -> Result<DoubleEdgeSearch> {
    let (i, j) = pair;
    if i == j || i >= r.k() || j >= r.k() || r.mult(i, j) != 2 {
        return Err(Error::NotDoubleEdge(i, j));
    }
    let structure = first_structure(r, rr + 1, |s| s.load(i) == 2 && s.load(j) == 2);
    // min degree > (1 - 2/rr) * 2k, i.e. rr * delta > 2k (rr - 2)
    let alarm = structure.is_none() && rr >= 2 && rr * r.min_degree() > 2 * r.k() * (rr - 2);
    Ok(DoubleEdgeSearch { structure, alarm })
}

/// A `K_rr` structure meeting at least two blocks of `blocks`.
pub fn crossing_structure(r: &Multigraph2, rr: usize, blocks: &[VertexSet]) -> Result<Option<EmbStructure>> {
    if blocks.len() < 2 {
        return Err(Error::Invalid("crossing structures need at least two blocks".into()));
    }
    let mut block_of = vec![usize::MAX; r.k()];
    for (b, set) in blocks.iter().enumerate() {
        for v in set.iter() {
            if v >= r.k() || block_of[v] != usize::MAX {
                return Err(Error::Invalid(format!("cluster {v} is out of range or in two blocks")));
            }
            block_of[v] = b;
        }
    }
    Ok(first_structure(r, rr, |s| {
        s.support.iter().any(|&v| block_of[v] != block_of[s.support[0]])
    }))
}

/// A `K_rr` structure with at most one support cluster outside `q_v`.
pub fn vertex_structure(r: &Multigraph2, rr: usize, q_v: &VertexSet) -> Option<EmbStructure> {
    first_structure(r, rr, |s| s.support.iter().filter(|&&v| !q_v.contains(v)).count() <= 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(m: u8) -> Multigraph2 {
        let mut r = Multigraph2::new(2);
        r.set(0, 1, m).unwrap();
        r
    }

    #[test]
    fn enumeration_examples() {
        let d = pair(2);
        assert_eq!(
            enumerate_structures(&d, 3),
            vec![EmbStructure::new(vec![(0, 1), (1, 2)]), EmbStructure::new(vec![(0, 2), (1, 1)])]
        );
        assert_eq!(enumerate_structures(&d, 2).len(), 3);
        assert!(enumerate_structures(&pair(1), 4).is_empty());
        for s in enumerate_structures(&Multigraph2::complete(5, 2), 4) {
            assert!(s.is_valid(&Multigraph2::complete(5, 2), 4));
        }
    }

    #[test]
    fn double_edge_search() {
        let k5 = Multigraph2::complete(5, 2);
        let found = structure_containing_double_edge(&k5, 4, (1, 3)).unwrap();
        let s = found.structure.unwrap();
        assert_eq!((s.load(1), s.load(3), s.total()), (2, 2, 5));

        let mut two = Multigraph2::new(4);
        two.set(0, 1, 2).unwrap();
        two.set(2, 3, 2).unwrap();
        let none = structure_containing_double_edge(&two, 4, (0, 1)).unwrap();
        assert_eq!(none.structure, None);
        assert!(!none.alarm);
        assert_eq!(
            structure_containing_double_edge(&pair(1), 4, (0, 1)),
            Err(Error::NotDoubleEdge(0, 1))
        );
    }

    #[test]
    fn crossing_and_vertex_structures() {
        let blocks = [VertexSet::from([0, 1]), VertexSet::from([2, 3])];
        assert!(crossing_structure(&Multigraph2::complete(4, 2), 3, &blocks).unwrap().is_some());
        let mut split = Multigraph2::new(4);
        split.set(0, 1, 2).unwrap();
        split.set(2, 3, 2).unwrap();
        assert_eq!(crossing_structure(&split, 2, &blocks).unwrap(), None);
        split.set(1, 2, 1).unwrap();
        assert_eq!(
            crossing_structure(&split, 2, &blocks).unwrap(),
            Some(EmbStructure::new(vec![(1, 1), (2, 1)]))
        );

        let k3 = Multigraph2::complete(3, 2);
        assert!(vertex_structure(&k3, 3, &VertexSet::from([0, 1])).is_some());
        assert_eq!(vertex_structure(&Multigraph2::complete(6, 2), 4, &VertexSet::new()), None);
    }
}
