//! Reduced multigraphs of cluster systems and what lives on them:
//! embeddable structures, fractional tilings, and the almost-tiling pipeline.

mod pipeline;
mod structures;
mod tiling;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::embed::ClusterSystem;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub use pipeline::{almost_tiling_pipeline, almost_tiling_pipeline_with, PipelineReport, StructureAccount};
pub use structures::{
    crossing_structure, enumerate_structures, for_each_structure, structure_containing_double_edge,
    vertex_structure, DoubleEdgeSearch, EmbStructure,
};
pub use tiling::{convert_4_to_2, convert_4_to_3, fractional_tiling, FractionalTiling, TilingLp};

/// Multigraph on clusters `0..k` with edge multiplicities in `{0, 1, 2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph2 {
    k: usize,
    mult: Vec<Vec<u8>>,
}

impl Multigraph2 {
    pub fn new(k: usize) -> Self {
        Multigraph2 {
            k,
            mult: vec![vec![0; k]; k],
        }
    }

    /// Every pair joined with multiplicity `m`.
    pub fn complete(k: usize, m: u8) -> Self {
        let mut r = Multigraph2::new(k);
        for i in 0..k {
            for j in i + 1..k {
                r.mult[i][j] = m;
                r.mult[j][i] = m;
            }
        }
        r
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn set(&mut self, i: usize, j: usize, m: u8) -> Result<()> {
        if i == j || i >= self.k || j >= self.k || m > 2 {
            return Err(Error::Invalid(format!("bad multigraph entry {i} {j} {m}")));
        }
        self.mult[i][j] = m;
        self.mult[j][i] = m;
        Ok(())
    }

    pub fn mult(&self, i: usize, j: usize) -> u8 {
        self.mult[i][j]
    }

    /// Degree with double-edges counted twice.
    pub fn degree(&self, i: usize) -> usize {
        self.mult[i].iter().map(|&m| m as usize).sum()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.k).map(|i| self.degree(i)).min().unwrap_or(0)
    }

    /// `(i, j, mult)` for `i < j` and non-zero multiplicity.
    pub fn edges(&self) -> Vec<(usize, usize, u8)> {
        let mut out = Vec::new();
        for i in 0..self.k {
            for j in i + 1..self.k {
                if self.mult[i][j] > 0 {
                    out.push((i, j, self.mult[i][j]));
                }
            }
        }
        out
    }

    /// Parses `k` on the first line, then `i j mult` lines. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let parse_err = |line: usize, message: String| Error::Parse {
            line,
            byte: 0,
            message,
        };
        let (first, head) = lines.next().ok_or_else(|| parse_err(1, "missing cluster count".into()))?;
        let k: usize = head
            .parse()
            .map_err(|_| parse_err(first, format!("bad cluster count {head:?}")))?;
        let mut r = Multigraph2::new(k);
        for (line, l) in lines {
            let nums: Vec<usize> = l
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| parse_err(line, format!("expected three integers, got {l:?}")))?;
            let [i, j, m] = nums[..] else {
                return Err(parse_err(line, format!("expected three integers, got {l:?}")));
            };
            if m > 2 {
                return Err(parse_err(line, format!("multiplicity {m} exceeds 2")));
            }
            r.set(i, j, m as u8).map_err(|e| parse_err(line, e.to_string()))?;
        }
        Ok(r)
    }

    pub fn emit(&self) -> String {
        let mut out = format!("{}\n", self.k);
        for (i, j, m) in self.edges() {
            out.push_str(&format!("{i} {j} {m}\n"));
        }
        out
    }
}

impl fmt::Display for Multigraph2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.emit())
    }
}

#[derive(Serialize, Deserialize)]
struct MultigraphRepr {
    k: usize,
    edges: Vec<(usize, usize, u8)>,
}

impl Serialize for Multigraph2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MultigraphRepr {
            k: self.k,
            edges: self.edges(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Multigraph2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MultigraphRepr::deserialize(d)?;
        let mut r = Multigraph2::new(repr.k);
        for (i, j, m) in repr.edges {
            r.set(i, j, m).map_err(serde::de::Error::custom)?;
        }
        Ok(r)
    }
}

/// Density margin `beta`, regularity parameter `epsilon` (carried for
/// reporting, never checked), degree slack `mu`, tiling slack `eta`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thresholds {
    #[serde(with = "crate::rational::pq")]
    pub beta: Rational,
    #[serde(with = "crate::rational::pq")]
    pub epsilon: Rational,
    #[serde(with = "crate::rational::pq")]
    pub mu: Rational,
    #[serde(with = "crate::rational::pq")]
    pub eta: Rational,
}

impl Thresholds {
    pub fn new(beta: Rational, epsilon: Rational, mu: Rational, eta: Rational) -> Result<Self> {
        for (name, v) in [("beta", &beta), ("epsilon", &epsilon), ("mu", &mu), ("eta", &eta)] {
            if !rational::is_in_open_unit(v) {
                return Err(Error::Invalid(format!("{name} = {} is not in (0, 1)", rational::to_pq(v))));
            }
        }
        Ok(Thresholds { beta, epsilon, mu, eta })
    }

    /// `beta, epsilon <= mu / 10`, the regime of the degree bound.
    pub fn degree_regime(&self) -> bool {
        let cap = &self.mu / rational::int(10);
        self.beta <= cap && self.epsilon <= cap
    }
}

/// Double-edge when the density is at least `1/2 + beta`, single edge when
/// it is at least `beta`. Clusters must have equal sizes.
pub fn build_reduced(cs: &ClusterSystem, th: &Thresholds) -> Result<Multigraph2> {
    let sizes: Vec<usize> = cs.clusters.iter().map(|c| c.len()).collect();
    if sizes.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::ClusterSize(sizes));
    }
    let k = cs.clusters.len();
    let double = rational::ratio(1, 2) + &th.beta;
    let mut r = Multigraph2::new(k);
    for i in 0..k {
        for j in i + 1..k {
            let d = cs.density(i, j);
            let m = if d >= double {
                2
            } else if d >= th.beta {
                1
            } else {
                0
            };
            r.set(i, j, m)?;
        }
    }
    Ok(r)
}

/// Every cluster has degree at least `2 (1 - 2/f + mu/2) k`.
pub fn check_degree_bound(r: &Multigraph2, f: usize, mu: &Rational) -> bool {
    if f == 0 {
        return false;
    }
    let bound = rational::int(2)
        * (rational::int(1) - rational::ratio(2, f as i64) + mu / rational::int(2))
        * rational::from_usize(r.k());
    (0..r.k()).all(|i| rational::from_usize(r.degree(i)) >= bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Graph, VertexSet};
    use crate::rational::ratio;

    fn th(beta: Rational) -> Thresholds {
        Thresholds::new(beta, ratio(1, 100), ratio(1, 10), ratio(1, 10)).unwrap()
    }

    #[test]
    fn reduced_edges_follow_density() {
        let complete = ClusterSystem::new(
            crate::graph::complete_multipartite(&[2, 2]).unwrap(),
            vec![VertexSet::from([0, 1]), VertexSet::from([2, 3])],
        )
        .unwrap();
        assert_eq!(build_reduced(&complete, &th(ratio(1, 10))).unwrap().mult(0, 1), 2);

        let mut g = Graph::new(4);
        g.add_edge(0, 2).unwrap();
        let quarter = ClusterSystem::new(g, vec![VertexSet::from([0, 1]), VertexSet::from([2, 3])]).unwrap();
        assert_eq!(build_reduced(&quarter, &th(ratio(1, 4))).unwrap().mult(0, 1), 1);
        assert_eq!(build_reduced(&quarter, &th(ratio(1, 3))).unwrap().mult(0, 1), 0);

        let uneven = ClusterSystem::new(Graph::new(3), vec![VertexSet::from([0]), VertexSet::from([1, 2])]).unwrap();
        assert_eq!(build_reduced(&uneven, &th(ratio(1, 4))), Err(Error::ClusterSize(vec![1, 2])));
    }

    #[test]
    fn degree_bounds() {
        assert!(check_degree_bound(&Multigraph2::complete(6, 2), 5, &ratio(1, 10)));
        assert!(!check_degree_bound(&Multigraph2::new(10), 4, &ratio(1, 10)));
        let mut c5 = Multigraph2::new(5);
        for i in 0..5 {
            c5.set(i, (i + 1) % 5, 2).unwrap();
        }
        assert_eq!(c5.degree(0), 4);
        assert!(!check_degree_bound(&c5, 4, &ratio(1, 20)));
    }

    #[test]
    fn multigraph_text_round_trip() {
        let r = Multigraph2::parse("# two pairs\n3\n0 1 2\n1 2 1\n").unwrap();
        assert_eq!(r.edges(), vec![(0, 1, 2), (1, 2, 1)]);
        assert_eq!(Multigraph2::parse(&r.emit()).unwrap(), r);
        assert!(matches!(Multigraph2::parse("3\n0 1 3\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(Multigraph2::parse("2\n0 0 1\n"), Err(Error::Parse { line: 2, .. })));
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<Multigraph2>(&json).unwrap(), r);
    }
}
