//! Vertex arboricity, optimal acyclic partitions and the parameters derived
//! from them: sigma, critical arboricity, membership in H-tilde, f(H), the two
//! highest common factors and the minimum-degree threshold.

use std::fmt;

use num::{integer::gcd, One};
use serde::{Serialize, Serializer};

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::graph::{components, Graph, VertexSet};
use crate::rational::{self, Rational};

/// Partition of `V(H)` into blocks that each induce a forest.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AcyclicPartition {
    blocks: Vec<VertexSet>,
}

impl Serialize for AcyclicPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("AcyclicPartition", 2)?;
        st.serialize_field("blocks", &self.blocks)?;
        st.serialize_field("sizes", &self.sizes())?;
        st.end()
    }
}

impl AcyclicPartition {
    /// Wraps blocks as given, after checking they partition `V(h)` into forests.
    pub fn new(h: &Graph, blocks: Vec<VertexSet>) -> Result<Self> {
        let p = AcyclicPartition { blocks };
        p.check(h)?;
        Ok(p)
    }

    /// Blocks ordered by smallest element.
    pub fn canonical(mut blocks: Vec<VertexSet>) -> Self {
        blocks.retain(|b| !b.is_empty());
        blocks.sort();
        AcyclicPartition { blocks }
    }

    pub fn blocks(&self) -> &[VertexSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block sizes in increasing order.
    pub fn sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.blocks.iter().map(|b| b.len()).collect();
        s.sort_unstable();
        s
    }

    /// Non-zero gaps between consecutive sorted block sizes.
    pub fn differences(&self) -> Vec<usize> {
        self.sizes()
            .windows(2)
            .map(|w| w[1] - w[0])
            .filter(|&d| d > 0)
            .collect()
    }

    /// Re-verifies disjointness, coverage, non-emptiness and the forest property.
    pub fn check(&self, h: &Graph) -> Result<()> {
        let mut seen = vec![false; h.n()];
        for b in &self.blocks {
            if b.is_empty() {
                return Err(Error::Invalid("empty block".into()));
            }
            for v in b.iter() {
                if v >= h.n() || seen[v] {
                    return Err(Error::Invalid(format!("vertex {v} repeated or out of range")));
                }
                seen[v] = true;
            }
            if !crate::graph::is_forest(h, b) {
                return Err(Error::Invalid(format!("block {b} contains a cycle")));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Invalid("blocks do not cover every vertex".into()));
        }
        Ok(())
    }
}

impl fmt::Display for AcyclicPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        write!(f, "{}", parts.join(" | "))
    }
}

/// A highest common factor that may be infinite (gcd of an empty set).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Hcf {
    Finite(usize),
    Infinite,
}

impl Serialize for Hcf {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Hcf::Finite(v) => s.serialize_u64(*v as u64),
            Hcf::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl fmt::Display for Hcf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hcf::Finite(v) => write!(f, "{v}"),
            Hcf::Infinite => write!(f, "infinite"),
        }
    }
}

const MAX_MASK: usize = 64;

fn adjacency_masks(h: &Graph) -> Vec<u64> {
    (0..h.n())
        .map(|v| h.neighbors(v).fold(0u64, |m, w| m | (1u64 << w)))
        .collect()
}

/// Whether adding `v` to the forest `class` keeps it acyclic: every pair of
/// neighbours of `v` inside `class` must lie in different components.
fn extends_forest(adj: &[u64], class: u64, v: usize) -> bool {
    let mut nbrs = adj[v] & class;
    if nbrs.count_ones() <= 1 {
        return true;
    }
    while nbrs != 0 {
        let x = nbrs.trailing_zeros() as usize;
        nbrs &= nbrs - 1;
        let mut comp = 1u64 << x;
        let mut frontier = comp;
        while frontier != 0 {
            let y = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = adj[y] & class & !comp;
            comp |= new;
            frontier |= new;
        }
        if comp & nbrs != 0 {
            return false;
        }
    }
    true
}

fn mask_to_set(mut m: u64) -> VertexSet {
    let mut out = Vec::new();
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out.into()
}

/// Colours `order` into at most `r` forest classes, first classes opened first.
fn colour_forests(adj: &[u64], order: &[usize], classes: &mut Vec<u64>, r: usize, i: usize) -> bool {
    if i == order.len() {
        return true;
    }
    let v = order[i];
    for c in 0..classes.len() {
        if extends_forest(adj, classes[c], v) {
            classes[c] |= 1u64 << v;
            if colour_forests(adj, order, classes, r, i + 1) {
                return true;
            }
            classes[c] &= !(1u64 << v);
        }
    }
    if classes.len() < r {
        classes.push(1u64 << v);
        if colour_forests(adj, order, classes, r, i + 1) {
            return true;
        }
        classes.pop();
    }
    false
}

/// Minimum number of blocks in an acyclic partition, with a witness.
pub fn vertex_arboricity(h: &Graph) -> Result<(usize, AcyclicPartition)> {
    vertex_arboricity_with(h, &Caps::default())
}

pub fn vertex_arboricity_with(h: &Graph, caps: &Caps) -> Result<(usize, AcyclicPartition)> {
    let limit = caps.arboricity.min(MAX_MASK);
    if h.n() > limit {
        return Err(Error::cap("vertex arboricity", limit, h.n()));
    }
    if h.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let adj = adjacency_masks(h);
    let mut order: Vec<usize> = (0..h.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(h.degree(v)), v));
    for r in 1..=h.n() {
        let mut classes = Vec::new();
        if colour_forests(&adj, &order, &mut classes, r, 0) {
            let blocks = classes.into_iter().map(mask_to_set).collect();
            return Ok((r, AcyclicPartition::canonical(blocks)));
        }
    }
    unreachable!("singletons always form an acyclic partition")
}

/// Every acyclic partition with exactly `ar(h)` blocks, in canonical form
/// (blocks sorted by smallest vertex), listed in lexicographic order.
pub fn optimal_acyclic_partitions(h: &Graph) -> Result<Vec<AcyclicPartition>> {
    optimal_acyclic_partitions_with(h, &Caps::default())
}

pub fn optimal_acyclic_partitions_with(h: &Graph, caps: &Caps) -> Result<Vec<AcyclicPartition>> {
    let limit = caps.partition_enum.min(MAX_MASK);
    if h.n() > limit {
        return Err(Error::cap("acyclic partition enumeration", limit, h.n()));
    }
    let (ar, _) = vertex_arboricity_with(h, caps)?;
    Ok(partitions_into(h, ar))
}

/// All partitions into exactly `k` forest blocks, via restricted growth strings.
fn partitions_into(h: &Graph, k: usize) -> Vec<AcyclicPartition> {
    fn go(adj: &[u64], n: usize, k: usize, v: usize, classes: &mut Vec<u64>, out: &mut Vec<AcyclicPartition>) {
        if v == n {
            if classes.len() == k {
                out.push(AcyclicPartition::canonical(
                    classes.iter().map(|&m| mask_to_set(m)).collect(),
                ));
            }
            return;
        }
        if k - classes.len().min(k) > n - v {
            return;
        }
        for c in 0..classes.len() {
            if extends_forest(adj, classes[c], v) {
                classes[c] |= 1u64 << v;
                go(adj, n, k, v + 1, classes, out);
                classes[c] &= !(1u64 << v);
            }
        }
        if classes.len() < k {
            classes.push(1u64 << v);
            go(adj, n, k, v + 1, classes, out);
            classes.pop();
        }
    }
    let adj = adjacency_masks(h);
    let mut out = Vec::new();
    go(&adj, h.n(), k, 0, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Smallest block over all optimal partitions, and the critical arboricity
/// `(ar - 1) h / (h - sigma)`; forests get `ar_cr = 1` by convention.
pub fn sigma_and_critical(h: &Graph) -> Result<(usize, Rational)> {
    let parts = optimal_acyclic_partitions(h)?;
    Ok(sigma_from(h, &parts))
}

fn sigma_from(h: &Graph, parts: &[AcyclicPartition]) -> (usize, Rational) {
    let ar = parts[0].len();
    let sigma = parts
        .iter()
        .map(|p| p.sizes()[0])
        .min()
        .expect("at least one optimal partition");
    let ar_cr = if ar == 1 {
        Rational::one()
    } else {
        rational::from_usize((ar - 1) * h.n()) / rational::from_usize(h.n() - sigma)
    };
    (sigma, ar_cr)
}

/// An optimal partition whose first block is independent and whose other
/// blocks all have twice its size.
pub fn in_htilde(h: &Graph) -> Result<(bool, Option<AcyclicPartition>)> {
    let parts = optimal_acyclic_partitions(h)?;
    let w = htilde_witness(h, &parts);
    Ok((w.is_some(), w))
}

fn htilde_witness(h: &Graph, parts: &[AcyclicPartition]) -> Option<AcyclicPartition> {
    for p in parts {
        for (i, t1) in p.blocks().iter().enumerate() {
            if h.induced_edge_count(t1) != 0 {
                continue;
            }
            let ok = p
                .blocks()
                .iter()
                .enumerate()
                .all(|(j, b)| j == i || b.len() == 2 * t1.len());
            if ok {
                let mut blocks = vec![t1.clone()];
                blocks.extend(
                    p.blocks()
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, b)| b.clone()),
                );
                return Some(AcyclicPartition { blocks });
            }
        }
    }
    None
}

/// `2 ar - 1` for members of H-tilde, `2 ar` otherwise.
pub fn f_value(h: &Graph) -> Result<usize> {
    Ok(invariant_report(h)?.f)
}

fn gcd_all(values: impl IntoIterator<Item = usize>) -> Hcf {
    values
        .into_iter()
        .fold(Hcf::Infinite, |acc, v| match acc {
            Hcf::Infinite => Hcf::Finite(v),
            Hcf::Finite(g) => Hcf::Finite(gcd(g, v)),
        })
}

fn hcf_from(h: &Graph, parts: &[AcyclicPartition]) -> (Hcf, usize, bool) {
    let hcf1 = gcd_all(parts.iter().flat_map(|p| p.differences()));
    let hcf2 = match gcd_all(components(h).iter().map(|c| c.len())) {
        Hcf::Finite(v) => v,
        Hcf::Infinite => 0,
    };
    let ar = parts[0].len();
    let is_one = match ar {
        1 => hcf2 == 1,
        2 => hcf2 == 1 && hcf1 <= Hcf::Finite(2),
        _ => hcf1 == Hcf::Finite(1),
    };
    (hcf1, hcf2, is_one)
}

/// `(hcf1, hcf2, hcf_is_one)`. hcf1 is the gcd of the non-zero consecutive
/// block-size differences over all optimal partitions (infinite when there are
/// none); hcf2 is the gcd of the component orders.
pub fn hcf_report(h: &Graph) -> Result<(Hcf, usize, bool)> {
    let parts = optimal_acyclic_partitions(h)?;
    Ok(hcf_from(h, &parts))
}

/// Proper 2-colouring of a forest; in each component the smallest vertex goes
/// to the first side.
pub fn forest_bipartition(f: &Graph) -> Result<(VertexSet, VertexSet)> {
    if !crate::graph::is_forest(f, &VertexSet::range(f.n())) {
        return Err(Error::NotAForest);
    }
    let mut side = vec![usize::MAX; f.n()];
    for start in 0..f.n() {
        if side[start] != usize::MAX {
            continue;
        }
        side[start] = 0;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for w in f.neighbors(u) {
                if side[w] == usize::MAX {
                    side[w] = 1 - side[u];
                    stack.push(w);
                }
            }
        }
    }
    let first = (0..f.n()).filter(|&v| side[v] == 0).collect();
    let second = (0..f.n()).filter(|&v| side[v] == 1).collect();
    Ok((first, second))
}

/// [`forest_bipartition`] of `h[block]`, returned in the ids of `h`.
pub fn block_bipartition(h: &Graph, block: &VertexSet) -> Result<(VertexSet, VertexSet)> {
    let (a, b) = forest_bipartition(&h.induced(block))?;
    let ids = block.as_slice();
    Ok((
        a.iter().map(|i| ids[i]).collect(),
        b.iter().map(|i| ids[i]).collect(),
    ))
}

/// `max{(1 - 2/f + mu) n, (1/2 + mu) n}`.
pub fn degree_threshold(h: &Graph, n: usize, mu: &Rational) -> Result<Rational> {
    let f = f_value(h)?;
    Ok(threshold_for_f(f, n, mu))
}

pub fn threshold_for_f(f: usize, n: usize, mu: &Rational) -> Rational {
    let n = rational::from_usize(n);
    let one = Rational::one();
    let first = (&one - rational::ratio(2, f as i64) + mu) * &n;
    let second = (rational::ratio(1, 2) + mu) * &n;
    first.max(second)
}

/// Everything the pattern-dependent statements are parameterised by.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub n: usize,
    pub ar: usize,
    pub sigma: usize,
    #[serde(with = "crate::rational::pq")]
    pub ar_cr: Rational,
    /// `true` when `ar_cr` was set to 1 because the pattern is a forest.
    pub ar_cr_by_convention: bool,
    pub f: usize,
    pub in_htilde: bool,
    pub htilde_witness: Option<AcyclicPartition>,
    pub hcf1: Hcf,
    pub hcf2: usize,
    pub hcf_is_one: bool,
    pub arboricity_witness: AcyclicPartition,
    pub optimal_partition_count: usize,
}

pub fn invariant_report(h: &Graph) -> Result<InvariantReport> {
    invariant_report_with(h, &Caps::default())
}

pub fn invariant_report_with(h: &Graph, caps: &Caps) -> Result<InvariantReport> {
    let parts = optimal_acyclic_partitions_with(h, caps)?;
    let ar = parts[0].len();
    let (sigma, ar_cr) = sigma_from(h, &parts);
    let witness = htilde_witness(h, &parts);
    let (hcf1, hcf2, hcf_is_one) = hcf_from(h, &parts);
    let in_htilde = witness.is_some();
    Ok(InvariantReport {
        n: h.n(),
        ar,
        sigma,
        ar_cr,
        ar_cr_by_convention: ar == 1,
        f: if in_htilde { 2 * ar - 1 } else { 2 * ar },
        in_htilde,
        htilde_witness: witness,
        hcf1,
        hcf2,
        hcf_is_one,
        arboricity_witness: parts[0].clone(),
        optimal_partition_count: parts.len(),
    })
}
