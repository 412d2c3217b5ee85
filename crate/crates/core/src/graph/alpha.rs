//! Independence number: exact branch-and-bound and a certified interval.

use serde::Serialize;

use super::{Graph, VertexSet};
use crate::error::{Error, Result};

/// Certified bracket `lower <= alpha(G) <= upper`, with a witness of size `lower`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaBound {
    pub lower: usize,
    pub upper: usize,
    pub witness: VertexSet,
}

/// Either the exact value or an interval, depending on the graph size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum AlphaEstimate {
    Exact { alpha: usize, witness: VertexSet },
    Interval(AlphaBound),
}

impl AlphaEstimate {
    /// Exact when `g.n() <= cap`, interval otherwise.
    pub fn compute(g: &Graph, cap: usize) -> AlphaEstimate {
        match independence_number(g, cap) {
            Ok((alpha, witness)) => AlphaEstimate::Exact { alpha, witness },
            Err(_) => AlphaEstimate::Interval(independence_bounds(g)),
        }
    }

    /// Upper bound usable in `alpha(G) <= x` claims.
    pub fn upper(&self) -> usize {
        match self {
            AlphaEstimate::Exact { alpha, .. } => *alpha,
            AlphaEstimate::Interval(b) => b.upper,
        }
    }

    pub fn lower(&self) -> usize {
        match self {
            AlphaEstimate::Exact { alpha, .. } => *alpha,
            AlphaEstimate::Interval(b) => b.lower,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, AlphaEstimate::Exact { .. })
    }
}

const MASK_BITS: usize = 128;

fn masks(g: &Graph) -> Vec<u128> {
    (0..g.n())
        .map(|v| g.neighbors(v).fold(0u128, |m, w| m | (1u128 << w)))
        .collect()
}

fn bits(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

/// Number of cliques in a greedy clique cover of `p`; an upper bound on alpha.
fn clique_cover(adj: &[u128], mut p: u128) -> usize {
    let mut count = 0;
    while p != 0 {
        let mut candidates = p;
        while candidates != 0 {
            let v = candidates.trailing_zeros() as usize;
            p &= !(1u128 << v);
            candidates &= adj[v];
        }
        count += 1;
    }
    count
}

struct Search<'a> {
    adj: &'a [u128],
    best: u128,
    best_size: usize,
}

impl Search<'_> {
    fn run(&mut self, mut p: u128, mut chosen: u128) {
        // Vertices of degree <= 1 inside p belong to some maximum independent set.
        loop {
            let forced = bits(p).find(|&v| (self.adj[v] & p).count_ones() <= 1);
            match forced {
                Some(v) => {
                    chosen |= 1u128 << v;
                    p &= !(self.adj[v] | (1u128 << v));
                }
                None => break,
            }
        }
        let size = chosen.count_ones() as usize;
        if p == 0 {
            if size > self.best_size {
                self.best_size = size;
                self.best = chosen;
            }
            return;
        }
        if size + clique_cover(self.adj, p) <= self.best_size {
            return;
        }
        let w = bits(p)
            .max_by_key(|&v| ((self.adj[v] & p).count_ones(), std::cmp::Reverse(v)))
            .expect("p is non-empty");
        self.run(p & !(self.adj[w] | (1u128 << w)), chosen | (1u128 << w));
        self.run(p & !(1u128 << w), chosen);
    }
}

/// Exact independence number with a witness. Refuses graphs above `cap`
/// vertices (and above 128, the mask width).
pub fn independence_number(g: &Graph, cap: usize) -> Result<(usize, VertexSet)> {
    let limit = cap.min(MASK_BITS);
    if g.n() > limit {
        return Err(Error::cap("exact independence number", limit, g.n()));
    }
    let adj = masks(g);
    let start = greedy_independent(g);
    let mut search = Search {
        adj: &adj,
        best: start.iter().fold(0u128, |m, v| m | (1u128 << v)),
        best_size: start.len(),
    };
    let all = if g.n() == MASK_BITS {
        u128::MAX
    } else {
        (1u128 << g.n()) - 1
    };
    search.run(all, 0);
    Ok((search.best_size, bits(search.best).collect()))
}

/// Minimum-degree greedy independent set.
fn greedy_independent(g: &Graph) -> VertexSet {
    let n = g.n();
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut out = Vec::new();
    loop {
        let pick = (0..n).filter(|&v| alive[v]).min_by_key(|&v| (deg[v], v));
        let Some(v) = pick else { break };
        out.push(v);
        let mut removed = vec![v];
        removed.extend(g.neighbors(v).filter(|&w| alive[w]));
        for &x in &removed {
            alive[x] = false;
        }
        for &x in &removed {
            for y in g.neighbors(x) {
                if alive[y] {
                    deg[y] -= 1;
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Certified interval for graphs of any size. The upper bound is the smaller of
/// a greedy clique cover and `n - |M|` for a greedy matching `M`.
pub fn independence_bounds(g: &Graph) -> AlphaBound {
    let witness = greedy_independent(g);
    let n = g.n();
    let mut covered = vec![false; n];
    let mut cliques = 0;
    for v in 0..n {
        if covered[v] {
            continue;
        }
        covered[v] = true;
        let mut clique = vec![v];
        for w in v + 1..n {
            if !covered[w] && clique.iter().all(|&c| g.has_edge(c, w)) {
                covered[w] = true;
                clique.push(w);
            }
        }
        cliques += 1;
    }
    let mut matched = vec![false; n];
    let mut matching = 0;
    for (u, v) in g.edges() {
        if !matched[u] && !matched[v] {
            matched[u] = true;
            matched[v] = true;
            matching += 1;
        }
    }
    AlphaBound {
        lower: witness.len(),
        upper: cliques.min(n - matching),
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        assert_eq!(independence_number(&Graph::complete(5), 80).unwrap().0, 1);
        assert_eq!(independence_number(&Graph::cycle(5), 80).unwrap().0, 2);
        assert_eq!(independence_number(&Graph::petersen(), 80).unwrap().0, 4);
        assert_eq!(independence_number(&Graph::empty(7), 80).unwrap().0, 7);
        assert_eq!(independence_number(&Graph::new(0), 80).unwrap().0, 0);
    }

    #[test]
    fn witness_is_independent() {
        let g = Graph::petersen();
        let (a, w) = independence_number(&g, 80).unwrap();
        assert_eq!(w.len(), a);
        for u in w.iter() {
            for v in w.iter() {
                assert!(!g.has_edge(u, v));
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = Graph::empty(30);
        assert!(matches!(
            independence_number(&g, 20),
            Err(Error::CapExceeded { .. })
        ));
        let est = AlphaEstimate::compute(&g, 20);
        assert!(!est.is_exact());
        assert_eq!((est.lower(), est.upper()), (30, 30));
    }

    #[test]
    fn interval_brackets_cycle() {
        let b = independence_bounds(&Graph::cycle(9));
        assert!(b.lower <= 4 && 4 <= b.upper);
    }
}
