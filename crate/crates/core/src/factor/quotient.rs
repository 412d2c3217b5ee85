//! Twin-class quotient of a host graph and the copy types of a pattern in it.
//!
//! Vertices with equal open neighbourhoods (an independent class) or equal
//! closed neighbourhoods (a clique class) are interchangeable, so an
//! H-tiling is determined up to relabelling by how many vertices each copy
//! takes from each class.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

pub(crate) struct Quotient {
    pub classes: Vec<Vec<usize>>,
    /// Members of the class are pairwise adjacent (true for singletons).
    pub clique: Vec<bool>,
    /// `adj[c]` holds the classes completely joined to `c`.
    pub adj: Vec<FixedBitSet>,
    pub block_of_class: Vec<usize>,
}

impl Quotient {
    /// Twin classes of `g`, refined by `blocks` when given (vertices outside
    /// every block share block id `usize::MAX`).
    pub fn new(g: &Graph, blocks: Option<&[VertexSet]>) -> Quotient {
        let n = g.n();
        let mut block = vec![usize::MAX; n];
        if let Some(bs) = blocks {
            for (i, b) in bs.iter().enumerate() {
                for v in b.iter() {
                    block[v] = i;
                }
            }
        }
        let mut open: HashMap<(usize, FixedBitSet), Vec<usize>> = HashMap::new();
        for v in 0..n {
            open.entry((block[v], g.neighbor_set(v).clone()))
                .or_default()
                .push(v);
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut singles = Vec::new();
        let mut open_groups: Vec<Vec<usize>> = open.into_values().collect();
        open_groups.sort();
        for grp in open_groups {
            if grp.len() > 1 {
                groups.push(grp);
            } else {
                singles.push(grp[0]);
            }
        }
        let mut closed: HashMap<(usize, FixedBitSet), Vec<usize>> = HashMap::new();
        for &v in &singles {
            let mut nb = g.neighbor_set(v).clone();
            nb.insert(v);
            closed.entry((block[v], nb)).or_default().push(v);
        }
        let mut closed_groups: Vec<Vec<usize>> = closed.into_values().collect();
        groups.append(&mut closed_groups);
        groups.sort_by_key(|grp| grp[0]);
        let k = groups.len();
        let clique = groups
            .iter()
            .map(|grp| grp.len() == 1 || g.has_edge(grp[0], grp[1]))
            .collect();
        let mut adj = vec![FixedBitSet::with_capacity(k); k];
        for c in 0..k {
            for d in 0..k {
                if c != d && g.has_edge(groups[c][0], groups[d][0]) {
                    adj[c].insert(d);
                }
            }
        }
        let block_of_class = groups.iter().map(|grp| block[grp[0]]).collect();
        Quotient {
            classes: groups,
            clique,
            adj,
            block_of_class,
        }
    }

    pub fn k(&self) -> usize {
        self.classes.len()
    }

    pub fn sizes(&self) -> Vec<u32> {
        self.classes.iter().map(|c| c.len() as u32).collect()
    }
}

/// How one copy of the pattern meets the classes.
#[derive(Clone, Debug)]
pub(crate) struct CopyType {
    /// `(class, count)` pairs sorted by class.
    pub counts: Vec<(u32, u32)>,
    /// Class receiving each pattern vertex.
    pub roles: Vec<usize>,
}

/// Pattern vertices grouped into twin classes (equal open or closed
/// neighbourhoods); returns for each vertex the previous member of its class.
fn pattern_twin_predecessor(h: &Graph, order: &[usize]) -> Vec<Option<usize>> {
    let n = h.n();
    let mut pred = vec![None; n];
    let mut last: HashMap<(bool, FixedBitSet), usize> = HashMap::new();
    for &x in order {
        let open = h.neighbor_set(x).clone();
        let mut closed = open.clone();
        closed.insert(x);
        // a vertex has twins of at most one kind
        let key_open = (false, open);
        let key_closed = (true, closed);
        let prev = last
            .get(&key_open)
            .copied()
            .or_else(|| last.get(&key_closed).copied());
        pred[x] = prev;
        last.insert(key_open, x);
        last.insert(key_closed, x);
    }
    pred
}

/// Pattern vertices ordered so each one has as many earlier neighbours as possible.
pub(crate) fn pattern_order(h: &Graph) -> Vec<usize> {
    let n = h.n();
    let mut placed = vec![false; n];
    let mut back = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let x = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| (back[v], h.degree(v), std::cmp::Reverse(v)))
            .unwrap();
        placed[x] = true;
        order.push(x);
        for w in h.neighbors(x) {
            back[w] += 1;
        }
    }
    order
}

/// All distinct count vectors of copies of `h` in the quotient, with a
/// realising role assignment for each. Fails once more than `cap` types or
/// `node_budget` search nodes are needed.
pub(crate) fn copy_types(
    q: &Quotient,
    h: &Graph,
    cap: usize,
    node_budget: usize,
) -> Result<Vec<CopyType>> {
    let order = pattern_order(h);
    let pred = pattern_twin_predecessor(h, &order);
    let k = q.k();
    let sizes = q.sizes();
    let mut allowed: Vec<FixedBitSet> = q.adj.clone();
    for c in 0..k {
        if q.clique[c] && sizes[c] > 1 {
            allowed[c].insert(c);
        }
    }
    struct St<'a> {
        h: &'a Graph,
        order: &'a [usize],
        pred: &'a [Option<usize>],
        allowed: &'a [FixedBitSet],
        sizes: &'a [u32],
        role: Vec<usize>,
        used: Vec<u32>,
        found: HashMap<Vec<(u32, u32)>, Vec<usize>>,
        keys: Vec<Vec<(u32, u32)>>,
        nodes: usize,
        cap: usize,
        budget: usize,
    }
    fn go(st: &mut St, i: usize) -> Result<()> {
        st.nodes += 1;
        if st.nodes > st.budget {
            return Err(Error::cap("copy-type search nodes", st.budget, st.nodes));
        }
        if i == st.order.len() {
            let mut counts: Vec<(u32, u32)> = Vec::new();
            let mut cls: Vec<usize> = st.role.clone();
            cls.sort_unstable();
            for c in cls {
                match counts.last_mut() {
                    Some((lc, cnt)) if *lc as usize == c => *cnt += 1,
                    _ => counts.push((c as u32, 1)),
                }
            }
            if !st.found.contains_key(&counts) {
                if st.found.len() >= st.cap {
                    return Err(Error::cap("copy types", st.cap, st.found.len() + 1));
                }
                st.keys.push(counts.clone());
                st.found.insert(counts, st.role.clone());
            }
            return Ok(());
        }
        let x = st.order[i];
        let k = st.sizes.len();
        let mut cand = FixedBitSet::with_capacity(k);
        cand.insert_range(..);
        for y in st.h.neighbors(x) {
            if st.role[y] != usize::MAX {
                cand.intersect_with(&st.allowed[st.role[y]]);
            }
        }
        let lo = st.pred[x].map_or(0, |p| st.role[p]);
        let cands: Vec<usize> = cand.ones().filter(|&c| c >= lo && st.used[c] < st.sizes[c]).collect();
        for c in cands {
            st.role[x] = c;
            st.used[c] += 1;
            let r = go(st, i + 1);
            st.used[c] -= 1;
            st.role[x] = usize::MAX;
            r?;
        }
        Ok(())
    }
    let mut st = St {
        h,
        order: &order,
        pred: &pred,
        allowed: &allowed,
        sizes: &sizes,
        role: vec![usize::MAX; h.n()],
        used: vec![0; k],
        found: HashMap::new(),
        keys: Vec::new(),
        nodes: 0,
        cap,
        budget: node_budget,
    };
    if h.n() > 0 {
        go(&mut st, 0)?;
    }
    let mut keys = st.keys;
    keys.sort();
    Ok(keys
        .into_iter()
        .map(|counts| {
            let roles = st.found[&counts].clone();
            CopyType { counts, roles }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete_multipartite;

    #[test]
    fn complete_graph_is_one_clique_class() {
        let q = Quotient::new(&Graph::complete(6), None);
        assert_eq!(q.k(), 1);
        assert!(q.clique[0]);
        let types = copy_types(&q, &Graph::complete(3), 100, 10_000).unwrap();
        assert_eq!(types.len(), 1);
        assert_eq!(types[0].counts, vec![(0, 3)]);
    }

    #[test]
    fn multipartite_classes_are_the_parts() {
        let g = complete_multipartite(&[2, 2, 2]).unwrap();
        let q = Quotient::new(&g, None);
        assert_eq!(q.k(), 3);
        assert!(q.clique.iter().all(|c| !c));
        let types = copy_types(&q, &Graph::complete(3), 100, 10_000).unwrap();
        assert_eq!(types.len(), 1);
        let types = copy_types(&q, &Graph::path(3), 100, 10_000).unwrap();
        // middle in one part; ends together in another part (6 ways) or split (1 vector)
        assert_eq!(types.len(), 7);
    }

    #[test]
    fn refinement_splits_classes() {
        let g = Graph::complete(4);
        let blocks = [VertexSet::from([0, 1]), VertexSet::from([2, 3])];
        let q = Quotient::new(&g, Some(&blocks));
        assert_eq!(q.k(), 2);
        assert_eq!(q.block_of_class, vec![0, 1]);
    }
}
