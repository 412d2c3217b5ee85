//! Explicit embeddings of forests and of `Q(a, b)` gadgets into cluster systems.
//!
//! The `Q` embedding follows the cluster-by-cluster induction: an independent
//! cluster is a chain of `s` vertices with large common neighbourhoods in the
//! remaining clusters, a forest cluster is a forest placed on vertices of high
//! degree towards the remaining clusters. When that schedule fails, an exact
//! backtracking search over all placements takes over.

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::factor::{pattern_order, HCopy};
use crate::graph::{independence_bounds, is_forest, Graph, VertexSet};
use crate::qgraph::{build_q, QSpec};
use crate::rational::{self, Rational};

/// Host graph with disjoint clusters `V_1, ..., V_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterSystem {
    pub host: Graph,
    pub clusters: Vec<VertexSet>,
}

impl ClusterSystem {
    pub fn new(host: Graph, clusters: Vec<VertexSet>) -> Result<Self> {
        let mut seen = vec![false; host.n()];
        for (i, c) in clusters.iter().enumerate() {
            for v in c.iter() {
                if v >= host.n() {
                    return Err(Error::Invalid(format!("cluster {i} holds vertex {v} outside the host")));
                }
                if seen[v] {
                    return Err(Error::Invalid(format!("vertex {v} lies in two clusters")));
                }
                seen[v] = true;
            }
        }
        Ok(ClusterSystem { host, clusters })
    }

    /// `e(V_i, V_j) / (|V_i| |V_j|)`, or 0 for an empty cluster.
    pub fn density(&self, i: usize, j: usize) -> Rational {
        let (a, b) = (&self.clusters[i], &self.clusters[j]);
        if a.is_empty() || b.is_empty() {
            return Rational::zero();
        }
        rational::from_usize(self.host.edges_between(a, b)) / rational::from_usize(a.len() * b.len())
    }

    pub fn density_table(&self) -> Vec<Vec<Rational>> {
        let k = self.clusters.len();
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| if i == j { Rational::zero() } else { self.density(i, j) })
                    .collect()
            })
            .collect()
    }
}

/// Largest induced subgraph of minimum degree at least `d`, by peeling.
pub fn dense_core(g: &Graph, d: usize) -> VertexSet {
    core_within(g, &VertexSet::range(g.n()), d)
}

fn core_within(g: &Graph, allowed: &VertexSet, d: usize) -> VertexSet {
    let mut alive = allowed.to_bitset(g.n());
    let mut deg: Vec<usize> = (0..g.n())
        .map(|v| if alive.contains(v) { g.neighbor_set(v).intersection(&alive).count() } else { 0 })
        .collect();
    let mut stack: Vec<usize> = allowed.iter().filter(|&v| deg[v] < d).collect();
    while let Some(v) = stack.pop() {
        if !alive.contains(v) {
            continue;
        }
        alive.set(v, false);
        for w in g.neighbors(v) {
            if alive.contains(w) {
                deg[w] -= 1;
                if deg[w] + 1 == d {
                    stack.push(w);
                }
            }
        }
    }
    VertexSet::from_bitset(&alive)
}

/// Embeds a forest inside `g[allowed]`: greedily inside the `(k-1)`-core,
/// then by exhaustive backtracking within `budget` nodes.
fn embed_forest_in(
    g: &Graph,
    allowed: &VertexSet,
    f: &Graph,
    budget: usize,
) -> std::result::Result<Vec<usize>, bool> {
    let k = f.n();
    if k == 0 {
        return Ok(Vec::new());
    }
    let core = core_within(g, allowed, k.saturating_sub(1));
    if core.len() >= k {
        if let Some(m) = greedy_forest(g, &core, f) {
            return Ok(m);
        }
    }
    backtrack_forest(g, allowed, f, budget)
}

/// Roots of each component first, children after their parents.
fn forest_order(f: &Graph) -> Vec<(usize, Option<usize>)> {
    let mut out = Vec::with_capacity(f.n());
    let mut seen = vec![false; f.n()];
    for root in 0..f.n() {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        out.push((root, None));
        let mut i = out.len() - 1;
        while i < out.len() {
            let u = out[i].0;
            for w in f.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    out.push((w, Some(u)));
                }
            }
            i += 1;
        }
    }
    out
}

fn greedy_forest(g: &Graph, core: &VertexSet, f: &Graph) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; f.n()];
    let mut used = vec![false; g.n()];
    for (x, parent) in forest_order(f) {
        let pick = match parent {
            None => core.iter().find(|&v| !used[v]),
            Some(p) => g.neighbors(map[p]).find(|&v| !used[v] && core.contains(v)),
        }?;
        map[x] = pick;
        used[pick] = true;
    }
    Some(map)
}

/// `Err(true)` when the budget ran out, `Err(false)` when the search space did.
fn backtrack_forest(
    g: &Graph,
    allowed: &VertexSet,
    f: &Graph,
    budget: usize,
) -> std::result::Result<Vec<usize>, bool> {
    let order = forest_order(f);
    let mut map = vec![usize::MAX; f.n()];
    let mut used = vec![false; g.n()];
    let mut nodes = 0usize;
    fn go(
        g: &Graph,
        allowed: &VertexSet,
        order: &[(usize, Option<usize>)],
        i: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        nodes: &mut usize,
        budget: usize,
    ) -> std::result::Result<bool, ()> {
        if i == order.len() {
            return Ok(true);
        }
        *nodes += 1;
        if *nodes > budget {
            return Err(());
        }
        let (x, parent) = order[i];
        let cands: Vec<usize> = match parent {
            None => allowed.iter().filter(|&v| !used[v]).collect(),
            Some(p) => g.neighbors(map[p]).filter(|&v| !used[v] && allowed.contains(v)).collect(),
        };
        for v in cands {
            map[x] = v;
            used[v] = true;
            let r = go(g, allowed, order, i + 1, map, used, nodes, budget);
            used[v] = false;
            if r? {
                return Ok(true);
            }
        }
        Ok(false)
    }
    match go(g, allowed, &order, 0, &mut map, &mut used, &mut nodes, budget) {
        Ok(true) => Ok(map),
        Ok(false) => Err(false),
        Err(()) => Err(true),
    }
}

/// Embeds a forest `t` into `g` and returns the verified map.
pub fn embed_tree(g: &Graph, t: &Graph) -> Result<HCopy> {
    embed_tree_with(g, t, &Caps::default())
}

pub fn embed_tree_with(g: &Graph, t: &Graph, caps: &Caps) -> Result<HCopy> {
    if !is_forest(t, &VertexSet::range(t.n())) {
        return Err(Error::NotAForest);
    }
    match embed_forest_in(g, &VertexSet::range(g.n()), t, caps.embed_nodes) {
        Ok(map) => {
            let copy = HCopy::new(map);
            if !copy.is_valid(g, t) {
                return Err(Error::ConstructionBug("forest embedding failed verification".into()));
            }
            Ok(copy)
        }
        Err(budget_exhausted) => {
            let bound = independence_bounds(g);
            Err(Error::EmbedFail {
                level: 0,
                budget_exhausted,
                detail: format!(
                    "alpha(G) * k >= {} * {} = {} against n = {}",
                    bound.lower,
                    t.n(),
                    bound.lower * t.n(),
                    g.n()
                ),
            })
        }
    }
}

/// Picks `s` vertices of `pool` one at a time so that each step keeps at least
/// a `beta / 2` fraction of every target (relative to its size before the
/// step). Backtracks over choices. Returns the chosen vertices and the common
/// neighbourhoods left in the targets.
pub fn common_neighborhood_chain(
    g: &Graph,
    pool: &VertexSet,
    targets: &[VertexSet],
    s: usize,
    beta: &Rational,
) -> Result<(VertexSet, Vec<VertexSet>)> {
    chain_with_budget(g, pool, targets, s, beta, Caps::default().embed_nodes)
}

fn chain_with_budget(
    g: &Graph,
    pool: &VertexSet,
    targets: &[VertexSet],
    s: usize,
    beta: &Rational,
    budget: usize,
) -> Result<(VertexSet, Vec<VertexSet>)> {
    let half_beta = beta / rational::int(2);
    let mut nodes = 0usize;
    let pool_list: Vec<usize> = pool.as_slice().to_vec();
    #[allow(clippy::too_many_arguments)]
    fn go(
        g: &Graph,
        pool: &[usize],
        start: usize,
        current: Vec<VertexSet>,
        chosen: &mut Vec<usize>,
        s: usize,
        half_beta: &Rational,
        nodes: &mut usize,
        budget: usize,
    ) -> Option<Vec<VertexSet>> {
        if chosen.len() == s {
            return Some(current);
        }
        // vertices ranked by the smallest fraction they keep
        let mut options: Vec<(Rational, usize, Vec<VertexSet>)> = Vec::new();
        for &v in &pool[start..] {
            let shrunk: Vec<VertexSet> = current
                .iter()
                .map(|t| t.iter().filter(|&w| g.has_edge(v, w)).collect())
                .collect();
            let mut worst: Option<Rational> = None;
            let mut ok = true;
            for (old, new) in current.iter().zip(&shrunk) {
                let frac = if old.is_empty() {
                    rational::int(1)
                } else {
                    rational::from_usize(new.len()) / rational::from_usize(old.len())
                };
                if frac < *half_beta || (new.is_empty() && !old.is_empty()) {
                    ok = false;
                    break;
                }
                worst = Some(worst.map_or(frac.clone(), |w: Rational| w.min(frac)));
            }
            if ok {
                options.push((worst.unwrap_or_else(|| rational::int(1)), v, shrunk));
            }
        }
        options.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for (_, v, shrunk) in options {
            *nodes += 1;
            if *nodes > budget {
                return None;
            }
            let pos = pool.iter().position(|&p| p == v).unwrap();
            chosen.push(v);
            // later picks come after v in pool order, so each set is tried once
            if let Some(done) = go(g, pool, pos + 1, shrunk, chosen, s, half_beta, nodes, budget) {
                return Some(done);
            }
            chosen.pop();
        }
        None
    }
    let mut chosen = Vec::new();
    match go(
        g,
        &pool_list,
        0,
        targets.to_vec(),
        &mut chosen,
        s,
        &half_beta,
        &mut nodes,
        budget,
    ) {
        Some(shrunk) => Ok((chosen.into_iter().collect(), shrunk)),
        None => Err(Error::ChainFail { s }),
    }
}

/// Density requirement on one cluster pair and whether the host meets it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityCheck {
    pub i: usize,
    pub j: usize,
    #[serde(with = "crate::rational::pq")]
    pub density: Rational,
    #[serde(with = "crate::rational::pq")]
    pub required: Rational,
    pub ok: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbedStrategy {
    /// The cluster-by-cluster schedule succeeded.
    Recursive,
    /// The exact backtracking fallback found the copy.
    Backtracking,
}

/// A copy of `Q` in the host: `map[x]` is the image of vertex `x` of
/// `build_q(spec)`, and `images[i]` the image of cluster `U_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QEmbedding {
    pub map: Vec<usize>,
    pub images: Vec<VertexSet>,
    pub strategy: EmbedStrategy,
    pub density_checks: Vec<DensityCheck>,
    /// Regularity of cluster pairs is a modelling assumption, never checked.
    pub regularity_checked: bool,
}

/// Required densities: `beta` for pairs meeting an independent cluster,
/// `1/2 + beta` between two forest clusters.
pub fn density_checks(cs: &ClusterSystem, a: usize, beta: &Rational) -> Vec<DensityCheck> {
    let k = cs.clusters.len();
    let mut out = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let required = if i < a {
                beta.clone()
            } else {
                rational::ratio(1, 2) + beta
            };
            let density = cs.density(i, j);
            out.push(DensityCheck {
                i,
                j,
                ok: density >= required,
                density,
                required,
            });
        }
    }
    out
}

/// Finds a copy of `Q(spec)` with `U_i` inside `V_i` for every cluster.
pub fn embed_q(cs: &ClusterSystem, spec: &QSpec, beta: &Rational) -> Result<QEmbedding> {
    embed_q_with(cs, spec, beta, &Caps::default(), None)
}

/// As [`embed_q`], avoiding the vertices in `avoid`.
pub fn embed_q_with(
    cs: &ClusterSystem,
    spec: &QSpec,
    beta: &Rational,
    caps: &Caps,
    avoid: Option<&VertexSet>,
) -> Result<QEmbedding> {
    let k = spec.a + spec.b;
    if cs.clusters.len() != k {
        return Err(Error::Invalid(format!(
            "cluster system has {} clusters, Q needs {k}",
            cs.clusters.len()
        )));
    }
    spec.validate()?;
    let q = build_q(spec);
    let checks = density_checks(cs, spec.a, beta);
    let empty = VertexSet::new();
    let avoid = avoid.unwrap_or(&empty);
    let start: Vec<VertexSet> = cs.clusters.iter().map(|c| c.difference(avoid)).collect();

    let mut deepest = 0;
    let recursive = schedule(cs, spec, &q.clusters, beta, caps, start.clone(), 0, &mut deepest);
    let (map, strategy) = match recursive {
        Some(map) => (map, EmbedStrategy::Recursive),
        None => match backtrack_q(&cs.host, &q.graph, &q.clusters, &start, caps.embed_nodes) {
            Ok(map) => (map, EmbedStrategy::Backtracking),
            Err(budget_exhausted) => {
                return Err(Error::EmbedFail {
                    level: deepest,
                    budget_exhausted,
                    detail: format!(
                        "cluster schedule stopped at cluster {}; exhaustive search {}",
                        deepest + 1,
                        if budget_exhausted { "hit its node budget" } else { "found no copy" }
                    ),
                })
            }
        },
    };
    let copy = HCopy::new(map.clone());
    if !copy.is_valid(&cs.host, &q.graph) {
        return Err(Error::ConstructionBug("Q embedding is not edge-preserving".into()));
    }
    let images: Vec<VertexSet> = q
        .clusters
        .iter()
        .map(|u| u.iter().map(|x| map[x]).collect())
        .collect();
    for (i, img) in images.iter().enumerate() {
        if !img.difference(&cs.clusters[i]).is_empty() || !img.is_disjoint(avoid) {
            return Err(Error::ConstructionBug(format!("U_{} escaped V_{}", i + 1, i + 1)));
        }
    }
    Ok(QEmbedding {
        map,
        images,
        strategy,
        density_checks: checks,
        regularity_checked: false,
    })
}

/// The cluster-by-cluster schedule. `cand[j]` is what remains of `V_j`.
#[allow(clippy::too_many_arguments)]
fn schedule(
    cs: &ClusterSystem,
    spec: &QSpec,
    q_clusters: &[VertexSet],
    beta: &Rational,
    caps: &Caps,
    cand: Vec<VertexSet>,
    level: usize,
    deepest: &mut usize,
) -> Option<Vec<usize>> {
    *deepest = (*deepest).max(level);
    let k = spec.a + spec.b;
    if level == k {
        return Some(vec![usize::MAX; q_clusters.iter().map(|c| c.len()).sum()]);
    }
    let g = &cs.host;
    let later: Vec<VertexSet> = cand[level + 1..].to_vec();
    let (chosen_map, shrunk): (Vec<usize>, Vec<VertexSet>) = if level < spec.a {
        let (chosen, shrunk) =
            chain_with_budget(g, &cand[level], &later, spec.s, beta, caps.embed_nodes).ok()?;
        (chosen.into_vec(), shrunk)
    } else {
        let forest = &spec.forests[level - spec.a];
        let threshold = rational::ratio(1, 2) + beta / rational::int(2);
        let filtered: VertexSet = cand[level]
            .iter()
            .filter(|&v| {
                later.iter().all(|t| {
                    let d = t.iter().filter(|&w| g.has_edge(v, w)).count();
                    rational::from_usize(d) >= &threshold * rational::from_usize(t.len())
                })
            })
            .collect();
        let map = place_forest(g, &filtered, forest, &later, caps.embed_nodes)?;
        let shrunk = later
            .iter()
            .map(|t| t.iter().filter(|&w| map.iter().all(|&x| g.has_edge(x, w))).collect())
            .collect();
        (map, shrunk)
    };
    let mut next = cand[..=level].to_vec();
    next.extend(shrunk);
    let used: VertexSet = chosen_map.iter().copied().collect();
    for c in next.iter_mut().skip(level + 1) {
        *c = c.difference(&used);
    }
    let mut rest = schedule(cs, spec, q_clusters, beta, caps, next, level + 1, deepest)?;
    for (x, &v) in q_clusters[level].iter().zip(&chosen_map) {
        rest[x] = v;
    }
    Some(rest)
}

/// Places a forest greedily, preferring images that keep the later targets
/// large; falls back to [`embed_forest_in`].
fn place_forest(
    g: &Graph,
    allowed: &VertexSet,
    f: &Graph,
    later: &[VertexSet],
    budget: usize,
) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; f.n()];
    let mut used = vec![false; g.n()];
    let mut common: Vec<VertexSet> = later.to_vec();
    let mut ok = true;
    for (x, parent) in forest_order(f) {
        let cands: Vec<usize> = match parent {
            None => allowed.iter().filter(|&v| !used[v]).collect(),
            Some(p) => g
                .neighbors(map[p])
                .filter(|&v| !used[v] && allowed.contains(v))
                .collect(),
        };
        let best = cands.into_iter().max_by_key(|&v| {
            let keep = common
                .iter()
                .map(|t| t.iter().filter(|&w| g.has_edge(v, w)).count())
                .min()
                .unwrap_or(0);
            (keep, std::cmp::Reverse(v))
        });
        match best {
            Some(v) => {
                map[x] = v;
                used[v] = true;
                for t in common.iter_mut() {
                    *t = t.iter().filter(|&w| g.has_edge(v, w)).collect();
                }
            }
            None => {
                ok = false;
                break;
            }
        }
    }
    if ok {
        return Some(map);
    }
    embed_forest_in(g, allowed, f, budget).ok()
}

/// Exhaustive search: vertex `x` of `Q` goes into `domains[cluster of x]`.
fn backtrack_q(
    host: &Graph,
    q: &Graph,
    q_clusters: &[VertexSet],
    domains: &[VertexSet],
    budget: usize,
) -> std::result::Result<Vec<usize>, bool> {
    let mut cluster_of = vec![0; q.n()];
    for (i, c) in q_clusters.iter().enumerate() {
        for x in c.iter() {
            cluster_of[x] = i;
        }
    }
    let order = pattern_order(q);
    let mut map = vec![usize::MAX; q.n()];
    let mut used = vec![false; host.n()];
    let mut nodes = 0usize;
    #[allow(clippy::too_many_arguments)]
    fn go(
        host: &Graph,
        q: &Graph,
        order: &[usize],
        cluster_of: &[usize],
        domains: &[VertexSet],
        i: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        nodes: &mut usize,
        budget: usize,
    ) -> std::result::Result<bool, ()> {
        if i == order.len() {
            return Ok(true);
        }
        *nodes += 1;
        if *nodes > budget {
            return Err(());
        }
        let x = order[i];
        let mapped: Vec<usize> = q.neighbors(x).filter(|&y| map[y] != usize::MAX).map(|y| map[y]).collect();
        for v in domains[cluster_of[x]].iter() {
            if used[v] || !mapped.iter().all(|&w| host.has_edge(v, w)) {
                continue;
            }
            map[x] = v;
            used[v] = true;
            let r = go(host, q, order, cluster_of, domains, i + 1, map, used, nodes, budget);
            used[v] = false;
            map[x] = usize::MAX;
            if r? {
                map[x] = v;
                return Ok(true);
            }
        }
        Ok(false)
    }
    match go(host, q, &order, &cluster_of, domains, 0, &mut map, &mut used, &mut nodes, budget) {
        Ok(true) => Ok(map),
        Ok(false) => Err(false),
        Err(()) => Err(true),
    }
}

/// Blow-up of `g`: every vertex becomes `t` independent clones, clone `c` of
/// vertex `v` gets id `v * t + c`.
pub fn blow_up(g: &Graph, t: usize) -> Graph {
    let mut out = Graph::new(g.n() * t);
    for (u, v) in g.edges() {
        for a in 0..t {
            for b in 0..t {
                out.add_edge(u * t + a, v * t + b).expect("blow-up edge in range");
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qgraph::plan_q;
    use crate::rational::ratio;

    #[test]
    fn dense_core_examples() {
        assert_eq!(dense_core(&Graph::complete(5), 4).len(), 5);
        assert!(dense_core(&Graph::path(6), 2).is_empty());
        let mut g = Graph::new(5);
        for u in 0..4 {
            for v in u + 1..4 {
                g.add_edge(u, v).unwrap();
            }
        }
        g.add_edge(3, 4).unwrap();
        assert_eq!(dense_core(&g, 3), VertexSet::from([0, 1, 2, 3]));
    }

    #[test]
    fn tree_embeddings() {
        let c = embed_tree(&Graph::complete(3), &Graph::path(3)).unwrap();
        assert!(c.is_valid(&Graph::complete(3), &Graph::path(3)));
        let k5s = Graph::disjoint_union(&[&Graph::complete(5), &Graph::complete(5), &Graph::complete(5)]);
        for t in [Graph::path(5), Graph::star(4)] {
            assert!(embed_tree(&k5s, &t).unwrap().is_valid(&k5s, &t));
        }
        assert!(matches!(
            embed_tree(&Graph::cycle(6), &Graph::star(3)),
            Err(Error::EmbedFail { budget_exhausted: false, .. })
        ));
        assert_eq!(embed_tree(&Graph::complete(4), &Graph::cycle(3)), Err(Error::NotAForest));
    }

    #[test]
    fn chain_on_complete_host_keeps_targets() {
        let g = Graph::complete(9);
        let targets = vec![VertexSet::from([3, 4, 5]), VertexSet::from([6, 7, 8])];
        let (chosen, shrunk) =
            common_neighborhood_chain(&g, &VertexSet::from([0, 1, 2]), &targets, 2, &ratio(1, 2)).unwrap();
        assert_eq!(chosen.len(), 2);
        assert_eq!(shrunk, targets);
    }

    #[test]
    fn chain_fails_without_neighbours() {
        let g = Graph::empty(4);
        let r = common_neighborhood_chain(&g, &VertexSet::from([0, 1]), &[VertexSet::from([2, 3])], 1, &ratio(1, 2));
        assert_eq!(r, Err(Error::ChainFail { s: 1 }));
    }

    #[test]
    fn q_into_its_own_blow_up() {
        let h = Graph::complete(3);
        let spec = plan_q(&h, 1, 1).unwrap();
        let q = build_q(&spec);
        let host = blow_up(&q.graph, 5);
        let clusters = q
            .clusters
            .iter()
            .map(|u| u.iter().flat_map(|x| x * 5..x * 5 + 5).collect())
            .collect();
        let cs = ClusterSystem::new(host, clusters).unwrap();
        let e = embed_q(&cs, &spec, &ratio(1, 10)).unwrap();
        assert_eq!(e.images[0].len(), 2);
        assert_eq!(e.images[1].len(), 4);
    }

    #[test]
    fn zero_density_fails() {
        let h = Graph::complete(3);
        let spec = plan_q(&h, 3, 0).unwrap();
        let host = Graph::complete(4);
        let mut host2 = Graph::disjoint_union(&[&host, &Graph::empty(2)]);
        host2.add_edge(0, 4).unwrap();
        let cs = ClusterSystem::new(
            host2,
            vec![VertexSet::from([0, 1]), VertexSet::from([2, 3]), VertexSet::from([4, 5])],
        )
        .unwrap();
        assert!(matches!(
            embed_q(&cs, &spec, &ratio(1, 10)),
            Err(Error::EmbedFail { budget_exhausted: false, .. })
        ));
    }
}
