//! Small-scale absorption tools: connectors, absorbers, index vectors,
//! robust vectors, transferrals and lattice membership.

use std::collections::HashSet;

use num::{BigInt, Integer, Signed, Zero};
use serde::Serialize;

use crate::config::Caps;
use crate::error::Result;
use crate::factor::{disjoint_copies_with_index, has_factor_with, verify_tiling, TilingCertificate};
use crate::graph::{Graph, VertexSet};

/// Per-block intersection sizes of a vertex set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct IndexVector(pub Vec<usize>);

pub fn index_vector(s: &VertexSet, p: &[VertexSet]) -> IndexVector {
    IndexVector(p.iter().map(|b| s.intersection(b).len()).collect())
}

/// `s` together with either endpoint spans an `H`-factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Connector {
    pub s_set: VertexSet,
    pub u: usize,
    pub v: usize,
    pub t: usize,
    pub factor_with_u: TilingCertificate,
    pub factor_with_v: TilingCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectorSearch {
    pub connector: Option<Connector>,
    /// Candidate `(h-1)`-sets examined.
    pub candidates: usize,
    /// `true` when the search space was exhausted, so absence is proven;
    /// `false` when the candidate cap cut it short.
    pub exhausted: bool,
}

/// Calls `visit` with `image - x` for every copy of `h` through `x` inside
/// `allowed`, each vertex set once. Stops when `visit` returns `true`.
fn sets_through(
    g: &Graph,
    h: &Graph,
    x: usize,
    allowed: &[bool],
    visit: &mut dyn FnMut(VertexSet) -> bool,
) -> bool {
    let mut seen: HashSet<VertexSet> = HashSet::new();
    for start in 0..h.n() {
        // pattern vertices in BFS order from `start`, each after a neighbour if possible
        let mut order = vec![start];
        let mut placed = vec![false; h.n()];
        placed[start] = true;
        let mut i = 0;
        while order.len() < h.n() {
            if i < order.len() {
                for w in h.neighbors(order[i]) {
                    if !placed[w] {
                        placed[w] = true;
                        order.push(w);
                    }
                }
                i += 1;
            } else {
                let w = (0..h.n()).find(|&w| !placed[w]).expect("unplaced vertex");
                placed[w] = true;
                order.push(w);
            }
        }
        let mut map = vec![usize::MAX; h.n()];
        map[start] = x;
        let mut used = HashSet::from([x]);
        fn go(
            g: &Graph,
            h: &Graph,
            order: &[usize],
            k: usize,
            allowed: &[bool],
            map: &mut Vec<usize>,
            used: &mut HashSet<usize>,
            seen: &mut HashSet<VertexSet>,
            visit: &mut dyn FnMut(VertexSet) -> bool,
            x: usize,
        ) -> bool {
            if k == order.len() {
                let rest: VertexSet = map.iter().copied().filter(|&v| v != x).collect();
                return seen.insert(rest.clone()) && visit(rest);
            }
            let p = order[k];
            let anchors: Vec<usize> = h.neighbors(p).filter(|&q| map[q] != usize::MAX).map(|q| map[q]).collect();
            let cands: Vec<usize> = match anchors.first() {
                Some(&a) => g.neighbors(a).collect(),
                None => (0..g.n()).collect(),
            };
            for c in cands {
                if !allowed[c] || used.contains(&c) || !anchors.iter().all(|&a| g.has_edge(a, c)) {
                    continue;
                }
                map[p] = c;
                used.insert(c);
                let stop = go(g, h, order, k + 1, allowed, map, used, seen, visit, x);
                used.remove(&c);
                map[p] = usize::MAX;
                if stop {
                    return true;
                }
            }
            false
        }
        if go(g, h, &order, 1, allowed, &mut map, &mut used, &mut seen, visit, x) {
            return true;
        }
    }
    false
}

fn spans_factor(g: &Graph, h: &Graph, set: &VertexSet, caps: &Caps) -> Option<TilingCertificate> {
    let ids = set.as_slice().to_vec();
    let cert = has_factor_with(&g.induced(set), h, caps).ok()??.lift(&ids);
    verify_tiling(g, h, &cert, false).ok()?;
    (cert.covered == *set).then_some(cert)
}

/// Looks for `S` of size `h t - 1` avoiding `avoid` with `G[S + u]` and
/// `G[S + v]` both spanning `H`-factors. Candidates are chains
/// `u = w_0, w_1, ..., w_t = v` with disjoint `(h-1)`-sets `S_i` such that
/// `S_i + w_{i-1}` and `S_i + w_i` both host a copy of `H`.
pub fn find_connector(g: &Graph, h: &Graph, u: usize, v: usize, t: usize, avoid: &VertexSet) -> ConnectorSearch {
    find_connector_with(g, h, u, v, t, avoid, &Caps::default())
}

pub fn find_connector_with(
    g: &Graph,
    h: &Graph,
    u: usize,
    v: usize,
    t: usize,
    avoid: &VertexSet,
    caps: &Caps,
) -> ConnectorSearch {
    let mut out = ConnectorSearch {
        connector: None,
        candidates: 0,
        exhausted: true,
    };
    if u == v || t == 0 || h.n() == 0 || u >= g.n() || v >= g.n() || avoid.contains(u) || avoid.contains(v) {
        return out;
    }
    let mut free = vec![true; g.n()];
    for w in avoid.iter() {
        free[w] = false;
    }
    free[u] = false;
    free[v] = false;

    struct Ctx<'a> {
        g: &'a Graph,
        h: &'a Graph,
        v: usize,
        t: usize,
        caps: &'a Caps,
        candidates: usize,
        capped: bool,
        parts: Vec<VertexSet>,
        joints: Vec<usize>,
    }
    /// Extends the chain from `w` at step `i` (1-based); `free` marks usable vertices.
    fn extend(ctx: &mut Ctx, w: usize, i: usize, free: &mut Vec<bool>) -> Option<VertexSet> {
        let last = i == ctx.t;
        let nexts: Vec<usize> = if last {
            vec![ctx.v]
        } else {
            (0..ctx.g.n()).filter(|&x| free[x]).collect()
        };
        for next in nexts {
            if !last {
                free[next] = false;
            }
            let mut found = None;
            let mut allowed = free.clone();
            allowed[w] = true;
            let (g, h) = (ctx.g, ctx.h);
            sets_through(g, h, w, &allowed, &mut |s| {
                if ctx.candidates >= ctx.caps.connector_candidates {
                    ctx.capped = true;
                    return true;
                }
                ctx.candidates += 1;
                if s.contains(next) {
                    return false;
                }
                let mut with_next = s.clone();
                with_next.insert(next);
                if spans_factor(g, h, &with_next, ctx.caps).is_none() {
                    return false;
                }
                for x in s.iter() {
                    free[x] = false;
                }
                ctx.parts.push(s.clone());
                if last {
                    found = Some(());
                    return true;
                }
                ctx.joints.push(next);
                if extend(ctx, next, i + 1, free).is_some() {
                    found = Some(());
                    return true;
                }
                ctx.joints.pop();
                ctx.parts.pop();
                for x in s.iter() {
                    free[x] = true;
                }
                ctx.capped
            });
            if found.is_some() {
                let mut s: VertexSet = ctx.joints.iter().copied().collect();
                for p in &ctx.parts {
                    s = s.union(p);
                }
                return Some(s);
            }
            if !last {
                free[next] = true;
            }
            if ctx.capped {
                return None;
            }
        }
        None
    }

    let mut ctx = Ctx {
        g,
        h,
        v,
        t,
        caps,
        candidates: 0,
        capped: false,
        parts: Vec::new(),
        joints: Vec::new(),
    };
    let found = extend(&mut ctx, u, 1, &mut free);
    out.candidates = ctx.candidates;
    out.exhausted = !ctx.capped;
    if let Some(s_set) = found {
        let with = |x: usize| {
            let mut set = s_set.clone();
            set.insert(x);
            spans_factor(g, h, &set, caps)
        };
        if let (Some(fu), Some(fv)) = (with(u), with(v)) {
            if s_set.len() == h.n() * t - 1 && s_set.is_disjoint(avoid) {
                out.connector = Some(Connector {
                    s_set,
                    u,
                    v,
                    t,
                    factor_with_u: fu,
                    factor_with_v: fv,
                });
            }
        }
    }
    out
}

/// Whether `a` is an absorber for `s`: `|a| = h t`, disjoint from `s`, and
/// both `G[a]` and `G[a + s]` span `H`-factors.
pub fn verify_absorber(g: &Graph, h: &Graph, s: &VertexSet, a: &VertexSet, t: usize) -> bool {
    verify_absorber_with(g, h, s, a, t, &Caps::default())
}

pub fn verify_absorber_with(g: &Graph, h: &Graph, s: &VertexSet, a: &VertexSet, t: usize, caps: &Caps) -> bool {
    s.len() == h.n()
        && a.len() == h.n() * t
        && s.is_disjoint(a)
        && s.iter().chain(a.iter()).all(|v| v < g.n())
        && spans_factor(g, h, a, caps).is_some()
        && spans_factor(g, h, &a.union(s), caps).is_some()
}

/// An index vector with a disjoint family of copies realising it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RobustVector {
    pub vector: IndexVector,
    pub copies: TilingCertificate,
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Index vectors certified robust by `floor(mu n) + 1` pairwise disjoint
/// copies: any `floor(mu n)` forbidden vertices miss one of them.
pub fn robust_vectors(g: &Graph, h: &Graph, p: &[VertexSet], mu: &crate::rational::Rational) -> Result<Vec<RobustVector>> {
    robust_vectors_with(g, h, p, mu, &Caps::default())
}

pub fn robust_vectors_with(
    g: &Graph,
    h: &Graph,
    p: &[VertexSet],
    mu: &crate::rational::Rational,
    caps: &Caps,
) -> Result<Vec<RobustVector>> {
    let n = g.n();
    let want = crate::rational::floor_i64(&(mu * crate::rational::from_usize(n))).max(0) as usize + 1;
    if h.n() == 0 || want * h.n() > n {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for vector in compositions(h.n(), p.len()) {
        let copies = disjoint_copies_with_index(g, h, p, &vector, want, caps)?;
        let vector = IndexVector(vector);
        let sound = copies.len() >= want
            && verify_tiling(g, h, &copies, false).is_ok()
            && copies.copies.iter().all(|c| index_vector(&c.image(), p) == vector);
        if sound {
            out.push(RobustVector { vector, copies });
        }
    }
    Ok(out)
}

/// Two vectors whose difference is `u_i - u_j` (0-based `i`, `j`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transferral {
    pub i: usize,
    pub j: usize,
    pub s: IndexVector,
    pub t: IndexVector,
}

/// First pair `(s, t)` in list order with `s - t = u_i - u_j`.
pub fn transferral(iset: &[IndexVector]) -> Option<Transferral> {
    for (x, s) in iset.iter().enumerate() {
        for t in &iset[x + 1..] {
            if let Some((i, j)) = unit_difference(&s.0, &t.0) {
                return Some(Transferral {
                    i,
                    j,
                    s: s.clone(),
                    t: t.clone(),
                });
            }
        }
    }
    None
}

fn unit_difference(s: &[usize], t: &[usize]) -> Option<(usize, usize)> {
    if s.len() != t.len() {
        return None;
    }
    let (mut plus, mut minus) = (None, None);
    for k in 0..s.len() {
        match s[k] as i64 - t[k] as i64 {
            0 => {}
            1 if plus.is_none() => plus = Some(k),
            -1 if minus.is_none() => minus = Some(k),
            _ => return None,
        }
    }
    plus.zip(minus)
}

/// Pairwise differences `a - b` of a set of index vectors.
pub fn differences(iset: &[IndexVector]) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for a in iset {
        for b in iset {
            if a != b {
                out.push(a.0.iter().zip(&b.0).map(|(&x, &y)| x as i64 - y as i64).collect());
            }
        }
    }
    out
}

/// Whether `target` is an integer combination of `generators`, by reducing
/// the generators to echelon form with gcd row operations.
pub fn lattice_member(generators: &[Vec<i64>], target: &[i64]) -> bool {
    let d = target.len();
    if generators.iter().any(|g| g.len() != d) {
        return false;
    }
    let mut rows: Vec<Vec<BigInt>> = generators
        .iter()
        .map(|g| g.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut top = 0;
    for col in 0..d {
        // Euclid on column `col` among rows top..
        loop {
            let nonzero: Vec<usize> = (top..rows.len()).filter(|&r| !rows[r][col].is_zero()).collect();
            if nonzero.len() <= 1 {
                if let Some(&r) = nonzero.first() {
                    rows.swap(top, r);
                    if rows[top][col].is_negative() {
                        for x in rows[top].iter_mut() {
                            *x = -x.clone();
                        }
                    }
                    pivots.push((top, col));
                    top += 1;
                }
                break;
            }
            let &p = nonzero
                .iter()
                .min_by_key(|&&r| rows[r][col].abs())
                .expect("non-empty");
            for &r in &nonzero {
                if r == p {
                    continue;
                }
                let q = rows[r][col].div_floor(&rows[p][col]);
                let pivot_row = rows[p].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
            }
        }
    }
    let mut rest: Vec<BigInt> = target.iter().map(|&x| BigInt::from(x)).collect();
    let mut next = pivots.iter().peekable();
    for col in 0..d {
        match next.peek() {
            Some(&&(r, c)) if c == col => {
                next.next();
                let (q, rem) = rest[col].div_mod_floor(&rows[r][col]);
                if !rem.is_zero() {
                    return false;
                }
                for (x, y) in rest.iter_mut().zip(&rows[r]) {
                    *x -= &q * y;
                }
            }
            _ => {
                if !rest[col].is_zero() {
                    return false;
                }
            }
        }
    }
    true
}
