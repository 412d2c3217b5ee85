//! Exact H-factor and H-tiling oracle.
//!
//! Decisions run on the twin-class quotient of the host: each copy of `H` is
//! summarised by how many vertices it takes from each class, and a factor is
//! a multiset of such count vectors summing to the class sizes. A fractional
//! packing LP supplies upper bounds. Certificates are explicit vertex maps and
//! are re-checked by [`verify_tiling`].

mod quotient;
mod search;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::graph::{components, Graph, VertexSet};
use crate::rational::{self, floor_i64};

pub(crate) use quotient::pattern_order;

/// An injection `V(H) -> V(G)`; `map[x]` is the image of pattern vertex `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HCopy {
    pub map: Vec<usize>,
}

impl HCopy {
    pub fn new(map: Vec<usize>) -> Self {
        HCopy { map }
    }

    pub fn image(&self) -> VertexSet {
        self.map.iter().copied().collect()
    }

    /// Whether the map is injective, in range and edge-preserving.
    pub fn is_valid(&self, g: &Graph, h: &Graph) -> bool {
        self.map.len() == h.n()
            && self.map.iter().all(|&v| v < g.n())
            && self.image().len() == h.n()
            && h.edges().iter().all(|&(x, y)| g.has_edge(self.map[x], self.map[y]))
    }
}

/// Vertex-disjoint copies of `H`, with the set of vertices they cover.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingCertificate {
    pub copies: Vec<HCopy>,
    pub covered: VertexSet,
}

impl TilingCertificate {
    pub fn new(copies: Vec<HCopy>) -> Self {
        let covered = copies.iter().flat_map(|c| c.map.iter().copied()).collect();
        TilingCertificate { copies, covered }
    }

    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    pub fn uncovered(&self, n: usize) -> usize {
        n - self.covered.len()
    }

    /// Relabels every image through `ids` (local id -> host id).
    pub fn lift(self, ids: &[usize]) -> Self {
        TilingCertificate::new(
            self.copies
                .into_iter()
                .map(|c| HCopy::new(c.map.into_iter().map(|v| ids[v]).collect()))
                .collect(),
        )
    }

    pub fn extend(&mut self, other: TilingCertificate) {
        self.copies.extend(other.copies);
        self.covered = self.covered.union(&other.covered);
    }
}

/// First reason a certificate was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyFailure {
    /// One of `range`, `injection`, `edge-preservation`, `disjointness`,
    /// `covered-set`, `coverage`.
    pub reason: &'static str,
    pub detail: String,
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.reason, self.detail)
    }
}

/// Re-checks a certificate from scratch: every map is an in-range injection
/// preserving the edges of `h`, images are pairwise disjoint, the recorded
/// covered set matches, and (when asked) every vertex of `g` is covered.
pub fn verify_tiling(
    g: &Graph,
    h: &Graph,
    cert: &TilingCertificate,
    require_factor: bool,
) -> std::result::Result<(), VerifyFailure> {
    let fail = |reason, detail: String| Err(VerifyFailure { reason, detail });
    let mut owner = vec![usize::MAX; g.n()];
    for (i, copy) in cert.copies.iter().enumerate() {
        if copy.map.len() != h.n() || copy.map.iter().any(|&v| v >= g.n()) {
            return fail("range", format!("copy {i} is not a map from V(H) into V(G)"));
        }
        if copy.image().len() != h.n() {
            return fail("injection", format!("copy {i} repeats a host vertex"));
        }
        for (x, y) in h.edges() {
            if !g.has_edge(copy.map[x], copy.map[y]) {
                return fail(
                    "edge-preservation",
                    format!("copy {i} sends edge {x}{y} to non-edge {} {}", copy.map[x], copy.map[y]),
                );
            }
        }
        for &v in &copy.map {
            if owner[v] != usize::MAX {
                return fail("disjointness", format!("vertex {v} lies in copies {} and {i}", owner[v]));
            }
            owner[v] = i;
        }
    }
    let covered: VertexSet = (0..g.n()).filter(|&v| owner[v] != usize::MAX).collect();
    if covered != cert.covered {
        return fail("covered-set", "recorded covered set differs from the union of images".into());
    }
    if require_factor && covered.len() != g.n() {
        return fail("coverage", format!("{} of {} vertices uncovered", g.n() - covered.len(), g.n()));
    }
    Ok(())
}

/// Output of [`enumerate_copies`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CopyList {
    pub copies: Vec<HCopy>,
    /// The cap was reached before the search finished.
    pub truncated: bool,
}

/// Copies of `h` in `g`, one per orbit under automorphisms of `h` (equivalently,
/// one per image vertex set and image edge set), in search order.
pub fn enumerate_copies(g: &Graph, h: &Graph, cap: usize) -> CopyList {
    let order = pattern_order(h);
    let pos: Vec<usize> = {
        let mut p = vec![0; h.n()];
        for (i, &x) in order.iter().enumerate() {
            p[x] = i;
        }
        p
    };
    // previous twin along the order: images of twins are kept increasing
    let mut twin_pred = vec![None; h.n()];
    for (i, &x) in order.iter().enumerate() {
        for &y in order[..i].iter().rev() {
            let mut nx = h.neighbor_set(x).clone();
            let mut ny = h.neighbor_set(y).clone();
            if nx == ny || {
                nx.insert(x);
                ny.insert(y);
                nx == ny
            } {
                twin_pred[x] = Some(y);
                break;
            }
        }
    }
    struct St<'a> {
        g: &'a Graph,
        h: &'a Graph,
        order: &'a [usize],
        pos: &'a [usize],
        twin_pred: &'a [Option<usize>],
        map: Vec<usize>,
        used: Vec<bool>,
        seen: HashSet<(Vec<usize>, Vec<(usize, usize)>)>,
        out: Vec<HCopy>,
        cap: usize,
    }
    fn go(st: &mut St, i: usize) -> bool {
        if i == st.order.len() {
            let mut verts = st.map.clone();
            verts.sort_unstable();
            let mut edges: Vec<(usize, usize)> = st
                .h
                .edges()
                .iter()
                .map(|&(x, y)| {
                    let (a, b) = (st.map[x], st.map[y]);
                    (a.min(b), a.max(b))
                })
                .collect();
            edges.sort_unstable();
            if st.seen.insert((verts, edges)) {
                st.out.push(HCopy::new(st.map.clone()));
                if st.out.len() >= st.cap {
                    return true;
                }
            }
            return false;
        }
        let x = st.order[i];
        let anchor = st.h.neighbors(x).find(|&y| st.pos[y] < i);
        let lo = st.twin_pred[x].map_or(0, |p| st.map[p] + 1);
        let candidates: Vec<usize> = match anchor {
            Some(y) => st.g.neighbors(st.map[y]).filter(|&v| v >= lo).collect(),
            None => (lo..st.g.n()).collect(),
        };
        for v in candidates {
            if st.used[v] {
                continue;
            }
            let ok = st
                .h
                .neighbors(x)
                .filter(|&y| st.pos[y] < i)
                .all(|y| st.g.has_edge(st.map[y], v));
            if !ok {
                continue;
            }
            st.map[x] = v;
            st.used[v] = true;
            let stop = go(st, i + 1);
            st.used[v] = false;
            if stop {
                return true;
            }
        }
        false
    }
    let mut st = St {
        g,
        h,
        order: &order,
        pos: &pos,
        twin_pred: &twin_pred,
        map: vec![usize::MAX; h.n()],
        used: vec![false; g.n()],
        seen: HashSet::new(),
        out: Vec::new(),
        cap,
    };
    let truncated = if cap == 0 || h.n() > g.n() {
        cap == 0 && h.n() <= g.n()
    } else {
        go(&mut st, 0)
    };
    CopyList {
        copies: st.out,
        truncated,
    }
}

/// Exact decision of whether `g` has an H-factor, with a witness when it does.
/// `Ok(None)` is a proof of absence.
pub fn has_factor(g: &Graph, h: &Graph) -> Result<Option<TilingCertificate>> {
    has_factor_with(g, h, &Caps::default())
}

pub fn has_factor_with(g: &Graph, h: &Graph, caps: &Caps) -> Result<Option<TilingCertificate>> {
    if h.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    if !g.n().is_multiple_of(h.n()) {
        return Err(Error::Divisibility {
            host: g.n(),
            pattern: h.n(),
        });
    }
    if g.n() > caps.factor_host {
        return Err(Error::cap("factor host order", caps.factor_host, g.n()));
    }
    if h.edge_count() == 0 {
        return Ok(Some(chunks(g.n(), h.n())));
    }
    let mut cert = TilingCertificate::default();
    for (sub, ids) in pieces(g, h) {
        if sub.n() % h.n() != 0 {
            return Ok(None);
        }
        match factor_piece(&sub, h, caps)? {
            Some(c) => cert.extend(c.lift(&ids)),
            None => return Ok(None),
        }
    }
    Ok(Some(cert))
}

/// Parts the search may treat independently: the components of `g` when `h`
/// is connected, otherwise `g` itself.
fn pieces(g: &Graph, h: &Graph) -> Vec<(Graph, Vec<usize>)> {
    if components(h).len() == 1 {
        components(g)
            .into_iter()
            .map(|c| (g.induced(&c), c.into_vec()))
            .collect()
    } else {
        vec![(g.clone(), (0..g.n()).collect())]
    }
}

fn chunks(n: usize, h: usize) -> TilingCertificate {
    TilingCertificate::new(
        (0..n / h)
            .map(|i| HCopy::new((i * h..(i + 1) * h).collect()))
            .collect(),
    )
}

const LP_EAGER_TYPES: usize = 2_000;
const LP_LATE_TYPES: usize = 20_000;

fn factor_piece(g: &Graph, h: &Graph, caps: &Caps) -> Result<Option<TilingCertificate>> {
    let q = quotient::Quotient::new(g, None);
    let types = quotient::copy_types(&q, h, caps.copies, caps.factor_nodes)?;
    let table = search::Table::new(&q, &types, h.n());
    if table.by_class.iter().any(|t| t.is_empty()) {
        return Ok(None);
    }
    let need = rational::from_usize(g.n() / h.n());
    if types.len() <= LP_EAGER_TYPES && table.lp_bound()? < need {
        return Ok(None);
    }
    match search::exact_cover(&table, caps.factor_nodes) {
        Ok(Some(chosen)) => Ok(Some(TilingCertificate::new(
            search::realize(&q, &types, &chosen)
                .into_iter()
                .map(HCopy::new)
                .collect(),
        ))),
        Ok(None) => Ok(None),
        Err(e) => {
            if types.len() > LP_EAGER_TYPES && types.len() <= LP_LATE_TYPES && table.lp_bound()? < need {
                Ok(None)
            } else {
                Err(e)
            }
        }
    }
}

/// A maximum H-tiling of `g`.
pub fn max_tiling(g: &Graph, h: &Graph) -> Result<TilingCertificate> {
    max_tiling_with(g, h, &Caps::default())
}

pub fn max_tiling_with(g: &Graph, h: &Graph, caps: &Caps) -> Result<TilingCertificate> {
    if h.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    if g.n() > caps.factor_host {
        return Err(Error::cap("tiling host order", caps.factor_host, g.n()));
    }
    if h.edge_count() == 0 {
        return Ok(chunks(g.n(), h.n()));
    }
    let mut cert = TilingCertificate::default();
    for (sub, ids) in pieces(g, h) {
        if sub.n() < h.n() {
            continue;
        }
        let q = quotient::Quotient::new(&sub, None);
        let types = quotient::copy_types(&q, h, caps.copies, caps.factor_nodes)?;
        let table = search::Table::new(&q, &types, h.n());
        let mut upper = sub.n() / h.n();
        if types.len() <= LP_EAGER_TYPES {
            upper = upper.min(floor_i64(&table.lp_bound()?).max(0) as usize);
        }
        let chosen = search::max_packing(&table, &|_| true, upper, caps.factor_nodes)?;
        let local = TilingCertificate::new(
            search::realize(&q, &types, &chosen)
                .into_iter()
                .map(HCopy::new)
                .collect(),
        );
        cert.extend(local.lift(&ids));
    }
    Ok(cert)
}

/// Up to `want` disjoint copies of `h` whose intersections with `blocks` have
/// exactly the sizes in `index`. Returns the largest family found, which is
/// maximum whenever it has fewer than `want` copies.
pub fn disjoint_copies_with_index(
    g: &Graph,
    h: &Graph,
    blocks: &[VertexSet],
    index: &[usize],
    want: usize,
    caps: &Caps,
) -> Result<TilingCertificate> {
    if g.n() > caps.factor_host {
        return Err(Error::cap("tiling host order", caps.factor_host, g.n()));
    }
    let q = quotient::Quotient::new(g, Some(blocks));
    let types = quotient::copy_types(&q, h, caps.copies, caps.factor_nodes)?;
    let table = search::Table::new(&q, &types, h.n());
    let matches = |t: usize| {
        let mut per_block = vec![0usize; blocks.len()];
        for &(c, k) in &types[t].counts {
            match q.block_of_class[c as usize] {
                usize::MAX => return false,
                b => per_block[b] += k as usize,
            }
        }
        per_block == index
    };
    let mut upper = want.min(g.n() / h.n().max(1));
    for (b, &k) in blocks.iter().zip(index) {
        if k > 0 {
            upper = upper.min(b.len() / k);
        }
    }
    let chosen = search::max_packing(&table, &matches, upper, caps.factor_nodes)?;
    Ok(TilingCertificate::new(
        search::realize(&q, &types, &chosen)
            .into_iter()
            .map(HCopy::new)
            .collect(),
    ))
}
