//! Lower-bound constructions: graphs of large minimum degree and small
//! independence number without an `H`-factor, each with a checkable reason.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::factor::has_factor_with;
use crate::graph::{girth, AlphaEstimate, Girth, Graph, VertexSet};
use crate::invariants::{invariant_report_with, Hcf, InvariantReport};
use crate::rational::{self, Rational};

const ATTEMPTS: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    G0,
    TwoPart,
    MultiPart,
    SpaceBarrier,
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g0" => Ok(Family::G0),
            "two-part" => Ok(Family::TwoPart),
            "multi-part" => Ok(Family::MultiPart),
            "space-barrier" => Ok(Family::SpaceBarrier),
            _ => Err(Error::Invalid(format!("unknown family {s:?}"))),
        }
    }
}

/// Parameters a construction was built from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Meta {
    pub family: Family,
    pub n: usize,
    pub h: usize,
    pub ar: usize,
    pub sigma: usize,
    pub hcf1: Hcf,
    pub hcf2: usize,
    /// Size of the first clique, for `G0`.
    pub p: Option<usize>,
    pub seed: Option<u64>,
    #[serde(with = "crate::rational::pq")]
    pub alpha_frac: Rational,
}

/// A construction: the graph and its blocks `V_1, ..., V_l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalInstance {
    pub graph: Graph,
    pub blocks: Vec<VertexSet>,
    pub meta: Meta,
}

fn report(h: &Graph, caps: &Caps) -> Result<InvariantReport> {
    invariant_report_with(h, caps)
}

/// Shortest cycle through some vertex shorter than `g_min`, as a vertex list.
fn short_cycle(g: &Graph, alive: &[bool], g_min: usize) -> Option<Vec<usize>> {
    let n = g.n();
    for root in (0..n).filter(|&v| alive[v]) {
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            if 2 * dist[x] + 1 >= g_min {
                break;
            }
            for y in g.neighbors(x).filter(|&y| alive[y]) {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                } else if parent[x] != y && dist[x] + dist[y] + 1 < g_min {
                    let (mut a, mut b) = (x, y);
                    let (mut left, mut right) = (vec![a], vec![b]);
                    while a != b {
                        if dist[a] >= dist[b] {
                            a = parent[a];
                            left.push(a);
                        } else {
                            b = parent[b];
                            right.push(b);
                        }
                    }
                    right.pop();
                    left.extend(right.into_iter().rev());
                    return Some(left);
                }
            }
        }
    }
    None
}

/// Whether `u` and `v` are within distance `d` of each other.
fn within(g: &Graph, u: usize, v: usize, d: usize) -> bool {
    let mut dist = vec![usize::MAX; g.n()];
    dist[u] = 0;
    let mut queue = VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        if x == v {
            return true;
        }
        if dist[x] == d {
            continue;
        }
        for y in g.neighbors(x) {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    false
}

fn one_attempt(n: usize, g_min: usize, rng: &mut ChaCha8Rng) -> Graph {
    // sparse random graph, oversampled to survive the deletions
    let big = n + n / 5 + 1;
    let c = if g_min <= 4 { 4.0 } else { 2.5 };
    let p = (c / big as f64).min(1.0);
    let mut g = Graph::new(big);
    for u in 0..big {
        for v in u + 1..big {
            if rng.gen_bool(p) {
                g.add_edge(u, v).expect("in range");
            }
        }
    }
    let mut alive = vec![true; big];
    while let Some(cycle) = short_cycle(&g, &alive, g_min) {
        alive[*cycle.choose(rng).expect("cycle is non-empty")] = false;
    }
    let mut keep: Vec<usize> = (0..big).filter(|&v| alive[v]).collect();
    keep.shuffle(rng);
    keep.truncate(n);
    let mut out = g.induced(&keep.into_iter().collect());
    if out.n() < n {
        out = Graph::disjoint_union(&[&out, &Graph::empty(n - out.n())]);
    }
    // add random edges while the girth stays at least g_min
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !out.has_edge(u, v))
        .collect();
    pairs.shuffle(rng);
    for (u, v) in pairs {
        if g_min <= 2 || !within(&out, u, v, g_min.saturating_sub(2)) {
            out.add_edge(u, v).expect("in range");
        }
    }
    out
}

/// A graph on `n` vertices with girth at least `g_min` and independence
/// number at most `alpha_frac * n`, certified exactly up to the configured
/// exact-alpha cap and by an upper bound beyond it.
pub fn gen_high_girth_low_alpha(n: usize, g_min: usize, alpha_frac: &Rational, seed: u64) -> Result<Graph> {
    gen_high_girth_low_alpha_with(n, g_min, alpha_frac, seed, &Caps::default())
}

pub fn gen_high_girth_low_alpha_with(
    n: usize,
    g_min: usize,
    alpha_frac: &Rational,
    seed: u64,
    caps: &Caps,
) -> Result<Graph> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let limit = rational::floor_i64(&(alpha_frac * rational::from_usize(n))).max(0) as usize;
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Option<usize>, usize)> = None;
    for _ in 0..ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(master.gen());
        let g = one_attempt(n, g_min, &mut rng);
        let gi = girth(&g);
        if !gi.at_least(g_min) {
            return Err(Error::ConstructionBug(format!("generator produced girth {gi}")));
        }
        let alpha = AlphaEstimate::compute(&g, caps.alpha_exact).upper();
        if alpha <= limit {
            return Ok(g.with_name(format!("girth{g_min}-n{n}-seed{seed}")));
        }
        if best.is_none_or(|(_, a)| alpha < a) {
            best = Some((gi.finite(), alpha));
        }
    }
    Err(Error::GenFail {
        attempts: ATTEMPTS,
        best_girth: best.and_then(|b| b.0),
        best_alpha: best.map(|b| b.1),
    })
}

/// Two cliques of sizes `p` and `n - p`, with `p` one of `floor(n/2)`,
/// `floor(n/2) + 1` not divisible by `hcf2(H)`.
pub fn construct_g0(n: usize, h: &Graph) -> Result<ExtremalInstance> {
    construct_g0_with(n, h, &Caps::default())
}

pub fn construct_g0_with(n: usize, h: &Graph, caps: &Caps) -> Result<ExtremalInstance> {
    let rep = report(h, caps)?;
    if rep.hcf2 < 2 {
        return Err(Error::NotApplicable(format!("hcf2 = {} but G0 needs hcf2 >= 2", rep.hcf2)));
    }
    if n < 2 {
        return Err(Error::BadN(format!("n = {n} is too small for two cliques")));
    }
    let p = [n / 2, n / 2 + 1]
        .into_iter()
        .find(|p| p % rep.hcf2 != 0)
        .expect("two consecutive integers are not both divisible by hcf2 >= 2");
    let graph = Graph::disjoint_union(&[&Graph::complete(p), &Graph::complete(n - p)]).with_name(format!("g0-n{n}"));
    Ok(ExtremalInstance {
        graph,
        blocks: vec![VertexSet::range(p), (p..n).collect()],
        meta: meta(Family::G0, n, h, &rep, Some(p), None, rational::ratio(2, n as i64)),
    })
}

fn meta(
    family: Family,
    n: usize,
    h: &Graph,
    rep: &InvariantReport,
    p: Option<usize>,
    seed: Option<u64>,
    alpha_frac: Rational,
) -> Meta {
    Meta {
        family,
        n,
        h: h.n(),
        ar: rep.ar,
        sigma: rep.sigma,
        hcf1: rep.hcf1,
        hcf2: rep.hcf2,
        p,
        seed,
        alpha_frac,
    }
}

/// Complete multipartite join of high-girth low-alpha blocks of the given sizes.
fn join_blocks(
    sizes: &[usize],
    h: usize,
    alpha_frac: &Rational,
    seed: u64,
    caps: &Caps,
) -> Result<(Graph, Vec<VertexSet>)> {
    let n: usize = sizes.iter().sum();
    let limit = alpha_frac * rational::from_usize(n);
    let mut parts = Vec::with_capacity(sizes.len());
    for (i, &m) in sizes.iter().enumerate() {
        if m == 0 {
            return Err(Error::BadN(format!("block {} would be empty", i + 1)));
        }
        // the block's own alpha must stay below alpha_frac * n
        let frac = &limit / rational::from_usize(m);
        parts.push(gen_high_girth_low_alpha_with(m, h + 1, &frac, seed.wrapping_add(i as u64), caps)?);
    }
    let refs: Vec<&Graph> = parts.iter().collect();
    let mut g = Graph::disjoint_union(&refs);
    let mut blocks = Vec::new();
    let mut start = 0;
    for &m in sizes {
        blocks.push((start..start + m).collect::<VertexSet>());
        start += m;
    }
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            for u in blocks[i].iter() {
                for v in blocks[j].iter() {
                    g.add_edge(u, v).expect("in range");
                }
            }
        }
    }
    Ok((g, blocks))
}

/// Blocks of sizes `floor(n/2) + 1` and `ceil(n/2) - 1`, for `ar(H) = 2`,
/// `hcf2 = 1`, `hcf1 >= 3`.
pub fn construct_two_part(n: usize, h: &Graph, alpha_frac: &Rational, seed: u64) -> Result<ExtremalInstance> {
    construct_two_part_with(n, h, alpha_frac, seed, &Caps::default())
}

pub fn construct_two_part_with(
    n: usize,
    h: &Graph,
    alpha_frac: &Rational,
    seed: u64,
    caps: &Caps,
) -> Result<ExtremalInstance> {
    let rep = report(h, caps)?;
    if rep.ar != 2 || rep.hcf2 != 1 || rep.hcf1 < Hcf::Finite(3) {
        return Err(Error::NotApplicable(format!(
            "two-part needs ar = 2, hcf2 = 1, hcf1 >= 3; got ar = {}, hcf2 = {}, hcf1 = {}",
            rep.ar, rep.hcf2, rep.hcf1
        )));
    }
    if n < 4 {
        return Err(Error::BadN(format!("n = {n} is too small")));
    }
    let sizes = [n / 2 + 1, n.div_ceil(2) - 1];
    let (graph, blocks) = join_blocks(&sizes, h.n(), alpha_frac, seed, caps)?;
    Ok(ExtremalInstance {
        graph: graph.with_name(format!("two-part-n{n}")),
        blocks,
        meta: meta(Family::TwoPart, n, h, &rep, None, Some(seed), alpha_frac.clone()),
    })
}

/// Splits `total` into `parts` sizes differing by at most one, larger first.
fn near_equal(total: usize, parts: usize) -> Vec<usize> {
    (0..parts).map(|i| total / parts + usize::from(i < total % parts)).collect()
}

/// `l = ar(H) >= 3` blocks: `floor(n/l) + 1`, `floor(n/l)`, then near-equal.
pub fn construct_multi_part(n: usize, h: &Graph, alpha_frac: &Rational, seed: u64) -> Result<ExtremalInstance> {
    construct_multi_part_with(n, h, alpha_frac, seed, &Caps::default())
}

pub fn construct_multi_part_with(
    n: usize,
    h: &Graph,
    alpha_frac: &Rational,
    seed: u64,
    caps: &Caps,
) -> Result<ExtremalInstance> {
    let rep = report(h, caps)?;
    let l = rep.ar;
    if l < 3 || rep.hcf1 == Hcf::Finite(1) {
        return Err(Error::NotApplicable(format!(
            "multi-part needs ar >= 3 and hcf1 != 1; got ar = {l}, hcf1 = {}",
            rep.hcf1
        )));
    }
    let q = n / l;
    if q < 2 {
        return Err(Error::BadN(format!("n = {n} is too small for {l} blocks")));
    }
    let mut sizes = vec![q + 1, q];
    sizes.extend(near_equal(n - 2 * q - 1, l - 2));
    let (graph, blocks) = join_blocks(&sizes, h.n(), alpha_frac, seed, caps)?;
    Ok(ExtremalInstance {
        graph: graph.with_name(format!("multi-part-n{n}")),
        blocks,
        meta: meta(Family::MultiPart, n, h, &rep, None, Some(seed), alpha_frac.clone()),
    })
}

/// `|V_1| = sigma n / h - 1`, `|V_2| = ceil(x) + 1` with
/// `x = (h - sigma) n / ((l - 1) h)`, remaining blocks near-equal.
pub fn construct_space_barrier(n: usize, h: &Graph, alpha_frac: &Rational, seed: u64) -> Result<ExtremalInstance> {
    construct_space_barrier_with(n, h, alpha_frac, seed, &Caps::default())
}

pub fn construct_space_barrier_with(
    n: usize,
    h: &Graph,
    alpha_frac: &Rational,
    seed: u64,
    caps: &Caps,
) -> Result<ExtremalInstance> {
    let rep = report(h, caps)?;
    let l = rep.ar;
    if l < 2 {
        return Err(Error::NotApplicable("space barrier needs ar >= 2".into()));
    }
    let hn = h.n();
    if !(rep.sigma * n).is_multiple_of(hn) {
        return Err(Error::BadN(format!("sigma * n / h = {} * {n} / {hn} is not an integer", rep.sigma)));
    }
    let v1 = (rep.sigma * n / hn)
        .checked_sub(1)
        .filter(|&v| v > 0)
        .ok_or_else(|| Error::BadN(format!("n = {n} leaves V_1 empty")))?;
    let x = rational::from_usize((hn - rep.sigma) * n) / rational::from_usize((l - 1) * hn);
    let v2 = rational::ceil_i64(&x) as usize + 1;
    let rest = n
        .checked_sub(v1 + v2)
        .ok_or_else(|| Error::BadN(format!("n = {n} is too small")))?;
    let mut sizes = vec![v1, v2];
    sizes.extend(near_equal(rest, l - 2));
    if sizes.iter().sum::<usize>() != n {
        return Err(Error::BadN(format!("block sizes {sizes:?} do not add up to {n}")));
    }
    let (graph, blocks) = join_blocks(&sizes, hn, alpha_frac, seed, caps)?;
    Ok(ExtremalInstance {
        graph: graph.with_name(format!("space-barrier-n{n}")),
        blocks,
        meta: meta(Family::SpaceBarrier, n, h, &rep, None, Some(seed), alpha_frac.clone()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    DivisibilityModHcf2,
    DifferenceModHcf1,
    SizeCounting,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Premise {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

/// Why the instance has no `H`-factor, with every premise re-checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NoFactorCertificate {
    pub kind: CertificateKind,
    /// `hcf2` or `hcf1` (absent when infinite) for the residue kinds.
    pub modulus: Option<usize>,
    /// `|V_1|`, `|V_1| - |V_2|`, or the copy bound `floor(|V_1| / sigma)`.
    pub value: usize,
    /// Copies a factor would need, for the counting kind.
    pub needed: Option<usize>,
    pub premises: Vec<Premise>,
    /// Exact solver verdict (`true` = it also found no factor), when it ran.
    pub solver_agrees: Option<bool>,
}

fn premise(name: &str, ok: bool, detail: String) -> Premise {
    Premise {
        name: name.into(),
        ok,
        detail,
    }
}

fn partition_premise(inst: &ExtremalInstance) -> Premise {
    let n = inst.graph.n();
    let mut seen = vec![0usize; n];
    for b in &inst.blocks {
        for v in b.iter().filter(|&v| v < n) {
            seen[v] += 1;
        }
    }
    let ok = seen.iter().all(|&c| c == 1) && inst.blocks.iter().all(|b| b.iter().all(|v| v < n));
    premise("block-partition", ok, format!("{} blocks over {n} vertices", inst.blocks.len()))
}

fn girth_premises(inst: &ExtremalInstance, h: usize) -> Vec<Premise> {
    inst.blocks
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let gi = girth(&inst.graph.induced(b));
            premise(
                &format!("girth-block-{}", i + 1),
                gi.at_least(h + 1),
                format!("girth {gi} against h + 1 = {}", h + 1),
            )
        })
        .collect()
}

/// Builds the family's argument from the graph and `h` alone and fails with
/// the first broken premise.
pub fn certify_no_factor(inst: &ExtremalInstance, h: &Graph) -> Result<NoFactorCertificate> {
    certify_no_factor_with(inst, h, &Caps::default())
}

pub fn certify_no_factor_with(inst: &ExtremalInstance, h: &Graph, caps: &Caps) -> Result<NoFactorCertificate> {
    let rep = report(h, caps)?;
    let g = &inst.graph;
    let n = g.n();
    let sizes: Vec<usize> = inst.blocks.iter().map(|b| b.len()).collect();
    let mut premises = vec![partition_premise(inst)];
    let (kind, modulus, value, needed) = match inst.meta.family {
        Family::G0 => {
            if inst.blocks.len() != 2 {
                return Err(Error::PremiseViolated("G0 has two blocks".into()));
            }
            let cross = g.edges_between(&inst.blocks[0], &inst.blocks[1]);
            premises.push(premise("disconnected", cross == 0, format!("{cross} edges between the cliques")));
            let residue = sizes[0] % rep.hcf2.max(1);
            premises.push(premise(
                "residue",
                rep.hcf2 >= 2 && residue != 0,
                format!("|V_1| = {} is {residue} mod hcf2 = {}", sizes[0], rep.hcf2),
            ));
            (CertificateKind::DivisibilityModHcf2, Some(rep.hcf2), sizes[0], None)
        }
        Family::TwoPart | Family::MultiPart => {
            premises.push(premise(
                "block-count",
                inst.blocks.len() == rep.ar && rep.ar >= 2,
                format!("{} blocks, ar(H) = {}", inst.blocks.len(), rep.ar),
            ));
            premises.extend(girth_premises(inst, h.n()));
            let diff = sizes.first().copied().unwrap_or(0).abs_diff(sizes.get(1).copied().unwrap_or(0));
            let (ok, modulus) = match rep.hcf1 {
                Hcf::Finite(m) => (diff % m != 0, Some(m)),
                Hcf::Infinite => (diff != 0, None),
            };
            premises.push(premise(
                "residue",
                ok,
                format!("|V_1| - |V_2| = {diff} against hcf1 = {}", rep.hcf1),
            ));
            (CertificateKind::DifferenceModHcf1, modulus, diff, None)
        }
        Family::SpaceBarrier => {
            premises.push(premise(
                "block-count",
                inst.blocks.len() == rep.ar && rep.ar >= 2,
                format!("{} blocks, ar(H) = {}", inst.blocks.len(), rep.ar),
            ));
            premises.extend(girth_premises(inst, h.n()));
            let bound = sizes.first().copied().unwrap_or(0) / rep.sigma.max(1);
            let needed = n / h.n().max(1);
            premises.push(premise(
                "counting",
                bound < needed || !n.is_multiple_of(h.n().max(1)),
                format!("at most {bound} disjoint copies fit, a factor needs {needed}"),
            ));
            (CertificateKind::SizeCounting, None, bound, Some(needed))
        }
    };
    if let Some(bad) = premises.iter().find(|p| !p.ok) {
        return Err(Error::PremiseViolated(format!("{}: {}", bad.name, bad.detail)));
    }
    let solver_agrees = if n <= caps.factor_host {
        match has_factor_with(g, h, caps) {
            Ok(found) => Some(found.is_none()),
            Err(Error::Divisibility { .. }) => Some(true),
            Err(_) => None,
        }
    } else {
        None
    };
    if solver_agrees == Some(false) {
        return Err(Error::ConstructionBug("the exact solver found a factor despite the certificate".into()));
    }
    Ok(NoFactorCertificate {
        kind,
        modulus,
        value,
        needed,
        premises,
        solver_agrees,
    })
}

/// Minimum degree and independence number against the family's claims.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimsReport {
    pub min_degree: usize,
    #[serde(with = "crate::rational::pq")]
    pub degree_bound: Rational,
    pub degree_ok: bool,
    /// Upper bound on `alpha(G)`; exact when `alpha_exact` is set.
    pub alpha: usize,
    pub alpha_exact: bool,
    #[serde(with = "crate::rational::pq")]
    pub alpha_limit: Rational,
    pub alpha_ok: bool,
}

pub fn verify_claims(inst: &ExtremalInstance, h: &Graph, alpha_frac: &Rational) -> Result<ClaimsReport> {
    verify_claims_with(inst, h, alpha_frac, &Caps::default())
}

pub fn verify_claims_with(
    inst: &ExtremalInstance,
    h: &Graph,
    alpha_frac: &Rational,
    caps: &Caps,
) -> Result<ClaimsReport> {
    let g = &inst.graph;
    let n = rational::from_usize(g.n());
    let one = rational::int(1);
    let degree_bound = match inst.meta.family {
        Family::G0 => &n / rational::int(2) - rational::int(2),
        Family::TwoPart => &n / rational::int(2) - &one,
        Family::MultiPart => (&one - rational::ratio(1, inst.blocks.len() as i64)) * &n - &one,
        Family::SpaceBarrier => {
            let ar_cr = report(h, caps)?.ar_cr;
            (&one - &one / ar_cr) * &n - &one
        }
    };
    let min_degree = (0..g.n()).map(|v| g.degree(v)).min().unwrap_or(0);
    let (alpha, alpha_exact) = alpha_of_instance(inst, caps);
    let alpha_limit = alpha_frac * &n;
    Ok(ClaimsReport {
        min_degree,
        degree_ok: rational::from_usize(min_degree) >= degree_bound,
        degree_bound,
        alpha_ok: rational::from_usize(alpha) <= alpha_limit,
        alpha,
        alpha_exact,
        alpha_limit,
    })
}

/// When every pair of blocks is completely joined an independent set lives
/// in one block, so block-wise values suffice.
fn alpha_of_instance(inst: &ExtremalInstance, caps: &Caps) -> (usize, bool) {
    let g = &inst.graph;
    let joined = (0..inst.blocks.len()).all(|i| {
        (i + 1..inst.blocks.len())
            .all(|j| g.edges_between(&inst.blocks[i], &inst.blocks[j]) == inst.blocks[i].len() * inst.blocks[j].len())
    });
    let covers = inst.blocks.iter().map(|b| b.len()).sum::<usize>() == g.n();
    let estimates: Vec<AlphaEstimate> = if joined && covers && !inst.blocks.is_empty() {
        inst.blocks
            .iter()
            .map(|b| AlphaEstimate::compute(&g.induced(b), caps.alpha_exact))
            .collect()
    } else {
        vec![AlphaEstimate::compute(g, caps.alpha_exact)]
    };
    let alpha = estimates.iter().map(|e| e.upper()).max().unwrap_or(0);
    (alpha, estimates.iter().all(|e| e.is_exact()))
}

/// `Some(girth)` of each block, for reports.
pub fn block_girths(inst: &ExtremalInstance) -> Vec<Girth> {
    inst.blocks.iter().map(|b| girth(&inst.graph.induced(b))).collect()
}
