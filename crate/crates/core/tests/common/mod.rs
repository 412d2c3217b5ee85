//! Brute-force oracles shared by the integration tests. Each one is written
//! independently of the library algorithms and only uses `Graph` accessors.

#![allow(dead_code)]

use arbortile::reduced::{EmbStructure, Multigraph2};
use arbortile::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Largest independent set by trying every subset.
pub fn alpha_brute(g: &Graph) -> usize {
    let n = g.n();
    assert!(n <= 20);
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let ones = mask.count_ones() as usize;
        if ones <= best {
            continue;
        }
        let independent = (0..n).all(|u| mask >> u & 1 == 0 || (u + 1..n).all(|v| mask >> v & 1 == 0 || !g.has_edge(u, v)));
        if independent {
            best = ones;
        }
    }
    best
}

/// Acyclicity by repeatedly stripping vertices of degree at most one.
pub fn induces_forest(g: &Graph, set: &[usize]) -> bool {
    let mut alive: Vec<usize> = set.to_vec();
    loop {
        let before = alive.len();
        let snapshot = alive.clone();
        alive.retain(|&v| snapshot.iter().filter(|&&w| g.has_edge(v, w)).count() >= 2);
        if alive.is_empty() {
            return true;
        }
        if alive.len() == before {
            return false;
        }
    }
}

/// Fewest forest-inducing classes, by trying every labelling with `k`
/// labels for increasing `k`.
pub fn arboricity_brute(g: &Graph) -> usize {
    let n = g.n();
    for k in 1..=n.max(1) {
        // restricted growth strings enumerate labellings up to renaming
        let mut labels = vec![0usize; n];
        fn go(g: &Graph, labels: &mut Vec<usize>, i: usize, used: usize, k: usize) -> bool {
            let n = labels.len();
            if i == n {
                return (0..k).all(|c| {
                    let class: Vec<usize> = (0..n).filter(|&v| labels[v] == c).collect();
                    induces_forest(g, &class)
                });
            }
            for c in 0..(used + 1).min(k) {
                labels[i] = c;
                let class: Vec<usize> = (0..=i).filter(|&v| labels[v] == c).collect();
                if induces_forest(g, &class) && go(g, labels, i + 1, used.max(c + 1), k) {
                    return true;
                }
            }
            false
        }
        if go(g, &mut labels, 0, 0, k) {
            return k;
        }
    }
    0
}

/// All `h`-subsets of `0..n` carrying a copy of `pat`, by trying every
/// injective map.
pub fn copy_sets(g: &Graph, pat: &Graph) -> Vec<u64> {
    let (n, h) = (g.n(), pat.n());
    let mut out = std::collections::BTreeSet::new();
    let mut map = vec![0usize; h];
    fn go(g: &Graph, pat: &Graph, map: &mut Vec<usize>, i: usize, out: &mut std::collections::BTreeSet<u64>) {
        if i == map.len() {
            out.insert(map.iter().fold(0u64, |m, &v| m | 1 << v));
            return;
        }
        for v in 0..g.n() {
            if map[..i].contains(&v) {
                continue;
            }
            if (0..i).all(|j| !pat.has_edge(i, j) || g.has_edge(map[j], v)) {
                map[i] = v;
                go(g, pat, map, i + 1, out);
            }
        }
    }
    if h > 0 && h <= n {
        go(g, pat, &mut map, 0, &mut out);
    }
    out.into_iter().collect()
}

/// Most pairwise disjoint copies, by exhaustive search over copy sets.
pub fn max_packing_brute(g: &Graph, pat: &Graph) -> usize {
    let sets = copy_sets(g, pat);
    fn go(sets: &[u64], used: u64, from: usize) -> usize {
        let mut best = 0;
        for i in from..sets.len() {
            if sets[i] & used == 0 {
                best = best.max(1 + go(sets, used | sets[i], i + 1));
            }
        }
        best
    }
    go(&sets, 0, 0)
}

pub fn has_factor_brute(g: &Graph, pat: &Graph) -> bool {
    pat.n() > 0 && g.n().is_multiple_of(pat.n()) && max_packing_brute(g, pat) * pat.n() == g.n()
}

/// Every multiplicity vector in `{0,1,2}^k` summing to `rr` that satisfies
/// the structure conditions directly.
pub fn structures_brute(r: &Multigraph2, rr: usize) -> Vec<EmbStructure> {
    let k = r.k();
    let mut out = Vec::new();
    let mut m = vec![0u8; k];
    loop {
        let total: usize = m.iter().map(|&x| x as usize).sum();
        if total == rr {
            let support: Vec<usize> = (0..k).filter(|&v| m[v] > 0).collect();
            let ok = support.iter().enumerate().all(|(x, &u)| {
                support[x + 1..].iter().all(|&v| {
                    let need = if m[u] == 2 && m[v] == 2 { 2 } else { 1 };
                    r.mult(u, v) >= need
                })
            });
            if ok {
                out.push(EmbStructure::new(support.iter().map(|&v| (v, m[v])).collect()));
            }
        }
        // next vector in base 3
        let mut i = 0;
        while i < k && m[i] == 2 {
            m[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
        m[i] += 1;
    }
    out.sort();
    out
}

/// Best integral packing value `rr * sum x_K` with integer `x_K` and
/// cluster loads at most one.
pub fn integral_packing_brute(structures: &[EmbStructure], k: usize, rr: usize) -> usize {
    fn go(structures: &[EmbStructure], load: &mut Vec<usize>, from: usize) -> usize {
        let mut best = 0;
        for i in from..structures.len() {
            let s = &structures[i];
            if s.support.iter().zip(&s.mult).all(|(&v, &m)| load[v] + m as usize <= 1) {
                for (&v, &m) in s.support.iter().zip(&s.mult) {
                    load[v] += m as usize;
                }
                best = best.max(1 + go(structures, load, i + 1));
                for (&v, &m) in s.support.iter().zip(&s.mult) {
                    load[v] -= m as usize;
                }
            }
        }
        best
    }
    rr * go(structures, &mut vec![0; k], 0)
}

pub fn random_multigraph(rng: &mut ChaCha8Rng, k: usize) -> Multigraph2 {
    let mut r = Multigraph2::new(k);
    for i in 0..k {
        for j in i + 1..k {
            r.set(i, j, rng.gen_range(0..=2)).unwrap();
        }
    }
    r
}

/// Bounded search for an integer combination of `gens` equal to `target`.
pub fn lattice_brute(gens: &[Vec<i64>], target: &[i64], bound: i64) -> bool {
    fn go(gens: &[Vec<i64>], i: usize, acc: &mut Vec<i64>, target: &[i64], bound: i64) -> bool {
        if i == gens.len() {
            return acc.as_slice() == target;
        }
        for c in -bound..=bound {
            for (a, g) in acc.iter_mut().zip(&gens[i]) {
                *a += c * g;
            }
            let hit = go(gens, i + 1, acc, target, bound);
            for (a, g) in acc.iter_mut().zip(&gens[i]) {
                *a -= c * g;
            }
            if hit {
                return true;
            }
        }
        false
    }
    go(gens, 0, &mut vec![0; target.len()], target, bound)
}
