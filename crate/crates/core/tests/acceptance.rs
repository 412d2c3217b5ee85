//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num::Signed;
use rand::seq::SliceRandom;
use rand::Rng;

use arbortile::absorb::{differences, find_connector, lattice_member, robust_vectors, transferral, IndexVector};
use arbortile::embed::ClusterSystem;
use arbortile::extremal::{block_girths, certify_no_factor, construct_g0, construct_space_barrier, verify_claims};
use arbortile::factor::{has_factor, max_tiling, verify_tiling};
use arbortile::graph::{complete_multipartite, independence_number};
use arbortile::invariants::{invariant_report, vertex_arboricity};
use arbortile::qgraph::{admissible_pairs, build_q, h_factor_in_q, plan_q, verify_q};
use arbortile::rational::{self, ratio, Rational};
use arbortile::reduced::{
    almost_tiling_pipeline, convert_4_to_2, convert_4_to_3, enumerate_structures, fractional_tiling, EmbStructure,
    FractionalTiling, Multigraph2, Thresholds,
};
use arbortile::{Graph, VertexSet};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn invariant_values() -> Check {
    for r in 3..=7 {
        let rep = invariant_report(&Graph::complete(r)).map_err(|e| e.to_string())?;
        ensure(rep.f == r, || format!("f(K{r}) = {}", rep.f))?;
    }
    let k334 = invariant_report(&complete_multipartite(&[3, 3, 4]).unwrap()).map_err(|e| e.to_string())?;
    ensure(k334.ar == 3 && k334.f == 5, || format!("K334 ar {} f {}", k334.ar, k334.f))?;
    ensure(k334.ar_cr == ratio(20, 9), || format!("K334 ar_cr {}", k334.ar_cr))?;
    ensure(k334.hcf_is_one, || "K334 hcf is not 1".into())?;
    let k33 = invariant_report(&complete_multipartite(&[3, 3]).unwrap()).map_err(|e| e.to_string())?;
    ensure(k33.f == 3 && k33.ar_cr == ratio(3, 2), || format!("K33 f {} ar_cr {}", k33.f, k33.ar_cr))?;
    Ok("f(K_r) = r for r = 3..7; K_{3,3,4}: ar 3, f 5, ar_cr 20/9, hcf 1; K_{3,3}: f 3, ar_cr 3/2".into())
}

fn arboricity_oracle() -> Check {
    for r in 3..=9 {
        let k = Graph::complete(r);
        let (ar, witness) = vertex_arboricity(&k).map_err(|e| e.to_string())?;
        let brute = common::arboricity_brute(&k);
        ensure(ar == r.div_ceil(2) && ar == brute, || format!("K{r}: solver {ar}, brute force {brute}"))?;
        ensure(witness.blocks().len() == ar, || format!("K{r}: witness has wrong block count"))?;
    }
    Ok("ar(K_r) = ceil(r/2) for r = 3..9, equal to exhaustive partition search".into())
}

fn q_soundness() -> Check {
    let patterns = [
        ("K3", Graph::complete(3)),
        ("K4", Graph::complete(4)),
        ("K5", Graph::complete(5)),
        ("C4", Graph::cycle(4)),
        ("C6", Graph::cycle(6)),
        ("K33", complete_multipartite(&[3, 3]).unwrap()),
        ("K13", Graph::star(3)),
        ("K334", complete_multipartite(&[3, 3, 4]).unwrap()),
    ];
    let mut cases = 0;
    for (name, h) in &patterns {
        let f = invariant_report(h).map_err(|e| e.to_string())?.f;
        for (a, b) in admissible_pairs(f) {
            let spec = plan_q(h, a, b).map_err(|e| format!("{name} ({a},{b}): {e}"))?;
            let q = build_q(&spec);
            let cert = h_factor_in_q(h, &spec).map_err(|e| format!("{name} ({a},{b}): {e}"))?;
            verify_tiling(&q.graph, h, &cert, true).map_err(|e| format!("{name} ({a},{b}): {e}"))?;
            let check = verify_q(h, &spec);
            ensure(check.valid, || format!("{name} ({a},{b}): {:?}", check.failure))?;
            if q.graph.n() <= 60 {
                ensure(check.solver_agrees == Some(true), || {
                    format!("{name} ({a},{b}): solver says {:?}", check.solver_agrees)
                })?;
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} (H, a, b) cases, matrix certificates verified and confirmed by the solver"))
}

fn check_lp(r: &Multigraph2, rr: usize) -> Result<(), String> {
    let structures = enumerate_structures(r, rr);
    let brute = common::structures_brute(r, rr);
    ensure(structures == brute, || format!("structure lists differ on {r}"))?;
    let lp = fractional_tiling(r, rr).map_err(|e| e.to_string())?;
    ensure(lp.certified, || format!("uncertified LP on {r}"))?;
    let dual_value: Rational = lp.dual.iter().sum();
    ensure(dual_value == lp.value, || format!("primal {} dual {} on {r}", lp.value, dual_value))?;
    ensure(lp.dual.iter().all(|y| !y.is_negative()), || "negative dual price".into())?;
    for s in &brute {
        let price: Rational = s.support.iter().zip(&s.mult).map(|(&v, &m)| &lp.dual[v] * rational::int(m as i64)).sum();
        ensure(price >= rational::from_usize(rr), || format!("dual infeasible at {s} on {r}"))?;
    }
    ensure(lp.tiling.is_valid(r) && lp.tiling.total() == lp.value, || format!("invalid tiling on {r}"))?;
    let integral = common::integral_packing_brute(&brute, r.k(), rr);
    ensure(lp.value >= rational::from_usize(integral), || format!("LP {} below integral {integral} on {r}", lp.value))
}

fn random_k4_tiling(rng: &mut rand_chacha::ChaCha8Rng) -> (Multigraph2, FractionalTiling) {
    loop {
        let k = rng.gen_range(4..=5);
        let r = common::random_multigraph(rng, k);
        let structures = enumerate_structures(&r, 4);
        if structures.is_empty() {
            continue;
        }
        let mut picks: Vec<(EmbStructure, Rational)> = Vec::new();
        for s in &structures {
            if rng.gen_bool(0.5) {
                picks.push((s.clone(), ratio(rng.gen_range(1..=12), rng.gen_range(1..=12))));
            }
        }
        return (r, FractionalTiling::from_weights(4, k, picks));
    }
}

fn lp_suite() -> Check {
    let mut rng = common::rng(4);
    let mut graphs = Vec::new();
    // every assignment for k <= 3
    for k in 1..=3usize {
        let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
        for code in 0..3usize.pow(pairs.len() as u32) {
            let mut r = Multigraph2::new(k);
            let mut c = code;
            for &(i, j) in &pairs {
                r.set(i, j, (c % 3) as u8).unwrap();
                c /= 3;
            }
            graphs.push(r);
        }
    }
    let exhaustive = graphs.len();
    for _ in 0..500 {
        let k = rng.gen_range(4..=5);
        graphs.push(common::random_multigraph(&mut rng, k));
    }
    for r in &graphs {
        for rr in [2, 3, 4] {
            check_lp(r, rr)?;
        }
    }
    for _ in 0..100 {
        let (r, t) = random_k4_tiling(&mut rng);
        let three = convert_4_to_3(&t).map_err(|e| e.to_string())?;
        ensure(three.loads() == t.loads(), || format!("K3 conversion changed loads of {t:?}"))?;
        ensure(three.weights.iter().all(|(s, _)| s.is_valid(&r, 3)), || "invalid K3 structure".into())?;
        let two = convert_4_to_2(&t);
        ensure(two.loads() == t.loads(), || format!("K2 conversion changed loads of {t:?}"))?;
        ensure(two.weights.iter().all(|(s, _)| s.is_valid(&r, 2)), || "invalid K2 structure".into())?;
    }
    Ok(format!(
        "{} multigraphs ({exhaustive} exhaustive, 500 sampled) x r in 2..4: primal = dual, LP >= integral; 100 conversions keep loads",
        graphs.len()
    ))
}

fn extremal_suite() -> Check {
    for (h, n) in [(Graph::complete(3), 12), (Graph::cycle(4), 16)] {
        let inst = construct_g0(n, &h).map_err(|e| e.to_string())?;
        let solver = has_factor(&inst.graph, &h).map_err(|e| e.to_string())?;
        ensure(solver.is_none(), || format!("G0 n={n} has a factor"))?;
        let cert = certify_no_factor(&inst, &h).map_err(|e| e.to_string())?;
        ensure(cert.premises.iter().all(|p| p.ok), || format!("G0 n={n} premise failed"))?;
        ensure(cert.solver_agrees == Some(true), || format!("G0 n={n} solver {:?}", cert.solver_agrees))?;
    }
    let k4 = Graph::complete(4);
    let alpha = ratio(3, 10);
    let sb = construct_space_barrier(40, &k4, &alpha, 1).map_err(|e| e.to_string())?;
    let bound = sb.blocks[0].len() / 2;
    let best = max_tiling(&sb.graph, &k4).map_err(|e| e.to_string())?;
    verify_tiling(&sb.graph, &k4, &best, false).map_err(|e| e.to_string())?;
    ensure(best.len() <= bound, || format!("space barrier tiled by {} > {bound}", best.len()))?;
    let cert = certify_no_factor(&sb, &k4).map_err(|e| e.to_string())?;
    ensure(cert.solver_agrees == Some(true), || format!("space barrier solver {:?}", cert.solver_agrees))?;
    ensure(block_girths(&sb).iter().all(|g| g.at_least(5)), || "block girth <= h".into())?;
    let claims = verify_claims(&sb, &k4, &alpha).map_err(|e| e.to_string())?;
    ensure(claims.alpha_exact && claims.alpha_ok && claims.degree_ok, || format!("{claims:?}"))?;
    Ok(format!(
        "G0 (K3, 12) and (C4, 16) certified and solver-confirmed; K4 space barrier n=40 max tiling {} <= {bound}, alpha {} exact",
        best.len(),
        claims.alpha
    ))
}

fn edge_bound_suite() -> Check {
    let mut rng = common::rng(6);
    let mut violations = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=60);
        let p = rng.gen_range(0.05..0.95);
        let g = common::random_graph(&mut rng, n, p);
        let (alpha, _) = independence_number(&g, 80).map_err(|e| e.to_string())?;
        // e >= (1 - a/n) n / (2 a/n)  <=>  2 a e >= n (n - a)
        if 2 * alpha * g.edge_count() < n * (n - alpha) {
            violations += 1;
        }
    }
    ensure(violations == 0, || format!("{violations} violations"))?;
    Ok("200 random graphs (n <= 60): e(G) >= (1 - a*) n / (2 a*) holds, 0 violations".into())
}

fn pipeline_suite() -> Check {
    let m = 30;
    let host = complete_multipartite(&[m, m, m]).unwrap();
    let clusters: Vec<VertexSet> = (0..3).map(|i| (m * i..m * (i + 1)).collect()).collect();
    let cs = ClusterSystem::new(host, clusters).map_err(|e| e.to_string())?;
    let th = Thresholds::new(ratio(1, 10), ratio(1, 100), ratio(1, 10), ratio(1, 10)).map_err(|e| e.to_string())?;
    let rep = almost_tiling_pipeline(&cs, &Graph::complete(3), &th);
    ensure(rep.verified, || format!("certificate rejected: {:?}", rep.diagnostics))?;
    verify_tiling(&cs.host, &Graph::complete(3), &rep.certificate, false).map_err(|e| e.to_string())?;
    ensure(rep.coverage >= ratio(4, 5), || format!("coverage {} ({:?})", rep.coverage, rep.diagnostics))?;
    Ok(format!("covered {}/{} vertices of the doubled-K3 blow-up", rep.covered, rep.n))
}

fn absorption_suite() -> Check {
    let mut rng = common::rng(8);
    let k30 = Graph::complete(30);
    let k3 = Graph::complete(3);
    for _ in 0..50 {
        let pair: Vec<usize> = (0..30).collect::<Vec<_>>().choose_multiple(&mut rng, 2).copied().collect();
        let (u, v) = (pair[0], pair[1]);
        let c = find_connector(&k30, &k3, u, v, 1, &VertexSet::new())
            .connector
            .ok_or_else(|| format!("no connector for {u}, {v}"))?;
        for (x, cert) in [(u, &c.factor_with_u), (v, &c.factor_with_v)] {
            let mut set = c.s_set.clone();
            set.insert(x);
            let sub = k30.induced(&set);
            ensure(common::has_factor_brute(&sub, &k3), || format!("S + {x} has no factor"))?;
            verify_tiling(&k30, &k3, cert, false).map_err(|e| e.to_string())?;
            ensure(cert.covered == set, || "certificate covers the wrong set".into())?;
        }
    }
    let k12 = Graph::complete(12);
    let halves = [VertexSet::range(6), (6..12).collect()];
    let robust = robust_vectors(&k12, &k3, &halves, &ratio(1, 12)).map_err(|e| e.to_string())?;
    let mut found: Vec<Vec<usize>> = robust.iter().map(|r| r.vector.0.clone()).collect();
    found.sort();
    ensure(found == vec![vec![0, 3], vec![1, 2], vec![2, 1], vec![3, 0]], || format!("robust vectors {found:?}"))?;

    let mut hits = 0;
    for _ in 0..100 {
        let d = rng.gen_range(2..=3);
        let size = rng.gen_range(2..=4);
        let iset: Vec<IndexVector> = (0..size)
            .map(|_| IndexVector((0..d).map(|_| rng.gen_range(0..=3)).collect()))
            .collect();
        let gens = differences(&iset);
        for g in &gens {
            ensure(lattice_member(&gens, g), || format!("generator {g:?} not in its own lattice"))?;
        }
        if let Some(tr) = transferral(&iset) {
            hits += 1;
            let mut target = vec![0i64; d];
            target[tr.i] = 1;
            target[tr.j] = -1;
            let diff: Vec<i64> = tr.s.0.iter().zip(&tr.t.0).map(|(&a, &b)| a as i64 - b as i64).collect();
            ensure(diff == target, || format!("{tr:?} is not a unit difference"))?;
            ensure(lattice_member(&gens, &target), || format!("transferral {tr:?} outside the lattice"))?;
        }
        for i in 0..d {
            for j in 0..d {
                if i == j {
                    continue;
                }
                let mut target = vec![0i64; d];
                target[i] = 1;
                target[j] = -1;
                let small = common::lattice_brute(&gens[..gens.len().min(4)], &target, 2);
                ensure(!small || lattice_member(&gens, &target), || format!("membership missed for {iset:?}"))?;
            }
        }
    }
    Ok(format!(
        "50 K30 connectors verified; 4 robust K3 vectors on K12; 100 generator sets agree ({hits} transferrals)"
    ))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Check); 8] = [
        ("invariant values", Duration::from_secs(60), invariant_values),
        ("arboricity oracle", Duration::from_secs(300), arboricity_oracle),
        ("Q-construction soundness", Duration::from_secs(600), q_soundness),
        ("fractional-tiling LP", Duration::from_secs(600), lp_suite),
        ("extremal constructions", Duration::from_secs(900), extremal_suite),
        ("edge bound from independence ratio", Duration::from_secs(600), edge_bound_suite),
        ("pipeline coverage", Duration::from_secs(300), pipeline_suite),
        ("absorption suite", Duration::from_secs(600), absorption_suite),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if took <= *limit {
                Ok(msg)
            } else {
                Err(format!("took {took:.1?}, limit {limit:?}"))
            }
        });
        match outcome {
            Ok(msg) => println!("criterion {} {name}: PASS ({took:.1?}) {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({took:.1?}) {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
