//! Q(a, b) gadgets with their matrix-built H-factors, checked by the solver.

use arbortile::graph::complete_multipartite;
use arbortile::invariants::f_value;
use arbortile::qgraph::{admissible_pairs, build_q, plan_q, verify_q};
use arbortile::Graph;

fn main() -> arbortile::Result<()> {
    for (name, h) in [
        ("K3", Graph::complete(3)),
        ("K4", Graph::complete(4)),
        ("C6", Graph::cycle(6)),
        ("K_{3,3,4}", complete_multipartite(&[3, 3, 4])?),
    ] {
        let f = f_value(&h)?;
        for (a, b) in admissible_pairs(f) {
            let spec = plan_q(&h, a, b)?;
            let q = build_q(&spec);
            let check = verify_q(&h, &spec);
            println!(
                "{name:<10} f={f} Q({a},{b}) s={} |V(Q)|={:<3} edges={:<4} matrix={} solver={:?}",
                spec.s,
                q.graph.n(),
                q.graph.edge_count(),
                check.valid,
                check.solver_agrees
            );
        }
    }
    Ok(())
}
