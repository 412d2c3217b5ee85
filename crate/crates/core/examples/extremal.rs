//! Extremal graphs without an H-factor and their certificates.

use arbortile::extremal::{certify_no_factor, construct_g0, construct_space_barrier, verify_claims};
use arbortile::rational::{ratio, to_pq};
use arbortile::Graph;

fn main() -> arbortile::Result<()> {
    let k3 = Graph::complete(3);
    let g0 = construct_g0(12, &k3)?;
    let cert = certify_no_factor(&g0, &k3)?;
    println!("G0 for K3 on 12 vertices: {:?} mod {:?}, solver agrees {:?}", cert.kind, cert.modulus, cert.solver_agrees);

    let k4 = Graph::complete(4);
    let alpha = ratio(3, 10);
    let sb = construct_space_barrier(40, &k4, &alpha, 1)?;
    let sizes: Vec<usize> = sb.blocks.iter().map(|b| b.len()).collect();
    let cert = certify_no_factor(&sb, &k4)?;
    println!("space barrier for K4 on 40 vertices, blocks {sizes:?}");
    for p in &cert.premises {
        println!("  {:<14} {} ({})", p.name, p.ok, p.detail);
    }
    println!("  at most {} disjoint copies, solver agrees {:?}", cert.value, cert.solver_agrees);
    let claims = verify_claims(&sb, &k4, &alpha)?;
    println!(
        "  min degree {} >= {}: {}, alpha {} <= {}: {}",
        claims.min_degree,
        to_pq(&claims.degree_bound),
        claims.degree_ok,
        claims.alpha,
        to_pq(&claims.alpha_limit),
        claims.alpha_ok
    );
    Ok(())
}
