//! Exact H-factor decisions and maximum tilings.

use arbortile::factor::{has_factor, max_tiling, verify_tiling};
use arbortile::graph::complete_multipartite;
use arbortile::Graph;

fn main() -> arbortile::Result<()> {
    let k3 = Graph::complete(3);

    let k6 = Graph::complete(6);
    let cert = has_factor(&k6, &k3)?.expect("K6 splits into two triangles");
    verify_tiling(&k6, &k3, &cert, true).expect("certificate checks out");
    println!("K6: factor {:?}", cert.copies.iter().map(|c| c.image().to_string()).collect::<Vec<_>>());

    // cliques of 7 and 5: neither side is divisible by 3
    let split = Graph::disjoint_union(&[&Graph::complete(7), &Graph::complete(5)]);
    println!("K7 + K5: factor exists = {}", has_factor(&split, &k3)?.is_some());
    println!("K7 + K5: largest tiling has {} triangles", max_tiling(&split, &k3)?.len());

    let host = complete_multipartite(&[4, 4, 4])?;
    let c4 = Graph::cycle(4);
    let cert = has_factor(&host, &c4)?.expect("K_{4,4,4} has a C4-factor");
    println!("K_(4,4,4): {} disjoint C4 copies", cert.len());
    Ok(())
}
