//! Arboricity invariants of a few standard patterns.

use arbortile::graph::complete_multipartite;
use arbortile::invariants::invariant_report;
use arbortile::rational::to_pq;
use arbortile::Graph;

fn main() -> arbortile::Result<()> {
    let patterns = [
        ("K3", Graph::complete(3)),
        ("K6", Graph::complete(6)),
        ("C6", Graph::cycle(6)),
        ("K_{3,3}", complete_multipartite(&[3, 3])?),
        ("K_{3,3,4}", complete_multipartite(&[3, 3, 4])?),
        ("Petersen", Graph::petersen()),
    ];
    println!("{:<10} {:>3} {:>5} {:>7} {:>3} {:>6} {:>5}", "pattern", "ar", "sigma", "ar_cr", "f", "hcf1", "hcf2");
    for (name, h) in &patterns {
        let r = invariant_report(h)?;
        println!(
            "{:<10} {:>3} {:>5} {:>7} {:>3} {:>6} {:>5}",
            name,
            r.ar,
            r.sigma,
            to_pq(&r.ar_cr),
            r.f,
            r.hcf1.to_string(),
            r.hcf2
        );
        println!("           optimal partition {}", r.arboricity_witness);
    }
    Ok(())
}
