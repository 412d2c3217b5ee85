//! Exact fractional tilings of a small reduced multigraph.

use arbortile::reduced::{convert_4_to_2, convert_4_to_3, enumerate_structures, fractional_tiling, Multigraph2};
use arbortile::rational::to_pq;

fn main() -> arbortile::Result<()> {
    let r = Multigraph2::parse(
        "5
         0 1 2
         0 2 2
         1 2 2
         2 3 1
         3 4 2
         0 3 1
         1 3 1",
    )?;
    println!("{r}");
    for rr in [2, 3, 4] {
        let lp = fractional_tiling(&r, rr)?;
        println!(
            "K_{rr}: {} structures, optimum {} (dual certified: {})",
            enumerate_structures(&r, rr).len(),
            to_pq(&lp.value),
            lp.certified
        );
        for (s, w) in &lp.tiling.weights {
            println!("  {s} weight {}", to_pq(w));
        }
        if rr == 4 {
            let three = convert_4_to_3(&lp.tiling)?;
            let two = convert_4_to_2(&lp.tiling);
            println!("  as K_3 tiling: total {}", to_pq(&three.total()));
            println!("  as K_2 tiling: total {}", to_pq(&two.total()));
        }
    }
    Ok(())
}
