//! Almost-perfect triangle tiling of a blown-up doubled triangle.

use arbortile::embed::ClusterSystem;
use arbortile::graph::complete_multipartite;
use arbortile::rational::{approx, ratio};
use arbortile::reduced::{almost_tiling_pipeline, Thresholds};
use arbortile::{Graph, VertexSet};

fn main() -> arbortile::Result<()> {
    let m = 30;
    let host = complete_multipartite(&[m, m, m])?;
    let clusters: Vec<VertexSet> = (0..3).map(|i| (m * i..m * (i + 1)).collect()).collect();
    let cs = ClusterSystem::new(host, clusters)?;
    let th = Thresholds::new(ratio(1, 10), ratio(1, 100), ratio(1, 10), ratio(1, 10))?;
    let rep = almost_tiling_pipeline(&cs, &Graph::complete(3), &th);
    for acc in &rep.structures {
        println!(
            "{} Q({},{}) quota {} placed {} -> {} triangles ({})",
            acc.structure, acc.a, acc.b, acc.quota_copies, acc.placed, acc.h_copies, acc.stop
        );
    }
    println!(
        "covered {}/{} vertices ({:.3}), verified {}",
        rep.covered,
        rep.n,
        approx(&rep.coverage),
        rep.verified
    );
    Ok(())
}
