//! Embedding a tree and a Q(a, b) gadget into dense hosts.

use arbortile::embed::{embed_q, embed_tree, ClusterSystem};
use arbortile::extremal::gen_high_girth_low_alpha;
use arbortile::graph::complete_multipartite;
use arbortile::qgraph::plan_q;
use arbortile::rational::ratio;
use arbortile::{Graph, VertexSet};

fn main() -> arbortile::Result<()> {
    let host = gen_high_girth_low_alpha(60, 3, &ratio(1, 3), 7)?;
    let tree = Graph::path(8);
    let copy = embed_tree(&host, &tree)?;
    println!("P8 in a random 60-vertex graph: {:?}", copy.map);

    // three clusters of 12, complete between clusters
    let host = complete_multipartite(&[12, 12, 12])?;
    let clusters: Vec<VertexSet> = (0..3).map(|i| (12 * i..12 * (i + 1)).collect()).collect();
    let cs = ClusterSystem::new(host, clusters)?;
    let spec = plan_q(&Graph::complete(3), 3, 0)?;
    let e = embed_q(&cs, &spec, &ratio(1, 10))?;
    println!("Q(3,0) for K3 via {:?}:", e.strategy);
    for (i, img) in e.images.iter().enumerate() {
        println!("  U{} -> {}", i + 1, img);
    }
    Ok(())
}
