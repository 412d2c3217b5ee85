//! Connectors, absorbers, robust index vectors and transferrals.

use arbortile::absorb::{differences, find_connector, lattice_member, robust_vectors, transferral, verify_absorber};
use arbortile::rational::ratio;
use arbortile::{Graph, VertexSet};

fn main() -> arbortile::Result<()> {
    let k3 = Graph::complete(3);
    let k12 = Graph::complete(12);

    let search = find_connector(&k12, &k3, 0, 1, 2, &VertexSet::new());
    let c = search.connector.expect("K12 is well connected");
    println!("connector for 0 ~ 1 with t = 2: S = {} ({} candidates)", c.s_set, search.candidates);

    let s = VertexSet::from([0, 1, 2]);
    let a: VertexSet = (3..9).collect();
    println!("{a} absorbs {s}: {}", verify_absorber(&k12, &k3, &s, &a, 2));

    let halves = [VertexSet::range(6), (6..12).collect()];
    let robust = robust_vectors(&k12, &k3, &halves, &ratio(1, 12))?;
    let vectors: Vec<_> = robust.iter().map(|r| r.vector.clone()).collect();
    println!("robust index vectors: {:?}", vectors.iter().map(|v| &v.0).collect::<Vec<_>>());

    if let Some(tr) = transferral(&vectors) {
        let mut target = vec![0i64; tr.s.0.len()];
        target[tr.i] = 1;
        target[tr.j] = -1;
        println!(
            "transferral {:?} - {:?} = u_{} - u_{}, in difference lattice: {}",
            tr.s.0,
            tr.t.0,
            tr.i + 1,
            tr.j + 1,
            lattice_member(&differences(&vectors), &target)
        );
    }
    Ok(())
}
