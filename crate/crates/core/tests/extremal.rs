mod common;

use arbortile::extremal::{
    block_girths, certify_no_factor, construct_g0, construct_multi_part, construct_space_barrier, construct_two_part,
    gen_high_girth_low_alpha, verify_claims, CertificateKind,
};
use arbortile::graph::{complete_multipartite, girth};
use arbortile::rational::ratio;
use arbortile::{Error, Graph};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generated_graphs_meet_girth_and_alpha(n in 8usize..=16, g_min in 3usize..=5, seed in any::<u64>()) {
        match gen_high_girth_low_alpha(n, g_min, &ratio(1, 2), seed) {
            Ok(g) => {
                prop_assert_eq!(g.n(), n);
                prop_assert!(girth(&g).at_least(g_min));
                prop_assert!(2 * common::alpha_brute(&g) <= n);
                let again = gen_high_girth_low_alpha(n, g_min, &ratio(1, 2), seed).unwrap();
                prop_assert_eq!(again.edges(), g.edges());
            }
            Err(Error::GenFail { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }
}

#[test]
fn g0_sizes_and_certificates() {
    let k3 = Graph::complete(3);
    let inst = construct_g0(12, &k3).unwrap();
    assert_eq!(inst.blocks.iter().map(|b| b.len()).collect::<Vec<_>>(), vec![7, 5]);
    let cert = certify_no_factor(&inst, &k3).unwrap();
    assert_eq!(cert.kind, CertificateKind::DivisibilityModHcf2);
    assert!(!common::has_factor_brute(&inst.graph, &k3));

    let c4 = Graph::cycle(4);
    let inst = construct_g0(16, &c4).unwrap();
    assert_eq!(inst.blocks[0].len(), 9);
    assert_eq!(certify_no_factor(&inst, &c4).unwrap().solver_agrees, Some(true));
}

#[test]
fn partite_constructions() {
    let k6 = Graph::complete(6);
    let inst = construct_multi_part(90, &k6, &ratio(3, 10), 3).unwrap();
    assert_eq!(inst.blocks.iter().map(|b| b.len()).collect::<Vec<_>>(), vec![31, 30, 29]);
    assert_eq!(certify_no_factor(&inst, &k6).unwrap().kind, CertificateKind::DifferenceModHcf1);
    assert!(block_girths(&inst).iter().all(|g| g.at_least(7)));

    // K_{1,1,1,4} only splits as (2, 5); the extra K4 makes hcf2 = 1
    let h = Graph::disjoint_union(&[&complete_multipartite(&[1, 1, 1, 4]).unwrap(), &Graph::complete(4)]);
    let inst = construct_two_part(60, &h, &ratio(3, 10), 2).unwrap();
    assert_eq!(inst.blocks[0].len(), 31);
    assert_eq!(certify_no_factor(&inst, &h).unwrap().kind, CertificateKind::DifferenceModHcf1);
    assert!(verify_claims(&inst, &h, &ratio(3, 10)).unwrap().degree_ok);

    assert!(construct_two_part(60, &Graph::complete(3), &ratio(3, 10), 2).is_err());
    assert!(matches!(construct_space_barrier(41, &Graph::complete(4), &ratio(3, 10), 1), Err(Error::BadN(_))));
    let k334 = complete_multipartite(&[3, 3, 4]).unwrap();
    let inst = construct_space_barrier(200, &k334, &ratio(3, 10), 4).unwrap();
    assert_eq!(inst.blocks.iter().map(|b| b.len()).collect::<Vec<_>>(), vec![19, 91, 90]);
}
