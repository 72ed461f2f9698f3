use splitnet::circular::{circular_system_masks, closure, ell, CircularSystem};
use splitnet::network_poset_compare;
use splitnet::oracle::{oracle_galois_check, oracle_min_network};
use splitnet::pctree::all_pc_trees;
use splitnet::split::SplitIndex;
use splitnet::{CircularOrder, PcTree, SplitSystem};

#[test]
fn adjunction_exhaustive_at_five() {
    let r = oracle_galois_check(5, 0, 1).unwrap();
    assert!(r.exhaustive);
    assert_eq!((r.circular_systems, r.classes), (218, 68));
    assert_eq!(r.pairs_checked, 218 * 68);
    assert!(r.passed(), "{r}");
    assert_eq!(r.surjective, Some(true));
}

#[test]
fn adjunction_direct_at_five() {
    let index = SplitIndex::new(5).unwrap();
    let classes = all_pc_trees(5).unwrap();
    for mask in circular_system_masks(5).unwrap() {
        let s = CircularSystem::new(index.decode(mask)).unwrap();
        let lower = ell(&s).unwrap().to_network();
        for t in &classes {
            let net = t.to_network();
            let le = network_poset_compare(&lower, &net).unwrap().is_le();
            assert_eq!(le, s.base().is_subset(&net.displayed_splits().unwrap()), "{} vs {t}", s.base());
        }
    }
}

#[test]
fn reflection_and_injectivity_at_six() {
    let r = oracle_galois_check(6, 2000, 11).unwrap();
    assert_eq!(r.reflection_checked, 941);
    assert!(r.reflection_failures.is_empty());
    assert!(r.sigma_injective);
    assert!(r.passed(), "{r}");
}

#[test]
fn two_arcs_and_all_arcs_give_the_hexagon() {
    let order = CircularOrder::identity(6).unwrap();
    let arcs = order.contiguous_splits();
    let two: Vec<_> = arcs.iter().copied().filter(|s| s.block().len().min(s.complement().len()) == 2).collect();
    assert_eq!(two.len(), 6);
    let a = SplitSystem::new(6, two, true).unwrap();
    let b = SplitSystem::new(6, arcs, true).unwrap();
    assert_eq!(b.len(), 15);
    assert_ne!(a, b);
    let hexagon = PcTree::cycle(&order).unwrap();
    assert_eq!(ell(&CircularSystem::new(a.clone()).unwrap()).unwrap(), hexagon);
    assert_eq!(ell(&CircularSystem::new(b.clone()).unwrap()).unwrap(), hexagon);
    assert_eq!(closure(&CircularSystem::new(a).unwrap()), b);
}

#[test]
fn least_network_matches_oracle_at_five() {
    let index = SplitIndex::new(5).unwrap();
    for mask in circular_system_masks(5).unwrap() {
        let s = CircularSystem::new(index.decode(mask)).unwrap();
        assert_eq!(ell(&s).unwrap(), oracle_min_network(&s).unwrap(), "{}", s.base());
    }
}
