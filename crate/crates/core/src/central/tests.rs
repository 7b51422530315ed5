use super::*;
use crate::matgroup::RootOfUnity;
use crate::commvar::{clock_shift, conjugate_tuple, sample_exotic, sample_identity_component, validate_tuple};
use crate::matgroup::{self, distance, haar_sample_with, rng_from_seed, LieAlgebraElement};
use crate::weyl::{sigma_k, SigmaPreimage};
use proptest::prelude::*;

fn desc(name: &str) -> Arc<GroupDescriptor> {
    Arc::new(GroupDescriptor::parse(name).unwrap())
}

fn fp(p: u64, k: usize, e: &[u64]) -> Fingerprint {
    Fingerprint::from_entries(p, k, e.to_vec()).unwrap()
}

#[test]
fn fingerprint_accessors() {
    let f = fp(3, 4, &[1, 0, 2, 0, 1, 0]);
    assert_eq!(f.get(0, 1), 1);
    assert_eq!(f.get(1, 0), 2);
    assert_eq!(f.get(0, 3), 2);
    assert_eq!(f.get(1, 3), 1);
    assert_eq!(f.get(2, 2), 0);
    assert_eq!(f.nonzero_triples(), vec![[1, 2, 1], [1, 4, 2], [2, 4, 1]]);
    assert_eq!(Fingerprint::parse_csv(3, 4, "1, 0, -1, 0, 1, 0").unwrap(), f);
    assert!(Fingerprint::parse_csv(3, 4, "1,0").is_err());
    assert!(Fingerprint::from_entries(2, 2, vec![2]).is_err());
    assert!(Fingerprint::zero(2, 3).is_zero());
}

#[test]
fn commutator_group_of_catalog() {
    assert_eq!(commutator_group(&desc("SU(3)")).unwrap().modulus(), 1);
    assert_eq!(commutator_group(&desc("U(3)")).unwrap().modulus(), 1);
    let g = desc("G_{2,3}");
    let c = commutator_group(&g).unwrap();
    assert_eq!(c.modulus(), 3);
    let gen = &g.central_subgroup()[c.powers[1]];
    assert!(gen.factors.iter().all(|z| z.num() == 1 && z.den() == 3));
}

#[test]
fn non_cyclic_commutator_group() {
    // K = Z/2 x Z/2 acting independently on two SU(2) factors
    let half = RootOfUnity::new(1, 2).unwrap();
    let one = RootOfUnity::ONE;
    let gens = vec![
        CentralElement { torus: vec![], factors: vec![half, one] },
        CentralElement { torus: vec![], factors: vec![one, half] },
    ];
    let d = GroupDescriptor::new(0, vec![2, 2], gens).unwrap();
    assert_eq!(commutator_group(&d).unwrap_err(), Error::NotCyclic);
}

#[test]
fn commuting_lift_and_quaternion_pair() {
    let g = desc("G_{1,2}");
    let t = sample_identity_component(&g, 2, 1).unwrap();
    let lifted = lift_tuple(&t, tol::COMM).unwrap();
    assert!(lifted.elements().iter().all(|x| !x.is_coset()));
    let c = lifted.elements()[0].commutator(&lifted.elements()[1]).unwrap();
    assert!(c.factors()[0].iter().zip(linalg::identity(2).iter()).all(|(a, b)| (a - b).norm() < 1e-12));

    let (cm, sm) = clock_shift(2);
    let pair = vec![
        GroupElement::from_parts(&g, vec![], vec![cm]).unwrap(),
        GroupElement::from_parts(&g, vec![], vec![sm]).unwrap(),
    ];
    let t = CommutingTuple::new(&g, pair).unwrap();
    let f = fingerprint(&lift_tuple(&t, tol::COMM).unwrap(), tol::COMM).unwrap();
    assert_eq!(f, fp(2, 2, &[1]));
}

#[test]
fn random_pair_is_not_almost_commuting() {
    let g = desc("G_{1,2}");
    let mut rng = rng_from_seed(9);
    for _ in 0..50 {
        let t = CommutingTuple::new(&g, vec![haar_sample_with(&g, &mut rng), haar_sample_with(&g, &mut rng)]).unwrap();
        assert!(matches!(lift_tuple(&t, tol::COMM), Err(Error::NotAlmostCommuting { i: 0, j: 1, .. })));
    }
}

#[test]
fn ambiguous_match_at_huge_tolerance() {
    let g = desc("G_{1,2}");
    let t = CommutingTuple::trivial(&g, 2).unwrap();
    assert_eq!(fingerprint(&t, 10.0).unwrap_err(), Error::AmbiguousMatch { i: 0, j: 1 });
}

#[test]
fn classify_json() {
    assert_eq!(ComponentClass::IdentityComponent.to_json().to_string(), r#"{"component":"identity"}"#);
    let e = ComponentClass::Exotic(fp(2, 3, &[1, 0, 1]));
    assert_eq!(e.to_json().to_string(), r#"{"component":"exotic","fingerprint":[[1,2,1],[2,3,1]]}"#);
}

#[test]
fn lift_changes_preserve_fingerprint_exhaustively() {
    let g = desc("G_{3,2}");
    let targets = [fp(2, 2, &[1]), fp(2, 3, &[1, 1, 0]), fp(2, 3, &[0, 1, 1])];
    for (seed, target) in targets.iter().enumerate() {
        let t = sample_exotic(&g, target.k(), target, seed as u64).unwrap();
        for kappa in all_deck_elements(&g, target.k()) {
            let moved = deck_action(&kappa, &t).unwrap();
            assert_eq!(fingerprint(&moved, tol::COMM).unwrap(), *target);
        }
    }
    for k in 1..=3 {
        let t = sample_identity_component(&g, k, 7).unwrap();
        for kappa in all_deck_elements(&g, k) {
            assert!(fingerprint(&deck_action(&kappa, &t).unwrap(), tol::COMM).unwrap().is_zero());
        }
    }
}

#[test]
fn deck_orbit_is_free_and_is_the_fiber() {
    let mut rng = rng_from_seed(31);
    for (name, k) in [("G_{3,2}", 3), ("G_{2,3}", 2), ("U(2)", 2)] {
        let g = desc(name);
        let n = g.central_order().pow(k as u32);
        for _ in 0..100 {
            let t = sample_identity_component_with_rng(&g, k, &mut rng);
            let orbit: Vec<CommutingTuple> =
                all_deck_elements(&g, k).iter().map(|kappa| deck_action(kappa, &t).unwrap()).collect();
            assert_eq!(orbit.len(), n);
            for (a, moved) in orbit.iter().enumerate() {
                for (x, y) in moved.elements().iter().zip(t.elements()) {
                    assert!(distance(&x.project(), y).unwrap() < 1e-12);
                }
                for other in &orbit[a + 1..] {
                    let sep = moved
                        .elements()
                        .iter()
                        .zip(other.elements())
                        .map(|(x, y)| matgroup::lift_distance(x, y).unwrap())
                        .fold(0.0, f64::max);
                    assert!(sep > 0.5, "deck action not free");
                }
            }
        }
    }
}

fn sample_identity_component_with_rng(g: &Arc<GroupDescriptor>, k: usize, rng: &mut impl rand::Rng) -> CommutingTuple {
    sigma_k(&SigmaPreimage::random(g, k, rng))
}

#[test]
fn identity_deck_element_is_neutral() {
    let g = desc("G_{2,3}");
    let t = sample_identity_component(&g, 3, 2).unwrap();
    let same = deck_action(&[0, 0, 0], &t).unwrap();
    for (x, y) in same.elements().iter().zip(t.elements()) {
        assert_eq!(matgroup::lift_distance(x, y).unwrap(), 0.0);
    }
    assert!(deck_action(&[0, 0], &t).is_err());
    assert!(deck_action(&[0, 0, 3], &t).is_err());
}

/// Small commuting perturbation: conjugate by a group element near the identity.
fn nudge(t: &CommutingTuple, rng: &mut impl rand::Rng) -> CommutingTuple {
    let a = LieAlgebraElement::random(t.descriptor(), 1e-3, rng);
    let h = matgroup::group_exp(t.descriptor(), &a);
    conjugate_tuple(t, &h).unwrap()
}

#[test]
fn classification_is_locally_constant() {
    let mut rng = rng_from_seed(12);
    let g = desc("G_{3,2}");
    let target = fp(2, 2, &[1]);
    let exotic = sample_exotic(&g, 2, &target, 3).unwrap();
    let ident = sample_identity_component(&g, 2, 3).unwrap();
    for _ in 0..100 {
        let e = nudge(&exotic, &mut rng);
        assert!(validate_tuple(&e, tol::COMM).unwrap().passed);
        assert_eq!(classify_component(&e).unwrap(), ComponentClass::Exotic(target.clone()));
        let i = nudge(&ident, &mut rng);
        assert!(validate_tuple(&i, tol::COMM).unwrap().passed);
        assert_eq!(classify_component(&i).unwrap(), ComponentClass::IdentityComponent);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fingerprint_is_conjugation_invariant(seed in any::<u64>(), e in 1u64..3) {
        let g = desc("G_{2,3}");
        let target = fp(3, 2, &[e]);
        let t = sample_exotic(&g, 2, &target, seed).unwrap();
        let h = matgroup::haar_sample(&g, seed.wrapping_add(1));
        let c = conjugate_tuple(&t, &h).unwrap();
        prop_assert_eq!(classify_component(&c).unwrap(), ComponentClass::Exotic(target));
    }

    #[test]
    fn sigma_images_have_zero_fingerprint(seed in any::<u64>(), k in 1usize..5) {
        let g = desc("G_{2,3}");
        let t = sample_identity_component(&g, k, seed).unwrap();
        prop_assert!(fingerprint(&t, tol::COMM).unwrap().is_zero());
    }

    #[test]
    fn upper_triangle_indexing_roundtrips(k in 2usize..7, seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let entries: Vec<u64> = (0..k * (k - 1) / 2).map(|_| rand::Rng::random_range(&mut rng, 0..5)).collect();
        let f = Fingerprint::from_entries(5, k, entries.clone()).unwrap();
        let mut again = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                again.push(f.get(i, j));
                prop_assert_eq!((f.get(i, j) + f.get(j, i)) % 5, 0);
            }
        }
        prop_assert_eq!(again, entries);
    }
}
