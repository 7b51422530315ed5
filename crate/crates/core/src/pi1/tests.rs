use super::*;
use crate::matgroup::{CentralElement, RootOfUnity};
use proptest::prelude::*;

fn cat(name: &str) -> CatalogGroup {
    CatalogGroup::parse(name).unwrap()
}

fn fp(p: u64, k: usize, e: &[u64]) -> Fingerprint {
    Fingerprint::from_entries(p, k, e.to_vec()).unwrap()
}

fn ab(free: usize, torsion: &[u64]) -> FgAbelianGroup {
    FgAbelianGroup { free_rank: free, torsion: torsion.to_vec() }
}

/// Brute-force determinant, for checking the product of invariant factors.
fn det(m: &IntMatrix) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|c| {
            let minor: IntMatrix = m[1..].iter().map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect()).collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            sign * m[0][c] as i128 * det(&minor)
        })
        .sum()
}

#[test]
fn smith_examples() {
    assert_eq!(smith_invariants(&vec![vec![2, 4], vec![6, 8]]).unwrap(), vec![2, 4]);
    assert_eq!(smith_invariants(&vec![vec![2, 0], vec![0, 3]]).unwrap(), vec![1, 6]);
    assert_eq!(smith_invariants(&vec![vec![0, 0], vec![0, 0]]).unwrap(), Vec::<i64>::new());
    assert_eq!(smith_invariants(&vec![vec![4, 6, 10]]).unwrap(), vec![2]);
    assert_eq!(smith_invariants(&vec![vec![i64::MAX, 1], vec![1, i64::MAX]]).unwrap_err(), Error::Overflow);
}

#[test]
fn presentation_groups() {
    assert_eq!(Presentation::new(1, vec![vec![2]]).unwrap().group().unwrap(), FgAbelianGroup::cyclic(2));
    assert_eq!(Presentation::new(2, vec![vec![2, 0], vec![0, 3]]).unwrap().group().unwrap(), ab(0, &[6]));
    assert_eq!(Presentation::new(3, vec![vec![2, 0, 0]]).unwrap().group().unwrap(), ab(2, &[2]));
    assert!(Presentation::new(2, vec![vec![1]]).is_err());
}

#[test]
fn display_names() {
    assert_eq!(FgAbelianGroup::trivial().to_string(), "1");
    assert_eq!(ab(3, &[]).to_string(), "Z^3");
    assert_eq!(ab(1, &[2, 2, 4]).to_string(), "Z x (Z/2)^2 x Z/4");
}

#[test]
fn pi1_of_catalog_groups() {
    assert!(pi1_of_group(&cat("SU(2)")).unwrap().is_trivial());
    assert!(pi1_of_group(&cat("Spin(7)")).unwrap().is_trivial());
    assert_eq!(pi1_of_group(&cat("T^3")).unwrap(), FgAbelianGroup::free(3));
    assert_eq!(pi1_of_group(&cat("U(1)^2")).unwrap(), FgAbelianGroup::free(2));
    assert_eq!(pi1_of_group(&cat("U(3)")).unwrap(), FgAbelianGroup::free(1));
    assert_eq!(pi1_of_group(&cat("SO(3)")).unwrap(), FgAbelianGroup::cyclic(2));
    assert_eq!(pi1_of_group(&cat("G_{3,2}")).unwrap(), FgAbelianGroup::cyclic(2));
    assert_eq!(pi1_of_group(&cat("G_{4,5}")).unwrap(), FgAbelianGroup::cyclic(5));
    assert!(matches!(CatalogGroup::parse("Sp(2)"), Err(Error::UnsupportedDescriptor(_))));
}

#[test]
fn pi1_of_custom_quotients() {
    // SU(2) x SU(2) / (Z/2 x Z/2) = SO(4)/... has pi_1 = (Z/2)^2
    let half = RootOfUnity::new(1, 2).unwrap();
    let one = RootOfUnity::ONE;
    let d = GroupDescriptor::new(
        0,
        vec![2, 2],
        vec![
            CentralElement { torus: vec![], factors: vec![half, one] },
            CentralElement { torus: vec![], factors: vec![one, half] },
        ],
    )
    .unwrap();
    assert_eq!(pi1_of_group(&CatalogGroup::Descriptor(d)).unwrap(), ab(0, &[2, 2]));
    // SU(4)/(Z/4)
    let d = GroupDescriptor::new(0, vec![4], vec![CentralElement { torus: vec![], factors: vec![RootOfUnity::new(1, 4).unwrap()] }]).unwrap();
    assert_eq!(pi1_of_group(&CatalogGroup::Descriptor(d)).unwrap(), FgAbelianGroup::cyclic(4));
    // T^2 x SU(3) / <(1/3, 0; 1/3)>: Z^2, index 3 over Z^2 of the cover
    let t = RootOfUnity::new(1, 3).unwrap();
    let d = GroupDescriptor::new(2, vec![3], vec![CentralElement { torus: vec![t, one], factors: vec![t] }]).unwrap();
    let s = pi1_structure(&d).unwrap();
    assert_eq!(s.group().unwrap(), FgAbelianGroup::free(2));
    assert_eq!(cokernel(&s.presentation, &s.cover_inclusion(), 2).unwrap(), FgAbelianGroup::cyclic(3));
}

#[test]
fn pi1_of_hom_tables() {
    let id = ComponentClass::IdentityComponent;
    assert_eq!(pi1_of_hom(&cat("SU(2)"), 5, &id).unwrap(), Pi1Answer::Abelian(FgAbelianGroup::trivial()));
    assert_eq!(pi1_of_hom(&cat("T^2"), 3, &id).unwrap(), Pi1Answer::Abelian(FgAbelianGroup::free(6)));
    assert_eq!(pi1_of_hom(&cat("G_{3,2}"), 3, &id).unwrap(), Pi1Answer::Abelian(ab(0, &[2, 2, 2])));

    let a = pi1_of_hom(&cat("G_{3,2}"), 3, &ComponentClass::Exotic(fp(2, 3, &[1, 0, 0]))).unwrap();
    assert_eq!(a.name(), "(Z/2)^2 x Q8");
    assert_eq!(a.order(), Some(32));
    assert_eq!(a.to_json()["group"], "(Z/2)^2 x Q8");

    let s = pi1_of_hom(&cat("Spin(7)"), 3, &ComponentClass::Exotic(fp(2, 3, &[1, 0, 0]))).unwrap();
    assert_eq!(s.name(), "(Z/2)^4");
    assert_eq!(s.order(), Some(16));

    assert_eq!(pi1_of_hom(&cat("G_{1,3}"), 2, &ComponentClass::Exotic(fp(3, 2, &[2]))).unwrap().name(), "E_3");
    assert_eq!(pi1_of_hom(&cat("G_{2,3}"), 2, &ComponentClass::Exotic(fp(3, 2, &[1]))).unwrap().order(), Some(81));
}

#[test]
fn pi1_of_hom_errors() {
    let e = ComponentClass::Exotic(fp(2, 2, &[1]));
    assert!(matches!(pi1_of_hom(&cat("SU(2)"), 2, &e), Err(Error::UnsupportedExotic(_))));
    assert!(matches!(pi1_of_hom(&cat("Spin(7)"), 2, &e), Err(Error::UnsupportedExotic(_))));
    let rank4 = ComponentClass::Exotic(fp(2, 4, &[1, 0, 0, 0, 0, 1]));
    assert_eq!(pi1_of_hom(&cat("G_{3,2}"), 4, &rank4).unwrap_err(), Error::UnrealizableFingerprint { rank: 4 });
    assert!(matches!(pi1_of_hom(&cat("G_{3,2}"), 3, &e), Err(Error::BadArguments(_))));
}

#[test]
fn exotic_answers_do_not_depend_on_k() {
    for (name, p) in [("G_{3,2}", 2u64), ("G_{2,3}", 3)] {
        let answers: Vec<Pi1Answer> = (2..=6)
            .map(|k| {
                let mut e = vec![0; k * (k - 1) / 2];
                e[0] = 1;
                pi1_of_hom(&cat(name), k, &ComponentClass::Exotic(fp(p, k, &e))).unwrap()
            })
            .collect();
        assert!(answers.windows(2).all(|w| w[0] == w[1]));
    }
}

#[test]
fn exact_sequence_examples() {
    let z = Presentation::free(1);
    let z2 = Presentation::new(1, vec![vec![2]]).unwrap();
    let zero = Presentation::free(0);
    // 1 -> Z -> Z -> 0 with the identity
    check_exact_sequence(&z, &z, &zero, &vec![vec![1]], &vec![]).unwrap();
    // 1 -> Z -x2-> Z -> Z/2 -> 1
    check_exact_sequence(&z, &z, &z2, &vec![vec![2]], &vec![vec![1]]).unwrap();
    // failures at each stage
    assert_eq!(
        check_exact_sequence(&z2, &z, &zero, &vec![vec![1]], &vec![]).unwrap_err(),
        Error::NotExact(ExactnessStage::WellDefined)
    );
    assert_eq!(
        check_exact_sequence(&z, &z2, &zero, &vec![vec![1]], &vec![]).unwrap_err(),
        Error::NotExact(ExactnessStage::Injective)
    );
    assert_eq!(
        check_exact_sequence(&z, &z, &z2, &vec![vec![4]], &vec![vec![1]]).unwrap_err(),
        Error::NotExact(ExactnessStage::Middle)
    );
    assert_eq!(
        check_exact_sequence(&z, &z, &z2, &vec![vec![2]], &vec![vec![0]]).unwrap_err(),
        Error::NotExact(ExactnessStage::Middle)
    );
    let z3 = Presentation::new(1, vec![vec![3]]).unwrap();
    assert_eq!(
        check_exact_sequence(&zero, &z2, &z3, &vec![vec![]], &vec![vec![1]]).unwrap_err(),
        Error::NotExact(ExactnessStage::WellDefined)
    );
    assert_eq!(
        check_exact_sequence(&zero, &z2, &z2, &vec![vec![]], &vec![vec![0]]).unwrap_err(),
        Error::NotExact(ExactnessStage::Middle)
    );
    let two = Presentation::free(2);
    assert_eq!(
        check_exact_sequence(&zero, &z, &two, &vec![vec![]], &vec![vec![1], vec![0]]).unwrap_err(),
        Error::NotExact(ExactnessStage::Surjective)
    );
}

#[test]
fn covering_sequences_are_exact() {
    for (name, k) in [("G_{3,2}", 2), ("U(2)", 2), ("G_{2,3}", 3), ("T^2", 2), ("SU(3)", 4), ("U(3)", 3)] {
        let d = GroupDescriptor::parse(name).unwrap();
        let s = covering_sequence(&d, k).unwrap();
        check_exact_sequence(&s.a, &s.b, &s.c, &s.f, &s.g).unwrap();
        let b = s.b.group().unwrap();
        assert_eq!(b.free_rank, d.torus_rank() * k);
        assert_eq!(s.c.group().unwrap().order(), Some((d.central_order() as u128).pow(k as u32)));
        assert_eq!(cokernel(&s.b, &s.f, s.a.generators).unwrap().order(), Some((d.central_order() as u128).pow(k as u32)));
    }
}

fn small_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..4, 1usize..4).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..10, c), r))
}

proptest! {
    #[test]
    fn smith_invariants_form_a_divisibility_chain(m in small_matrix()) {
        let d = smith_invariants(&m).unwrap();
        prop_assert!(d.iter().all(|&x| x > 0));
        prop_assert!(d.windows(2).all(|w| w[1] % w[0] == 0));
        if m.len() == m[0].len() {
            let full = d.len() == m.len();
            let prod: i128 = d.iter().map(|&x| x as i128).product();
            prop_assert_eq!(if full { prod } else { 0 }, det(&m).abs());
        }
    }

    #[test]
    fn kernel_vectors_are_annihilated(m in small_matrix()) {
        let cols = m[0].len();
        for v in integer_kernel(&m, cols).unwrap() {
            prop_assert!(apply(&m, &v).unwrap().iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn identity_answer_is_kth_power(k in 1usize..6, idx in 0usize..6) {
        let names = ["SU(3)", "T^2", "U(2)", "G_{3,2}", "G_{2,3}", "SO(3)"];
        let g = cat(names[idx]);
        let base = pi1_of_group(&g).unwrap();
        let Pi1Answer::Abelian(h) = pi1_of_hom(&g, k, &ComponentClass::IdentityComponent).unwrap() else { panic!() };
        prop_assert!(h.is_normalized());
        prop_assert_eq!(h.free_rank, base.free_rank * k);
        prop_assert_eq!(h.torsion_order(), base.torsion_order().pow(k as u32));
        let mut expected: Vec<u64> = base.torsion.iter().flat_map(|&t| std::iter::repeat_n(t, k)).collect();
        expected.sort_unstable();
        prop_assert_eq!(h.torsion, expected);
    }
}
