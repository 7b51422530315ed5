use super::*;
use crate::central::Fingerprint;
use crate::commvar::{sample_exotic, sample_identity_component, validate_tuple};
use proptest::prelude::*;

fn desc(name: &str) -> Arc<GroupDescriptor> {
    Arc::new(GroupDescriptor::parse(name).unwrap())
}

fn circle_loop(d: &Arc<GroupDescriptor>, turns: f64, segments: usize) -> GroupPath {
    let v = (0..=segments)
        .map(|i| {
            let t = if i == segments { turns * TAU } else { turns * TAU * i as f64 / segments as f64 };
            GroupElement::from_parts(d, vec![t; d.torus_rank()], vec![]).unwrap()
        })
        .collect();
    GroupPath::new(d, v, true).unwrap()
}

#[test]
fn constant_loop_needs_no_stages() {
    let g = desc("SU(2)");
    let one = GroupElement::identity(&g);
    let p = GroupPath::new(&g, vec![one; 9], true).unwrap();
    let c = contract_loop(&p, &ContractionParams::default()).unwrap();
    assert_eq!(c.stages.len(), 1);
    assert_eq!(c.sweeps, 0);
    assert_eq!(c.final_diameter, 0.0);
    assert!(winding_vector(&p).unwrap().is_trivial());
}

#[test]
fn backtracking_loop_contracts() {
    let g = desc("SU(2)");
    let mut rng = rng_from_seed(4);
    let a = LieAlgebraElement::random(&g, 2.0, &mut rng);
    let n = 32;
    let v: Vec<GroupElement> = (0..=n)
        .map(|i| {
            let s = 1.0 - (2.0 * i as f64 / n as f64 - 1.0).abs();
            if i == n { GroupElement::identity(&g) } else { group_exp(&g, &a.scale(s)) }
        })
        .collect();
    let p = GroupPath::new(&g, v, true).unwrap();
    let c = contract_loop(&p, &ContractionParams::default()).unwrap();
    assert!(c.final_diameter < 1e-6);
}

fn check_contraction(name: &str, seed: u64) {
    let g = desc(name);
    let p = random_loop(&g, 32, 3, 0.45, seed);
    assert!(p.max_step() <= 0.45);
    let params = ContractionParams::default();
    let c = contract_loop(&p, &params).unwrap();
    assert!(c.final_diameter < 1e-6, "{name} seed {seed}: {}", c.final_diameter);
    let one = GroupElement::identity(&g);
    for (a, b) in c.stages.iter().zip(&c.stages[1..]) {
        assert!(distance(&b.vertices()[0], &one).unwrap() < 1e-12);
        assert!(distance(b.vertices().last().unwrap(), &one).unwrap() < 1e-12);
        for (x, y) in a.vertices().iter().zip(b.vertices()) {
            assert!(distance(x, y).unwrap() <= params.delta_step);
        }
    }
}

#[test]
fn random_loops_contract() {
    for seed in 0..10 {
        check_contraction("SU(2)", seed);
        check_contraction("SU(3)", seed);
    }
}

#[test]
fn random_loop_in_quotient_with_trivial_winding_contracts() {
    check_contraction("G_{2,3}", 3);
}

#[test]
fn stall_is_reported_on_a_closed_geodesic() {
    // a great circle through the identity is a fixed point of midpoint sweeps
    let g = desc("SU(2)");
    let n = 64;
    let v = (0..=n)
        .map(|i| {
            let th = TAU * i as f64 / n as f64;
            GroupElement::from_parts(&g, vec![], vec![linalg::diag_phases(&[th, -th])]).unwrap()
        })
        .collect();
    let p = GroupPath::new(&g, v, true).unwrap();
    let params = ContractionParams { stall_window: 50, max_sweeps: 400, ..Default::default() };
    assert!(matches!(contract_loop(&p, &params), Err(Error::StalledContraction { .. })));
    let perturbed = ContractionParams { perturb: Some(1), max_sweeps: 10_000, ..params };
    let c = contract_loop(&p, &perturbed).unwrap();
    assert!(c.final_diameter < 1e-6);
}

#[test]
fn invalid_paths() {
    let g = desc("SU(2)");
    let one = GroupElement::identity(&g);
    assert!(matches!(GroupPath::new(&g, vec![one.clone()], true), Err(Error::InvalidPath(_))));
    let far = GroupElement::from_parts(&g, vec![], vec![linalg::diag_phases(&[1.0, -1.0])]).unwrap();
    assert!(matches!(GroupPath::new(&g, vec![one.clone(), far.clone()], true), Err(Error::InvalidPath(_))));
    let p = GroupPath::new(&g, vec![one.clone(), far, one], true).unwrap();
    assert!(matches!(contract_loop(&p, &ContractionParams::default()), Err(Error::InvalidPath(_))));
}

#[test]
fn circle_windings() {
    let t1 = desc("T^1");
    let p = circle_loop(&t1, 1.0, 16);
    assert_eq!(winding_vector(&p).unwrap(), Winding { turns: vec![1], denominator: 1, holonomy: 0 });
    assert_eq!(winding_vector(&circle_loop(&t1, -2.0, 32)).unwrap().turns, vec![-2]);
    assert!(matches!(
        contract_loop(&p, &ContractionParams { delta_step: 1.0, ..Default::default() }),
        Err(Error::NontrivialWinding { .. })
    ));
    // two vertices half a turn apart
    assert!(matches!(winding_vector(&circle_loop(&t1, 1.0, 2)), Err(Error::AmbiguousWinding { step: 0, coordinate: 0 })));
}

#[test]
fn unitary_determinant_winding() {
    // t -> diag(e^{2 pi i t}, 1) in U(2), lifted as (pi t, diag(e^{i pi t}, e^{-i pi t}))
    let u2 = desc("U(2)");
    let n = 24;
    let v = (0..=n)
        .map(|i| {
            let s = i as f64 / n as f64;
            let h = PI * s;
            GroupElement::from_parts(&u2, vec![h], vec![linalg::diag_phases(&[h, -h])]).unwrap()
        })
        .collect();
    let p = GroupPath::new(&u2, v, true).unwrap();
    let w = winding_vector(&p).unwrap();
    assert_eq!(w.denominator, 2);
    assert_eq!(w.turns, vec![1]);
    assert_ne!(w.holonomy, 0);
}

#[test]
fn quotient_holonomy_is_detected() {
    // t -> diag(e^{i pi t}, e^{-i pi t}) ends at -I, a closed loop in SO(3)
    let so3 = desc("G_{1,2}");
    let n = 16;
    let v = (0..=n)
        .map(|i| {
            let h = PI * i as f64 / n as f64;
            GroupElement::from_parts(&so3, vec![], vec![linalg::diag_phases(&[h, -h])]).unwrap()
        })
        .collect();
    let p = GroupPath::new(&so3, v, true).unwrap();
    let w = winding_vector(&p).unwrap();
    assert!(w.turns.is_empty());
    assert_eq!(w.holonomy, 1);
    assert!(matches!(contract_loop(&p, &ContractionParams::default()), Err(Error::NontrivialWinding { .. })));
    // traversed twice it is null-homotopic
    assert!(winding_vector(&p.concat(&p).unwrap()).unwrap().is_trivial());
}

#[test]
fn homotopy_grid_is_valid() {
    let g = desc("SU(2)");
    let gamma = random_loop(&g, 16, 2, 0.45, 5);
    let h = coordinate_loop_homotopy(&gamma, 0, 2, &ContractionParams::default()).unwrap();
    assert_eq!(h.grid.len(), 17);
    assert!(h.grid.iter().all(|row| row.len() == 17));
    assert_eq!(h.max_residual(), 0.0);
    let one = GroupElement::identity(&g);
    for (x, row0) in gamma.vertices().iter().zip(&h.grid[0]) {
        assert!(distance(&row0.elements()[0], x).unwrap() <= 1e-9);
        assert!(distance(&row0.elements()[1], &one).unwrap() == 0.0);
    }
    for t in &h.grid[16] {
        for x in t.elements() {
            assert!(distance(x, &one).unwrap() <= 1e-9);
        }
    }
    assert!(coordinate_loop_homotopy(&gamma, 2, 2, &ContractionParams::default()).is_err());
}

#[test]
fn trivial_tuple_path_is_constant() {
    let g = desc("SU(3)");
    let t = CommutingTuple::trivial(&g, 2).unwrap();
    let path = path_to_identity(&t, &PathOptions::default()).unwrap();
    let one = GroupElement::identity(&g);
    for tup in &path {
        for x in tup.elements() {
            assert!(distance(x, &one).unwrap() < 1e-12);
        }
    }
}

#[test]
fn exotic_tuple_has_no_path_to_identity() {
    let g = desc("G_{3,2}");
    let f = Fingerprint::from_entries(2, 2, vec![1]).unwrap();
    let t = sample_exotic(&g, 2, &f, 0).unwrap();
    assert_eq!(path_to_identity(&t, &PathOptions::default()).unwrap_err(), Error::NotInIdentityComponent);
}

#[test]
fn path_through_branch_cut_conjugator() {
    // sorting the joint columns swaps the first two, so the diagonalizing
    // conjugator is a transposition with eigenvalue -1
    let g = desc("SU(3)");
    let x = GroupElement::from_parts(&g, vec![], vec![linalg::diag_phases(&[1.0, 0.5, -1.5])]).unwrap();
    let t = CommutingTuple::new(&g, vec![x.clone(), x]).unwrap();
    let pre = joint_diagonalize(&t, tol::COMM).unwrap();
    assert!(matches!(group_log(&pre.conjugator), Err(Error::BranchCut { .. })));
    let path = path_to_identity(&t, &PathOptions::default()).unwrap();
    assert!(tuple_path_max_residual(&path) <= 1e-9);
    assert!(tuple_path_max_step(&path) < 1.0);
}

fn check_path(name: &str, k: usize, seed: u64) {
    let g = desc(name);
    let t = sample_identity_component(&g, k, seed).unwrap();
    let path = path_to_identity(&t, &PathOptions { seed, ..Default::default() }).unwrap();
    assert!(tuple_path_max_residual(&path) <= 1e-9, "{name}");
    for w in &path {
        assert!(validate_tuple(w, tol::COMM).unwrap().passed);
    }
    let one = GroupElement::identity(&g);
    for x in path.last().unwrap().elements() {
        assert!(distance(x, &one).unwrap() < 1e-12);
    }
    for (x, y) in path[0].elements().iter().zip(t.elements()) {
        assert!(distance(x, y).unwrap() == 0.0);
    }
    for (x, y) in path[1].elements().iter().zip(t.elements()) {
        assert!(distance(x, y).unwrap() < 1.0);
    }
}

#[test]
fn paths_to_identity_commute() {
    for seed in 0..20 {
        check_path("SU(3)", 3, seed);
        check_path("U(2)", 2, seed);
        check_path("G_{3,2}", 4, seed);
    }
}

#[test]
fn path_json_roundtrip() {
    let g = desc("SU(2)");
    let p = random_loop(&g, 8, 1, 0.45, 1);
    let s = serde_json::to_string(&p.to_wire()).unwrap();
    let back = GroupPath::from_wire(&serde_json::from_str(&s).unwrap()).unwrap();
    assert_eq!(back.segments(), 8);
    assert!(back.is_closed());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn windings_add_under_concatenation(a in -3i32..4, b in -3i32..4, ma in 8usize..20, mb in 8usize..20) {
        let t1 = desc("T^1");
        let p = circle_loop(&t1, a as f64, ma * (1 + a.unsigned_abs() as usize));
        let q = circle_loop(&t1, b as f64, mb * (1 + b.unsigned_abs() as usize));
        let w = winding_vector(&p.concat(&q).unwrap()).unwrap();
        prop_assert_eq!(w.turns, vec![(a + b) as i64]);
    }

    #[test]
    fn winding_is_refinement_invariant(a in -2i32..3, parts in 1usize..4) {
        let t2 = desc("T^2");
        let p = circle_loop(&t2, a as f64, 12 * (1 + a.unsigned_abs() as usize));
        let r = p.refine(parts).unwrap();
        prop_assert_eq!(winding_vector(&r).unwrap(), winding_vector(&p).unwrap());
    }

    #[test]
    fn path_waypoints_stay_in_identity_component(seed in any::<u64>()) {
        let g = desc("G_{2,3}");
        let t = sample_identity_component(&g, 2, seed).unwrap();
        let path = path_to_identity(&t, &PathOptions { steps: 8, ..Default::default() }).unwrap();
        for w in &path {
            prop_assert_eq!(classify_component(w).unwrap(), ComponentClass::IdentityComponent);
        }
    }
}
