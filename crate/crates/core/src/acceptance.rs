//! End-to-end acceptance battery. Each criterion runs its own workload and
//! returns a [`CriterionReport`]; [`run_all`] runs them in order.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::central::{all_deck_elements, classify_component, fingerprint, ComponentClass, Fingerprint};
use crate::commvar::{conjugate_tuple, sample_exotic_with, sample_identity_component_with, validate_tuple};
use crate::finmodel::{self, census_commuting, census_fingerprints, count_components_formula, extraspecial, rank_two_form_count};
use crate::homotopy::{self, contract_loop, coordinate_loop_homotopy, path_to_identity, ContractionParams, PathOptions};
use crate::matgroup::{self, haar_sample_with, rng_from_seed, CentralElement, GroupDescriptor, RootOfUnity};
use crate::pi1::{self, check_exact_sequence, pi1_of_hom, CatalogGroup, FgAbelianGroup, Pi1Answer};
use crate::weyl::{joint_diagonalize_mixed, preimage_distance, random_regular_preimage, sigma_inverse_regular, sigma_k, weyl_normal_form};
use crate::{tol, Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl std::fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} [{}] {} ({:.2}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

fn timed(id: u32, name: &'static str, limit: Duration, body: impl FnOnce() -> Result<(bool, String)>) -> CriterionReport {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match outcome {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    if elapsed > limit {
        passed = false;
        detail.push_str(&format!("; runtime {:.1}s exceeds {:.0}s", elapsed.as_secs_f64(), limit.as_secs_f64()));
    }
    CriterionReport { id, name, passed, detail, seconds: elapsed.as_secs_f64() }
}

fn desc(name: &str) -> Arc<GroupDescriptor> {
    Arc::new(GroupDescriptor::parse(name).expect("catalog name"))
}

/// `N(2,3,2) = 2`, `N(3,3,2) = 29`, `N(2,1,2) = 2`, in under a second.
pub fn component_counts() -> CriterionReport {
    timed(1, "component counts", Duration::from_secs(1), || {
        let cases = [((2, 3, 2), 2u128), ((3, 3, 2), 29), ((2, 1, 2), 2)];
        let mut ok = true;
        let mut parts = Vec::new();
        for ((k, m, p), want) in cases {
            let got = count_components_formula(k, m, p)?;
            ok &= got == want;
            parts.push(format!("N({k},{m},{p})={got}"));
        }
        Ok((ok, parts.join(", ")))
    })
}

/// Rank <= 2 test via 4x4 Pfaffians, independent of elimination.
fn pfaffians_vanish(f: &Fingerprint) -> bool {
    let p = f.modulus();
    let k = f.k();
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                for d in c + 1..k {
                    let plus = (f.get(a, b) * f.get(c, d) + f.get(a, d) * f.get(b, c)) % p;
                    if plus != f.get(a, c) * f.get(b, d) % p {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn nonzero_rank_two_forms(p: u64, k: usize) -> usize {
    let n = k * (k - 1) / 2;
    (1..p.pow(n as u32))
        .filter(|&code| {
            let mut c = code;
            let e: Vec<u64> = (0..n)
                .map(|_| {
                    let v = c % p;
                    c /= p;
                    v
                })
                .collect();
            pfaffians_vanish(&Fingerprint::from_entries(p, k, e).expect("reduced"))
        })
        .count()
}

/// Exhaustive censuses in `E_p` against the rank-two form count, single-threaded.
pub fn finite_census() -> CriterionReport {
    timed(2, "finite census vs formula", Duration::from_secs(120), || {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(|e| Error::BadArguments(e.to_string()))?;
        pool.install(|| {
            let mut ok = true;
            let mut parts = Vec::new();
            for p in [2u32, 3] {
                let e = extraspecial(p)?;
                let mut counts = Vec::new();
                for k in 2..=4usize {
                    let h = census_fingerprints(&e, e.center(), k)?;
                    let realized = h.keys().filter(|f| !f.is_zero()).count();
                    let formula = rank_two_form_count(k as u32, p as u64)?;
                    let oracle = nonzero_rank_two_forms(p as u64, k);
                    ok &= realized as u128 == formula && realized == oracle;
                    ok &= h.keys().all(|f| finmodel::rank_alternating(f) <= 2);
                    counts.push(realized.to_string());
                }
                parts.push(format!("p={p}: {{{}}}", counts.join(",")));
            }
            let q8 = extraspecial(2)?;
            let e3 = extraspecial(3)?;
            let centralizer_sum = |g: &finmodel::FinGroup| -> u64 {
                (0..g.order()).map(|a| (0..g.order()).filter(|&b| g.mul(a, b) == g.mul(b, a)).count() as u64).sum()
            };
            let q8_comm = census_commuting(&q8, 2)?;
            let q8_almost: u64 = census_fingerprints(&q8, q8.center(), 2)?.values().sum();
            let e3_comm = census_commuting(&e3, 2)?;
            ok &= q8_comm == 40 && q8_comm == centralizer_sum(&q8);
            ok &= q8_almost == 64;
            ok &= e3_comm == 297 && e3_comm == centralizer_sum(&e3);
            parts.push(format!("Q8 commuting pairs {q8_comm}, almost-commuting {q8_almost}; E3 commuting pairs {e3_comm}"));
            Ok((ok, parts.join("; ")))
        })
    })
}

/// sigma_k round trips on 1000 regular tuples, `n in 2..=6`, `k in 2..=4`.
pub fn sigma_roundtrip() -> CriterionReport {
    timed(3, "sigma_k roundtrip", Duration::from_secs(60), || {
        let results: Vec<Result<(f64, f64)>> = (0..1000u64)
            .into_par_iter()
            .map(|i| {
                let n = 2 + (i % 5) as usize;
                let k = 2 + ((i / 5) % 3) as usize;
                let g = desc(&format!("SU({n})"));
                let mut rng = rng_from_seed(0xacce_0003 ^ i);
                let pre = random_regular_preimage(&g, k, &mut rng);
                let t = sigma_k(&pre);
                let back = sigma_inverse_regular(&t)?;
                let e1 = preimage_distance(&back, &weyl_normal_form(&pre));
                let again = sigma_k(&back);
                let e2 = again
                    .elements()
                    .iter()
                    .zip(t.elements())
                    .map(|(x, y)| matgroup::lift_distance(x, y).expect("same group"))
                    .fold(0.0, f64::max);
                Ok((e1, e2))
            })
            .collect();
        let alarms = results.iter().filter(|r| matches!(r, Err(Error::NotRegular { .. }))).count();
        let other = results.iter().filter(|r| matches!(r, Err(e) if !matches!(e, Error::NotRegular { .. }))).count();
        let (e1, e2) = results.iter().flatten().fold((0.0f64, 0.0f64), |acc, &(a, b)| (acc.0.max(a), acc.1.max(b)));
        let ok = alarms == 0 && other == 0 && e1 <= 1e-9 && e2 <= 1e-9;
        Ok((ok, format!("max preimage error {e1:.2e}, max tuple error {e2:.2e}, NotRegular {alarms}, other errors {other}")))
    })
}

/// Independent re-diagonalizations of 200 regular tuples agree.
pub fn regular_injectivity() -> CriterionReport {
    timed(4, "injectivity on the regular part", Duration::from_secs(60), || {
        let errs: Vec<Result<f64>> = (0..200u64)
            .into_par_iter()
            .map(|i| {
                let n = 2 + (i % 5) as usize;
                let g = desc(&format!("SU({n})"));
                let pre = random_regular_preimage(&g, 2 + (i % 3) as usize, &mut rng_from_seed(0xacce_0004 ^ i));
                let t = sigma_k(&pre);
                let a = joint_diagonalize_mixed(&t, tol::COMM, 2 * i + 1)?;
                let b = joint_diagonalize_mixed(&t, tol::COMM, 2 * i + 2)?;
                let c = sigma_inverse_regular(&t)?;
                Ok(preimage_distance(&a, &b).max(preimage_distance(&a, &c)))
            })
            .collect();
        let failures = errs.iter().filter(|e| e.is_err()).count();
        let worst = errs.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
        Ok((failures == 0 && worst <= 1e-9, format!("max disagreement {worst:.2e}, errors {failures}")))
    })
}

/// A random nonzero form `u ^ w` over `F_p`.
fn random_rank_two(p: u64, k: usize, rng: &mut impl Rng) -> Fingerprint {
    loop {
        let u: Vec<u64> = (0..k).map(|_| rng.random_range(0..p)).collect();
        let w: Vec<u64> = (0..k).map(|_| rng.random_range(0..p)).collect();
        let mut e = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                e.push((u[i] * w[j] % p + p - u[j] * w[i] % p) % p);
            }
        }
        let f = Fingerprint::from_entries(p, k, e).expect("reduced");
        if !f.is_zero() {
            return f;
        }
    }
}

/// Identity and exotic samples classify as requested; fingerprints survive
/// conjugation and every deck translate.
pub fn classification_soundness() -> CriterionReport {
    timed(5, "component classification soundness", Duration::from_secs(300), || {
        let ident_groups = ["G_{3,2}", "G_{2,3}", "SU(3)", "U(2)", "T^2"];
        let ident_ok = (0..500u64)
            .into_par_iter()
            .map(|i| -> Result<bool> {
                let g = desc(ident_groups[(i % 5) as usize]);
                let mut rng = rng_from_seed(0xacce_0005 ^ i);
                let t = sample_identity_component_with(&g, 2 + (i % 3) as usize, &mut rng)?;
                Ok(classify_component(&t)? == ComponentClass::IdentityComponent)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|&b| b)
            .count();
        let exotic_ok = (0..500u64)
            .into_par_iter()
            .map(|i| -> Result<bool> {
                let (name, p) = if i % 2 == 0 { ("G_{3,2}", 2) } else { ("G_{2,3}", 3) };
                let g = desc(name);
                let mut rng = rng_from_seed(0xacce_1005 ^ i);
                let k = 2 + (i % 3) as usize;
                let target = random_rank_two(p, k, &mut rng);
                let t = sample_exotic_with(&g, k, &target, &mut rng)?;
                Ok(validate_tuple(&t, tol::COMM)?.passed && classify_component(&t)? == ComponentClass::Exotic(target))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|&b| b)
            .count();
        // invariance checks
        let mut conj_ok = 0;
        let mut deck_checked = 0usize;
        let mut deck_ok = true;
        for (name, p) in [("G_{3,2}", 2u64), ("G_{2,3}", 3)] {
            let g = desc(name);
            let mut rng = rng_from_seed(0xacce_2005 ^ p);
            for k in 2..=4usize {
                let target = random_rank_two(p, k, &mut rng);
                let t = sample_exotic_with(&g, k, &target, &mut rng)?;
                if k == 2 {
                    for _ in 0..100 {
                        let c = conjugate_tuple(&t, &haar_sample_with(&g, &mut rng))?;
                        conj_ok += usize::from(classify_component(&c)? == ComponentClass::Exotic(target.clone()));
                    }
                }
                let decks = all_deck_elements(&g, k);
                if decks.len() <= 81 {
                    for kappa in decks {
                        deck_checked += 1;
                        deck_ok &= fingerprint(&crate::central::deck_action(&kappa, &t)?, tol::COMM)? == target;
                    }
                }
            }
        }
        let ok = ident_ok == 500 && exotic_ok == 500 && conj_ok == 200 && deck_ok;
        Ok((
            ok,
            format!(
                "identity {ident_ok}/500, exotic {exotic_ok}/500, conjugations {conj_ok}/200, deck translates {deck_checked} checked {}",
                if deck_ok { "ok" } else { "with changes" }
            ),
        ))
    })
}

/// Loop contraction, coordinate-loop homotopy grids and paths to the identity.
pub fn explicit_homotopies() -> CriterionReport {
    timed(6, "explicit homotopies", Duration::from_secs(300), || {
        let params = ContractionParams::default();
        let loops: Vec<(String, u64)> =
            ["SU(2)", "SU(3)"].iter().flat_map(|n| (0..100u64).map(move |s| (n.to_string(), s))).collect();
        let contraction: Vec<Result<f64>> = loops
            .par_iter()
            .map(|(name, s)| {
                let gamma = homotopy::random_loop(&desc(name), 32, 3, 0.45, 0xacce_0006 ^ s);
                Ok(contract_loop(&gamma, &params)?.final_diameter)
            })
            .collect();
        let contraction_fail = contraction.iter().filter(|r| !matches!(r, Ok(d) if *d < 1e-6)).count();
        let grids: Vec<Result<(f64, usize)>> = loops
            .par_iter()
            .map(|(name, s)| {
                let gamma = homotopy::random_loop(&desc(name), 64, 3, 0.45, 0xacce_1006 ^ s);
                let h = coordinate_loop_homotopy(&gamma, (*s % 2) as usize, 2, &params)?;
                let mut worst = 0.0f64;
                for t in h.grid.iter().flatten() {
                    worst = worst.max(validate_tuple(t, 0.0)?.residual);
                }
                Ok((worst, h.grid.len() * h.grid[0].len()))
            })
            .collect();
        let grid_fail = grids.iter().filter(|r| !matches!(r, Ok((w, n)) if *w == 0.0 && *n == 65 * 65)).count();
        let path_groups = ["SU(3)", "SU(2)", "U(2)", "G_{3,2}"];
        let paths: Vec<Result<f64>> = (0..100u64)
            .into_par_iter()
            .map(|i| {
                let g = desc(path_groups[(i % 4) as usize]);
                let k = 1 + (i % 4) as usize;
                let t = sample_identity_component_with(&g, k, &mut rng_from_seed(0xacce_2006 ^ i))?;
                let path = path_to_identity(&t, &PathOptions { seed: i, ..Default::default() })?;
                Ok(homotopy::tuple_path_max_residual(&path))
            })
            .collect();
        let worst_path = paths.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
        let path_fail = paths.iter().filter(|r| !matches!(r, Ok(w) if *w <= 1e-9)).count();
        let ok = contraction_fail == 0 && grid_fail == 0 && path_fail == 0;
        Ok((
            ok,
            format!(
                "contractions failed {contraction_fail}/200, grids failed {grid_fail}/200, paths failed {path_fail}/100 (max residual {worst_path:.2e})"
            ),
        ))
    })
}

/// Fundamental group tables.
pub fn pi1_tables() -> CriterionReport {
    timed(7, "pi_1 tables", Duration::from_secs(10), || {
        let id = ComponentClass::IdentityComponent;
        let cat = |n: &str| CatalogGroup::parse(n);
        let mut ok = true;
        let mut parts = Vec::new();
        for n in 2..=6 {
            for k in 1..=4 {
                ok &= pi1_of_hom(&cat(&format!("SU({n})"))?, k, &id)? == Pi1Answer::Abelian(FgAbelianGroup::trivial());
            }
        }
        for r in 1..=3 {
            for k in 1..=4 {
                ok &= pi1_of_hom(&cat(&format!("T^{r}"))?, k, &id)? == Pi1Answer::Abelian(FgAbelianGroup::free(r * k));
            }
        }
        for (m, p) in [(1usize, 2u64), (3, 2), (2, 3), (3, 5)] {
            let g = cat(&format!("G_{{{m},{p}}}"))?;
            for k in 1..=4 {
                let want = FgAbelianGroup { free_rank: 0, torsion: vec![p; k] };
                ok &= pi1_of_hom(&g, k, &id)? == Pi1Answer::Abelian(want);
            }
            let mut answers = Vec::new();
            for k in 2..=6usize {
                let mut e = vec![0; k * (k - 1) / 2];
                e[0] = 1;
                answers.push(pi1_of_hom(&g, k, &ComponentClass::Exotic(Fingerprint::from_entries(p, k, e)?))?);
            }
            let order_ok = answers.iter().all(|a| a.order() == Some((p as u128).pow(m as u32 + 2)));
            let k_free = answers.windows(2).all(|w| w[0] == w[1]);
            ok &= order_ok && k_free;
            parts.push(format!("G_{{{m},{p}}} exotic: {} (order {})", answers[0].name(), answers[0].order().unwrap_or(0)));
        }
        let spin = pi1_of_hom(&cat("Spin(7)")?, 3, &ComponentClass::Exotic(Fingerprint::from_entries(2, 3, vec![1, 0, 0])?))?;
        ok &= spin.name() == "(Z/2)^4" && spin.order() == Some(16);
        let g32 = pi1_of_hom(&cat("G_{3,2}")?, 3, &ComponentClass::Exotic(Fingerprint::from_entries(2, 3, vec![1, 0, 0])?))?;
        ok &= g32.name() == "(Z/2)^2 x Q8" && g32.order() == Some(32);
        parts.push(format!("Spin(7) exotic: {} (order {})", spin.name(), spin.order().unwrap_or(0)));
        Ok((ok, parts.join("; ")))
    })
}

fn exactness_fixture(r: usize) -> Result<GroupDescriptor> {
    match r {
        0 => GroupDescriptor::g_mp(1, 2),
        1 => GroupDescriptor::unitary(2),
        _ => {
            let t = RootOfUnity::new(1, 3)?;
            let gen = CentralElement { torus: vec![t, RootOfUnity::ONE], factors: vec![t] };
            GroupDescriptor::new(2, vec![3], vec![gen])
        }
    }
}

/// Exactness of `1 -> (Z^r)^k -> pi_1(G)^k -> K^k -> 1` and a mutation test.
pub fn exactness_bookkeeping() -> CriterionReport {
    timed(8, "exactness bookkeeping", Duration::from_secs(10), || {
        let mut ok = true;
        let mut parts = Vec::new();
        for (r, korder, k) in [(0usize, 2u128, 2usize), (1, 2, 2), (2, 3, 3)] {
            let d = exactness_fixture(r)?;
            let s = pi1::covering_sequence(&d, k)?;
            let exact = check_exact_sequence(&s.a, &s.b, &s.c, &s.f, &s.g).is_ok();
            let b = s.b.group()?;
            let index = pi1::cokernel(&s.b, &s.f, s.a.generators)?.order();
            let mut bookkeeping = b.free_rank == r * k && index == Some(korder.pow(k as u32));
            if r == 0 {
                bookkeeping &= b.torsion_order() == korder.pow(k as u32);
            }
            // mutation: kill the image of the first generator that reaches K^k
            let mut g = s.g.clone();
            if let Some((i, j)) = (0..g.len()).flat_map(|i| (0..g[i].len()).map(move |j| (i, j))).find(|&(i, j)| g[i][j] != 0) {
                g[i][j] = 0;
            }
            let mutant = matches!(check_exact_sequence(&s.a, &s.b, &s.c, &s.f, &g), Err(Error::NotExact(_)));
            ok &= exact && bookkeeping && mutant;
            parts.push(format!(
                "r={r}, |K|={korder}, k={k}: exact {exact}, pi_1 = {b}, [B : im A] = {}, mutant rejected {mutant}",
                index.map_or("inf".to_string(), |x| x.to_string())
            ));
        }
        Ok((ok, parts.join("; ")))
    })
}

/// All criteria, in order.
pub fn run_all() -> Vec<CriterionReport> {
    vec![
        component_counts(),
        finite_census(),
        sigma_roundtrip(),
        regular_injectivity(),
        classification_soundness(),
        explicit_homotopies(),
        pi1_tables(),
        exactness_bookkeeping(),
    ]
}

