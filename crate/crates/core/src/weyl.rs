//! Maximal torus machinery: the conjugation map `sigma_k`, its constructive
//! inverse by joint diagonalization, Weyl regularity and the section `s`.
//!
//! For `SU(n)` the maximal torus is the diagonal subgroup and the Weyl group is
//! `S_n` permuting diagonal entries; for a product the Weyl group is the product
//! of the factors' symmetric groups and circle factors contribute nothing.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::commvar::CommutingTuple;
use crate::matgroup::linalg::{self, CMat};
use crate::matgroup::{self, rng_from_seed, ElementWire, GroupDescriptor, GroupElement};
use crate::{tol, Error, Result};

/// Angles of `k` torus elements: `factors[f][i][j]` is the `j`-th diagonal phase
/// of coordinate `i` in special unitary factor `f`; `torus[i]` the circle angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusTuple {
    pub factors: Vec<Vec<Vec<f64>>>,
    pub torus: Vec<Vec<f64>>,
}

impl TorusTuple {
    pub fn k(&self) -> usize {
        self.torus.len()
    }

    /// The all-zero tuple, i.e. `(1_G, ..., 1_G)`.
    pub fn zero(d: &GroupDescriptor, k: usize) -> Self {
        TorusTuple {
            factors: d.su_factors().iter().map(|&p| vec![vec![0.0; p]; k]).collect(),
            torus: vec![vec![0.0; d.torus_rank()]; k],
        }
    }

    pub fn validate(&self, d: &GroupDescriptor) -> Result<()> {
        let k = self.k();
        let bad = |m: String| Err(Error::InvalidElement(m));
        if self.factors.len() != d.su_factors().len() || self.torus.iter().any(|t| t.len() != d.torus_rank()) {
            return bad("torus tuple shape does not match the descriptor".into());
        }
        for (f, (angles, &p)) in self.factors.iter().zip(d.su_factors()).enumerate() {
            if angles.len() != k || angles.iter().any(|a| a.len() != p) {
                return bad(format!("factor {f} has the wrong number of angles"));
            }
            for (i, a) in angles.iter().enumerate() {
                let sum: f64 = a.iter().sum();
                if linalg::wrap_pi(sum).abs() > tol::UNIT {
                    return bad(format!("angles of coordinate {i} in factor {f} do not sum to 0 mod 2pi"));
                }
            }
        }
        Ok(())
    }

    /// Joint column `j` of factor `f`: `(t_1[j], ..., t_k[j])`.
    fn column(&self, f: usize, j: usize) -> Vec<f64> {
        self.factors[f].iter().map(|a| a[j]).collect()
    }
}

/// A representative `(g, t_1, ..., t_k)` of a point of `G x_{N(T)} T^k`.
#[derive(Debug, Clone)]
pub struct SigmaPreimage {
    pub conjugator: GroupElement,
    pub torus: TorusTuple,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PreimageWire {
    pub descriptor: GroupDescriptor,
    pub conjugator: ElementWire,
    pub torus: TorusTuple,
}

impl SigmaPreimage {
    pub fn new(conjugator: GroupElement, torus: TorusTuple) -> Result<Self> {
        torus.validate(conjugator.descriptor())?;
        Ok(SigmaPreimage { conjugator, torus })
    }

    pub fn descriptor(&self) -> &Arc<GroupDescriptor> {
        self.conjugator.descriptor()
    }

    pub fn k(&self) -> usize {
        self.torus.k()
    }

    /// Haar conjugator and uniformly random torus angles.
    pub fn random<R: Rng + ?Sized>(d: &Arc<GroupDescriptor>, k: usize, rng: &mut R) -> Self {
        let tau = std::f64::consts::TAU;
        let factors = d
            .su_factors()
            .iter()
            .map(|&p| {
                (0..k)
                    .map(|_| {
                        let mut a: Vec<f64> = (0..p - 1).map(|_| rng.random_range(0.0..tau)).collect();
                        a.push(linalg::wrap_tau(-a.iter().sum::<f64>()));
                        a
                    })
                    .collect()
            })
            .collect();
        let torus = (0..k).map(|_| (0..d.torus_rank()).map(|_| rng.random_range(0.0..tau)).collect()).collect();
        let g = matgroup::haar_sample_with(d, rng);
        let conjugator = GroupElement::from_parts_unchecked(d, vec![0.0; d.torus_rank()], g.factors().to_vec());
        SigmaPreimage { conjugator, torus: TorusTuple { factors, torus } }
    }

    pub fn to_wire(&self) -> PreimageWire {
        PreimageWire {
            descriptor: (**self.descriptor()).clone(),
            conjugator: self.conjugator.to_wire(),
            torus: self.torus.clone(),
        }
    }

    pub fn from_wire(w: &PreimageWire) -> Result<Self> {
        let d = Arc::new(w.descriptor.clone());
        Self::new(GroupElement::from_wire(&d, &w.conjugator)?, w.torus.clone())
    }
}

/// `[(g, t_1, ..., t_k)] -> (g t_1 g^{-1}, ..., g t_k g^{-1})`.
pub fn sigma_k(pre: &SigmaPreimage) -> CommutingTuple {
    let d = pre.descriptor();
    let g = pre.conjugator.factors();
    let elements = (0..pre.k())
        .map(|i| {
            let factors = pre
                .torus
                .factors
                .iter()
                .zip(g)
                .map(|(angles, gf)| gf * linalg::diag_phases(&angles[i]) * gf.adjoint())
                .collect();
            GroupElement::from_parts_unchecked(d, pre.torus.torus[i].clone(), factors)
        })
        .collect();
    CommutingTuple::new(d, elements).expect("non-empty tuple over one descriptor")
}

/// `s([g]) = [g, (1_G, ..., 1_G)]`.
pub fn section_s(g: &GroupElement, k: usize) -> SigmaPreimage {
    let d = g.descriptor();
    let conjugator = GroupElement::from_parts_unchecked(d, vec![0.0; d.torus_rank()], g.factors().to_vec());
    SigmaPreimage { conjugator, torus: TorusTuple::zero(d, k) }
}

/// Circular comparison of canonical angles with tolerance.
fn angle_eq(a: f64, b: f64, eps: f64) -> bool {
    linalg::wrap_pi(a - b).abs() <= eps
}

fn cmp_columns(a: &[f64], b: &[f64], eps: f64) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if angle_eq(*x, *y, eps) {
            continue;
        }
        return linalg::wrap_tau(*x).total_cmp(&linalg::wrap_tau(*y));
    }
    Ordering::Equal
}

/// Tolerance for calling two joint columns equal.
pub const COLUMN_EQ: f64 = tol::CLUSTER;

/// Weyl normal form.
///
/// Per special unitary factor: joint angle columns canonicalized to `[0, 2pi)`
/// and sorted lexicographically (stable, so equal columns keep their order),
/// the conjugator's columns permuted alongside; then the torus gauge is fixed by
/// making the first sizeable entry of every column but the last real positive,
/// with the last column absorbing the determinant.
pub fn weyl_normal_form(pre: &SigmaPreimage) -> SigmaPreimage {
    let d = pre.descriptor().clone();
    let k = pre.k();
    let mut factors_out = Vec::with_capacity(d.su_factors().len());
    let mut angles_out = Vec::with_capacity(d.su_factors().len());
    for (f, &n) in d.su_factors().iter().enumerate() {
        let g = &pre.conjugator.factors()[f];
        let mut order: Vec<usize> = (0..n).collect();
        let cols: Vec<Vec<f64>> = (0..n).map(|j| pre.torus.column(f, j)).collect();
        order.sort_by(|&a, &b| cmp_columns(&cols[a], &cols[b], COLUMN_EQ));
        let mut gn = CMat::from_columns(&order.iter().map(|&j| g.column(j).into_owned()).collect::<Vec<_>>());
        let threshold = 0.5 / (n as f64).sqrt();
        for j in 0..n - 1 {
            let pivot = (0..n).find(|&l| gn[(l, j)].norm() > threshold).expect("unit column");
            let z = gn[(pivot, j)];
            let phase = z.conj() / z.norm();
            for l in 0..n {
                gn[(l, j)] *= phase;
            }
        }
        let det = gn.determinant();
        let fix = det.conj() / det.norm();
        for l in 0..n {
            gn[(l, n - 1)] *= fix;
        }
        factors_out.push(gn);
        angles_out.push(
            (0..k)
                .map(|i| order.iter().map(|&j| linalg::wrap_tau(pre.torus.factors[f][i][j])).collect())
                .collect(),
        );
    }
    let torus = pre.torus.torus.iter().map(|t| t.iter().map(|&a| linalg::wrap_tau(a)).collect()).collect();
    SigmaPreimage {
        conjugator: GroupElement::from_parts_unchecked(&d, vec![0.0; d.torus_rank()], factors_out),
        torus: TorusTuple { factors: angles_out, torus },
    }
}

/// Largest discrepancy between two preimages: Frobenius distance of conjugator
/// factors and circular distance of angles.
pub fn preimage_distance(a: &SigmaPreimage, b: &SigmaPreimage) -> f64 {
    let g = a
        .conjugator
        .factors()
        .iter()
        .zip(b.conjugator.factors())
        .map(|(x, y)| linalg::frobenius_diff(x, y))
        .fold(0.0, f64::max);
    let angles = a
        .torus
        .factors
        .iter()
        .flatten()
        .flatten()
        .chain(a.torus.torus.iter().flatten())
        .zip(b.torus.factors.iter().flatten().flatten().chain(b.torus.torus.iter().flatten()))
        .map(|(x, y)| linalg::wrap_pi(x - y).abs())
        .fold(0.0, f64::max);
    g.max(angles)
}

/// Diagonalize one factor; `order` is the sequence in which coordinates refine.
fn diagonalize_factor(mats: &[&CMat], order: &[usize], f: usize) -> Result<(CMat, Vec<Vec<f64>>)> {
    let n = mats[0].nrows();
    let ordered: Vec<&CMat> = order.iter().map(|&i| mats[i]).collect();
    let blocks = linalg::joint_eigenspaces(&ordered, n, tol::CLUSTER)
        .map_err(|width| Error::IllConditioned { factor: f, width })?;
    let mut angles = vec![Vec::with_capacity(n); mats.len()];
    let mut cols = Vec::with_capacity(n);
    for b in &blocks {
        for (i, m) in mats.iter().enumerate() {
            let theta = linalg::block_eigenvalue(m, b).arg();
            angles[i].extend(std::iter::repeat_n(theta, b.ncols()));
        }
        cols.extend(b.column_iter().map(|c| c.into_owned()));
    }
    let mut v = CMat::from_columns(&cols);
    let det = v.determinant();
    let fix = det.conj() / det.norm();
    for l in 0..n {
        v[(l, 0)] *= fix;
    }
    Ok((v, angles))
}

fn diagonalize(t: &CommutingTuple, tol: f64, mixing: Option<u64>) -> Result<SigmaPreimage> {
    let d = t.descriptor().clone();
    let k = t.k();
    let xs = t.elements();
    for i in 0..k {
        for j in i + 1..k {
            let r = crate::commvar::commutator_residual(&xs[i].lift(), &xs[j].lift());
            if r > tol {
                return Err(Error::NotSimultaneouslyDiagonalizable { residual: r, i, j });
            }
        }
    }
    let mut rng = mixing.map(rng_from_seed);
    let mut conj = Vec::with_capacity(d.su_factors().len());
    let mut angles = Vec::with_capacity(d.su_factors().len());
    for (f, &n) in d.su_factors().iter().enumerate() {
        let mut order: Vec<usize> = (0..k).collect();
        let h = match rng.as_mut() {
            Some(r) => {
                order.shuffle(r);
                matgroup::haar_special_unitary(n, r)
            }
            None => linalg::identity(n),
        };
        let mixed: Vec<CMat> = xs.iter().map(|x| h.adjoint() * &x.factors()[f] * &h).collect();
        let refs: Vec<&CMat> = mixed.iter().collect();
        let (v, a) = diagonalize_factor(&refs, &order, f)?;
        let g = &h * v;
        for (i, x) in xs.iter().enumerate() {
            let r = linalg::frobenius_diff(&(g.adjoint() * &x.factors()[f] * &g), &linalg::diag_phases(&a[i]));
            if r > 10.0 * tol {
                return Err(Error::NotSimultaneouslyDiagonalizable { residual: r, i, j: i });
            }
        }
        conj.push(g);
        angles.push(a);
    }
    let torus = xs.iter().map(|x| x.torus().to_vec()).collect();
    let pre = SigmaPreimage {
        conjugator: GroupElement::from_parts_unchecked(&d, vec![0.0; d.torus_rank()], conj),
        torus: TorusTuple { factors: angles, torus },
    };
    Ok(weyl_normal_form(&pre))
}

/// Constructive converse of "commuting tuples lie in a maximal torus": find `g`
/// and torus angles with `g^{-1} x_i g` diagonal, returned in Weyl normal form.
///
/// Refines eigenspaces of `x_1`, then `x_2` on each of them, and so on. Works on
/// lifts; a tuple whose lifts do not commute (nonzero fingerprint) is rejected.
pub fn joint_diagonalize(t: &CommutingTuple, tol: f64) -> Result<SigmaPreimage> {
    diagonalize(t, tol, None)
}

/// [`joint_diagonalize`] after a random basis change and a random refinement order.
pub fn joint_diagonalize_mixed(t: &CommutingTuple, tol: f64, seed: u64) -> Result<SigmaPreimage> {
    diagonalize(t, tol, Some(seed))
}

/// A Weyl group element: one permutation per special unitary factor,
/// `perm[j]` being the image of `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WeylElement(pub Vec<Vec<usize>>);

impl WeylElement {
    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|p| p.iter().enumerate().all(|(i, &j)| i == j))
    }
}

fn cycles(perm: &[usize]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for s in 0..perm.len() {
        if seen[s] || perm[s] == s {
            continue;
        }
        let mut cyc = Vec::new();
        let mut j = s;
        while !seen[j] {
            seen[j] = true;
            cyc.push((j + 1).to_string());
            j = perm[j];
        }
        out.push_str(&format!("({})", cyc.join(" ")));
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

impl fmt::Display for WeylElement {
    /// Cycle notation per factor, 1-based, factors separated by ` x `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| cycles(p)).collect();
        f.write_str(&parts.join(" x "))
    }
}

/// Stabilizer of a torus tuple in the Weyl group.
#[derive(Debug, Clone, Serialize)]
pub struct RegularityReport {
    pub regular: bool,
    pub order: u128,
    /// Every stabilizer element, unless `order` exceeds [`MAX_LISTED_STABILIZER`].
    pub stabilizer: Vec<WeylElement>,
    /// Classes of equal joint columns per factor.
    pub blocks: Vec<Vec<Vec<usize>>>,
}

pub const MAX_LISTED_STABILIZER: u128 = 1 << 20;

fn permutations_of_blocks(n: usize, blocks: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![(0..n).collect::<Vec<usize>>()];
    for block in blocks.iter().filter(|b| b.len() > 1) {
        let mut next = Vec::new();
        for base in &out {
            for arrangement in all_permutations(block) {
                let mut p = base.clone();
                for (&from, &to) in block.iter().zip(&arrangement) {
                    p[from] = to;
                }
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// All orderings of `items` (Heap's algorithm).
pub fn all_permutations(items: &[usize]) -> Vec<Vec<usize>> {
    let mut a = items.to_vec();
    let n = a.len();
    let mut out = vec![a.clone()];
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Weyl stabilizer of `(t_1, ..., t_k)`: the permutations fixing every joint
/// column. It is the product of the symmetric groups on classes of equal
/// columns, so the tuple is regular iff all joint columns are distinct.
pub fn is_regular(torus: &TorusTuple) -> RegularityReport {
    let mut blocks = Vec::with_capacity(torus.factors.len());
    let mut order: u128 = 1;
    for (f, angles) in torus.factors.iter().enumerate() {
        let n = angles.first().map_or(0, Vec::len);
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for j in 0..n {
            let col = torus.column(f, j);
            match classes
                .iter_mut()
                .find(|c| cmp_columns(&torus.column(f, c[0]), &col, COLUMN_EQ) == Ordering::Equal)
            {
                Some(c) => c.push(j),
                None => classes.push(vec![j]),
            }
        }
        for c in &classes {
            order = order.saturating_mul((1..=c.len() as u128).product());
        }
        blocks.push(classes);
    }
    let stabilizer = if order <= MAX_LISTED_STABILIZER {
        let per_factor: Vec<Vec<Vec<usize>>> = blocks
            .iter()
            .zip(&torus.factors)
            .map(|(b, a)| permutations_of_blocks(a.first().map_or(0, Vec::len), b))
            .collect();
        let mut all = vec![WeylElement(vec![])];
        for perms in per_factor {
            all = all
                .into_iter()
                .flat_map(|w| {
                    perms.iter().map(move |p| {
                        let mut v = w.0.clone();
                        v.push(p.clone());
                        WeylElement(v)
                    })
                })
                .collect();
        }
        all.sort();
        all
    } else {
        Vec::new()
    };
    RegularityReport { regular: order == 1, order, stabilizer, blocks }
}

/// `sigma_k^{-1}` on the regular part: the Weyl normal form of the unique
/// preimage, or `NotRegular` when the diagonalized torus tuple has a nontrivial
/// stabilizer.
pub fn sigma_inverse_regular(t: &CommutingTuple) -> Result<SigmaPreimage> {
    sigma_inverse_regular_tol(t, tol::COMM)
}

pub fn sigma_inverse_regular_tol(t: &CommutingTuple, tol: f64) -> Result<SigmaPreimage> {
    let pre = joint_diagonalize(t, tol)?;
    let report = is_regular(&pre.torus);
    if !report.regular {
        return Err(Error::NotRegular { order: report.order });
    }
    Ok(pre)
}

/// Random torus tuple whose `n` joint columns are pairwise distinct, with a Haar conjugator.
pub fn random_regular_preimage<R: Rng + ?Sized>(d: &Arc<GroupDescriptor>, k: usize, rng: &mut R) -> SigmaPreimage {
    loop {
        let pre = SigmaPreimage::random(d, k, rng);
        if is_regular(&pre.torus).regular {
            return pre;
        }
    }
}
