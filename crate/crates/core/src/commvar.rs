//! The commuting variety: tuples, validation, samplers and conjugation.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::central::Fingerprint;
use crate::finmodel::rank_alternating;
use crate::matgroup::linalg::{self, CMat, Complex64};
use crate::matgroup::{self, haar_sample_with, rng_from_seed, ElementWire, GroupDescriptor, GroupElement};
use crate::weyl::{sigma_k, SigmaPreimage};
use crate::{tol, Error, Result};

/// An ordered k-tuple of elements of one group, with its commutator residual.
#[derive(Debug, Clone)]
pub struct CommutingTuple {
    descriptor: Arc<GroupDescriptor>,
    elements: Vec<GroupElement>,
    residual: f64,
}

/// Outcome of [`validate_tuple`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub residual: f64,
    /// Pair realizing the residual (0-based), `None` for `k = 1`.
    pub worst_pair: Option<(usize, usize)>,
    pub passed: bool,
}

/// Deviation of `x, y` from commuting, measured modulo `K` for coset elements:
/// `min_kappa sum_f ||x_f y_f - kappa_f y_f x_f||_F`.
pub fn commutator_residual(x: &GroupElement, y: &GroupElement) -> f64 {
    let d = x.descriptor();
    let xy: Vec<CMat> = x.factors().iter().zip(y.factors()).map(|(a, b)| a * b).collect();
    let yx: Vec<CMat> = x.factors().iter().zip(y.factors()).map(|(a, b)| b * a).collect();
    let deviation = |idx: usize| -> f64 {
        let c = &d.central_subgroup()[idx];
        xy.iter()
            .zip(&yx)
            .zip(&c.factors)
            .map(|((a, b), z)| linalg::frobenius_diff(a, &(b * Complex64::from_polar(1.0, z.angle()))))
            .sum()
    };
    if x.is_coset() || y.is_coset() {
        d.semisimple_central_indices().into_iter().map(deviation).fold(f64::INFINITY, f64::min)
    } else {
        deviation(0)
    }
}

fn worst_pair(elements: &[GroupElement]) -> (f64, Option<(usize, usize)>) {
    let mut worst = (0.0, None);
    for i in 0..elements.len() {
        for j in i + 1..elements.len() {
            let r = commutator_residual(&elements[i], &elements[j]);
            if worst.1.is_none() || r > worst.0 {
                worst = (r, Some((i, j)));
            }
        }
    }
    worst
}

impl CommutingTuple {
    /// Wrap `elements` and compute the residual. Does not reject non-commuting
    /// input; use [`validate_tuple`] for that.
    pub fn new(descriptor: &Arc<GroupDescriptor>, elements: Vec<GroupElement>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::BadArguments("a tuple needs k >= 1 elements".into()));
        }
        if elements.iter().any(|e| !matgroup::same_descriptor(e.descriptor(), descriptor)) {
            return Err(Error::DescriptorMismatch);
        }
        let (residual, _) = worst_pair(&elements);
        Ok(CommutingTuple { descriptor: descriptor.clone(), elements, residual })
    }

    /// The trivial representation `(1, ..., 1)`.
    pub fn trivial(descriptor: &Arc<GroupDescriptor>, k: usize) -> Result<Self> {
        Self::new(descriptor, vec![GroupElement::identity(descriptor); k])
    }

    pub fn descriptor(&self) -> &Arc<GroupDescriptor> {
        &self.descriptor
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn k(&self) -> usize {
        self.elements.len()
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn to_wire(&self) -> TupleWire {
        TupleWire {
            descriptor: (*self.descriptor).clone(),
            k: self.k(),
            elements: self.elements.iter().map(GroupElement::to_wire).collect(),
            residual: self.residual,
        }
    }

    pub fn from_wire(w: &TupleWire) -> Result<Self> {
        if w.k != w.elements.len() {
            return Err(Error::BadArguments(format!("k = {} but {} elements given", w.k, w.elements.len())));
        }
        let d = Arc::new(w.descriptor.clone());
        let elements = w.elements.iter().map(|e| GroupElement::from_wire(&d, e)).collect::<Result<Vec<_>>>()?;
        Self::new(&d, elements)
    }
}

/// JSON form of a tuple.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TupleWire {
    pub descriptor: GroupDescriptor,
    pub k: usize,
    pub elements: Vec<ElementWire>,
    #[serde(default)]
    pub residual: f64,
}

/// Check the commuting condition (modulo `K` for quotient groups) at `tol`.
pub fn validate_tuple(t: &CommutingTuple, tol: f64) -> Result<ValidationReport> {
    validate_elements(t.elements(), tol)
}

pub fn validate_elements(elements: &[GroupElement], tol: f64) -> Result<ValidationReport> {
    if let Some(first) = elements.first() {
        if elements.iter().any(|e| !matgroup::same_descriptor(e.descriptor(), first.descriptor())) {
            return Err(Error::DescriptorMismatch);
        }
    }
    let (residual, worst_pair) = worst_pair(elements);
    Ok(ValidationReport { residual, worst_pair, passed: residual <= tol })
}

/// A random point of the identity component: `sigma_k` of a random `(g, t_1, ..., t_k)`.
pub fn sample_identity_component(descriptor: &Arc<GroupDescriptor>, k: usize, seed: u64) -> Result<CommutingTuple> {
    sample_identity_component_with(descriptor, k, &mut rng_from_seed(seed))
}

pub fn sample_identity_component_with<R: Rng + ?Sized>(
    descriptor: &Arc<GroupDescriptor>,
    k: usize,
    rng: &mut R,
) -> Result<CommutingTuple> {
    if k == 0 {
        return Err(Error::BadArguments("k must be at least 1".into()));
    }
    Ok(sigma_k(&SigmaPreimage::random(descriptor, k, rng)))
}

/// Clock and shift matrices generating the extraspecial group inside `SU(p)`.
///
/// For `p = 2` this is the quaternion pair `C = diag(i, -i)`, `S = [[0, 1], [-1, 0]]`
/// with `[C, S] = -I`. For odd `p`, `C = diag(1, zeta, ..., zeta^{p-1})` and `S` the
/// cyclic shift `e_j -> e_{j+1}` already have determinant 1 and `[C, S] = zeta I`.
pub fn clock_shift(p: usize) -> (CMat, CMat) {
    if p == 2 {
        let i = linalg::I;
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let c = CMat::from_row_slice(2, 2, &[i, zero, zero, -i]);
        let s = CMat::from_row_slice(2, 2, &[zero, one, -one, zero]);
        return (c, s);
    }
    let zeta = |e: usize| Complex64::from_polar(1.0, std::f64::consts::TAU * e as f64 / p as f64);
    let c = CMat::from_fn(p, p, |a, b| if a == b { zeta(a) } else { Complex64::new(0.0, 0.0) });
    let s = CMat::from_fn(p, p, |a, b| {
        if a == (b + 1) % p {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    (c, s)
}

fn mat_pow(m: &CMat, e: u64) -> CMat {
    let mut out = linalg::identity(m.nrows());
    for _ in 0..e {
        out = &out * m;
    }
    out
}

/// Write a rank-2 alternating form as `u ^ w`: `mu_ij = u_i w_j - u_j w_i (mod p)`.
pub(crate) fn decompose_rank_two(f: &Fingerprint) -> (Vec<u64>, Vec<u64>) {
    let p = f.modulus();
    let k = f.k();
    let (a, b) = (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .find(|&(i, j)| f.get(i, j) != 0)
        .expect("nonzero form");
    let c = f.get(a, b);
    let c_inv = mod_pow(c, p - 2, p);
    let u: Vec<u64> = (0..k).map(|i| f.get(a, i)).collect();
    let w: Vec<u64> = (0..k).map(|i| f.get(b, i) * c_inv % p).collect();
    (u, w)
}

pub(crate) fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// A tuple in an exotic component of `G_{m,p}` with lifted commutator fingerprint `target`.
///
/// Coordinates are words `C^{u_i} S^{w_i}` in the clock/shift pair placed in
/// every factor, where `target = u ^ w`, followed by a random conjugation in
/// each factor and random torus-free central-free decoration.
pub fn sample_exotic(
    descriptor: &Arc<GroupDescriptor>,
    k: usize,
    target: &Fingerprint,
    seed: u64,
) -> Result<CommutingTuple> {
    sample_exotic_with(descriptor, k, target, &mut rng_from_seed(seed))
}

pub fn sample_exotic_with<R: Rng + ?Sized>(
    descriptor: &Arc<GroupDescriptor>,
    k: usize,
    target: &Fingerprint,
    rng: &mut R,
) -> Result<CommutingTuple> {
    let (m, p) = descriptor
        .as_gmp()
        .ok_or_else(|| Error::UnsupportedDescriptor(format!("{} is not of the form SU(p)^m / Delta(Z/p)", descriptor)))?;
    if target.k() != k || target.modulus() != p as u64 {
        return Err(Error::BadArguments(format!(
            "fingerprint is for k = {}, p = {}; expected k = {k}, p = {p}",
            target.k(),
            target.modulus()
        )));
    }
    if target.is_zero() {
        return Err(Error::ZeroFingerprint);
    }
    let rank = rank_alternating(target);
    if rank > 2 {
        return Err(Error::UnrealizableFingerprint { rank });
    }
    let (u, w) = decompose_rank_two(target);
    // [C, S] = zeta^{+1} for both conventions above, so [C^a S^b, C^c S^d] = zeta^{ad - bc}.
    let (c, s) = clock_shift(p);
    let words: Vec<CMat> = (0..k).map(|i| mat_pow(&c, u[i]) * mat_pow(&s, w[i])).collect();
    let conjugators: Vec<CMat> = (0..m).map(|_| matgroup::haar_special_unitary(p, rng)).collect();
    let elements = words
        .iter()
        .map(|word| {
            let factors = conjugators.iter().map(|g| g * word * g.adjoint()).collect();
            GroupElement::from_parts(descriptor, vec![], factors)
        })
        .collect::<Result<Vec<_>>>()?;
    CommutingTuple::new(descriptor, elements)
}

/// Coordinatewise conjugation `g x_i g^{-1}`.
pub fn conjugate_tuple(t: &CommutingTuple, g: &GroupElement) -> Result<CommutingTuple> {
    let elements = t.elements().iter().map(|x| x.conjugate_by(g)).collect::<Result<Vec<_>>>()?;
    CommutingTuple::new(t.descriptor(), elements)
}

/// Conjugate by a Haar-random element.
pub fn random_conjugate<R: Rng + ?Sized>(t: &CommutingTuple, rng: &mut R) -> Result<CommutingTuple> {
    conjugate_tuple(t, &haar_sample_with(t.descriptor(), rng))
}

/// Default-tolerance validation shortcut.
pub fn commutes(t: &CommutingTuple) -> bool {
    t.residual() <= tol::COMM
}
