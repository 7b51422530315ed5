//! Matrix substrate: elements of `((S^1)^r x prod SU(p_i)) / K` stored by lifts,
//! the Lie algebra, exp/log, Haar sampling and the bi-invariant distance.

mod descriptor;
pub mod linalg;
mod wire;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub use descriptor::{is_prime, CentralElement, GroupDescriptor, RootOfUnity};
use linalg::{CMat, Complex64};
pub use wire::{ElementWire, MatrixWire};

use crate::{tol, Error, Result};

/// Deterministic RNG used by every sampler in the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// An element of the group described by `descriptor`.
///
/// When the descriptor has a nontrivial central subgroup `K` the element is a
/// coset `K x` stored through the lift `x`; equality and distance are then taken
/// modulo `K`.
#[derive(Debug, Clone)]
pub struct GroupElement {
    descriptor: Arc<GroupDescriptor>,
    torus: Vec<f64>,
    factors: Vec<CMat>,
    coset: bool,
}

/// An element of the Lie algebra: torus angle velocities and one traceless
/// skew-Hermitian matrix per special unitary factor.
#[derive(Debug, Clone)]
pub struct LieAlgebraElement {
    pub torus: Vec<f64>,
    pub factors: Vec<CMat>,
}

impl LieAlgebraElement {
    pub fn zero(d: &GroupDescriptor) -> Self {
        LieAlgebraElement {
            torus: vec![0.0; d.torus_rank()],
            factors: d.su_factors().iter().map(|&p| CMat::zeros(p, p)).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        LieAlgebraElement {
            torus: self.torus.iter().map(|t| t * s).collect(),
            factors: self.factors.iter().map(|m| m.scale(s)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        LieAlgebraElement {
            torus: self.torus.iter().zip(&other.torus).map(|(a, b)| a + b).collect(),
            factors: self.factors.iter().zip(&other.factors).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn norm(&self) -> f64 {
        let t: f64 = self.torus.iter().map(|x| x * x).sum();
        let f: f64 = self.factors.iter().map(|m| linalg::frobenius(m).powi(2)).sum();
        (t + f).sqrt()
    }

    /// Gaussian random element; each factor block has Frobenius norm about `scale`.
    pub fn random<R: Rng + ?Sized>(d: &GroupDescriptor, scale: f64, rng: &mut R) -> Self {
        let torus = (0..d.torus_rank()).map(|_| scale * rng.sample::<f64, _>(StandardNormal)).collect();
        let factors = d
            .su_factors()
            .iter()
            .map(|&p| {
                let g = gaussian_matrix(p, rng);
                let mut a = (&g - g.adjoint()).scale(0.5);
                let tr = a.trace() / p as f64;
                for i in 0..p {
                    a[(i, i)] -= tr;
                }
                let nrm = linalg::frobenius(&a);
                if nrm > 0.0 {
                    a.scale(scale / nrm)
                } else {
                    a
                }
            })
            .collect();
        LieAlgebraElement { torus, factors }
    }
}

fn gaussian_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    CMat::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
            * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Haar-distributed special unitary matrix: QR of a complex Gaussian matrix,
/// phases of `R`'s diagonal moved into `Q`, then the determinant rotated to 1.
pub fn haar_special_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let qr = gaussian_matrix(n, rng).qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for j in 0..n {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            u[(i, j)] *= phase;
        }
    }
    let det = u.determinant();
    let fix = Complex64::from_polar(1.0, -det.arg() / n as f64);
    u * fix
}

pub fn same_descriptor(a: &Arc<GroupDescriptor>, b: &Arc<GroupDescriptor>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl GroupElement {
    pub fn identity(d: &Arc<GroupDescriptor>) -> Self {
        GroupElement {
            descriptor: d.clone(),
            torus: vec![0.0; d.torus_rank()],
            factors: d.su_factors().iter().map(|&p| linalg::identity(p)).collect(),
            coset: d.is_quotient(),
        }
    }

    /// Build an element, checking shapes, unitarity and determinants at `tol::UNIT`.
    pub fn from_parts(d: &Arc<GroupDescriptor>, torus: Vec<f64>, factors: Vec<CMat>) -> Result<Self> {
        if torus.len() != d.torus_rank() || factors.len() != d.su_factors().len() {
            return Err(Error::InvalidElement("number of torus angles or factors does not match the descriptor".into()));
        }
        for (i, (m, &p)) in factors.iter().zip(d.su_factors()).enumerate() {
            if m.nrows() != p || m.ncols() != p {
                return Err(Error::InvalidElement(format!("factor {i} is not {p}x{p}")));
            }
            let res = linalg::unitarity_residual(m);
            if !(res <= tol::UNIT) {
                return Err(Error::InvalidElement(format!("factor {i} has unitarity residual {res:.3e}")));
            }
            let det_res = (m.determinant() - Complex64::new(1.0, 0.0)).norm();
            if !(det_res <= tol::UNIT) {
                return Err(Error::InvalidElement(format!("factor {i} has determinant residual {det_res:.3e}")));
            }
        }
        if torus.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidElement("non-finite torus angle".into()));
        }
        Ok(Self::from_parts_unchecked(d, torus, factors))
    }

    pub(crate) fn from_parts_unchecked(d: &Arc<GroupDescriptor>, torus: Vec<f64>, factors: Vec<CMat>) -> Self {
        GroupElement {
            descriptor: d.clone(),
            torus: torus.into_iter().map(linalg::wrap_tau).collect(),
            factors,
            coset: d.is_quotient(),
        }
    }

    /// The lift of the `idx`-th element of `K`.
    pub fn central(d: &Arc<GroupDescriptor>, idx: usize) -> Self {
        let c = &d.central_subgroup()[idx];
        let torus = c.torus.iter().map(RootOfUnity::angle).collect();
        let factors = c
            .factors
            .iter()
            .zip(d.su_factors())
            .map(|(z, &p)| linalg::scalar(p, Complex64::from_polar(1.0, z.angle())))
            .collect();
        Self::from_parts_unchecked(d, torus, factors)
    }

    pub fn descriptor(&self) -> &Arc<GroupDescriptor> {
        &self.descriptor
    }

    pub fn torus(&self) -> &[f64] {
        &self.torus
    }

    pub fn factors(&self) -> &[CMat] {
        &self.factors
    }

    /// Whether this element denotes a `K`-coset.
    pub fn is_coset(&self) -> bool {
        self.coset
    }

    fn check(&self, other: &GroupElement) -> Result<()> {
        if same_descriptor(&self.descriptor, &other.descriptor) {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch)
        }
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            descriptor: self.descriptor.clone(),
            torus: self.torus.iter().zip(&other.torus).map(|(a, b)| linalg::wrap_tau(a + b)).collect(),
            factors: self.factors.iter().zip(&other.factors).map(|(a, b)| a * b).collect(),
            coset: self.coset,
        }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            descriptor: self.descriptor.clone(),
            torus: self.torus.iter().map(|a| linalg::wrap_tau(-a)).collect(),
            factors: self.factors.iter().map(|a| a.adjoint()).collect(),
            coset: self.coset,
        }
    }

    /// `g self g^{-1}`.
    pub fn conjugate_by(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        Ok(GroupElement {
            descriptor: self.descriptor.clone(),
            torus: self.torus.clone(),
            factors: self
                .factors
                .iter()
                .zip(&g.factors)
                .map(|(x, g)| g * x * g.adjoint())
                .collect(),
            coset: self.coset,
        })
    }

    /// `self other self^{-1} other^{-1}` computed on lifts.
    pub fn commutator(&self, other: &GroupElement) -> Result<GroupElement> {
        self.check(other)?;
        Ok(GroupElement {
            descriptor: self.descriptor.clone(),
            torus: vec![0.0; self.torus.len()],
            factors: self
                .factors
                .iter()
                .zip(&other.factors)
                .map(|(x, y)| x * y * x.adjoint() * y.adjoint())
                .collect(),
            coset: false,
        })
    }

    /// The same lift, viewed as an element of the cover (no coset semantics).
    pub fn lift(&self) -> GroupElement {
        GroupElement { coset: false, ..self.clone() }
    }

    /// The image in `G` of this lift: coset semantics whenever `K` is nontrivial.
    pub fn project(&self) -> GroupElement {
        GroupElement { coset: self.descriptor.is_quotient(), ..self.clone() }
    }

    /// Max over factors of `||U*U - I||_F` and `|det U - 1|`.
    pub fn unitarity_residual(&self) -> f64 {
        self.factors
            .iter()
            .map(|m| linalg::unitarity_residual(m).max((m.determinant() - Complex64::new(1.0, 0.0)).norm()))
            .fold(0.0, f64::max)
    }

    pub fn to_wire(&self) -> ElementWire {
        ElementWire {
            torus: self.torus.clone(),
            factors: self.factors.iter().map(MatrixWire::from_matrix).collect(),
            coset: self.coset,
        }
    }

    pub fn from_wire(d: &Arc<GroupDescriptor>, w: &ElementWire) -> Result<Self> {
        let factors = w.factors.iter().map(MatrixWire::to_matrix).collect::<Result<Vec<_>>>()?;
        Self::from_parts(d, w.torus.clone(), factors)
    }
}

/// Distance between lifts: Frobenius distance summed over factors plus the
/// Euclidean norm of the wrapped torus angle differences.
pub fn lift_distance(x: &GroupElement, y: &GroupElement) -> Result<f64> {
    x.check(y)?;
    Ok(lift_distance_unchecked(x, y))
}

pub(crate) fn lift_distance_unchecked(x: &GroupElement, y: &GroupElement) -> f64 {
    let f: f64 = x.factors.iter().zip(&y.factors).map(|(a, b)| linalg::frobenius_diff(a, b)).sum();
    let t: f64 = x
        .torus
        .iter()
        .zip(&y.torus)
        .map(|(a, b)| linalg::wrap_pi(a - b).powi(2))
        .sum::<f64>()
        .sqrt();
    f + t
}

/// Bi-invariant distance. For coset elements this is the minimum over `K` of
/// the lift distance between `x` and `kappa y`.
pub fn distance(x: &GroupElement, y: &GroupElement) -> Result<f64> {
    x.check(y)?;
    if !(x.coset || y.coset) {
        return Ok(lift_distance_unchecked(x, y));
    }
    let d = &x.descriptor;
    Ok((0..d.central_order())
        .map(|i| lift_distance_unchecked(x, &GroupElement::central(d, i).mul_unchecked(y)))
        .fold(f64::INFINITY, f64::min))
}

/// Haar-random element: Haar special unitaries per factor and uniform torus angles.
pub fn haar_sample(d: &Arc<GroupDescriptor>, seed: u64) -> GroupElement {
    haar_sample_with(d, &mut rng_from_seed(seed))
}

pub fn haar_sample_with<R: Rng + ?Sized>(d: &Arc<GroupDescriptor>, rng: &mut R) -> GroupElement {
    let torus = (0..d.torus_rank()).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
    let factors = d.su_factors().iter().map(|&p| haar_special_unitary(p, rng)).collect();
    GroupElement::from_parts_unchecked(d, torus, factors)
}

/// Principal logarithm.
///
/// Eigenvalue phases are taken in `(-pi, pi]`; when their sum in a factor is a
/// nonzero multiple of `2 pi` the extreme phases are shifted by `2 pi` so the
/// result stays traceless. Fails with `BranchCut` when an eigenvalue (or a torus
/// coordinate) lies within `tol::EIG_BRANCH` of `-1`. Torus coordinates come
/// first in the `factor` index of the error.
pub fn group_log(x: &GroupElement) -> Result<LieAlgebraElement> {
    let r = x.torus.len();
    let mut torus = Vec::with_capacity(r);
    for (i, &t) in x.torus.iter().enumerate() {
        let dist = (Complex64::from_polar(1.0, t) + 1.0).norm();
        if dist < tol::EIG_BRANCH {
            return Err(Error::BranchCut { factor: i, distance: dist });
        }
        torus.push(linalg::wrap_pi(t));
    }
    let mut factors = Vec::with_capacity(x.factors.len());
    for (fi, u) in x.factors.iter().enumerate() {
        let spectrum = linalg::unitary_spectrum(u, tol::CLUSTER).map_err(|e| match e {
            Error::IllConditioned { width, .. } => Error::IllConditioned { factor: fi, width },
            other => other,
        })?;
        let mut cols: Vec<(nalgebra::DVector<Complex64>, f64)> = Vec::with_capacity(u.nrows());
        for (block, lambda) in &spectrum {
            let dist = (lambda + 1.0).norm();
            if dist < tol::EIG_BRANCH {
                return Err(Error::BranchCut { factor: r + fi, distance: dist });
            }
            let theta = linalg::wrap_pi(lambda.arg());
            for c in block.column_iter() {
                cols.push((c.into_owned(), theta));
            }
        }
        cols.sort_by(|a, b| a.1.total_cmp(&b.1));
        let total: f64 = cols.iter().map(|c| c.1).sum();
        let winding = (total / std::f64::consts::TAU).round() as i64;
        let len = cols.len();
        if winding > 0 {
            for c in cols.iter_mut().rev().take(winding as usize) {
                c.1 -= std::f64::consts::TAU;
            }
        } else if winding < 0 {
            for c in cols.iter_mut().take((-winding) as usize) {
                c.1 += std::f64::consts::TAU;
            }
        }
        debug_assert!(winding.unsigned_abs() as usize <= len);
        let mut a = CMat::zeros(len, len);
        for (v, theta) in &cols {
            a += v * v.adjoint() * Complex64::new(0.0, *theta);
        }
        factors.push(a);
    }
    Ok(LieAlgebraElement { torus, factors })
}

pub fn group_exp(d: &Arc<GroupDescriptor>, a: &LieAlgebraElement) -> GroupElement {
    let factors = a.factors.iter().map(linalg::exp_skew).collect();
    GroupElement::from_parts_unchecked(d, a.torus.clone(), factors)
}

/// Point at parameter `s` on the one-parameter geodesic from `x` towards `y`:
/// `x exp(s log(x^{-1} y))` computed on lifts.
pub fn geodesic_point(x: &GroupElement, y: &GroupElement, s: f64) -> Result<GroupElement> {
    let step = group_log(&x.lift().inverse().mul(&y.lift())?)?;
    let mut out = x.mul_unchecked(&group_exp(&x.descriptor, &step.scale(s)));
    out.coset = x.coset;
    Ok(out)
}

#[cfg(test)]
mod tests;
