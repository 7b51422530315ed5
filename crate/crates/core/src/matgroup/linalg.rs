//! Dense complex linear algebra on small unitary matrices.

use nalgebra::{DMatrix, SymmetricEigen};
pub type Complex64 = nalgebra::Complex<f64>;

use crate::{Error, Result};

pub type CMat = DMatrix<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn frobenius_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `||U* U - I||_F`.
pub fn unitarity_residual(u: &CMat) -> f64 {
    frobenius_diff(&(u.adjoint() * u), &identity(u.nrows()))
}

pub fn scalar(n: usize, z: Complex64) -> CMat {
    CMat::from_diagonal_element(n, n, z)
}

pub fn diag_phases(angles: &[f64]) -> CMat {
    let n = angles.len();
    CMat::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::from_polar(1.0, angles[i])
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Wrap an angle into `(-pi, pi]`.
pub fn wrap_pi(theta: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut t = theta.rem_euclid(tau);
    if t > std::f64::consts::PI {
        t -= tau;
    }
    t
}

/// Wrap an angle into `[0, 2pi)`.
pub fn wrap_tau(theta: f64) -> f64 {
    let t = theta.rem_euclid(std::f64::consts::TAU);
    if t >= std::f64::consts::TAU {
        0.0
    } else {
        t
    }
}

/// Hermitian part `(M + M*)/2` and anti-Hermitian part `(M - M*)/(2i)`; both Hermitian.
fn hermitian_parts(m: &CMat) -> [CMat; 2] {
    let adj = m.adjoint();
    let re = (m + &adj).scale(0.5);
    let im = (m - &adj) * Complex64::new(0.0, -0.5);
    [re, im]
}

fn hermitize(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Group sorted values into chains whose consecutive gaps are below `cluster`.
/// A chain wider than `10 * cluster` is rejected (its width is returned).
fn chain_clusters(values: &[f64], order: &[usize], cluster: f64) -> Result<Vec<Vec<usize>>, f64> {
    let mut groups: Vec<Vec<usize>> = vec![vec![order[0]]];
    for w in order.windows(2) {
        if values[w[1]] - values[w[0]] < cluster {
            groups.last_mut().unwrap().push(w[1]);
        } else {
            groups.push(vec![w[1]]);
        }
    }
    for g in &groups {
        let width = values[*g.last().unwrap()] - values[g[0]];
        if width > 10.0 * cluster {
            return Err(width);
        }
    }
    Ok(groups)
}

/// Eigenvalue phases of a small normal matrix, good to roundoff but without
/// reliable eigenvectors: refine by the Hermitian part, then the anti-Hermitian part.
fn rough_phases(m: &CMat) -> Vec<f64> {
    let d = m.nrows();
    let mut blocks = vec![identity(d)];
    for part in hermitian_parts(m) {
        let mut next = Vec::new();
        for b in &blocks {
            if b.ncols() == 1 {
                next.push(b.clone());
                continue;
            }
            let eig = SymmetricEigen::new(hermitize(&(b.adjoint() * &part * b)));
            let mut order: Vec<usize> = (0..b.ncols()).collect();
            order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
            let vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
            let groups = chain_clusters(&vals, &order, 1e-9).unwrap_or_else(|_| vec![order.clone()]);
            for g in groups {
                let cols: Vec<_> = g.iter().map(|&c| eig.eigenvectors.column(c).into_owned()).collect();
                next.push(b * CMat::from_columns(&cols));
            }
        }
        blocks = next;
    }
    blocks
        .iter()
        .flat_map(|b| std::iter::repeat_n(block_eigenvalue(m, b).arg(), b.ncols()))
        .collect()
}

/// Split the space of a small unitary (normal) matrix `m` into eigenspaces.
///
/// A Cayley transform with its pole placed in the widest gap of the spectrum
/// turns `m` into a Hermitian matrix whose eigenvalues `tan(phi/2)` are a
/// monotone function of the eigenvalue phase, so eigenvector accuracy is
/// governed by the spacing on the unit circle. Phases closer than `cluster`
/// are chained into one eigenspace.
fn split_unitary(m: &CMat, cluster: f64) -> Result<Vec<CMat>, f64> {
    let d = m.nrows();
    if d == 1 {
        return Ok(vec![identity(1)]);
    }
    let mut phases = rough_phases(m);
    phases.sort_by(f64::total_cmp);
    let tau = std::f64::consts::TAU;
    let mut pole = phases[0] - tau / 2.0;
    let mut widest = -1.0;
    for i in 0..d {
        let lo = phases[i];
        let hi = if i + 1 < d { phases[i + 1] } else { phases[0] + tau };
        if hi - lo > widest {
            widest = hi - lo;
            pole = 0.5 * (lo + hi);
        }
    }
    // Eigenvalues of v are exp(i(theta - pole + pi)); the pole sits at -1.
    let v = m * (-Complex64::from_polar(1.0, -pole));
    let id = identity(d);
    let inv = (&id + &v).try_inverse().ok_or(0.0)?;
    let h = hermitize(&((&id - &v) * &inv * I));
    let eig = SymmetricEigen::new(h);
    let angles: Vec<f64> = eig.eigenvalues.iter().map(|t| 2.0 * t.atan()).collect();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| angles[a].total_cmp(&angles[b]));
    let groups = chain_clusters(&angles, &order, cluster)?;
    Ok(groups
        .into_iter()
        .map(|g| {
            let cols: Vec<_> = g.iter().map(|&c| eig.eigenvectors.column(c).into_owned()).collect();
            CMat::from_columns(&cols)
        })
        .collect())
}

/// Common eigenspaces of a family of commuting unitary matrices.
///
/// Each matrix in turn refines every current block: it is restricted to the
/// block and its eigenspaces there split the block. Returns orthonormal column
/// blocks on which every input acts as a scalar up to roundoff; a rejected
/// ambiguous cluster reports its phase width.
pub fn joint_eigenspaces(mats: &[&CMat], n: usize, cluster: f64) -> Result<Vec<CMat>, f64> {
    let mut blocks = vec![identity(n)];
    for m in mats {
        let mut next = Vec::with_capacity(n);
        for b in &blocks {
            if b.ncols() == 1 {
                next.push(b.clone());
                continue;
            }
            let restricted = b.adjoint() * *m * b;
            for w in split_unitary(&restricted, cluster)? {
                next.push(b * w);
            }
        }
        blocks = next;
        if blocks.len() == n {
            break;
        }
    }
    Ok(blocks)
}

/// Eigenvalue of a normal matrix on an invariant block: `tr(B* M B) / dim`.
pub fn block_eigenvalue(m: &CMat, block: &CMat) -> Complex64 {
    let r = block.adjoint() * m * block;
    r.trace() / r.nrows() as f64
}

/// Spectral decomposition of a unitary matrix into (projector basis, eigenvalue) pairs.
pub fn unitary_spectrum(u: &CMat, cluster: f64) -> Result<Vec<(CMat, Complex64)>> {
    let blocks = joint_eigenspaces(&[u], u.nrows(), cluster)
        .map_err(|width| Error::IllConditioned { factor: 0, width })?;
    Ok(blocks
        .into_iter()
        .map(|b| {
            let lambda = block_eigenvalue(u, &b);
            (b, lambda)
        })
        .collect())
}

/// `exp(A)` for skew-Hermitian `A`, via the eigendecomposition of the Hermitian `-iA`.
pub fn exp_skew(a: &CMat) -> CMat {
    let h = hermitize(&(a * Complex64::new(0.0, -1.0)));
    let eig = SymmetricEigen::new(h);
    let v = &eig.eigenvectors;
    let phases: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    v * diag_phases(&phases) * v.adjoint()
}

/// Re-orthonormalize an almost unitary matrix (polar-style via QR with phase fix).
pub fn reunitarize(u: &CMat) -> CMat {
    let qr = u.clone().qr();
    let q = qr.q();
    let r = qr.r();
    let n = u.nrows();
    let mut d = CMat::zeros(n, n);
    for i in 0..n {
        let rii = r[(i, i)];
        d[(i, i)] = if rii.norm() > 0.0 { rii / rii.norm() } else { Complex64::new(1.0, 0.0) };
    }
    q * d
}
