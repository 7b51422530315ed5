//! Central quotients `G~ -> G~/K`: lifting, commutator fingerprints,
//! component classification and the deck action of `K^k`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::commvar::CommutingTuple;
use crate::matgroup::linalg::{self, Complex64};
use crate::matgroup::{CentralElement, GroupDescriptor, GroupElement};
use crate::{tol, Error, Result};

/// An alternating form over `Z/modulus` on `k` generators, stored as the
/// strictly upper triangle `mu_ij, i < j`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint {
    modulus: u64,
    k: usize,
    entries: Vec<u64>,
}

fn pair_count(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

impl Fingerprint {
    pub fn zero(modulus: u64, k: usize) -> Self {
        Fingerprint { modulus: modulus.max(1), k, entries: vec![0; pair_count(k)] }
    }

    pub fn from_entries(modulus: u64, k: usize, entries: Vec<u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::BadArguments("fingerprint modulus must be positive".into()));
        }
        if entries.len() != pair_count(k) {
            return Err(Error::BadArguments(format!(
                "a fingerprint for k = {k} has {} entries, got {}",
                pair_count(k),
                entries.len()
            )));
        }
        if let Some(e) = entries.iter().find(|&&e| e >= modulus) {
            return Err(Error::BadArguments(format!("entry {e} is not reduced mod {modulus}")));
        }
        Ok(Fingerprint { modulus, k, entries })
    }

    /// Parse comma-separated upper-triangle entries, e.g. `1,0,1` for `k = 3`.
    /// Entries are reduced mod `modulus`; negative values are allowed.
    pub fn parse_csv(modulus: u64, k: usize, csv: &str) -> Result<Self> {
        let entries = csv
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<i64>()
                    .map(|v| v.rem_euclid(modulus.max(1) as i64) as u64)
                    .map_err(|_| Error::BadArguments(format!("bad fingerprint entry {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(modulus, k, entries)
    }

    fn index(&self, i: usize, j: usize) -> usize {
        // row i of the upper triangle starts after sum_{r<i} (k-1-r) entries
        i * (2 * self.k - i - 1) / 2 + (j - i - 1)
    }

    /// `mu_ij` as an alternating form: `mu_ji = -mu_ij`, `mu_ii = 0`.
    pub fn get(&self, i: usize, j: usize) -> u64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.entries[self.index(i, j)],
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => (self.modulus - self.entries[self.index(j, i)]) % self.modulus,
        }
    }

    fn set(&mut self, i: usize, j: usize, v: u64) {
        let idx = self.index(i, j);
        self.entries[idx] = v % self.modulus;
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    /// `[i, j, mu_ij]` for nonzero entries, 1-based indices.
    pub fn nonzero_triples(&self) -> Vec<[u64; 3]> {
        let mut out = Vec::new();
        for i in 0..self.k {
            for j in i + 1..self.k {
                let v = self.get(i, j);
                if v != 0 {
                    out.push([i as u64 + 1, j as u64 + 1, v]);
                }
            }
        }
        out
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(u64::to_string).collect();
        write!(f, "[{}] mod {}", parts.join(","), self.modulus)
    }
}

/// Which component of the commuting variety a tuple lies in, up to fingerprint.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ComponentClass {
    IdentityComponent,
    Exotic(Fingerprint),
}

impl ComponentClass {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            ComponentClass::IdentityComponent => serde_json::json!({ "component": "identity" }),
            ComponentClass::Exotic(f) => serde_json::json!({
                "component": "exotic",
                "fingerprint": f.nonzero_triples(),
            }),
        }
    }
}

/// The part of `K` that commutators can land in (trivial circle components),
/// presented as a cyclic group `<zeta>`.
#[derive(Debug, Clone)]
pub struct CommutatorGroup {
    /// `powers[e]` is the index in `K` of `zeta^e`.
    pub powers: Vec<usize>,
}

impl CommutatorGroup {
    pub fn modulus(&self) -> u64 {
        self.powers.len() as u64
    }
}

fn fraction_key(c: &CentralElement) -> Vec<(u64, u64)> {
    c.factors.iter().map(|z| (z.num(), z.den())).collect()
}

fn cmp_fractions(a: &[(u64, u64)], b: &[(u64, u64)]) -> std::cmp::Ordering {
    for (&(an, ad), &(bn, bd)) in a.iter().zip(b) {
        let o = (an as u128 * bd as u128).cmp(&(bn as u128 * ad as u128));
        if o.is_ne() {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

/// `K` restricted to the semisimple part, which must be cyclic. The generator
/// is the element of maximal order whose per-factor angles (as fractions of a
/// turn) are lexicographically smallest; for `G_{m,p}` it is `exp(2 pi i/p)`.
pub fn commutator_group(d: &GroupDescriptor) -> Result<CommutatorGroup> {
    let k = d.central_subgroup();
    let ss = d.semisimple_central_indices();
    let n = ss.len() as u64;
    let generator = ss
        .iter()
        .copied()
        .filter(|&i| k[i].order() == n)
        .min_by(|&a, &b| cmp_fractions(&fraction_key(&k[a]), &fraction_key(&k[b])))
        .ok_or(Error::NotCyclic)?;
    let mut powers = vec![0usize];
    let mut cur = k[0].clone();
    for _ in 1..n {
        cur = cur.mul(&k[generator]);
        powers.push(k.iter().position(|c| *c == cur).expect("K is closed"));
    }
    Ok(CommutatorGroup { powers })
}

/// Exponent `e` with `[x, y]` nearest to `zeta^e`, computed on lifts.
fn commutator_exponent(
    x: &GroupElement,
    y: &GroupElement,
    group: &CommutatorGroup,
    tol: f64,
    (i, j): (usize, usize),
) -> Result<u64> {
    let d = x.descriptor();
    let comm: Vec<_> = x
        .factors()
        .iter()
        .zip(y.factors())
        .map(|(a, b)| a * b * a.adjoint() * b.adjoint())
        .collect();
    let mut dist: Vec<(f64, u64)> = group
        .powers
        .iter()
        .enumerate()
        .map(|(e, &idx)| {
            let z = &d.central_subgroup()[idx];
            let dv = comm
                .iter()
                .zip(&z.factors)
                .map(|(c, w)| {
                    linalg::frobenius_diff(c, &linalg::scalar(c.nrows(), Complex64::from_polar(1.0, w.angle())))
                })
                .sum::<f64>();
            (dv, e as u64)
        })
        .collect();
    dist.sort_by(|a, b| a.0.total_cmp(&b.0));
    if !(dist[0].0 <= tol) {
        return Err(Error::NotAlmostCommuting { i, j, distance: dist[0].0 });
    }
    if dist.len() > 1 && dist[1].0 <= tol {
        return Err(Error::AmbiguousMatch { i, j });
    }
    Ok(dist[0].1)
}

fn fingerprint_of(elements: &[GroupElement], d: &GroupDescriptor, tol: f64) -> Result<Fingerprint> {
    let group = commutator_group(d)?;
    let k = elements.len();
    let mut f = Fingerprint::zero(group.modulus(), k);
    for i in 0..k {
        for j in i + 1..k {
            let e = commutator_exponent(&elements[i], &elements[j], &group, tol, (i, j))?;
            f.set(i, j, e);
        }
    }
    Ok(f)
}

/// The stored lifts of a tuple in `G~/K`, checked to be `K`-almost-commuting:
/// each pairwise commutator lies within `tol` of an element of `K`.
pub fn lift_tuple(t: &CommutingTuple, tol: f64) -> Result<CommutingTuple> {
    fingerprint_of(t.elements(), t.descriptor(), tol)?;
    CommutingTuple::new(t.descriptor(), t.elements().iter().map(GroupElement::lift).collect())
}

/// Commutator fingerprint of a `K`-almost-commuting lifted tuple:
/// `[x_i, x_j] = zeta^{mu_ij}`.
pub fn fingerprint(lifted: &CommutingTuple, tol: f64) -> Result<Fingerprint> {
    fingerprint_of(lifted.elements(), lifted.descriptor(), tol)
}

/// Identity component iff the fingerprint vanishes.
pub fn classify_component(t: &CommutingTuple) -> Result<ComponentClass> {
    classify_component_tol(t, tol::COMM)
}

pub fn classify_component_tol(t: &CommutingTuple, tol: f64) -> Result<ComponentClass> {
    let f = fingerprint(t, tol)?;
    Ok(if f.is_zero() { ComponentClass::IdentityComponent } else { ComponentClass::Exotic(f) })
}

/// Left coordinatewise multiplication by `kappa in K^k`, given as indices into
/// [`GroupDescriptor::central_subgroup`]. The result consists of lifts.
pub fn deck_action(kappa: &[usize], t: &CommutingTuple) -> Result<CommutingTuple> {
    let d = t.descriptor();
    if kappa.len() != t.k() {
        return Err(Error::BadArguments(format!("kappa has {} entries for k = {}", kappa.len(), t.k())));
    }
    if let Some(&bad) = kappa.iter().find(|&&i| i >= d.central_order()) {
        return Err(Error::BadArguments(format!("K has {} elements; index {bad} out of range", d.central_order())));
    }
    let elements = kappa
        .iter()
        .zip(t.elements())
        .map(|(&c, x)| GroupElement::central(d, c).lift().mul_unchecked(&x.lift()))
        .collect();
    CommutingTuple::new(d, elements)
}

/// Every element of `K^k` as index vectors, in odometer order.
pub fn all_deck_elements(d: &Arc<GroupDescriptor>, k: usize) -> Vec<Vec<usize>> {
    let n = d.central_order();
    let total = n.pow(k as u32);
    (0..total)
        .map(|mut c| {
            (0..k)
                .map(|_| {
                    let r = c % n;
                    c /= n;
                    r
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests;
