//! Finite-group oracles: extraspecial groups by multiplication table,
//! exhaustive censuses of commuting and almost-commuting tuples, ranks of
//! alternating forms over `F_p`, and the component count `N(k, m, p)`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::central::Fingerprint;
use crate::matgroup::is_prime;
use crate::{Error, Result};

/// Upper bound on `|G|^k` for exhaustive enumeration.
pub const CENSUS_LIMIT: u128 = 10_000_000;

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinGroup {
    name: String,
    order: usize,
    /// `table[a * order + b] = a * b`.
    table: Vec<u16>,
    identity: usize,
    inverse: Vec<u16>,
    center: Vec<usize>,
}

impl FinGroup {
    /// Build from a multiplication function on `0..order`; fails unless the
    /// result satisfies the group axioms.
    pub fn from_fn(name: impl Into<String>, order: usize, mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        if order == 0 || order > u16::MAX as usize {
            return Err(Error::BadArguments(format!("group order {order} out of range")));
        }
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                let c = mul(a, b);
                if c >= order {
                    return Err(Error::BadArguments(format!("product {a}*{b} = {c} out of range")));
                }
                table.push(c as u16);
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| table[e * order + a] as usize == a && table[a * order + e] as usize == a))
            .ok_or_else(|| Error::BadArguments("no identity element".into()))?;
        let mut inverse = Vec::with_capacity(order);
        for a in 0..order {
            let inv = (0..order)
                .find(|&b| table[a * order + b] as usize == identity)
                .ok_or_else(|| Error::BadArguments(format!("element {a} has no inverse")))?;
            inverse.push(inv as u16);
        }
        let mut g = FinGroup { name: name.into(), order, table, identity, inverse, center: vec![] };
        if !g.verify_axioms() {
            return Err(Error::BadArguments("table is not a group".into()));
        }
        g.center = (0..order).filter(|&z| (0..order).all(|a| g.mul(z, a) == g.mul(a, z))).collect();
        Ok(g)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn center(&self) -> &[usize] {
        &self.center
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// `a b a^{-1} b^{-1}`.
    #[inline]
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    /// Associativity, two-sided identity and two-sided inverses, checked on every entry.
    pub fn verify_axioms(&self) -> bool {
        let n = self.order;
        let e = self.identity;
        let assoc = (0..n).all(|a| {
            (0..n).all(|b| {
                let ab = self.mul(a, b);
                (0..n).all(|c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
            })
        });
        assoc
            && (0..n).all(|a| {
                self.mul(e, a) == a
                    && self.mul(a, e) == a
                    && self.mul(a, self.inv(a)) == e
                    && self.mul(self.inv(a), a) == e
            })
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != self.identity {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    pub fn exponent(&self) -> usize {
        (0..self.order).map(|a| self.element_order(a)).fold(1, num_integer::lcm)
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    frontier.push(y);
                }
            }
        }
        (0..self.order).filter(|&i| seen[i]).collect()
    }

    /// `[G, G]`.
    pub fn commutator_subgroup(&self) -> Vec<usize> {
        let n = self.order;
        let mut comms: Vec<usize> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| self.commutator(a, b)).collect();
        comms.sort_unstable();
        comms.dedup();
        self.generated(&comms)
    }

    pub fn is_abelian(&self) -> bool {
        self.center.len() == self.order
    }
}

/// `Z/n`.
pub fn cyclic(n: usize) -> Result<FinGroup> {
    FinGroup::from_fn(format!("Z/{n}"), n, |a, b| (a + b) % n)
}

/// `A x B`, element `(a, b)` at index `a * |B| + b`.
pub fn direct_product(a: &FinGroup, b: &FinGroup) -> Result<FinGroup> {
    let nb = b.order();
    FinGroup::from_fn(format!("{} x {}", a.name(), b.name()), a.order() * nb, |x, y| {
        a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)
    })
}

/// The extraspecial group `E_p` of order `p^3`: the quaternion group for
/// `p = 2`, the Heisenberg group over `F_p` (exponent `p`) for odd `p <= 7`.
pub fn extraspecial(p: u32) -> Result<FinGroup> {
    if !is_prime(p as u64) || p > 7 {
        return Err(Error::UnsupportedPrime(p));
    }
    if p == 2 {
        return quaternion();
    }
    let p = p as usize;
    // (a, b, c) <-> [[1, a, c], [0, 1, b], [0, 0, 1]] at index a p^2 + b p + c
    let dec = |x: usize| (x / (p * p), (x / p) % p, x % p);
    FinGroup::from_fn(format!("E_{p}"), p * p * p, |x, y| {
        let (a, b, c) = dec(x);
        let (a2, b2, c2) = dec(y);
        ((a + a2) % p) * p * p + ((b + b2) % p) * p + (c + c2 + a * b2) % p
    })
}

/// `Q_8 = {+-1, +-i, +-j, +-k}`; index `2 u + s` for unit `u in (1, i, j, k)` and sign bit `s`.
fn quaternion() -> Result<FinGroup> {
    // unit products: (unit, sign flip)
    const T: [[(usize, usize); 4]; 4] = [
        [(0, 0), (1, 0), (2, 0), (3, 0)],
        [(1, 0), (0, 1), (3, 0), (2, 1)],
        [(2, 0), (3, 1), (0, 1), (1, 0)],
        [(3, 0), (2, 0), (1, 1), (0, 1)],
    ];
    FinGroup::from_fn("Q8", 8, |x, y| {
        let (u, s) = T[x / 2][y / 2];
        2 * u + (s ^ (x % 2) ^ (y % 2))
    })
}

fn check_size(g: &FinGroup, k: usize) -> Result<()> {
    let size = (g.order() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if size > CENSUS_LIMIT {
        return Err(Error::TooLarge { size, limit: CENSUS_LIMIT });
    }
    Ok(())
}

/// Number of `k`-tuples of pairwise commuting elements.
pub fn census_commuting(g: &FinGroup, k: usize) -> Result<u64> {
    check_size(g, k)?;
    if k == 0 {
        return Ok(1);
    }
    fn extend(g: &FinGroup, prefix: &mut Vec<usize>, k: usize) -> u64 {
        if prefix.len() == k {
            return 1;
        }
        let mut total = 0;
        for x in 0..g.order() {
            if prefix.iter().all(|&y| g.mul(x, y) == g.mul(y, x)) {
                prefix.push(x);
                total += extend(g, prefix, k);
                prefix.pop();
            }
        }
        total
    }
    Ok((0..g.order()).into_par_iter().map(|x| extend(g, &mut vec![x], k)).sum())
}

/// A central subgroup `K` with a chosen generator, for binning commutators.
struct CyclicCentral {
    modulus: u64,
    /// `exponent[x] = Some(e)` iff `x = z^e` in `K`.
    exponent: Vec<Option<u64>>,
}

fn cyclic_central(g: &FinGroup, k_elems: &[usize]) -> Result<CyclicCentral> {
    let mut kset: Vec<usize> = k_elems.to_vec();
    kset.sort_unstable();
    kset.dedup();
    if kset.is_empty() || kset.iter().any(|&x| x >= g.order() || !g.center().contains(&x)) {
        return Err(Error::NotCentral);
    }
    if g.generated(&kset) != kset {
        return Err(Error::BadArguments("K is not a subgroup".into()));
    }
    let n = kset.len();
    let z = *kset.iter().find(|&&x| g.element_order(x) == n).ok_or(Error::NotCyclic)?;
    let mut exponent = vec![None; g.order()];
    let mut x = g.identity();
    for e in 0..n {
        exponent[x] = Some(e as u64);
        x = g.mul(x, z);
    }
    Ok(CyclicCentral { modulus: n as u64, exponent })
}

/// Histogram of fingerprints over all `k`-tuples whose pairwise commutators
/// lie in the central subgroup `K` (given by its elements). `K` must be cyclic;
/// its generator is the smallest-index element of full order.
pub fn census_fingerprints(g: &FinGroup, k_elems: &[usize], k: usize) -> Result<BTreeMap<Fingerprint, u64>> {
    let kc = cyclic_central(g, k_elems)?;
    check_size(g, k)?;
    if k == 0 {
        return Ok(BTreeMap::from([(Fingerprint::zero(kc.modulus, 0), 1)]));
    }
    let partial: Vec<HashMap<Vec<u64>, u64>> =
        (0..g.order()).into_par_iter().map(|x| census_from(g, &kc, k, x)).collect();
    let mut merged: BTreeMap<Fingerprint, u64> = BTreeMap::new();
    for part in partial {
        for (entries, count) in part {
            let f = Fingerprint::from_entries(kc.modulus, k, entries).expect("reduced entries");
            *merged.entry(f).or_default() += count;
        }
    }
    Ok(merged)
}

/// Tuples with first coordinate `first`, keyed by upper-triangle entries.
fn census_from(g: &FinGroup, kc: &CyclicCentral, k: usize, first: usize) -> HashMap<Vec<u64>, u64> {
    let mut out = HashMap::new();
    let mut prefix = vec![first];
    let mut mu: Vec<Vec<u64>> = vec![vec![]; k];
    fn rec(
        g: &FinGroup,
        kc: &CyclicCentral,
        k: usize,
        prefix: &mut Vec<usize>,
        mu: &mut Vec<Vec<u64>>,
        out: &mut HashMap<Vec<u64>, u64>,
    ) {
        let j = prefix.len();
        if j == k {
            // mu[j] holds column j: entries mu_{ij}, i < j; reorder to rows
            let mut entries = Vec::with_capacity(k * (k - 1) / 2);
            for i in 0..k {
                for col in mu.iter().take(k).skip(i + 1) {
                    entries.push(col[i]);
                }
            }
            *out.entry(entries).or_default() += 1;
            return;
        }
        'next: for x in 0..g.order() {
            let mut col = Vec::with_capacity(j);
            for &y in prefix.iter() {
                match kc.exponent[g.commutator(y, x)] {
                    Some(e) => col.push(e),
                    None => continue 'next,
                }
            }
            mu[j] = col;
            prefix.push(x);
            rec(g, kc, k, prefix, mu, out);
            prefix.pop();
        }
    }
    rec(g, kc, k, &mut prefix, &mut mu, &mut out);
    out
}

/// Rank of the alternating matrix of `f` over `F_p` (always even). The modulus
/// is assumed prime; a modulus of 1 gives rank 0.
pub fn rank_alternating(f: &Fingerprint) -> usize {
    let p = f.modulus();
    let k = f.k();
    if p <= 1 {
        return 0;
    }
    let mut m: Vec<Vec<u64>> = (0..k).map(|i| (0..k).map(|j| f.get(i, j)).collect()).collect();
    let mut rank = 0;
    for col in 0..k {
        let Some(piv) = (rank..k).find(|&r| m[r][col] % p != 0) else { continue };
        m.swap(rank, piv);
        let inv = crate::commvar::mod_pow(m[rank][col], p - 2, p);
        for v in m[rank].iter_mut() {
            *v = *v * inv % p;
        }
        for r in 0..k {
            if r != rank && m[r][col] != 0 {
                let factor = m[r][col];
                for c in 0..k {
                    m[r][c] = (m[r][c] + p * p - factor * m[rank][c] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Number of alternating forms of rank exactly 2 on `F_p^k`:
/// `(p^k - 1)(p^{k-1} - 1)/(p^2 - 1)`.
pub fn rank_two_form_count(k: u32, p: u64) -> Result<u128> {
    if k < 2 {
        return Ok(0);
    }
    let p = p as u128;
    let a = p.checked_pow(k).ok_or(Error::Overflow)? - 1;
    let b = p.checked_pow(k - 1).ok_or(Error::Overflow)? - 1;
    Ok(a.checked_mul(b).ok_or(Error::Overflow)? / (p * p - 1))
}

/// `N(k, m, p) = p^{(m-1)(k-2)} (p^k - 1)(p^{k-1} - 1)/(p^2 - 1) + 1`, the
/// number of path components of `Hom(Z^k, G_{m,p})`; defined for `k >= 2`.
pub fn count_components_formula(k: u32, m: u32, p: u64) -> Result<u128> {
    if k < 2 {
        return Err(Error::BadArguments(format!("the component formula needs k >= 2, got k = {k}")));
    }
    if m < 1 {
        return Err(Error::BadArguments("m must be at least 1".into()));
    }
    if !is_prime(p) {
        return Err(Error::BadArguments(format!("p = {p} is not prime")));
    }
    let scale = (p as u128).checked_pow((m - 1).checked_mul(k - 2).ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
    scale.checked_mul(rank_two_form_count(k, p)?).and_then(|v| v.checked_add(1)).ok_or(Error::Overflow)
}
