use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A root of unity `exp(2 pi i num/den)`, stored reduced with `0 <= num < den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootOfUnity {
    num: u64,
    den: u64,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { num: 0, den: 1 };

    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(Error::InvalidDescriptor(format!("root of unity {num}/{den} has non-positive denominator")));
        }
        let num = num.rem_euclid(den);
        let g = num.gcd(&den);
        Ok(RootOfUnity { num: (num / g) as u64, den: (den / g) as u64 })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// Multiplicative order.
    pub fn order(&self) -> u64 {
        self.den
    }

    /// Angle in `[0, 2pi)`.
    pub fn angle(&self) -> f64 {
        std::f64::consts::TAU * self.num as f64 / self.den as f64
    }

    pub fn mul(&self, other: &RootOfUnity) -> RootOfUnity {
        let l = self.den.lcm(&other.den);
        let num = self.num * (l / self.den) + other.num * (l / other.den);
        RootOfUnity::new(num as i64, l as i64).expect("positive denominator")
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }
}

impl Serialize for RootOfUnity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.num as i64, self.den as i64].serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootOfUnity {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [num, den] = <[i64; 2]>::deserialize(d)?;
        RootOfUnity::new(num, den).map_err(serde::de::Error::custom)
    }
}

/// An element of the center of `(S^1)^r x SU(p_1) x ... x SU(p_s)`: one root of
/// unity per circle factor and one scalar root of unity per special unitary factor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CentralElement {
    pub torus: Vec<RootOfUnity>,
    pub factors: Vec<RootOfUnity>,
}

impl CentralElement {
    pub fn identity(r: usize, s: usize) -> Self {
        CentralElement { torus: vec![RootOfUnity::ONE; r], factors: vec![RootOfUnity::ONE; s] }
    }

    pub fn mul(&self, other: &CentralElement) -> CentralElement {
        CentralElement {
            torus: self.torus.iter().zip(&other.torus).map(|(a, b)| a.mul(b)).collect(),
            factors: self.factors.iter().zip(&other.factors).map(|(a, b)| a.mul(b)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.torus.iter().chain(&self.factors).all(RootOfUnity::is_one)
    }

    /// Trivial on the circle factors, i.e. lies in the semisimple part.
    pub fn is_semisimple(&self) -> bool {
        self.torus.iter().all(RootOfUnity::is_one)
    }

    pub fn order(&self) -> u64 {
        self.torus.iter().chain(&self.factors).fold(1u64, |acc, z| acc.lcm(&z.order()))
    }
}

#[derive(Serialize, Deserialize)]
struct DescriptorWire {
    torus_rank: usize,
    su_factors: Vec<usize>,
    #[serde(default)]
    central_generators: Vec<Vec<RootOfUnity>>,
}

/// A compact connected group `((S^1)^r x SU(p_1) x ... x SU(p_s)) / K` with `K`
/// a finite central subgroup given by generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DescriptorWire", into = "DescriptorWire")]
pub struct GroupDescriptor {
    torus_rank: usize,
    su_factors: Vec<usize>,
    central_generators: Vec<CentralElement>,
    /// Enumerated `K`, identity first, the rest sorted.
    central: Vec<CentralElement>,
}

impl From<GroupDescriptor> for DescriptorWire {
    fn from(d: GroupDescriptor) -> Self {
        DescriptorWire {
            torus_rank: d.torus_rank,
            su_factors: d.su_factors,
            central_generators: d
                .central_generators
                .into_iter()
                .map(|c| c.torus.into_iter().chain(c.factors).collect())
                .collect(),
        }
    }
}

impl TryFrom<DescriptorWire> for GroupDescriptor {
    type Error = Error;

    fn try_from(w: DescriptorWire) -> Result<Self> {
        let r = w.torus_rank;
        let gens = w
            .central_generators
            .into_iter()
            .map(|g| {
                if g.len() != r + w.su_factors.len() {
                    return Err(Error::InvalidDescriptor(format!(
                        "central generator has {} entries, expected {}",
                        g.len(),
                        r + w.su_factors.len()
                    )));
                }
                let (t, f) = g.split_at(r);
                Ok(CentralElement { torus: t.to_vec(), factors: f.to_vec() })
            })
            .collect::<Result<Vec<_>>>()?;
        GroupDescriptor::new(r, w.su_factors, gens)
    }
}

/// Hard cap on `|K|`; quotient equality is tested by minimizing over `K`.
const MAX_CENTRAL_ORDER: usize = 4096;

impl GroupDescriptor {
    pub fn new(torus_rank: usize, su_factors: Vec<usize>, central_generators: Vec<CentralElement>) -> Result<Self> {
        if let Some(&p) = su_factors.iter().find(|&&p| p < 2) {
            return Err(Error::InvalidDescriptor(format!("SU({p}) factor; sizes must be at least 2")));
        }
        if torus_rank == 0 && su_factors.is_empty() {
            return Err(Error::InvalidDescriptor("trivial group".into()));
        }
        for g in &central_generators {
            if g.torus.len() != torus_rank || g.factors.len() != su_factors.len() {
                return Err(Error::InvalidDescriptor("central generator has wrong shape".into()));
            }
            for (z, &p) in g.factors.iter().zip(&su_factors) {
                // scalar z*I lies in SU(p) iff z^p = 1
                if (z.num * p as u64) % z.den != 0 {
                    return Err(Error::InvalidDescriptor(format!(
                        "scalar exp(2 pi i {}/{}) is not central in SU({p})",
                        z.num, z.den
                    )));
                }
            }
        }
        let central = enumerate_subgroup(torus_rank, su_factors.len(), &central_generators)?;
        Ok(GroupDescriptor { torus_rank, su_factors, central_generators, central })
    }

    pub fn su(n: usize) -> Result<Self> {
        Self::new(0, vec![n], vec![])
    }

    pub fn torus(r: usize) -> Result<Self> {
        Self::new(r, vec![], vec![])
    }

    /// `U(n) = (S^1 x SU(n)) / <(zeta, zeta^{-1} I)>`.
    pub fn unitary(n: usize) -> Result<Self> {
        let n64 = n as i64;
        let g = CentralElement {
            torus: vec![RootOfUnity::new(1, n64)?],
            factors: vec![RootOfUnity::new(-1, n64)?],
        };
        Self::new(1, vec![n], vec![g])
    }

    /// `G_{m,p} = SU(p)^m / Delta(Z/p)`.
    pub fn g_mp(m: usize, p: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidDescriptor("G_{m,p} needs m >= 1".into()));
        }
        if !is_prime(p as u64) {
            return Err(Error::InvalidDescriptor(format!("G_{{m,p}} needs p prime, got {p}")));
        }
        let zeta = RootOfUnity::new(1, p as i64)?;
        let g = CentralElement { torus: vec![], factors: vec![zeta; m] };
        Self::new(0, vec![p; m], vec![g])
    }

    /// Parse a catalog name: `SU(n)`, `U(n)`, `SO(3)`, `T^r`, `U(1)^r`, `G_{m,p}`.
    pub fn parse(name: &str) -> Result<Self> {
        let s: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::UnsupportedDescriptor(name.to_string());
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        if s == "SO(3)" {
            return Self::g_mp(1, 2);
        }
        if let Some(rest) = s.strip_prefix("U(1)^") {
            return Self::torus(num(rest)?);
        }
        if let Some(rest) = s.strip_prefix("T^") {
            return Self::torus(num(rest)?);
        }
        if let Some(inner) = s.strip_prefix("SU(").and_then(|t| t.strip_suffix(')')) {
            return Self::su(num(inner)?);
        }
        if let Some(inner) = s.strip_prefix("U(").and_then(|t| t.strip_suffix(')')) {
            let n = num(inner)?;
            return if n == 1 { Self::torus(1) } else { Self::unitary(n) };
        }
        if let Some(inner) = s
            .strip_prefix("G_{")
            .and_then(|t| t.strip_suffix('}'))
            .or_else(|| s.strip_prefix("G_(").and_then(|t| t.strip_suffix(')')))
        {
            let (m, p) = inner.split_once(',').ok_or_else(bad)?;
            return Self::g_mp(num(m)?, num(p)?);
        }
        Err(bad())
    }

    pub fn torus_rank(&self) -> usize {
        self.torus_rank
    }

    pub fn su_factors(&self) -> &[usize] {
        &self.su_factors
    }

    pub fn central_generators(&self) -> &[CentralElement] {
        &self.central_generators
    }

    /// All elements of `K`, identity first.
    pub fn central_subgroup(&self) -> &[CentralElement] {
        &self.central
    }

    pub fn central_order(&self) -> usize {
        self.central.len()
    }

    pub fn is_quotient(&self) -> bool {
        self.central.len() > 1
    }

    /// Indices into [`Self::central_subgroup`] of the elements lying in the semisimple part.
    pub fn semisimple_central_indices(&self) -> Vec<usize> {
        (0..self.central.len()).filter(|&i| self.central[i].is_semisimple()).collect()
    }

    /// `(m, p)` when this descriptor is `SU(p)^m / Delta(Z/p)`.
    pub fn as_gmp(&self) -> Option<(usize, usize)> {
        let p = *self.su_factors.first()?;
        let m = self.su_factors.len();
        if self.torus_rank != 0 || self.su_factors.iter().any(|&q| q != p) || !is_prime(p as u64) {
            return None;
        }
        let expected = Self::g_mp(m, p).ok()?;
        (expected.central == self.central).then_some((m, p))
    }

    pub fn name(&self) -> String {
        if let Some((m, p)) = self.as_gmp() {
            return format!("G_{{{m},{p}}}");
        }
        let mut parts = Vec::new();
        if self.torus_rank > 0 {
            parts.push(format!("T^{}", self.torus_rank));
        }
        parts.extend(self.su_factors.iter().map(|p| format!("SU({p})")));
        let base = parts.join(" x ");
        if self.is_quotient() {
            format!("({base})/K[{}]", self.central.len())
        } else {
            base
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn enumerate_subgroup(r: usize, s: usize, gens: &[CentralElement]) -> Result<Vec<CentralElement>> {
    let id = CentralElement::identity(r, s);
    let mut seen: BTreeSet<CentralElement> = BTreeSet::from([id.clone()]);
    let mut frontier = vec![id.clone()];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y.clone()) {
                if seen.len() > MAX_CENTRAL_ORDER {
                    return Err(Error::InvalidDescriptor("central subgroup too large".into()));
                }
                frontier.push(y);
            }
        }
    }
    seen.remove(&id);
    let mut out = vec![id];
    out.extend(seen);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_names() {
        let g = GroupDescriptor::parse("G_{3,2}").unwrap();
        assert_eq!(g.su_factors(), &[2, 2, 2]);
        assert_eq!(g.central_order(), 2);
        assert_eq!(g.as_gmp(), Some((3, 2)));
        assert_eq!(g.name(), "G_{3,2}");
        assert_eq!(GroupDescriptor::parse("SO(3)").unwrap().as_gmp(), Some((1, 2)));
        assert_eq!(GroupDescriptor::parse("U(3)").unwrap().central_order(), 3);
        assert_eq!(GroupDescriptor::parse("T^2").unwrap().torus_rank(), 2);
        assert!(GroupDescriptor::parse("Sp(2)").is_err());
        assert!(GroupDescriptor::parse("G_{2,4}").is_err());
    }

    #[test]
    fn rejects_non_central_scalar() {
        let g = CentralElement { torus: vec![], factors: vec![RootOfUnity::new(1, 3).unwrap()] };
        assert!(GroupDescriptor::new(0, vec![2], vec![g]).is_err());
    }

    #[test]
    fn subgroup_closure() {
        let a = CentralElement { torus: vec![], factors: vec![RootOfUnity::new(1, 2).unwrap(), RootOfUnity::ONE] };
        let b = CentralElement { torus: vec![], factors: vec![RootOfUnity::ONE, RootOfUnity::new(1, 2).unwrap()] };
        let d = GroupDescriptor::new(0, vec![2, 2], vec![a, b]).unwrap();
        assert_eq!(d.central_order(), 4);
        assert!(d.central_subgroup()[0].is_identity());
    }

    #[test]
    fn json_roundtrip() {
        let d = GroupDescriptor::unitary(2).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"torus_rank":1,"su_factors":[2],"central_generators":[[[1,2],[1,2]]]}"#);
        let back: GroupDescriptor = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }
}
