//! Fundamental groups: finitely generated abelian groups via Smith normal
//! form, `pi_1(G)` for descriptors, `pi_1` of components of `Hom(Z^k, G)`, and
//! exactness checks for short sequences of abelian groups.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::central::{ComponentClass, Fingerprint};
use crate::finmodel::rank_alternating;
use crate::matgroup::GroupDescriptor;
use crate::{Error, ExactnessStage, Result};

/// Integer matrix, row-major.
pub type IntMatrix = Vec<Vec<i64>>;

fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow)
}

fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

/// Euclidean quotient: the remainder `a - q b` lies in `[0, |b|)`.
fn quot(a: i64, b: i64) -> Result<i64> {
    a.checked_div_euclid(b).ok_or(Error::Overflow)
}

/// `a - q b`.
fn sub_mul(a: i64, q: i64, b: i64) -> Result<i64> {
    a.checked_sub(mul(q, b)?).ok_or(Error::Overflow)
}

fn shape(m: &IntMatrix) -> (usize, usize) {
    (m.len(), m.first().map_or(0, Vec::len))
}

/// Columns as a row-major matrix with `rows` rows.
pub fn from_columns(rows: usize, cols: &[Vec<i64>]) -> IntMatrix {
    (0..rows).map(|r| cols.iter().map(|c| c[r]).collect()).collect()
}

fn column(m: &IntMatrix, j: usize) -> Vec<i64> {
    m.iter().map(|row| row[j]).collect()
}

/// Invariant factors of `m`: the nonzero diagonal of its Smith normal form,
/// each dividing the next.
pub fn smith_invariants(m: &IntMatrix) -> Result<Vec<i64>> {
    let (rows, cols) = shape(m);
    let mut a = m.clone();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero entry in the remaining block
        let Some((pr, pc)) = (t..rows)
            .flat_map(|r| (t..cols).map(move |c| (r, c)))
            .filter(|&(r, c)| a[r][c] != 0)
            .min_by_key(|&(r, c)| a[r][c].unsigned_abs())
        else {
            break;
        };
        a.swap(t, pr);
        for row in a.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let p = a[t][t];
            let mut changed = false;
            for r in t + 1..rows {
                let q = quot(a[r][t], p)?;
                if q != 0 {
                    for c in t..cols {
                        a[r][c] = sub_mul(a[r][c], q, a[t][c])?;
                    }
                }
            }
            for c in t + 1..cols {
                let q = quot(a[t][c], p)?;
                if q != 0 {
                    for r in t..rows {
                        a[r][c] = sub_mul(a[r][c], q, a[r][t])?;
                    }
                }
            }
            // move any smaller remainder into the pivot position
            if let Some(r) = (t + 1..rows).find(|&r| a[r][t] != 0) {
                a.swap(t, r);
                changed = true;
            } else if let Some(c) = (t + 1..cols).find(|&c| a[t][c] != 0) {
                for row in a.iter_mut() {
                    row.swap(t, c);
                }
                changed = true;
            } else if let Some((r, _)) = (t + 1..rows)
                .flat_map(|r| (t + 1..cols).map(move |c| (r, c)))
                .find(|&(r, c)| a[r][c] % a[t][t] != 0)
            {
                // enforce divisibility: add row r to row t
                for c in t..cols {
                    a[t][c] = add(a[t][c], a[r][c])?;
                }
                changed = true;
            }
            if !changed {
                break;
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    Ok(diag)
}

/// Column echelon form `H = M U` with `U` unimodular. Column `j < rank` of `H`
/// has its first nonzero entry (positive) in row `pivots[j]`, strictly increasing.
struct Echelon {
    h: IntMatrix,
    u: IntMatrix,
    pivots: Vec<usize>,
}

fn column_echelon(m: &IntMatrix, cols: usize) -> Result<Echelon> {
    let rows = m.len();
    let mut h = m.clone();
    let mut u: IntMatrix = (0..cols).map(|i| (0..cols).map(|j| i64::from(i == j)).collect()).collect();
    let mut pivots = Vec::new();
    let mut c0 = 0;
    let col_op = |h: &mut IntMatrix, u: &mut IntMatrix, dst: usize, q: i64, src: usize| -> Result<()> {
        for row in h.iter_mut() {
            row[dst] = sub_mul(row[dst], q, row[src])?;
        }
        for row in u.iter_mut() {
            row[dst] = sub_mul(row[dst], q, row[src])?;
        }
        Ok(())
    };
    let swap = |h: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize| {
        for row in h.iter_mut().chain(u.iter_mut()) {
            row.swap(a, b);
        }
    };
    for r in 0..rows {
        if c0 == cols {
            break;
        }
        loop {
            let Some(p) = (c0..cols).filter(|&c| h[r][c] != 0).min_by_key(|&c| h[r][c].unsigned_abs()) else {
                break;
            };
            swap(&mut h, &mut u, c0, p);
            let mut done = true;
            for c in c0 + 1..cols {
                if h[r][c] != 0 {
                    let q = quot(h[r][c], h[r][c0])?;
                    col_op(&mut h, &mut u, c, q, c0)?;
                    if h[r][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[r].get(c0).is_some_and(|&v| v != 0) {
            if h[r][c0] < 0 {
                for row in h.iter_mut().chain(u.iter_mut()) {
                    row[c0] = row[c0].checked_neg().ok_or(Error::Overflow)?;
                }
            }
            pivots.push(r);
            c0 += 1;
        }
    }
    Ok(Echelon { h, u, pivots })
}

impl Echelon {
    fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Whether `v` lies in the column lattice.
    fn contains(&self, v: &[i64]) -> Result<bool> {
        let mut v = v.to_vec();
        for (j, &r) in self.pivots.iter().enumerate() {
            if v[..r].iter().any(|&x| x != 0) {
                return Ok(false);
            }
            let p = self.h[r][j];
            if v[r] % p != 0 {
                return Ok(false);
            }
            let q = v[r] / p;
            for (i, x) in v.iter_mut().enumerate() {
                *x = sub_mul(*x, q, self.h[i][j])?;
            }
        }
        Ok(v.iter().all(|&x| x == 0))
    }

    /// Kernel basis of the original matrix: columns of `U` beyond the rank.
    fn kernel(&self) -> Vec<Vec<i64>> {
        let n = self.u.len();
        (self.rank()..n).map(|j| column(&self.u, j)).collect()
    }
}

/// Lattice spanned by `gens` (vectors of length `dim`).
fn lattice(dim: usize, gens: &[Vec<i64>]) -> Result<Echelon> {
    column_echelon(&from_columns(dim, gens), gens.len())
}

/// Integer kernel basis of `m` (`rows x cols`).
pub fn integer_kernel(m: &IntMatrix, cols: usize) -> Result<Vec<Vec<i64>>> {
    Ok(column_echelon(m, cols)?.kernel())
}

/// A finitely generated abelian group `Z^free_rank + Z/d_1 + ... + Z/d_t`
/// with `2 <= d_1 | d_2 | ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FgAbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl FgAbelianGroup {
    pub fn trivial() -> Self {
        FgAbelianGroup { free_rank: 0, torsion: vec![] }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup { free_rank: rank, torsion: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_invariants(0, &[n as i64])
    }

    /// From arbitrary Smith diagonal entries: zeros add free rank, units vanish.
    fn from_invariants(extra_free: usize, diag: &[i64]) -> Self {
        let mut free_rank = extra_free;
        let mut torsion = Vec::new();
        for &d in diag {
            match d.unsigned_abs() {
                0 => free_rank += 1,
                1 => {}
                n => torsion.push(n),
            }
        }
        torsion.sort_unstable();
        FgAbelianGroup { free_rank, torsion }
    }

    /// Divisibility chain and factors at least 2.
    pub fn is_normalized(&self) -> bool {
        self.torsion.iter().all(|&d| d >= 2) && self.torsion.windows(2).all(|w| w[1] % w[0] == 0)
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> u128 {
        self.torsion.iter().map(|&d| d as u128).product()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<u128> {
        (self.free_rank == 0).then(|| self.torsion_order())
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let mut p = self.presentation();
        let q = other.presentation();
        let n = p.generators;
        p.generators += q.generators;
        for r in &mut p.relations {
            r.resize(p.generators, 0);
        }
        for r in q.relations {
            let mut v = vec![0; n];
            v.extend(r);
            p.relations.push(v);
        }
        p.group()
    }

    /// `k`-fold direct sum.
    pub fn power(&self, k: usize) -> Result<Self> {
        (0..k).try_fold(Self::trivial(), |acc, _| acc.direct_sum(self))
    }

    /// Standard presentation: one generator per cyclic summand.
    pub fn presentation(&self) -> Presentation {
        let n = self.free_rank + self.torsion.len();
        let relations = self
            .torsion
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut v = vec![0; n];
                v[self.free_rank + i] = d as i64;
                v
            })
            .collect();
        Presentation { generators: n, relations }
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("1");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|&&x| x == d).count();
            parts.push(if run == 1 { format!("Z/{d}") } else { format!("(Z/{d})^{run}") });
            i += run;
        }
        f.write_str(&parts.join(" x "))
    }
}

/// An abelian group `Z^generators / <relations>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generators: usize,
    pub relations: Vec<Vec<i64>>,
}

impl Presentation {
    pub fn new(generators: usize, relations: Vec<Vec<i64>>) -> Result<Self> {
        if relations.iter().any(|r| r.len() != generators) {
            return Err(Error::BadArguments("relation length does not match the number of generators".into()));
        }
        Ok(Presentation { generators, relations })
    }

    pub fn free(n: usize) -> Self {
        Presentation { generators: n, relations: vec![] }
    }

    pub fn group(&self) -> Result<FgAbelianGroup> {
        let m = from_columns(self.generators, &self.relations);
        let diag = smith_invariants(&m)?;
        let free = self.generators - diag.len();
        Ok(FgAbelianGroup::from_invariants(free, &diag))
    }

    fn relation_lattice(&self, extra: &[Vec<i64>]) -> Result<Echelon> {
        let gens: Vec<Vec<i64>> = self.relations.iter().chain(extra).cloned().collect();
        lattice(self.generators, &gens)
    }

    /// `k`-fold direct sum, generators grouped by summand.
    pub fn power(&self, k: usize) -> Presentation {
        let n = self.generators;
        let mut relations = Vec::new();
        for b in 0..k {
            for r in &self.relations {
                let mut v = vec![0; n * k];
                v[b * n..(b + 1) * n].copy_from_slice(r);
                relations.push(v);
            }
        }
        Presentation { generators: n * k, relations }
    }
}

fn apply(map: &IntMatrix, v: &[i64]) -> Result<Vec<i64>> {
    map.iter()
        .map(|row| row.iter().zip(v).try_fold(0i64, |acc, (&a, &b)| add(acc, mul(a, b)?)))
        .collect()
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Block-diagonal `k`-fold power of a map.
pub fn map_power(map: &IntMatrix, cols: usize, k: usize) -> IntMatrix {
    let rows = map.len();
    let mut out = vec![vec![0; cols * k]; rows * k];
    for b in 0..k {
        for r in 0..rows {
            for c in 0..cols {
                out[b * rows + r][b * cols + c] = map[r][c];
            }
        }
    }
    out
}

/// Elements `x` of `Z^{cols}` with `map x` in the relation lattice of `target`.
fn preimage_generators(map: &IntMatrix, cols: usize, target: &Presentation) -> Result<Vec<Vec<i64>>> {
    // kernel of [map | R]: (x, y) with map x + R y = 0
    let r = &target.relations;
    let m: IntMatrix = (0..target.generators)
        .map(|i| map[i].iter().copied().chain(r.iter().map(|rel| rel[i])).collect())
        .collect();
    let ker = integer_kernel(&m, cols + r.len())?;
    Ok(ker.into_iter().map(|v| v[..cols].to_vec()).collect())
}

/// Check `1 -> A -f-> B -g-> C -> 1` for presented abelian groups, with maps
/// given as integer matrices on generators (`f` is `|gens B| x |gens A|`).
/// Fails with `NotExact` naming the first stage that breaks.
pub fn check_exact_sequence(
    a: &Presentation,
    b: &Presentation,
    c: &Presentation,
    f: &IntMatrix,
    g: &IntMatrix,
) -> Result<()> {
    let shape_ok = |m: &IntMatrix, rows: usize, cols: usize| m.len() == rows && m.iter().all(|r| r.len() == cols);
    if !shape_ok(f, b.generators, a.generators) || !shape_ok(g, c.generators, b.generators) {
        return Err(Error::BadArguments("map shapes do not match the presentations".into()));
    }
    let not = |s| Err(Error::NotExact(s));
    let lat_b = b.relation_lattice(&[])?;
    let lat_c = c.relation_lattice(&[])?;
    for rel in &a.relations {
        if !lat_b.contains(&apply(f, rel)?)? {
            return not(ExactnessStage::WellDefined);
        }
    }
    for rel in &b.relations {
        if !lat_c.contains(&apply(g, rel)?)? {
            return not(ExactnessStage::WellDefined);
        }
    }
    // injective: f x = 0 in B forces x = 0 in A
    let lat_a = a.relation_lattice(&[])?;
    for x in preimage_generators(f, a.generators, b)? {
        if !lat_a.contains(&x)? {
            return not(ExactnessStage::Injective);
        }
    }
    // middle: g f = 0 and ker g within im f
    for i in 0..a.generators {
        if !lat_c.contains(&apply(g, &apply(f, &unit(a.generators, i))?)?)? {
            return not(ExactnessStage::Middle);
        }
    }
    let image_f: Vec<Vec<i64>> = (0..a.generators).map(|j| column(f, j)).collect();
    let im_f = b.relation_lattice(&image_f)?;
    for x in preimage_generators(g, b.generators, c)? {
        if !im_f.contains(&x)? {
            return not(ExactnessStage::Middle);
        }
    }
    // surjective: every generator of C is hit
    let image_g: Vec<Vec<i64>> = (0..b.generators).map(|j| column(g, j)).collect();
    let im_g = c.relation_lattice(&image_g)?;
    for i in 0..c.generators {
        if !im_g.contains(&unit(c.generators, i))? {
            return not(ExactnessStage::Surjective);
        }
    }
    Ok(())
}

/// Quotient `B / f(A)` as an abelian group.
pub fn cokernel(b: &Presentation, f: &IntMatrix, a_generators: usize) -> Result<FgAbelianGroup> {
    let mut p = b.clone();
    p.relations.extend((0..a_generators).map(|j| column(f, j)));
    p.group()
}

/// `pi_1` data of `G = ((S^1)^r x prod SU(p_i)) / K`.
///
/// A loop lifts to a path in `R^r x prod SU(p_i)` from the identity to
/// `(w, kappa)` with `kappa in K` and `exp(2 pi i w) = kappa` on the circle
/// factors, and `pi_1(G)` is the group of such endpoints. It is generated by
/// the unit vectors of `Z^r` and one lift per generator of `K`; this records
/// that generating set and the kernel of the map to `Q^r x K`.
#[derive(Debug, Clone)]
pub struct Pi1Structure {
    pub torus_rank: usize,
    /// Number of generators of `K` used.
    pub k_generators: usize,
    /// `pi_1(G) = Z^{r + g} / relations`.
    pub presentation: Presentation,
    /// `K = Z^g / relations`.
    pub central: Presentation,
}

impl Pi1Structure {
    pub fn group(&self) -> Result<FgAbelianGroup> {
        self.presentation.group()
    }

    /// `pi_1` of the cover `Z^r -> pi_1(G)`.
    pub fn cover_inclusion(&self) -> IntMatrix {
        let n = self.torus_rank + self.k_generators;
        (0..n).map(|i| (0..self.torus_rank).map(|j| i64::from(i == j)).collect()).collect()
    }

    /// `pi_1(G) -> K`, the endpoint of the lifted loop.
    pub fn to_central(&self) -> IntMatrix {
        let r = self.torus_rank;
        (0..self.k_generators).map(|i| (0..r + self.k_generators).map(|j| i64::from(j == r + i)).collect()).collect()
    }
}

pub fn pi1_structure(d: &GroupDescriptor) -> Result<Pi1Structure> {
    let r = d.torus_rank();
    let s = d.su_factors().len();
    let gens = d.central_generators();
    let g = gens.len();
    let l = gens
        .iter()
        .flat_map(|c| c.torus.iter().chain(&c.factors).map(|z| z.den()))
        .fold(1u64, |a, b| a.lcm(&b)) as i64;
    let scaled = |num: u64, den: u64| -> Result<i64> { mul(num as i64, l / den as i64) };
    // rows: r circle coordinates (in units of 1/l turns), then s factor
    // coordinates mod l; columns: Z^r, K generators, then s slack columns.
    let mut rows = vec![vec![0i64; r + g + s]; r + s];
    for i in 0..r {
        rows[i][i] = l;
    }
    for (j, c) in gens.iter().enumerate() {
        for (i, z) in c.torus.iter().enumerate() {
            rows[i][r + j] = scaled(z.num(), z.den())?;
        }
        for (f, z) in c.factors.iter().enumerate() {
            rows[r + f][r + j] = scaled(z.num(), z.den())?;
        }
    }
    for f in 0..s {
        rows[r + f][r + g + f] = l;
    }
    let ker = integer_kernel(&rows, r + g + s)?;
    let relations: Vec<Vec<i64>> = ker.iter().map(|v| v[..r + g].to_vec()).collect();
    // relations among the K generators alone: drop the Z^r columns' freedom by
    // allowing arbitrary integer circle shifts, i.e. work mod l on every row
    let mut krows = vec![vec![0i64; g + r + s]; r + s];
    for (j, c) in gens.iter().enumerate() {
        for (i, z) in c.torus.iter().chain(&c.factors).enumerate() {
            krows[i][j] = scaled(z.num(), z.den())?;
        }
    }
    for i in 0..r + s {
        krows[i][g + i] = l;
    }
    let kker = integer_kernel(&krows, g + r + s)?;
    let krel: Vec<Vec<i64>> = kker.iter().map(|v| v[..g].to_vec()).collect();
    Ok(Pi1Structure {
        torus_rank: r,
        k_generators: g,
        presentation: Presentation::new(r + g, relations)?,
        central: Presentation::new(g, krel)?,
    })
}

/// Groups whose `pi_1` data is tabulated: descriptors, plus `Spin(7)` which is
/// known only through its exotic commuting triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogGroup {
    Descriptor(GroupDescriptor),
    Spin7,
}

impl CatalogGroup {
    /// Catalog names as accepted by [`GroupDescriptor::parse`], plus `Spin(7)`.
    pub fn parse(name: &str) -> Result<Self> {
        let compact: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.eq_ignore_ascii_case("Spin(7)") {
            return Ok(CatalogGroup::Spin7);
        }
        GroupDescriptor::parse(name).map(CatalogGroup::Descriptor)
    }
}

/// `pi_1(G)`.
pub fn pi1_of_group(g: &CatalogGroup) -> Result<FgAbelianGroup> {
    match g {
        CatalogGroup::Spin7 => Ok(FgAbelianGroup::trivial()),
        CatalogGroup::Descriptor(d) => pi1_structure(d)?.group(),
    }
}

/// A finite, possibly non-abelian, group known by name and order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteGroupTag {
    pub name: String,
    pub order: u128,
    pub presentation: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pi1Answer {
    Abelian(FgAbelianGroup),
    Finite(FiniteGroupTag),
}

impl Pi1Answer {
    pub fn name(&self) -> String {
        match self {
            Pi1Answer::Abelian(a) => a.to_string(),
            Pi1Answer::Finite(t) => t.name.clone(),
        }
    }

    pub fn order(&self) -> Option<u128> {
        match self {
            Pi1Answer::Abelian(a) => a.order(),
            Pi1Answer::Finite(t) => Some(t.order),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::json!({ "group": self.name(), "order": self.order().map(|o| o as u64) });
        if let Pi1Answer::Abelian(a) = self {
            v["free_rank"] = a.free_rank.into();
            v["torsion"] = a.torsion.clone().into();
        }
        v
    }
}

fn extraspecial_tag(m: usize, p: usize) -> FiniteGroupTag {
    let e = if p == 2 { "Q8".to_string() } else { format!("E_{p}") };
    let name = match m - 1 {
        0 => e.clone(),
        1 => format!("Z/{p} x {e}"),
        n => format!("(Z/{p})^{n} x {e}"),
    };
    let ep = if p == 2 {
        "Q8 = <i, j | i^4 = 1, i^2 = j^2, j i j^-1 = i^-1>".to_string()
    } else {
        format!("E_{p} = <a, b, z | a^{p} = b^{p} = z^{p} = 1, [a, b] = z, z central>")
    };
    FiniteGroupTag {
        name,
        order: (p as u128).pow(m as u32 + 2),
        presentation: format!("direct product of {} copies of Z/{p} with {ep}", m - 1),
    }
}

/// `pi_1` of a component of `Hom(Z^k, G)`.
///
/// The identity component has `pi_1 = pi_1(G)^k`. Exotic components are
/// tabulated for `G_{m,p}`, where `pi_1 = (Z/p)^{m-1} x E_p` for every
/// realizable nonzero fingerprint, and for `Spin(7)` at `k = 3`, where it is
/// `(Z/2)^4`.
pub fn pi1_of_hom(g: &CatalogGroup, k: usize, component: &ComponentClass) -> Result<Pi1Answer> {
    if k == 0 {
        return Err(Error::BadArguments("k must be at least 1".into()));
    }
    match (component, g) {
        (ComponentClass::IdentityComponent, _) => Ok(Pi1Answer::Abelian(pi1_of_group(g)?.power(k)?)),
        (ComponentClass::Exotic(f), CatalogGroup::Descriptor(d)) => {
            let (m, p) = d
                .as_gmp()
                .ok_or_else(|| Error::UnsupportedExotic(format!("no exotic components are tabulated for {d}")))?;
            check_fingerprint(f, k, p as u64)?;
            Ok(Pi1Answer::Finite(extraspecial_tag(m, p)))
        }
        (ComponentClass::Exotic(f), CatalogGroup::Spin7) => {
            if k != 3 {
                return Err(Error::UnsupportedExotic(format!("Spin(7) exotic components are tabulated for k = 3, not {k}")));
            }
            check_fingerprint(f, k, 2)?;
            Ok(Pi1Answer::Finite(FiniteGroupTag {
                name: "(Z/2)^4".into(),
                order: 16,
                presentation: "elementary abelian group of order 16".into(),
            }))
        }
    }
}

fn check_fingerprint(f: &Fingerprint, k: usize, p: u64) -> Result<()> {
    if f.k() != k || f.modulus() != p {
        return Err(Error::BadArguments(format!(
            "fingerprint is for k = {}, modulus {}; expected k = {k}, modulus {p}",
            f.k(),
            f.modulus()
        )));
    }
    if f.is_zero() {
        return Err(Error::ZeroFingerprint);
    }
    let rank = rank_alternating(f);
    if rank > 2 {
        return Err(Error::UnrealizableFingerprint { rank });
    }
    Ok(())
}

/// The short exact sequence `1 -> (Z^r)^k -> pi_1(G)^k -> K^k -> 1` as
/// presentations and maps, ready for [`check_exact_sequence`].
#[derive(Debug, Clone)]
pub struct SequenceFixture {
    pub a: Presentation,
    pub b: Presentation,
    pub c: Presentation,
    pub f: IntMatrix,
    pub g: IntMatrix,
}

pub fn covering_sequence(d: &GroupDescriptor, k: usize) -> Result<SequenceFixture> {
    let s = pi1_structure(d)?;
    let n = s.torus_rank + s.k_generators;
    Ok(SequenceFixture {
        a: Presentation::free(s.torus_rank).power(k),
        b: s.presentation.power(k),
        c: s.central.power(k),
        f: map_power(&s.cover_inclusion(), s.torus_rank, k),
        g: map_power(&s.to_central(), n, k),
    })
}

#[cfg(test)]
mod tests;
