//! Paths and homotopies inside the commuting variety: discrete curve
//! shortening of loops, the coordinate-loop homotopy grid, an explicit path
//! from an identity-component tuple to the trivial tuple, and torus windings.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::central::{classify_component, ComponentClass};
use crate::commvar::{commutator_residual, CommutingTuple};
use crate::matgroup::linalg::{self, CMat};
use crate::matgroup::{
    self, distance, geodesic_point, group_exp, group_log, rng_from_seed, ElementWire,
    GroupDescriptor, GroupElement, LieAlgebraElement,
};
use crate::weyl::joint_diagonalize;
use crate::{tol, Error, Result};

/// A polyline `v_0, ..., v_M` in `G`. A closed path repeats its base: `v_M = v_0`.
#[derive(Debug, Clone)]
pub struct GroupPath {
    descriptor: Arc<GroupDescriptor>,
    vertices: Vec<GroupElement>,
    closed: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathWire {
    pub descriptor: GroupDescriptor,
    #[serde(default)]
    pub closed: bool,
    pub vertices: Vec<ElementWire>,
}

/// Tolerance for `v_M = v_0` in a closed path.
const CLOSE_TOL: f64 = 1e-9;

impl GroupPath {
    /// A path with at least two vertices; a closed path must end where it starts.
    pub fn new(descriptor: &Arc<GroupDescriptor>, vertices: Vec<GroupElement>, closed: bool) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidPath("a path needs at least two vertices".into()));
        }
        if vertices.iter().any(|v| !matgroup::same_descriptor(v.descriptor(), descriptor)) {
            return Err(Error::DescriptorMismatch);
        }
        if closed {
            let gap = distance(&vertices[0], vertices.last().expect("non-empty"))?;
            if gap > CLOSE_TOL {
                return Err(Error::InvalidPath(format!("closed path ends {gap:.3e} away from its base")));
            }
        }
        Ok(GroupPath { descriptor: descriptor.clone(), vertices, closed })
    }

    pub fn descriptor(&self) -> &Arc<GroupDescriptor> {
        &self.descriptor
    }

    pub fn vertices(&self) -> &[GroupElement] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Number of segments `M`.
    pub fn segments(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn base(&self) -> &GroupElement {
        &self.vertices[0]
    }

    /// Largest distance between consecutive vertices.
    pub fn max_step(&self) -> f64 {
        self.vertices
            .windows(2)
            .map(|w| distance(&w[0], &w[1]).expect("shared descriptor"))
            .fold(0.0, f64::max)
    }

    /// Largest pairwise vertex distance.
    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let mut d: f64 = 0.0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                d = d.max(distance(&v[i], &v[j]).expect("shared descriptor"));
            }
        }
        d
    }

    /// Concatenation of two loops with the same base.
    pub fn concat(&self, other: &GroupPath) -> Result<GroupPath> {
        let gap = distance(self.vertices.last().expect("non-empty"), other.base())?;
        if gap > CLOSE_TOL {
            return Err(Error::InvalidPath(format!("paths do not meet (gap {gap:.3e})")));
        }
        let mut v = self.vertices.clone();
        v.extend(other.vertices[1..].iter().cloned());
        GroupPath::new(&self.descriptor, v, self.closed && other.closed)
    }

    /// Insert `parts - 1` geodesic points inside every segment.
    pub fn refine(&self, parts: usize) -> Result<GroupPath> {
        let parts = parts.max(1);
        let lifts = continuous_lifts(&self.vertices);
        let mut v = vec![self.vertices[0].clone()];
        for w in lifts.windows(2) {
            for j in 1..parts {
                v.push(geodesic_point(&w[0], &w[1], j as f64 / parts as f64)?.project());
            }
            v.push(w[1].project());
        }
        GroupPath::new(&self.descriptor, v, self.closed)
    }

    pub fn to_wire(&self) -> PathWire {
        PathWire {
            descriptor: (*self.descriptor).clone(),
            closed: self.closed,
            vertices: self.vertices.iter().map(GroupElement::to_wire).collect(),
        }
    }

    pub fn from_wire(w: &PathWire) -> Result<Self> {
        let d = Arc::new(w.descriptor.clone());
        let v = w.vertices.iter().map(|e| GroupElement::from_wire(&d, e)).collect::<Result<Vec<_>>>()?;
        Self::new(&d, v, w.closed)
    }
}

/// Lifts chosen so consecutive vertices are nearest in the cover: each lift is
/// replaced by the `K`-translate closest to its predecessor.
fn continuous_lifts(v: &[GroupElement]) -> Vec<GroupElement> {
    let mut out: Vec<GroupElement> = Vec::with_capacity(v.len());
    for x in v {
        let x = x.lift();
        let next = match out.last() {
            None => x,
            Some(prev) => {
                let d = x.descriptor();
                (0..d.central_order())
                    .map(|i| GroupElement::central(d, i).lift().mul_unchecked(&x))
                    .min_by(|a, b| {
                        matgroup::lift_distance_unchecked(prev, a).total_cmp(&matgroup::lift_distance_unchecked(prev, b))
                    })
                    .expect("K contains the identity")
            }
        };
        out.push(next);
    }
    out
}

/// Homotopy class data of a loop: lifting it continuously to
/// `R^r x SU(p_1) x ...`, the circle coordinates advance by
/// `turns[i] / denominator` full turns and the endpoint lift is `K[holonomy]`
/// times the starting lift. The loop is null-homotopic iff all turns vanish and
/// the holonomy is the identity (index 0).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Winding {
    pub turns: Vec<i64>,
    pub denominator: u64,
    pub holonomy: usize,
}

impl Winding {
    pub fn is_trivial(&self) -> bool {
        self.holonomy == 0 && self.turns.iter().all(|&t| t == 0)
    }
}

/// Steps closer than this to a half turn are rejected as ambiguous.
pub const HALF_TURN_MARGIN: f64 = tol::EIG_BRANCH;

/// Winding vector of a closed loop. For a pure circle factor group `turns` is
/// the ordinary integer winding per coordinate; for quotients such as `U(n)`
/// the circle coordinates are measured in units of `1/denominator` turns, which
/// for `U(n)` is the determinant winding.
pub fn winding_vector(path: &GroupPath) -> Result<Winding> {
    if !path.closed {
        return Err(Error::InvalidPath("winding is defined for closed loops".into()));
    }
    let d = path.descriptor();
    let lifts = continuous_lifts(path.vertices());
    let r = d.torus_rank();
    let mut total = vec![0.0f64; r];
    for (s, w) in lifts.windows(2).enumerate() {
        for (c, acc) in total.iter_mut().enumerate() {
            let step = linalg::wrap_pi(w[1].torus()[c] - w[0].torus()[c]);
            if step.abs() > PI - HALF_TURN_MARGIN {
                return Err(Error::AmbiguousWinding { step: s, coordinate: c });
            }
            *acc += step;
        }
    }
    let start = &lifts[0];
    let end = lifts.last().expect("non-empty");
    let holonomy = (0..d.central_order())
        .min_by(|&a, &b| {
            let da = matgroup::lift_distance_unchecked(end, &GroupElement::central(d, a).lift().mul_unchecked(start));
            let db = matgroup::lift_distance_unchecked(end, &GroupElement::central(d, b).lift().mul_unchecked(start));
            da.total_cmp(&db)
        })
        .expect("K contains the identity");
    let denominator = d
        .central_subgroup()
        .iter()
        .flat_map(|c| c.torus.iter().map(|z| z.den()))
        .fold(1u64, num_integer::lcm);
    let mut turns = Vec::with_capacity(r);
    for (c, &t) in total.iter().enumerate() {
        let x = t / TAU * denominator as f64;
        let n = x.round();
        if (x - n).abs() > 0.1 {
            return Err(Error::InvalidPath(format!(
                "circle coordinate {c} advances by {x:.4}/{denominator} turns, not a closed loop"
            )));
        }
        turns.push(n as i64);
    }
    Ok(Winding { turns, denominator, holonomy })
}

/// Parameters of [`contract_loop`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContractionParams {
    /// Largest allowed distance between consecutive vertices.
    pub delta_step: f64,
    /// Curve shortening stops once the loop's diameter is below this.
    pub delta_ball: f64,
    pub max_sweeps: usize,
    /// Stall when the distance to the base has not improved for this many sweeps.
    pub stall_window: usize,
    /// Number of geodesic cone stages after shortening.
    pub cone_stages: usize,
    /// Keep every `record_every`-th shortening sweep as a stage.
    pub record_every: usize,
    /// On stall, jitter interior vertices (seeded) and continue instead of failing.
    pub perturb: Option<u64>,
}

impl Default for ContractionParams {
    fn default() -> Self {
        ContractionParams {
            delta_step: 0.5,
            delta_ball: 0.2,
            max_sweeps: 10_000,
            stall_window: 2_000,
            cone_stages: 8,
            record_every: 1,
            perturb: None,
        }
    }
}

/// Result of [`contract_loop`]: the stages, first the input and last the
/// constant loop at the base.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub stages: Vec<GroupPath>,
    pub sweeps: usize,
    pub final_diameter: f64,
}

fn radius(lifts: &[GroupElement]) -> f64 {
    lifts.iter().map(|v| matgroup::lift_distance_unchecked(&lifts[0], v)).fold(0.0, f64::max)
}

fn lift_diameter(lifts: &[GroupElement]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..lifts.len() {
        for j in i + 1..lifts.len() {
            d = d.max(matgroup::lift_distance_unchecked(&lifts[i], &lifts[j]));
        }
    }
    d
}

fn stage(d: &Arc<GroupDescriptor>, lifts: &[GroupElement]) -> GroupPath {
    GroupPath { descriptor: d.clone(), vertices: lifts.iter().map(GroupElement::project).collect(), closed: true }
}

/// Contract a null-homotopic closed loop to its base point.
///
/// Discrete curve shortening: alternate sweeps replace every even (then odd)
/// interior vertex by the geodesic midpoint of its neighbours, with the base
/// pinned, until the diameter drops below `delta_ball`; then every vertex is
/// moved to the base along its geodesic in `cone_stages` steps.
pub fn contract_loop(path: &GroupPath, params: &ContractionParams) -> Result<Contraction> {
    if !path.closed {
        return Err(Error::InvalidPath("only closed loops can be contracted".into()));
    }
    let step = path.max_step();
    if step > params.delta_step {
        return Err(Error::InvalidPath(format!("step {step:.4} exceeds {}", params.delta_step)));
    }
    let w = winding_vector(path)?;
    if !w.is_trivial() {
        return Err(Error::NontrivialWinding { winding: w.turns, holonomy: w.holonomy });
    }
    let d = path.descriptor().clone();
    let mut lifts = continuous_lifts(path.vertices());
    let m = lifts.len() - 1;
    let mut stages = vec![path.clone()];
    let mut sweeps = 0;
    let mut best = radius(&lifts);
    let mut best_at = 0;
    let mut rng = params.perturb.map(rng_from_seed);
    let mut diam = if best < params.delta_ball / 2.0 { lift_diameter(&lifts) } else { f64::INFINITY };
    while diam >= params.delta_ball {
        if sweeps >= params.max_sweeps {
            return Err(Error::StalledContraction { sweeps, diameter: lift_diameter(&lifts) });
        }
        let parity = sweeps % 2;
        for i in (1..m).filter(|i| i % 2 == parity) {
            lifts[i] = geodesic_point(&lifts[i - 1], &lifts[i + 1], 0.5)?;
        }
        sweeps += 1;
        if sweeps % params.record_every.max(1) == 0 {
            stages.push(stage(&d, &lifts));
        }
        let rad = radius(&lifts);
        if rad < best * (1.0 - 1e-9) {
            best = rad;
            best_at = sweeps;
        } else if sweeps - best_at >= params.stall_window {
            match rng.as_mut() {
                Some(r) => {
                    jitter(&d, &mut lifts, params.delta_step, r);
                    best_at = sweeps;
                }
                None => return Err(Error::StalledContraction { sweeps, diameter: lift_diameter(&lifts) }),
            }
        }
        if rad < params.delta_ball / 2.0 {
            diam = lift_diameter(&lifts);
        }
    }
    if sweeps % params.record_every.max(1) != 0 {
        stages.push(stage(&d, &lifts));
    }
    if diam > 0.0 {
        let base = lifts[0].clone();
        let start = lifts.clone();
        let c = params.cone_stages.max(1);
        for j in 1..=c {
            let s = 1.0 - j as f64 / c as f64;
            for i in 1..m {
                lifts[i] = if j == c { base.clone() } else { geodesic_point(&base, &start[i], s)? };
            }
            stages.push(stage(&d, &lifts));
        }
    }
    let final_diameter = lift_diameter(&lifts);
    Ok(Contraction { stages, sweeps, final_diameter })
}

fn jitter<R: Rng + ?Sized>(d: &Arc<GroupDescriptor>, lifts: &mut [GroupElement], delta_step: f64, rng: &mut R) {
    let m = lifts.len() - 1;
    for v in lifts.iter_mut().take(m).skip(1) {
        let a = LieAlgebraElement::random(d, delta_step / 8.0, rng);
        *v = v.mul_unchecked(&group_exp(d, &a)).lift();
    }
}

/// A grid of commuting tuples `(s, t) -> rho_t^s`.
#[derive(Debug, Clone)]
pub struct TupleHomotopy {
    pub grid: Vec<Vec<CommutingTuple>>,
}

impl TupleHomotopy {
    /// Largest validation residual over the grid.
    pub fn max_residual(&self) -> f64 {
        self.grid.iter().flatten().map(CommutingTuple::residual).fold(0.0, f64::max)
    }
}

/// The homotopy `rho_t^s = i_a(gamma^s(t))`: coordinate `a` runs through the
/// contraction `gamma^s` of `gamma`, all other coordinates are the identity.
/// Rows are `S + 1 = M + 1` contraction stages (evenly subsampled), columns the
/// `M + 1` loop vertices.
pub fn coordinate_loop_homotopy(
    gamma: &GroupPath,
    a: usize,
    k: usize,
    params: &ContractionParams,
) -> Result<TupleHomotopy> {
    coordinate_loop_homotopy_rows(gamma, a, k, gamma.segments(), params)
}

pub fn coordinate_loop_homotopy_rows(
    gamma: &GroupPath,
    a: usize,
    k: usize,
    rows: usize,
    params: &ContractionParams,
) -> Result<TupleHomotopy> {
    if a >= k {
        return Err(Error::BadArguments(format!("coordinate {a} out of range for k = {k}")));
    }
    let d = gamma.descriptor();
    if distance(gamma.base(), &GroupElement::identity(d))? > CLOSE_TOL {
        return Err(Error::InvalidPath("the loop must be based at the identity".into()));
    }
    let c = contract_loop(gamma, params)?;
    let last = c.stages.len() - 1;
    let one = GroupElement::identity(d);
    let grid = (0..=rows)
        .map(|s| {
            let idx = if rows == 0 { last } else { (s * last + rows / 2) / rows };
            c.stages[idx]
                .vertices
                .iter()
                .map(|v| {
                    let mut e = vec![one.clone(); k];
                    e[a] = v.clone();
                    CommutingTuple::new(d, e)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TupleHomotopy { grid })
}

/// Exponential of a loop in the Lie algebra: `t -> exp(A(t))` with
/// `A(t) = sum_j a_j (cos 2 pi j t - 1) + b_j sin 2 pi j t`, `modes` terms,
/// sampled at `segments + 1` points and rescaled until every step is at most
/// `max_step`. Circle coordinates are left at zero.
pub fn random_loop(d: &Arc<GroupDescriptor>, segments: usize, modes: usize, max_step: f64, seed: u64) -> GroupPath {
    let mut rng = rng_from_seed(seed);
    let coeffs: Vec<(LieAlgebraElement, LieAlgebraElement)> = (0..modes.max(1))
        .map(|_| {
            let mut a = LieAlgebraElement::random(d, 1.0, &mut rng);
            let mut b = LieAlgebraElement::random(d, 1.0, &mut rng);
            a.torus.iter_mut().chain(b.torus.iter_mut()).for_each(|t| *t = 0.0);
            (a, b)
        })
        .collect();
    let build = |scale: f64| -> Vec<GroupElement> {
        (0..=segments)
            .map(|i| {
                let t = i as f64 / segments as f64;
                let mut acc = LieAlgebraElement::zero(d);
                for (j, (a, b)) in coeffs.iter().enumerate() {
                    let w = TAU * (j + 1) as f64 * t;
                    acc = acc.add(&a.scale((w.cos() - 1.0) * scale)).add(&b.scale(w.sin() * scale));
                }
                if i == segments {
                    GroupElement::identity(d)
                } else {
                    group_exp(d, &acc)
                }
            })
            .collect()
    };
    let mut scale = 1.0;
    loop {
        let v = build(scale);
        let p = GroupPath { descriptor: d.clone(), vertices: v, closed: true };
        if p.max_step() <= max_step {
            return p;
        }
        scale *= 0.8;
    }
}

/// Traceless diagonal angles for a joint column list: wrapped to `(-pi, pi]`,
/// then the extreme entries shifted by `2 pi` until the sum is exactly zero.
fn traceless_angles(angles: &[f64]) -> Vec<f64> {
    let mut a: Vec<f64> = angles.iter().map(|&x| linalg::wrap_pi(x)).collect();
    let m = (a.iter().sum::<f64>() / TAU).round() as i64;
    let mut idx: Vec<usize> = (0..a.len()).collect();
    idx.sort_by(|&i, &j| a[i].total_cmp(&a[j]));
    if m > 0 {
        for &i in idx.iter().rev().take(m as usize) {
            a[i] -= TAU;
        }
    } else if m < 0 {
        for &i in idx.iter().take((-m) as usize) {
            a[i] += TAU;
        }
    }
    a
}

/// Options for [`path_to_identity`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PathOptions {
    /// Waypoints per stage.
    pub steps: usize,
    pub tol: f64,
    /// Seed for the torus element used to dodge the branch cut of `log g`.
    pub seed: u64,
}

impl Default for PathOptions {
    fn default() -> Self {
        PathOptions { steps: 32, tol: tol::COMM, seed: 0 }
    }
}

/// An explicit path from an identity-component tuple to the trivial tuple.
///
/// With `x_i = g t_i g^{-1}` from joint diagonalization, the first stage
/// follows `g(s) t_i g(s)^{-1}` with `g(s) = exp(s log g)`, `s: 1 -> 0`; the
/// second shrinks the (traceless) torus angles linearly to zero. If `log g`
/// hits the branch cut, `g` is replaced by `g d` for a random torus element
/// `d`, which diagonalizes the tuple equally well.
pub fn path_to_identity(t: &CommutingTuple, opts: &PathOptions) -> Result<Vec<CommutingTuple>> {
    if classify_component(t)? != ComponentClass::IdentityComponent {
        return Err(Error::NotInIdentityComponent);
    }
    let d = t.descriptor().clone();
    let pre = joint_diagonalize(t, opts.tol)?;
    let mut rng = rng_from_seed(opts.seed);
    let mut g = pre.conjugator.lift();
    let mut log_g = None;
    for _ in 0..16 {
        match group_log(&g) {
            Ok(a) => {
                log_g = Some(a);
                break;
            }
            Err(Error::BranchCut { .. }) => {
                let turn = crate::weyl::SigmaPreimage::random(&d, 1, &mut rng).torus;
                let diag: Vec<CMat> = turn.factors.iter().map(|f| linalg::diag_phases(&f[0])).collect();
                let dg = GroupElement::from_parts_unchecked(&d, vec![0.0; d.torus_rank()], diag).lift();
                g = pre.conjugator.lift().mul_unchecked(&dg);
            }
            Err(e) => return Err(e),
        }
    }
    let log_g = log_g.ok_or(Error::BranchCut { factor: 0, distance: 0.0 })?;
    let k = t.k();
    let angles: Vec<Vec<Vec<f64>>> = pre
        .torus
        .factors
        .iter()
        .map(|f| f.iter().map(|a| traceless_angles(a)).collect())
        .collect();
    let torus: Vec<Vec<f64>> = pre.torus.torus.iter().map(|v| v.iter().map(|&x| linalg::wrap_pi(x)).collect()).collect();
    let n = opts.steps.max(1);
    let make = |gs: &GroupElement, lambda: f64| -> Result<CommutingTuple> {
        let elements = (0..k)
            .map(|i| {
                let factors = angles
                    .iter()
                    .zip(gs.factors())
                    .map(|(fa, gf)| {
                        let a: Vec<f64> = fa[i].iter().map(|x| x * lambda).collect();
                        gf * linalg::diag_phases(&a) * gf.adjoint()
                    })
                    .collect();
                let tor = torus[i].iter().map(|x| x * lambda).collect();
                GroupElement::from_parts_unchecked(&d, tor, factors)
            })
            .collect();
        CommutingTuple::new(&d, elements)
    };
    let mut out = vec![t.clone()];
    for j in 1..=n {
        let s = 1.0 - j as f64 / n as f64;
        out.push(make(&group_exp(&d, &log_g.scale(s)), 1.0)?);
    }
    let one = GroupElement::identity(&d);
    for j in 1..=n {
        out.push(make(&one, 1.0 - j as f64 / n as f64)?);
    }
    Ok(out)
}

/// Largest jump between consecutive tuples of a path, coordinatewise in `G`.
pub fn tuple_path_max_step(path: &[CommutingTuple]) -> f64 {
    path.windows(2)
        .map(|w| {
            w[0].elements()
                .iter()
                .zip(w[1].elements())
                .map(|(x, y)| distance(x, y).expect("shared descriptor"))
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// Largest pairwise commutator residual along a path of tuples.
pub fn tuple_path_max_residual(path: &[CommutingTuple]) -> f64 {
    path.iter()
        .flat_map(|t| {
            let e = t.elements();
            (0..e.len()).flat_map(move |i| (i + 1..e.len()).map(move |j| commutator_residual(&e[i], &e[j])))
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests;
