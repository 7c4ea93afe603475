//! Quotients of probabilistic normed spaces by linear subspaces.
//!
//! A subspace `W` of the carrier splits it into cosets `p + W`, and the
//! quotient norm is the pointwise supremum `ν̄_{p+W} = sup_{w∈W} ν_{p+w}`.
//! Two evaluation strategies are provided: an exact one for
//! finite-dimensional spans, where the supremum collapses to the norm
//! distance `dist(p, W)` through the monotone rescaling of the step
//! template, and a sampled pointwise-sup over coefficient grids of
//! expanding radius for everything else (in particular the `c00`
//! coordinate-sum kernel, which has no finite basis).
//!
//! The probes at the end of the module gather evidence about closedness
//! of `W`, the ε0-kernel of a degenerate norm, and the boundedness and
//! openness of the canonical projection.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distfn::{leq_with_shift, min_gap, sibley, DistFn};
use crate::error::{PnError, Result};
use crate::pnspace::{
    in_strong_neighborhood, leq_with_rounding, NormRule, PNSpace, ProbNormed, SpaceKind,
};
use crate::report::{VerificationReport, WorstCase};
use crate::trifn::TriangleFn;
use crate::vector::{NormKind, Vector};

/// Residual tolerance (relative to input scale) for span membership.
const SPAN_RESIDUAL_TOL: f64 = 1e-10;
/// Tolerance for the coordinate-sum predicate, relative to `Σ|coords|`.
const SUM_KERNEL_TOL: f64 = 1e-12;
/// Coefficient refinement tolerance of the ℓ1/ℓ∞ distance search.
const DIST_REFINE_TOL: f64 = 1e-10;

/// A linear subspace of a carrier: either the span of finitely many
/// dense vectors, or the kernel of the coordinate-sum functional on the
/// finitely-supported sequence space. The latter has no finite basis
/// and is deliberately not closed, which is what makes it interesting
/// as a testbed.
#[derive(Clone, Debug)]
pub struct Subspace {
    kind: SubspaceKind,
}

#[derive(Clone, Debug)]
enum SubspaceKind {
    Span {
        basis: Vec<Vector>,
        /// Orthonormalized copy of `basis`, used for membership
        /// residuals and ℓ2 projections.
        ortho: Vec<Vec<f64>>,
        dim: usize,
    },
    C00SumKernel,
}

impl Subspace {
    /// The span of `basis` inside a `dim`-dimensional dense carrier.
    /// The basis may be empty (the trivial subspace); it must consist
    /// of dense vectors of matching dimension and be linearly
    /// independent.
    pub fn span(basis: Vec<Vector>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(PnError::Domain("ambient dimension must be at least 1".into()));
        }
        if basis.len() > dim {
            return Err(PnError::Domain(format!(
                "{} basis vectors cannot be independent in dimension {dim}",
                basis.len()
            )));
        }
        let mut ortho: Vec<Vec<f64>> = Vec::with_capacity(basis.len());
        for (i, b) in basis.iter().enumerate() {
            let coords = b.coords()?;
            if coords.len() != dim {
                return Err(PnError::DimensionMismatch(format!(
                    "basis vector {i} has dimension {}, ambient is {dim}",
                    coords.len()
                )));
            }
            let mut r = coords.to_vec();
            for e in &ortho {
                let c = dot(&r, e);
                for (rj, ej) in r.iter_mut().zip(e) {
                    *rj -= c * ej;
                }
            }
            let norm = dot(&r, &r).sqrt();
            let scale = dot(coords, coords).sqrt().max(1.0);
            if norm <= SPAN_RESIDUAL_TOL * scale {
                return Err(PnError::Domain(format!(
                    "basis vector {i} is linearly dependent on the previous ones"
                )));
            }
            for rj in &mut r {
                *rj /= norm;
            }
            ortho.push(r);
        }
        Ok(Self {
            kind: SubspaceKind::Span { basis, ortho, dim },
        })
    }

    /// `{x ∈ c00 : Σ_i x_i = 0}`, the kernel of the coordinate sum.
    pub fn c00_sum_kernel() -> Self {
        Self {
            kind: SubspaceKind::C00SumKernel,
        }
    }

    /// Basis vectors when the subspace is a span.
    pub fn basis(&self) -> Option<&[Vector]> {
        match &self.kind {
            SubspaceKind::Span { basis, .. } => Some(basis),
            SubspaceKind::C00SumKernel => None,
        }
    }

    /// Ambient dimension for spans; `None` for the sequence-space kernel.
    pub fn ambient_dim(&self) -> Option<usize> {
        match &self.kind {
            SubspaceKind::Span { dim, .. } => Some(*dim),
            SubspaceKind::C00SumKernel => None,
        }
    }

    pub fn is_span(&self) -> bool {
        matches!(self.kind, SubspaceKind::Span { .. })
    }

    /// Exact membership test, up to a residual tolerance relative to
    /// the scale of `v`.
    pub fn contains(&self, v: &Vector) -> Result<bool> {
        match &self.kind {
            SubspaceKind::Span { ortho, dim, .. } => {
                let coords = v.coords()?;
                if coords.len() != *dim {
                    return Err(PnError::DimensionMismatch(format!(
                        "vector has dimension {}, subspace lives in {dim}",
                        coords.len()
                    )));
                }
                let mut r = coords.to_vec();
                for e in ortho {
                    let c = dot(&r, e);
                    for (rj, ej) in r.iter_mut().zip(e) {
                        *rj -= c * ej;
                    }
                }
                let scale = dot(coords, coords).sqrt().max(1.0);
                Ok(dot(&r, &r).sqrt() <= SPAN_RESIDUAL_TOL * scale)
            }
            SubspaceKind::C00SumKernel => {
                let support = v.support()?;
                let sum: f64 = support.values().sum();
                let scale: f64 = support.values().map(|x| x.abs()).sum::<f64>().max(1.0);
                Ok(sum.abs() <= SUM_KERNEL_TOL * scale)
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `p ~_W q`, i.e. `p − q ∈ W`.
pub fn coset_equal(p: &Vector, q: &Vector, w: &Subspace) -> Result<bool> {
    p.check_compatible(q)?;
    w.contains(&p.sub(q))
}

fn norm_of(coords: &[f64], kind: NormKind) -> f64 {
    match kind {
        NormKind::L1 => coords.iter().map(|x| x.abs()).sum(),
        NormKind::L2 => dot(coords, coords).sqrt(),
        NormKind::Linf => coords.iter().fold(0.0_f64, |m, x| m.max(x.abs())),
    }
}

/// `inf_{w∈W} ‖p + w‖` for a span `W` in a finite-dimensional carrier.
///
/// ℓ2 distances come from the orthogonal projection and are exact up to
/// rounding. ℓ1 and ℓ∞ objectives are piecewise linear and convex in
/// the basis coefficients; for up to two coefficients the minimum sits
/// on an intersection of kink lines (`r_i = 0`, `r_i = ±r_j`), all of
/// which are enumerated and evaluated, so the result is exact there
/// too. Larger bases fall back to a compass search from the ℓ2
/// minimizer, refined well below the documented 1e-6 tolerance.
pub fn dist_to_subspace(p: &Vector, w: &Subspace, kind: NormKind) -> Result<f64> {
    nearest_offset(p, w, kind).map(|(d, _)| d)
}

/// Like [`dist_to_subspace`], but also returns the minimizing offset
/// `w* ∈ W`, so `‖p + w*‖ = dist(p, W)`. The representative `p + w*` is
/// what the lifting constructions hand out.
pub(crate) fn nearest_offset(p: &Vector, w: &Subspace, kind: NormKind) -> Result<(f64, Vector)> {
    let (basis, ortho, dim) = match &w.kind {
        SubspaceKind::Span { basis, ortho, dim } => (basis, ortho, *dim),
        SubspaceKind::C00SumKernel => {
            return Err(PnError::Domain(
                "the coordinate-sum kernel has no finite basis to search; \
                 use the sampled quotient strategy"
                    .into(),
            ))
        }
    };
    let coords = p.coords()?;
    if coords.len() != dim {
        return Err(PnError::DimensionMismatch(format!(
            "point has dimension {}, subspace lives in {dim}",
            coords.len()
        )));
    }
    if basis.is_empty() {
        return Ok((norm_of(coords, kind), Vector::zero_dense(dim)));
    }

    // ℓ2 projection; also the warm start for the other norms.
    let l2_offset: Vec<f64> = {
        let mut off = vec![0.0; dim];
        for e in ortho {
            let c = dot(coords, e);
            for (oj, ej) in off.iter_mut().zip(e) {
                *oj -= c * ej;
            }
        }
        off
    };
    if kind == NormKind::L2 {
        let residual: Vec<f64> = coords.iter().zip(&l2_offset).map(|(p, o)| p + o).collect();
        return Ok((norm_of(&residual, kind), Vector::dense(l2_offset)?));
    }

    let k = basis.len();
    let cols: Vec<&[f64]> = basis.iter().map(|b| b.coords()).collect::<Result<_>>()?;
    let residual = |c: &[f64]| -> Vec<f64> {
        let mut r = coords.to_vec();
        for (ci, col) in c.iter().zip(&cols) {
            for (rj, bj) in r.iter_mut().zip(*col) {
                *rj += ci * bj;
            }
        }
        r
    };
    let objective = |c: &[f64]| norm_of(&residual(c), kind);

    // Express the ℓ2 start in basis coefficients by solving the
    // orthonormal expansion back through Gram coordinates: cheaper and
    // simpler is a least-squares fit via normal equations, but at desk
    // scale a compass search from the zero vector closes the same gap.
    // Candidates below make the start irrelevant for k ≤ 2 anyway.
    let mut best_c = vec![0.0; k];
    let mut best = objective(&best_c);

    let consider = |c: Vec<f64>, best: &mut f64, best_c: &mut Vec<f64>| {
        if c.iter().all(|x| x.is_finite()) {
            let v = objective(&c);
            if v < *best {
                *best = v;
                *best_c = c;
            }
        }
    };

    match k {
        1 => {
            let b = cols[0];
            // Kinks of t ↦ ‖p + t b‖: zero crossings of each coordinate
            // and (for ℓ∞) pairwise ties |r_i| = |r_j|.
            for i in 0..dim {
                if b[i] != 0.0 {
                    consider(vec![-coords[i] / b[i]], &mut best, &mut best_c);
                }
            }
            for i in 0..dim {
                for j in (i + 1)..dim {
                    for sign in [1.0, -1.0] {
                        let den = b[i] - sign * b[j];
                        if den.abs() > 1e-12 {
                            let t = -(coords[i] - sign * coords[j]) / den;
                            consider(vec![t], &mut best, &mut best_c);
                        }
                    }
                }
            }
        }
        2 => {
            // Kink lines A·c1 + B·c2 + C = 0 from r_i = 0 and r_i = ±r_j;
            // the convex piecewise-linear minimum sits on a pairwise
            // intersection.
            let mut lines: Vec<[f64; 3]> = Vec::new();
            for i in 0..dim {
                lines.push([cols[0][i], cols[1][i], coords[i]]);
            }
            for i in 0..dim {
                for j in (i + 1)..dim {
                    for sign in [1.0, -1.0] {
                        lines.push([
                            cols[0][i] - sign * cols[0][j],
                            cols[1][i] - sign * cols[1][j],
                            coords[i] - sign * coords[j],
                        ]);
                    }
                }
            }
            for (a, l1) in lines.iter().enumerate() {
                for l2 in &lines[a + 1..] {
                    let det = l1[0] * l2[1] - l2[0] * l1[1];
                    let scale = l1[0]
                        .abs()
                        .max(l1[1].abs())
                        .max(l2[0].abs())
                        .max(l2[1].abs())
                        .max(1.0);
                    if det.abs() > 1e-12 * scale * scale {
                        let c1 = (l1[1] * l2[2] - l2[1] * l1[2]) / det;
                        let c2 = (l2[0] * l1[2] - l1[0] * l2[2]) / det;
                        consider(vec![c1, c2], &mut best, &mut best_c);
                    }
                }
            }
        }
        _ => {}
    }

    // Compass polish (and the whole search for k ≥ 3). The objective is
    // convex piecewise linear, so from a candidate-enumeration start
    // this only cleans up rounding; from zero it still converges at
    // desk scale.
    let mut step = 1.0;
    let mut sweeps = 0;
    while step > DIST_REFINE_TOL && sweeps < 400 {
        sweeps += 1;
        let mut improved = false;
        for i in 0..k {
            for sign in [1.0, -1.0] {
                let mut cand = best_c.clone();
                cand[i] += sign * step;
                let v = objective(&cand);
                if v < best {
                    best = v;
                    best_c = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }

    let mut offset = vec![0.0; dim];
    for (ci, col) in best_c.iter().zip(&cols) {
        for (oj, bj) in offset.iter_mut().zip(*col) {
            *oj += ci * bj;
        }
    }
    Ok((best, Vector::dense(offset)?))
}

/// Sampling schedule of the sup-based quotient strategy: coefficient
/// grids of the given step are swept over expanding radii, stopping
/// once the Sibley distance between successive stages drops below
/// `tol`.
#[derive(Clone, Debug)]
pub struct SampleSchedule {
    pub radii: Vec<f64>,
    pub grid_step: f64,
    pub tol: f64,
}

impl Default for SampleSchedule {
    fn default() -> Self {
        Self {
            radii: vec![1.0, 2.0, 4.0, 8.0],
            grid_step: 1e-2,
            tol: 1e-3,
        }
    }
}

impl SampleSchedule {
    fn validate(&self) -> Result<()> {
        if self.radii.len() < 2 {
            return Err(PnError::Domain(
                "sampling schedule needs at least two radii to compare stages".into(),
            ));
        }
        if !self
            .radii
            .windows(2)
            .all(|w| w[0] > 0.0 && w[0] < w[1] && w[1].is_finite())
        {
            return Err(PnError::Domain(
                "schedule radii must be positive, finite and strictly increasing".into(),
            ));
        }
        if !(self.grid_step > 0.0 && self.grid_step.is_finite()) {
            return Err(PnError::Domain("grid step must be positive".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(PnError::Domain("schedule tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// How a quotient norm is evaluated.
#[derive(Clone, Debug)]
pub enum QuotientStrategy {
    /// `ν̄_{p+W} = ν-template at dist(p, W)`. Valid whenever the norm of
    /// a point depends on the point only through `‖p‖`, monotonically:
    /// then the supremum over the coset is attained at the norm-nearest
    /// representative. All built-in norm rules are of this shape.
    Exact,
    /// Pointwise supremum of `ν_{p+w}` over sampled `w ∈ W`.
    Sampled(SampleSchedule),
}

/// A PN space modulo a linear subspace. Points are represented by
/// ambient vectors; `norm_df` evaluates the coset norm, so an instance
/// doubles as the quotient space in every generic checker.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    ambient: PNSpace,
    subspace: Subspace,
    strategy: QuotientStrategy,
}

impl QuotientSpace {
    pub fn new(ambient: PNSpace, subspace: Subspace, strategy: QuotientStrategy) -> Result<Self> {
        match (ambient.kind(), &subspace.kind) {
            (SpaceKind::FiniteDim(n), SubspaceKind::Span { dim, .. }) => {
                if *dim != n {
                    return Err(PnError::DimensionMismatch(format!(
                        "subspace lives in dimension {dim}, ambient space has {n}"
                    )));
                }
            }
            (SpaceKind::C00, SubspaceKind::C00SumKernel) => {}
            (SpaceKind::FiniteDim(_), SubspaceKind::C00SumKernel) => {
                return Err(PnError::Domain(
                    "the coordinate-sum kernel is a subspace of c00, not of a \
                     finite-dimensional space"
                        .into(),
                ))
            }
            (SpaceKind::C00, SubspaceKind::Span { .. }) => {
                return Err(PnError::Domain(
                    "spans of dense vectors do not describe c00 subspaces here".into(),
                ))
            }
        }
        match &strategy {
            QuotientStrategy::Exact => {
                if !subspace.is_span() {
                    return Err(PnError::Domain(
                        "the exact strategy needs a finite basis; the sum kernel \
                         only supports the sampled strategy"
                            .into(),
                    ));
                }
            }
            QuotientStrategy::Sampled(schedule) => schedule.validate()?,
        }
        Ok(Self {
            ambient,
            subspace,
            strategy,
        })
    }

    pub fn ambient(&self) -> &PNSpace {
        &self.ambient
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    pub fn strategy(&self) -> &QuotientStrategy {
        &self.strategy
    }

    fn exact_norm(&self, p: &Vector) -> Result<DistFn> {
        let (d, _) = nearest_offset(p, &self.subspace, self.ambient.norm_kind())?;
        match self.ambient.rule() {
            NormRule::SimpleStep => DistFn::unit_step(d),
            NormRule::SquaredNormStep => DistFn::unit_step(d * d),
            NormRule::SerstnevScaled(f0) => {
                if d == 0.0 {
                    Ok(DistFn::eps0())
                } else {
                    f0.scale_abscissa(d)
                }
            }
        }
    }

    /// Sampled sup together with a flag telling whether the schedule
    /// settled. The unsettled value is still a sound pointwise lower
    /// bound for `ν̄` (it is a sup over a subset of `W`), which is what
    /// the lifting constructions need; `norm_df` itself refuses to hand
    /// out unsettled values.
    pub(crate) fn sampled_estimate(&self, p: &Vector) -> Result<(DistFn, bool)> {
        let schedule = match &self.strategy {
            QuotientStrategy::Sampled(s) => s,
            QuotientStrategy::Exact => {
                return self.exact_norm(p).map(|df| (df, true));
            }
        };
        match &self.subspace.kind {
            SubspaceKind::Span { basis, .. } => self.sampled_span_sup(p, basis, schedule),
            SubspaceKind::C00SumKernel => self.sampled_kernel_sup(p, schedule),
        }
    }

    /// Pointwise sup of `ν_{p+w}` over `w = Σ c_i b_i`, `c` running over
    /// the lattice of the schedule's grid step inside expanding boxes.
    fn sampled_span_sup(
        &self,
        p: &Vector,
        basis: &[Vector],
        schedule: &SampleSchedule,
    ) -> Result<(DistFn, bool)> {
        let mut acc = self.ambient.norm_df(p)?;
        if basis.is_empty() {
            return Ok((acc, true));
        }
        let k = basis.len();
        let cols: Vec<&[f64]> = basis.iter().map(|b| b.coords()).collect::<Result<_>>()?;
        let coords = p.coords()?;
        let step = schedule.grid_step;

        let mut prev_stage: Option<DistFn> = None;
        let mut prev_bound: i64 = -1;
        for &radius in &schedule.radii {
            let bound = (radius / step).round() as i64;
            let mut lattice = vec![-bound; k];
            loop {
                // Skip points already swept at the previous radius.
                if !lattice.iter().all(|c| c.abs() <= prev_bound) {
                    let mut shifted = coords.to_vec();
                    for (ci, col) in lattice.iter().zip(&cols) {
                        let c = *ci as f64 * step;
                        for (sj, bj) in shifted.iter_mut().zip(*col) {
                            *sj += c * bj;
                        }
                    }
                    acc.sup_assign(&self.ambient.norm_df(&Vector::dense(shifted)?)?);
                }
                // Odometer increment over the box [-bound, bound]^k.
                let mut axis = 0;
                loop {
                    if axis == k {
                        break;
                    }
                    lattice[axis] += 1;
                    if lattice[axis] <= bound {
                        break;
                    }
                    lattice[axis] = -bound;
                    axis += 1;
                }
                if axis == k {
                    break;
                }
            }
            if let Some(prev) = &prev_stage {
                let change = sibley(prev, &acc, 1e-6)?;
                if change.value() < schedule.tol {
                    return Ok((acc, true));
                }
            }
            prev_stage = Some(acc.clone());
            prev_bound = bound;
        }
        Ok((acc, false))
    }

    /// Sampled sup over the coordinate-sum kernel. Bounded-support
    /// members that move `p` close to the coset infimum spread the
    /// coordinate sum `s` of `p` over `m` fresh coordinates, giving
    /// representatives of sup norm `|s|/m`; the stage at radius `r`
    /// explores spreads up to `m ≈ r / grid_step`. For `s ≠ 0` the true
    /// sup is `ε_0` and the stages approach it like `1/m`, so whether
    /// the schedule settles is an honest question of its tolerance.
    fn sampled_kernel_sup(&self, p: &Vector, schedule: &SampleSchedule) -> Result<(DistFn, bool)> {
        let support = p.support()?;
        let sum: f64 = support.values().sum();
        let base = support.keys().next_back().map_or(1, |k| k + 1);
        let mut acc = self.ambient.norm_df(p)?;

        let mut prev_stage: Option<DistFn> = None;
        let mut prev_spread: u64 = 0;
        for &radius in &schedule.radii {
            let spread = ((radius / schedule.grid_step).round() as u64).max(1);
            for n in (prev_spread + 1)..=spread {
                // m fresh coordinates holding s/m each; the extra factor
                // keeps |s|/m ≤ 1/(n+1) whatever the size of s.
                let m = (n + 1) * (sum.abs().ceil().max(1.0) as u64);
                let value = sum / m as f64;
                let spread_vec = Vector::sparse(
                    (0..m as usize).map(|j| (base + j, value)),
                )?;
                let w = spread_vec.sub(p);
                acc.sup_assign(&self.ambient.norm_df(&p.add(&w))?);
            }
            if let Some(prev) = &prev_stage {
                let change = sibley(prev, &acc, 1e-6)?;
                if change.value() < schedule.tol {
                    return Ok((acc, true));
                }
            }
            prev_stage = Some(acc.clone());
            prev_spread = spread;
        }
        Ok((acc, false))
    }

    /// Walks representatives of the coset of `p` in the order the
    /// evaluation strategy explores them, handing each together with
    /// its ambient norm to `visit`. A `true` from `visit` stops the
    /// walk; the return value says whether that happened. The exact
    /// strategy visits the single norm-nearest representative; the
    /// sampled strategies visit `p` itself and then their family in
    /// expanding order, so early stops favor small offsets.
    pub(crate) fn walk_coset(
        &self,
        p: &Vector,
        visit: &mut dyn FnMut(Vector, DistFn) -> Result<bool>,
    ) -> Result<bool> {
        self.ambient.check_point(p)?;
        let schedule = match &self.strategy {
            QuotientStrategy::Exact => {
                let (_, offset) = nearest_offset(p, &self.subspace, self.ambient.norm_kind())?;
                let rep = p.add(&offset);
                let df = self.ambient.norm_df(&rep)?;
                return visit(rep, df);
            }
            QuotientStrategy::Sampled(s) => s,
        };
        if visit(p.clone(), self.ambient.norm_df(p)?)? {
            return Ok(true);
        }
        match &self.subspace.kind {
            SubspaceKind::Span { basis, .. } => {
                if basis.is_empty() {
                    return Ok(false);
                }
                let k = basis.len();
                let cols: Vec<&[f64]> = basis.iter().map(|b| b.coords()).collect::<Result<_>>()?;
                let coords = p.coords()?;
                let step = schedule.grid_step;
                // Bound 0 marks the lattice origin as already visited
                // (it is `p` itself).
                let mut prev_bound: i64 = 0;
                for &radius in &schedule.radii {
                    let bound = (radius / step).round() as i64;
                    let mut lattice = vec![-bound; k];
                    loop {
                        if !lattice.iter().all(|c| c.abs() <= prev_bound) {
                            let mut shifted = coords.to_vec();
                            for (ci, col) in lattice.iter().zip(&cols) {
                                let c = *ci as f64 * step;
                                for (sj, bj) in shifted.iter_mut().zip(*col) {
                                    *sj += c * bj;
                                }
                            }
                            let rep = Vector::dense(shifted)?;
                            let df = self.ambient.norm_df(&rep)?;
                            if visit(rep, df)? {
                                return Ok(true);
                            }
                        }
                        let mut axis = 0;
                        loop {
                            if axis == k {
                                break;
                            }
                            lattice[axis] += 1;
                            if lattice[axis] <= bound {
                                break;
                            }
                            lattice[axis] = -bound;
                            axis += 1;
                        }
                        if axis == k {
                            break;
                        }
                    }
                    prev_bound = bound;
                }
                Ok(false)
            }
            SubspaceKind::C00SumKernel => {
                let support = p.support()?;
                let sum: f64 = support.values().sum();
                let base = support.keys().next_back().map_or(1, |k| k + 1);
                let last = schedule.radii.last().copied().unwrap_or(1.0);
                let max_spread = ((last / schedule.grid_step).round() as u64).max(1);
                for n in 1..=max_spread {
                    let m = (n + 1) * (sum.abs().ceil().max(1.0) as u64);
                    let value = sum / m as f64;
                    let rep = Vector::sparse((0..m as usize).map(|j| (base + j, value)))?;
                    let df = self.ambient.norm_df(&rep)?;
                    if visit(rep, df)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }
}

impl ProbNormed for QuotientSpace {
    fn norm_df(&self, p: &Vector) -> Result<DistFn> {
        self.ambient.check_point(p)?;
        match &self.strategy {
            QuotientStrategy::Exact => self.exact_norm(p),
            QuotientStrategy::Sampled(_) => {
                let (df, settled) = self.sampled_estimate(p)?;
                if settled {
                    Ok(df)
                } else {
                    Err(PnError::Inconclusive(format!(
                        "quotient sup did not settle within the radius schedule \
                         (last stage at distance {} from ε0)",
                        df.sibley_to_eps0().value()
                    )))
                }
            }
        }
    }

    fn tau(&self) -> &TriangleFn {
        self.ambient.tau()
    }

    fn tau_star(&self) -> &TriangleFn {
        self.ambient.tau_star()
    }

    fn zero(&self) -> Vector {
        self.ambient.zero()
    }

    fn sample_point(&self, rng: &mut ChaCha8Rng) -> Vector {
        self.ambient.sample_point(rng)
    }
}

/// `ν̄_{p+W}` under the space's evaluation strategy.
pub fn quotient_norm(q: &QuotientSpace, p: &Vector) -> Result<DistFn> {
    q.norm_df(p)
}

/// A coset `p + W` addressed through one of its representatives.
#[derive(Debug)]
pub struct CosetHandle<'a> {
    space: &'a QuotientSpace,
    rep: Vector,
}

impl<'a> CosetHandle<'a> {
    pub fn new(space: &'a QuotientSpace, rep: Vector) -> Result<Self> {
        space.ambient.check_point(&rep)?;
        Ok(Self { space, rep })
    }

    pub fn representative(&self) -> &Vector {
        &self.rep
    }

    /// The minimal-ℓ2-norm representative of the coset, independent of
    /// which representative the handle was built from (up to rounding).
    pub fn canonical_representative(&self) -> Result<Vector> {
        let (_, offset) = nearest_offset(&self.rep, &self.space.subspace, NormKind::L2)?;
        Ok(self.rep.add(&offset))
    }

    pub fn norm_df(&self) -> Result<DistFn> {
        self.space.norm_df(&self.rep)
    }

    pub fn same_coset(&self, other: &CosetHandle) -> Result<bool> {
        if !std::ptr::eq(self.space, other.space) {
            return Err(PnError::Domain(
                "coset handles belong to different quotient spaces".into(),
            ));
        }
        coset_equal(&self.rep, &other.rep, &self.space.subspace)
    }
}

impl PartialEq for CosetHandle<'_> {
    /// Handles are equal when they address the same coset of the same
    /// space. Incompatible carriers compare unequal.
    fn eq(&self, other: &Self) -> bool {
        self.same_coset(other).unwrap_or(false)
    }
}

/// Evidence about strong closedness of `W`: for each probe `p ∉ W` the
/// distance `d_S(ν̄_{p+W}, ε0)` is estimated; an estimate below
/// `1/horizon` is the failure verdict (N1 fails in the quotient, so `W`
/// cannot be strongly closed). For the coordinate-sum kernel the
/// estimate is driven by the explicit spread family rather than the
/// generic schedule, so the decay is visible within the horizon.
pub fn closedness_probe(
    q: &QuotientSpace,
    probes: &[Vector],
    horizon: usize,
) -> Result<VerificationReport> {
    if horizon < 2 {
        return Err(PnError::Domain("horizon must be at least 2".into()));
    }
    if probes.is_empty() {
        return Err(PnError::Domain("at least one probe required".into()));
    }
    let threshold = 1.0 / horizon as f64;
    let mut worst = WorstCase::new();
    let mut failure: Option<String> = None;
    for (i, p) in probes.iter().enumerate() {
        q.ambient.check_point(p)?;
        if coset_equal(p, &q.zero(), &q.subspace)? {
            return Err(PnError::Domain(format!(
                "probe {i} lies in the subspace; closedness evidence needs p ∉ W"
            )));
        }
        let estimate = match &q.subspace.kind {
            SubspaceKind::Span { .. } => {
                let (df, _) = q.sampled_estimate(p)?;
                df.sibley_to_eps0().value()
            }
            SubspaceKind::C00SumKernel => kernel_probe_estimate(q, p, horizon)?,
        };
        worst.observe(estimate - threshold, || {
            format!("probe {p}: d_S(ν̄, ε0) estimate {estimate:.6}, threshold 1/{horizon}")
        });
        if estimate < threshold && failure.is_none() {
            failure = Some(format!(
                "probe {p}: d_S(ν̄, ε0) estimate {estimate:.6} fell below 1/{horizon}; \
                 N1 fails for the coset, W is not strongly closed"
            ));
        }
    }
    let margin = if worst.margin.is_finite() { worst.margin } else { 0.0 };
    Ok(match failure {
        Some(witness) => {
            VerificationReport::failing("closedness-probe", margin, witness, probes.len(), 0)
        }
        None => VerificationReport::passing_with_witness(
            "closedness-probe",
            margin,
            worst.witness,
            probes.len(),
            0,
        ),
    })
}

/// Walks the spread family `p + w_n` for the sum kernel up to the
/// horizon and returns the smallest observed `d_S(ν_{p+w_n}, ε0)`, a
/// certified upper bound for the coset's distance from `ε0`.
fn kernel_probe_estimate(q: &QuotientSpace, p: &Vector, horizon: usize) -> Result<f64> {
    let support = p.support()?;
    let sum: f64 = support.values().sum();
    let base = support.keys().next_back().map_or(1, |k| k + 1);
    let mut best = q.ambient.norm_df(p)?.sibley_to_eps0().value();
    for n in 1..=horizon as u64 {
        let m = (n + 1) * (sum.abs().ceil().max(1.0) as u64);
        let value = sum / m as f64;
        let spread = Vector::sparse((0..m as usize).map(|j| (base + j, value)))?;
        let w = spread.sub(p);
        debug_assert!(q.subspace.contains(&w)?);
        let d = q.ambient.norm_df(&p.add(&w))?.sibley_to_eps0().value();
        best = best.min(d);
    }
    Ok(best)
}

/// Filters `candidates` down to the ε0-kernel `C = {p : ν_p = ε0}` and
/// asserts it behaves like a subspace on the filtered set: sums of
/// members and fixed scalar multiples must pass the membership test
/// again (with proportionally widened tolerance, since the triangle
/// inequality only bounds a sum by the τ-image of its parts).
///
/// `tol = 0` demands structural equality with `ε0`; a positive `tol`
/// accepts `d_S(ν_p, ε0) ≤ tol` and is the mode to use on sampled
/// quotient norms, whose estimates never collapse structurally.
pub fn kernel_c(space: &dyn ProbNormed, candidates: &[Vector], tol: f64) -> Result<Vec<Vector>> {
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(PnError::Domain("kernel tolerance must be finite and ≥ 0".into()));
    }
    let member = |p: &Vector, slack: f64| -> Result<bool> {
        let df = space.norm_df(p)?;
        Ok(if slack == 0.0 {
            df.is_eps0()
        } else {
            df.sibley_to_eps0().value() <= slack
        })
    };
    let mut kernel: Vec<Vector> = Vec::new();
    for c in candidates {
        if member(c, tol)? {
            kernel.push(c.clone());
        }
    }
    const ALPHAS: [f64; 5] = [0.25, 0.5, 2.0, 5.0, -3.0];
    for (i, p) in kernel.iter().enumerate() {
        for q in &kernel[i..] {
            let slack = if tol == 0.0 { 0.0 } else { 2.0 * tol + 1e-9 };
            if !member(&p.add(q), slack)? {
                return Err(PnError::Domain(format!(
                    "kernel is not additively closed: {p} + {q} left the ε0 set"
                )));
            }
        }
        for alpha in ALPHAS {
            let slack = if tol == 0.0 { 0.0 } else { alpha.abs().max(1.0) * tol + 1e-9 };
            if !member(&p.scale(alpha), slack)? {
                return Err(PnError::Domain(format!(
                    "kernel is not closed under scaling: {alpha}·{p} left the ε0 set"
                )));
            }
        }
    }
    Ok(kernel)
}

/// Checks the coincidence chain `ν̄_{p_C} ≥ ν_p ≥ ν_{p+r}` for sampled
/// `p` and every `r` in the kernel list `C`: modding out ε0-normed
/// directions does not change any norm. The left member is the sup over
/// the finite list `C ∪ {θ}`.
///
/// `slack` is an abscissa shift absorbing breakpoint noise when the
/// space evaluates norms by sampling (estimates of equal cosets differ
/// by small abscissa displacements); pass 0 for exact spaces.
/// Comparisons that hold only under the shift count as zero margins.
pub fn remark_coincidence_check(
    space: &dyn ProbNormed,
    c: &[Vector],
    samples: usize,
    seed: u64,
    slack: f64,
) -> Result<VerificationReport> {
    if samples == 0 {
        return Err(PnError::Domain("at least one sample required".into()));
    }
    if !(slack >= 0.0 && slack.is_finite()) {
        return Err(PnError::Domain("slack must be finite and ≥ 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = WorstCase::new();
    let mut failure: Option<String> = None;
    let compare = |f: &DistFn,
                       g: &DistFn,
                       worst: &mut WorstCase,
                       failure: &mut Option<String>,
                       label: &dyn Fn() -> String| {
        let gap = min_gap(f, g);
        if gap >= 0.0 || leq_with_shift(f, g, slack) {
            worst.observe(gap.max(0.0), || label());
        } else {
            worst.observe(gap, || label());
            if failure.is_none() {
                *failure = Some(format!("{}, gap {gap:.3e}", label()));
            }
        }
    };
    for _ in 0..samples {
        let p = space.sample_point(&mut rng);
        let nu_p = space.norm_df(&p)?;
        let mut sup = nu_p.clone();
        let mut shifted: Vec<(String, DistFn)> = Vec::with_capacity(c.len());
        for r in c {
            let nu_pr = space.norm_df(&p.add(r))?;
            sup.sup_assign(&nu_pr);
            shifted.push((format!("{r}"), nu_pr));
        }
        compare(&nu_p, &sup, &mut worst, &mut failure, &|| {
            format!("ν̄_{{p_C}} ≥ ν_p failed at p = {p}")
        });
        for (label, nu_pr) in &shifted {
            compare(nu_pr, &nu_p, &mut worst, &mut failure, &|| {
                format!("ν_p ≥ ν_{{p+r}} failed at p = {p}, r = {label}")
            });
        }
    }
    let margin = if worst.margin.is_finite() { worst.margin } else { 0.0 };
    Ok(match failure {
        Some(witness) => {
            VerificationReport::failing("kernel-coincidence", margin, witness, samples, seed)
        }
        None => VerificationReport::passing("kernel-coincidence", margin, samples, seed),
    })
}

/// Boundedness and openness evidence for the canonical projection
/// `π: V → V/W` under the exact quotient strategy.
///
/// (a) `ν̄_{πp} ≥ ν_p` on sampled points (strong boundedness with
/// constant 1, up to the usual rounding slack in the comparison).
/// (b) Openness by double inclusion at sampled radii: ambient
/// neighborhood membership transports forward to the quotient, and
/// every sampled coset in the quotient neighborhood yields an ambient
/// representative in the ambient neighborhood, constructed from the
/// distance minimizer.
pub fn projection_check(q: &QuotientSpace, samples: usize, seed: u64) -> Result<VerificationReport> {
    if samples == 0 {
        return Err(PnError::Domain("at least one sample required".into()));
    }
    if !matches!(q.strategy, QuotientStrategy::Exact) {
        return Err(PnError::Domain(
            "projection check needs the exact quotient strategy".into(),
        ));
    }
    let ambient = &q.ambient;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = WorstCase::new();
    let mut failure: Option<String> = None;
    let note_failure = |msg: String, failure: &mut Option<String>| {
        if failure.is_none() {
            *failure = Some(msg);
        }
    };

    for _ in 0..samples {
        let p = ambient.sample_point(&mut rng);
        let nu_p = ambient.norm_df(&p)?;
        let nu_bar = q.norm_df(&p)?;
        let gap = min_gap(&nu_p, &nu_bar);
        if leq_with_rounding(&nu_p, &nu_bar) {
            // Rounding-displaced breakpoints count as zero margin.
            worst.observe(gap.max(0.0), || format!("boundedness gap at p = {p}"));
        } else {
            worst.observe(gap, || format!("boundedness gap at p = {p}"));
            note_failure(
                format!("strong boundedness failed at p = {p}, gap {gap:.3e}"),
                &mut failure,
            );
        }

        let t: f64 = rng.gen_range(0.05..0.95);
        let v = ambient.sample_point(&mut rng);
        if in_strong_neighborhood(ambient, &p, t, &v)?
            && !in_strong_neighborhood(q, &p, t, &v)?
        {
            note_failure(
                format!("π failed to map N_p({t:.3}) into N′: q = {v}"),
                &mut failure,
            );
        }
        if in_strong_neighborhood(q, &p, t, &v)? {
            // Min-norm representative of the coset of v − p, shifted
            // back to p: lies in the ambient neighborhood exactly when
            // the coset lies in the quotient one.
            let diff = v.sub(&p);
            let (_, offset) = nearest_offset(&diff, &q.subspace, ambient.norm_kind())?;
            let u = p.add(&diff.add(&offset));
            if !coset_equal(&u, &v, &q.subspace)? {
                note_failure(
                    format!("representative {u} left the coset of {v}"),
                    &mut failure,
                );
            }
            if !in_strong_neighborhood(ambient, &p, t, &u)? {
                note_failure(
                    format!(
                        "coset of {v} sits in N′_{{πp}}({t:.3}) but its min-norm \
                         representative {u} missed N_p"
                    ),
                    &mut failure,
                );
            }
        }
    }
    let margin = if worst.margin.is_finite() { worst.margin } else { 0.0 };
    Ok(match failure {
        Some(witness) => {
            VerificationReport::failing("projection-check", margin, witness, samples, seed)
        }
        None => VerificationReport::passing("projection-check", margin, samples, seed),
    })
}
