//! Strong Cauchy machinery: sequence rules, entry tables, δ-schedules,
//! representative lifting, two-of-three completeness experiments,
//! σ-products, and the continuity probes over quotients.
//!
//! Completeness is not decidable from finitely many norm evaluations,
//! so nothing here claims a limit exists. The checkers verify the
//! intermediate objects of the completeness arguments instead: per-λ
//! entry indices, ball-contraction ladders, lifted subsequences and
//! correction sequences, each horizon-bounded and reported with its
//! margin.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::distfn::{min_gap, sibley, DistFn};
use crate::error::{PnError, Result};
use crate::pnspace::{check_axioms, leq_with_rounding, PNSpace, ProbNormed, SpaceKind};
use crate::quotient::{dist_to_subspace, CosetHandle, QuotientSpace, QuotientStrategy, Subspace};
use crate::report::{VerificationReport, WorstCase};
use crate::sample;
use crate::trifn::{check_dominates, TriangleFn};
use crate::vector::{LinearMap, Vector};

/// Schedule candidates below this are hopeless: `τ` is not contracting
/// the sampled balls at any usable resolution.
const DELTA_FLOOR: f64 = 1e-12;

/// Closed-form families of test sequences. Every family is a pure
/// function of the index, so an experiment is replayable from the rule
/// and horizon alone.
#[derive(Debug, Clone)]
pub enum SequenceRule {
    /// `p_n = c`.
    Constant(Vector),
    /// `p_n = base + n·drift + (1/n)·decay`. Zero drift converges to
    /// `base`; any other drift escapes every bounded set.
    Reciprocal {
        base: Vector,
        drift: Vector,
        decay: Vector,
    },
    /// `p_n = (−1)^n d`, the standard non-Cauchy probe.
    Alternating { direction: Vector },
    /// `p_n = ratio^n d`.
    Geometric { direction: Vector, ratio: f64 },
    /// `p_1 = start`, `p_{n+1} = map(p_n) + offset`.
    CustomAffine {
        map: LinearMap,
        offset: Vector,
        start: Vector,
    },
}

impl SequenceRule {
    fn validate(&self) -> Result<()> {
        match self {
            SequenceRule::Constant(_) | SequenceRule::Alternating { .. } => Ok(()),
            SequenceRule::Reciprocal { base, drift, decay } => {
                base.check_compatible(drift)?;
                base.check_compatible(decay)
            }
            SequenceRule::Geometric { ratio, .. } => {
                if ratio.is_finite() {
                    Ok(())
                } else {
                    Err(PnError::Domain(format!(
                        "geometric ratio must be finite, got {ratio}"
                    )))
                }
            }
            SequenceRule::CustomAffine { map, offset, start } => {
                let image = map.apply(start)?;
                image.check_compatible(start)?;
                image.check_compatible(offset)
            }
        }
    }

    /// The term `p_n`, 1-based.
    fn term(&self, n: usize) -> Result<Vector> {
        debug_assert!(n >= 1);
        match self {
            SequenceRule::Constant(c) => Ok(c.clone()),
            SequenceRule::Reciprocal { base, drift, decay } => {
                let x = n as f64;
                Ok(base.add(&drift.scale(x)).add(&decay.scale(1.0 / x)))
            }
            SequenceRule::Alternating { direction } => {
                Ok(direction.scale(if n % 2 == 0 { 1.0 } else { -1.0 }))
            }
            SequenceRule::Geometric { direction, ratio } => {
                Ok(direction.scale(ratio.powi(n as i32)))
            }
            SequenceRule::CustomAffine { map, offset, start } => {
                let mut p = start.clone();
                for _ in 1..n {
                    p = map.apply(&p)?.add(offset);
                }
                Ok(p)
            }
        }
    }
}

/// A test sequence materialized up to its horizon, indexed from 1 to
/// match the `p_n` notation. Horizon 2 is the smallest sequence with a
/// testable pair.
#[derive(Debug, Clone)]
pub struct PointSequence {
    points: Vec<Vector>,
}

impl PointSequence {
    /// Evaluates `rule` for `n = 1..=horizon`.
    pub fn from_rule(rule: &SequenceRule, horizon: usize) -> Result<Self> {
        rule.validate()?;
        check_seq_horizon(horizon)?;
        let points = (1..=horizon).map(|n| rule.term(n)).collect::<Result<_>>()?;
        Ok(Self { points })
    }

    /// Materializes an ad-hoc generator. Experiments whose terms fall
    /// outside the named families (projections, lifted subsequences,
    /// correction sequences) are built through here.
    pub fn from_fn(
        horizon: usize,
        mut gen: impl FnMut(usize) -> Result<Vector>,
    ) -> Result<Self> {
        check_seq_horizon(horizon)?;
        let points: Vec<Vector> = (1..=horizon).map(&mut gen).collect::<Result<_>>()?;
        for p in &points[1..] {
            points[0].check_compatible(p)?;
        }
        Ok(Self { points })
    }

    pub fn horizon(&self) -> usize {
        self.points.len()
    }

    /// The term `p_n`, 1-based.
    pub fn at(&self, n: usize) -> Result<&Vector> {
        if n == 0 || n > self.points.len() {
            return Err(PnError::Domain(format!(
                "sequence index {n} outside 1..={}",
                self.points.len()
            )));
        }
        Ok(&self.points[n - 1])
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }
}

fn check_seq_horizon(horizon: usize) -> Result<()> {
    if horizon < 2 {
        return Err(PnError::Domain(format!(
            "horizon must be at least 2, got {horizon}"
        )));
    }
    Ok(())
}

fn check_lambda_grid(lambda_grid: &[f64]) -> Result<()> {
    if lambda_grid.is_empty() {
        return Err(PnError::Domain("λ grid must be nonempty".into()));
    }
    for &l in lambda_grid {
        if !(l.is_finite() && l > 0.0) {
            return Err(PnError::Domain(format!(
                "λ values must be positive and finite, got {l}"
            )));
        }
    }
    Ok(())
}

fn check_scan_horizon(seq: &PointSequence, horizon: usize) -> Result<()> {
    check_seq_horizon(horizon)?;
    if horizon > seq.horizon() {
        return Err(PnError::Domain(format!(
            "horizon {horizon} exceeds the sequence's materialized horizon {}",
            seq.horizon()
        )));
    }
    Ok(())
}

fn entry_table_witness(entries: &[(f64, Option<usize>)]) -> String {
    entries
        .iter()
        .map(|(l, n)| match n {
            Some(n) => format!("N({l}) = {n}"),
            None => format!("N({l}) not reached"),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// Outcome of a strong Cauchy scan. `entries` holds, per λ, the least
/// index past which every tested pair stayed inside the λ-criterion,
/// or `None` when violations ran into the tail and nothing testable
/// remains beyond them.
#[derive(Debug, Clone)]
pub struct CauchyVerdict {
    pub report: VerificationReport,
    pub entries: Vec<(f64, Option<usize>)>,
}

/// Scans all pairs `(p_n, p_m)` with `n < m ≤ horizon` against the
/// strong Cauchy criterion `ν_{p_n−p_m}(λ) > 1 − λ` and produces the
/// per-λ entry table `N(λ)`. Violations before the entry index are the
/// sequence settling and do not count against the margin; a λ whose
/// violations persist into the tail fails with the latest bad pair as
/// witness.
pub fn strong_cauchy_verdict(
    space: &dyn ProbNormed,
    seq: &PointSequence,
    lambda_grid: &[f64],
    horizon: usize,
) -> Result<CauchyVerdict> {
    check_lambda_grid(lambda_grid)?;
    check_scan_horizon(seq, horizon)?;

    // One norm per pair, evaluated at every λ.
    let mut pairs = Vec::new();
    let mut vals: Vec<Vec<f64>> = vec![Vec::new(); lambda_grid.len()];
    for n in 1..horizon {
        for m in (n + 1)..=horizon {
            let df = space.norm_df(&seq.at(n)?.sub(seq.at(m)?))?;
            pairs.push((n, m));
            for (gi, &l) in lambda_grid.iter().enumerate() {
                vals[gi].push(df.eval(l));
            }
        }
    }

    let mut entries = Vec::with_capacity(lambda_grid.len());
    let mut worst = WorstCase::new();
    let mut failure: Option<String> = None;
    for (gi, &l) in lambda_grid.iter().enumerate() {
        let mut deepest = 0usize;
        let mut bad: Option<(usize, usize, f64)> = None;
        for (pi, &(n, m)) in pairs.iter().enumerate() {
            let v = vals[gi][pi];
            if v <= 1.0 - l && n >= deepest {
                deepest = n;
                bad = Some((n, m, v));
            }
        }
        let entry = deepest + 1;
        // An entry at the last index leaves no pair to test beyond it.
        if entry >= horizon {
            let (n, m, v) = bad.expect("an entry past 1 has a violation behind it");
            entries.push((l, None));
            worst.observe(v - (1.0 - l), || {
                format!(
                    "λ = {l}: pair ({n}, {m}) gives ν_{{p_n−p_m}}(λ) = {v} ≤ 1 − λ \
                     with no recovery before horizon {horizon}"
                )
            });
            if failure.is_none() {
                failure = Some(format!(
                    "λ = {l}: pair ({n}, {m}) gives ν_{{p_n−p_m}}(λ) = {v} ≤ 1 − λ \
                     with no recovery before horizon {horizon}"
                ));
            }
            continue;
        }
        entries.push((l, Some(entry)));
        for (pi, &(n, _)) in pairs.iter().enumerate() {
            if n >= entry {
                let surplus = vals[gi][pi] - (1.0 - l);
                worst.observe(surplus, || {
                    format!("λ = {l}: thinnest pass past N(λ) = {entry}, surplus {surplus}")
                });
            }
        }
    }

    let samples = pairs.len();
    let report = if let Some(witness) = failure {
        let margin = if worst.margin.is_finite() {
            worst.margin
        } else {
            0.0
        };
        VerificationReport::failing("strong-cauchy", margin, witness, samples, 0)
    } else {
        let margin = if worst.margin.is_finite() {
            worst.margin
        } else {
            0.0
        };
        VerificationReport::passing_with_witness(
            "strong-cauchy",
            margin,
            entry_table_witness(&entries),
            samples,
            0,
        )
    };
    Ok(CauchyVerdict { report, entries })
}

/// [`strong_cauchy_verdict`] reduced to its report.
pub fn is_strong_cauchy(
    space: &dyn ProbNormed,
    seq: &PointSequence,
    lambda_grid: &[f64],
    horizon: usize,
) -> Result<VerificationReport> {
    Ok(strong_cauchy_verdict(space, seq, lambda_grid, horizon)?.report)
}

/// Outcome of a strong convergence scan toward a fixed candidate.
#[derive(Debug, Clone)]
pub struct LimitVerdict {
    pub report: VerificationReport,
    pub entries: Vec<(f64, Option<usize>)>,
}

/// Scans `ν_{p_n−candidate}(λ) > 1 − λ` for `n ≤ horizon` and reports
/// the per-λ least entry index into `N_candidate(λ)`, or the latest
/// violating index when the sequence never stays inside.
pub fn strong_limit_verdict(
    space: &dyn ProbNormed,
    seq: &PointSequence,
    candidate: &Vector,
    lambda_grid: &[f64],
    horizon: usize,
) -> Result<LimitVerdict> {
    check_lambda_grid(lambda_grid)?;
    check_scan_horizon(seq, horizon)?;
    candidate.check_compatible(seq.at(1)?)?;

    let mut vals: Vec<Vec<f64>> = vec![Vec::with_capacity(horizon); lambda_grid.len()];
    for n in 1..=horizon {
        let df = space.norm_df(&seq.at(n)?.sub(candidate))?;
        for (gi, &l) in lambda_grid.iter().enumerate() {
            vals[gi].push(df.eval(l));
        }
    }

    let mut entries = Vec::with_capacity(lambda_grid.len());
    let mut worst = WorstCase::new();
    let mut failure: Option<String> = None;
    for (gi, &l) in lambda_grid.iter().enumerate() {
        let mut last_bad: Option<(usize, f64)> = None;
        for n in 1..=horizon {
            let v = vals[gi][n - 1];
            if v <= 1.0 - l {
                last_bad = Some((n, v));
            }
        }
        let entry = last_bad.map_or(1, |(n, _)| n + 1);
        if entry > horizon {
            let (n, v) = last_bad.expect("an entry past the horizon has a violation");
            entries.push((l, None));
            worst.observe(v - (1.0 - l), || {
                format!("λ = {l}: index {n} still outside N_candidate(λ), ν(λ) = {v}")
            });
            if failure.is_none() {
                failure = Some(format!(
                    "λ = {l}: index {n} still outside N_candidate(λ) at the horizon, ν(λ) = {v}"
                ));
            }
            continue;
        }
        entries.push((l, Some(entry)));
        for n in entry..=horizon {
            let surplus = vals[gi][n - 1] - (1.0 - l);
            worst.observe(surplus, || {
                format!("λ = {l}: thinnest pass past entry {entry}, surplus {surplus}")
            });
        }
    }

    let report = if let Some(witness) = failure {
        let margin = if worst.margin.is_finite() {
            worst.margin
        } else {
            0.0
        };
        VerificationReport::failing("strong-limit", margin, witness, horizon, 0)
    } else {
        let margin = if worst.margin.is_finite() {
            worst.margin
        } else {
            0.0
        };
        VerificationReport::passing_with_witness(
            "strong-limit",
            margin,
            entry_table_witness(&entries),
            horizon,
            0,
        )
    };
    Ok(LimitVerdict { report, entries })
}

/// [`strong_limit_verdict`] reduced to its report.
pub fn strong_limit_check(
    space: &dyn ProbNormed,
    seq: &PointSequence,
    candidate: &Vector,
    lambda_grid: &[f64],
    horizon: usize,
) -> Result<VerificationReport> {
    Ok(strong_limit_verdict(space, seq, candidate, lambda_grid, horizon)?.report)
}

/// Finds `p′` in the coset of `p` with
/// `d_S(ν_{p′}, ε0) < d_S(ν̄_{p+W}, ε0) + eps`. The exact strategy
/// returns the norm-nearest representative outright; the sampled
/// strategies walk their family until a representative lands within
/// `eps` of the settled quotient value.
pub fn lift_representative(q: &QuotientSpace, p: &Vector, eps: f64) -> Result<Vector> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(PnError::Domain(format!(
            "eps must be strictly positive, got {eps}; the strict inequality is \
             unattainable at eps = 0"
        )));
    }
    if matches!(q.strategy(), QuotientStrategy::Exact) {
        return Ok(CosetHandle::new(q, p.clone())?.canonical_representative()?);
    }
    let (est, settled) = q.sampled_estimate(p)?;
    let value = est.sibley_to_eps0().value();
    let mut best: Option<(f64, Vector)> = None;
    let mut hit: Option<Vector> = None;
    q.walk_coset(p, &mut |rep, df| {
        let v = df.sibley_to_eps0().value();
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, rep.clone()));
        }
        if settled && v < value + eps {
            hit = Some(rep);
            return Ok(true);
        }
        Ok(false)
    })?;
    if let Some(rep) = hit {
        return Ok(rep);
    }
    let (bv, brep) = best.expect("the walk visits p itself");
    Err(PnError::Inconclusive(if settled {
        format!(
            "no sampled representative within eps of the quotient value \
             (best d_S = {bv} at {brep}, needed < {})",
            value + eps
        )
    } else {
        format!(
            "quotient value did not settle, so the target is unknown \
             (best representative found: {brep} at d_S = {bv})"
        )
    }))
}

/// Finds `p′` in the coset of `p` with `ν_{p′} ≥ τ(ν̄_{p+W}, G)`.
/// `ν̄` enters through its sampled estimate, which sits below the true
/// sup, so the certified precondition `estimate ≥ G` and the acceptance
/// bound `τ(estimate, G)` are both on the sound side; for the exact
/// strategy they are `ν̄` itself.
pub fn lift_with_floor(q: &QuotientSpace, p: &Vector, g: &DistFn) -> Result<Vector> {
    if g.is_eps0() {
        return Err(PnError::Domain("the floor must differ from ε0".into()));
    }
    let (est, settled) = q.sampled_estimate(p)?;
    if !(min_gap(g, &est) >= 0.0 || leq_with_rounding(g, &est)) {
        return Err(if settled {
            PnError::Domain(
                "precondition failed: the quotient norm does not dominate the floor pointwise"
                    .into(),
            )
        } else {
            PnError::Inconclusive(
                "the unsettled sampled estimate does not dominate the floor; the \
                 precondition cannot be certified"
                    .into(),
            )
        });
    }
    let bound = q.tau().apply(&est, g);
    let mut best: Option<(f64, Vector)> = None;
    let mut hit: Option<Vector> = None;
    q.walk_coset(p, &mut |rep, df| {
        let gap = min_gap(&bound, &df);
        if best.as_ref().is_none_or(|(b, _)| gap > *b) {
            best = Some((gap, rep.clone()));
        }
        if gap >= 0.0 || leq_with_rounding(&bound, &df) {
            hit = Some(rep);
            return Ok(true);
        }
        Ok(false)
    })?;
    hit.ok_or_else(|| {
        let (bg, brep) = best.expect("the walk visits p itself");
        PnError::Inconclusive(format!(
            "no representative reached the floor (best gap {bg} at {brep})"
        ))
    })
}

/// A strictly decreasing ladder `δ_1 > δ_2 > …` with sampled evidence
/// that `τ` maps each pair of `δ_n`-balls around `ε0` into the
/// `min(1/n, δ_{n−1})`-ball. The ladder drives the subsequence
/// selection of [`lift_cauchy_sequence`].
#[derive(Debug, Clone)]
pub struct DeltaSchedule {
    deltas: Vec<f64>,
}

impl DeltaSchedule {
    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn depth(&self) -> usize {
        self.deltas.len()
    }

    /// `δ_n`, 1-based.
    pub fn delta(&self, n: usize) -> Result<f64> {
        self.deltas.get(n.wrapping_sub(1)).copied().ok_or_else(|| {
            PnError::Domain(format!("δ index {n} outside 1..={}", self.deltas.len()))
        })
    }
}

/// One draw from the open Sibley ball around `ε0` of radius `delta`:
/// half unit steps, half two-step functions, all kept inside the
/// 0.9·delta sub-ball so acceptance never rides the boundary.
fn ball_sample(rng: &mut ChaCha8Rng, delta: f64) -> Result<DistFn> {
    let reach = 0.9 * delta;
    if rng.gen_bool(0.5) {
        DistFn::unit_step(rng.gen_range(0.0..reach))
    } else {
        let a: f64 = rng.gen_range(0.0..reach);
        let drop: f64 = rng.gen_range(0.01 * reach..reach);
        let tail: f64 = rng.gen_range(0.1..1.0);
        DistFn::new(vec![(a, 1.0 - drop), (a + tail, 1.0)])
    }
}

/// Builds the ladder greedily: `δ_1 = 0.5`, and each later `δ_n` starts
/// at half its predecessor and halves until every sampled ball pair
/// maps under `τ` strictly inside the `min(1/n, δ_{n−1})` target.
pub fn build_delta_schedule(
    tau: &TriangleFn,
    depth: usize,
    samples_per_ball: usize,
    seed: u64,
) -> Result<DeltaSchedule> {
    if depth < 1 {
        return Err(PnError::Domain(format!(
            "schedule depth must be at least 1, got {depth}"
        )));
    }
    if samples_per_ball == 0 {
        return Err(PnError::Domain("samples_per_ball must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut deltas = vec![0.5];
    for n in 2..=depth {
        let prev = deltas[n - 2];
        let target = (1.0 / n as f64).min(prev);
        let mut candidate = prev / 2.0;
        loop {
            if candidate < DELTA_FLOOR {
                return Err(PnError::Domain(format!(
                    "δ_{n} underflowed below {DELTA_FLOOR}; τ does not contract the \
                     sampled balls at any usable resolution"
                )));
            }
            let mut ok = true;
            for _ in 0..samples_per_ball {
                let f = ball_sample(&mut rng, candidate)?;
                let g = ball_sample(&mut rng, candidate)?;
                if tau.apply(&f, &g).sibley_to_eps0().value() >= target {
                    ok = false;
                    break;
                }
            }
            if ok {
                break;
            }
            candidate /= 2.0;
        }
        deltas.push(candidate);
    }
    Ok(DeltaSchedule { deltas })
}

/// Re-samples the ball inclusions of an existing schedule with a fresh
/// seed. The margin is the thinnest clearance between a τ-image and
/// its target ball boundary.
pub fn validate_delta_schedule(
    tau: &TriangleFn,
    schedule: &DeltaSchedule,
    samples_per_ball: usize,
    seed: u64,
) -> Result<VerificationReport> {
    if samples_per_ball == 0 {
        return Err(PnError::Domain("samples_per_ball must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = WorstCase::new();
    let mut drawn = 0usize;
    for n in 2..=schedule.depth() {
        let delta = schedule.deltas[n - 1];
        let prev = schedule.deltas[n - 2];
        let target = (1.0 / n as f64).min(prev);
        for _ in 0..samples_per_ball {
            let f = ball_sample(&mut rng, delta)?;
            let g = ball_sample(&mut rng, delta)?;
            let landed = tau.apply(&f, &g).sibley_to_eps0().value();
            let margin = target - landed;
            worst.observe(margin, || {
                format!(
                    "depth {n}: τ image of a δ = {delta} ball pair sits {landed} from \
                     ε0 against target {target}"
                )
            });
            drawn += 1;
        }
    }
    Ok(worst.into_report("delta-schedule", drawn, seed))
}

/// Lifts a strong Cauchy sequence of cosets to a strong Cauchy sequence
/// of the ambient space along `schedule`: picks the subsequence whose
/// consecutive quotient gaps sit inside `δ_{i+1}`, then lifts each gap
/// with just enough slack to keep the same bound in the ambient space.
/// The result satisfies the chain `d_S(ν_{x_n−x_m}, ε0) < 1/n`, which
/// is re-verified on every pair before returning.
pub fn lift_cauchy_sequence(
    q: &QuotientSpace,
    quotient_seq: &PointSequence,
    schedule: &DeltaSchedule,
    horizon: usize,
) -> Result<PointSequence> {
    check_scan_horizon(quotient_seq, horizon)?;
    let depth = schedule.depth();
    if depth < 2 {
        return Err(PnError::Domain(
            "schedule depth must be at least 2: the subsequence needs δ_2 for its first gap"
                .into(),
        ));
    }

    // Pairwise quotient distances d_S(ν̄_{a_n−a_m}, ε0).
    let mut dist = vec![vec![0.0f64; horizon + 1]; horizon + 1];
    for n in 1..horizon {
        for m in (n + 1)..=horizon {
            let df = q.norm_df(&quotient_seq.at(n)?.sub(quotient_seq.at(m)?))?;
            dist[n][m] = df.sibley_to_eps0().value();
        }
    }

    // N(δ): least index with every later pair strictly inside δ.
    // Persistent violations at the tail mean the precondition fails.
    let entry = |delta: f64| -> Result<usize> {
        let mut deepest = 0usize;
        let mut bad: Option<(usize, usize, f64)> = None;
        for n in 1..horizon {
            for m in (n + 1)..=horizon {
                if dist[n][m] >= delta && n >= deepest {
                    deepest = n;
                    bad = Some((n, m, dist[n][m]));
                }
            }
        }
        if deepest + 1 >= horizon {
            let (n, m, v) = bad.expect("a tail entry has a violation behind it");
            return Err(PnError::Domain(format!(
                "quotient sequence is not strong Cauchy at δ = {delta}: pair ({n}, {m}) \
                 sits {v} from ε0 with no recovery before horizon {horizon}"
            )));
        }
        Ok(deepest + 1)
    };

    // Subsequence indices: strictly increasing, each at or past the
    // entry index of its outgoing gap bound δ_{i+1}.
    let mut indices: Vec<usize> = Vec::with_capacity(depth);
    for i in 1..=depth {
        let lower = indices.last().map_or(1, |&prev| prev + 1);
        let needed = if i < depth {
            entry(schedule.deltas[i])?
        } else {
            lower
        };
        let ni = lower.max(needed);
        if ni > horizon {
            return Err(PnError::Inconclusive(format!(
                "horizon {horizon} exhausted before the subsequence was complete \
                 (x_{i} needed index {ni})"
            )));
        }
        indices.push(ni);
    }

    // x_1 is any preimage refined toward the coset infimum; later terms
    // subtract lifted gap representatives, so consecutive ambient
    // differences inherit the quotient bounds.
    let mut lifted: Vec<Vector> = Vec::with_capacity(depth);
    lifted.push(lift_representative(
        q,
        quotient_seq.at(indices[0])?,
        schedule.deltas[0],
    )?);
    for i in 0..depth - 1 {
        let (ni, nj) = (indices[i], indices[i + 1]);
        let delta = schedule.deltas[i + 1];
        let gap = dist[ni][nj];
        if gap >= delta {
            return Err(PnError::Inconclusive(format!(
                "selected pair (a_{ni}, a_{nj}) missed its bound: d_S = {gap} ≥ δ = {delta}"
            )));
        }
        let diff = quotient_seq.at(ni)?.sub(quotient_seq.at(nj)?);
        let step = lift_representative(q, &diff, delta - gap)?;
        let step_dist = q.ambient().norm_df(&step)?.sibley_to_eps0().value();
        if step_dist >= delta {
            return Err(PnError::Inconclusive(format!(
                "lifted gap {} landed {step_dist} from ε0, outside δ = {delta}",
                i + 1
            )));
        }
        let prev = lifted.last().expect("x_1 is present");
        lifted.push(prev.sub(&step));
    }

    for a in 0..depth {
        for b in (a + 1)..depth {
            let v = q
                .ambient()
                .norm_df(&lifted[a].sub(&lifted[b]))?
                .sibley_to_eps0()
                .value();
            let bound = 1.0 / (a + 1) as f64;
            if v >= bound {
                return Err(PnError::Inconclusive(format!(
                    "lifted subsequence broke the 1/n chain: pair (x_{}, x_{}) sits {v} \
                     from ε0 against bound {bound}",
                    a + 1,
                    b + 1
                )));
            }
        }
    }
    Ok(PointSequence { points: lifted })
}

/// Which of the three spaces the test sequence lives in. The other two
/// are assumed complete, and the experiment replays the constructive
/// argument that the third inherits completeness.
#[derive(Debug, Clone)]
pub enum Scenario {
    /// Sequence in the ambient space; `W` and the quotient do the work.
    Ambient(PointSequence),
    /// Sequence inside `W`; the ambient space and the quotient do the work.
    Subspace(PointSequence),
    /// Sequence of coset representatives; the ambient space and `W` do
    /// the work.
    Quotient(PointSequence),
}

impl Scenario {
    /// Suffix used in the report's check name, `two-of-three-{name}`.
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Ambient(_) => "ambient",
            Scenario::Subspace(_) => "subspace",
            Scenario::Quotient(_) => "quotient",
        }
    }

    /// The raw sequence, regardless of which space it is read in.
    pub fn sequence(&self) -> &PointSequence {
        match self {
            Scenario::Ambient(s) | Scenario::Subspace(s) | Scenario::Quotient(s) => s,
        }
    }
}

/// Prefixes errors out of a stage with the stage name, so a failed
/// experiment names where it stopped.
fn staged<T>(stage: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        PnError::Inconclusive(msg) => PnError::Inconclusive(format!("stage {stage}: {msg}")),
        PnError::Domain(msg) => PnError::Domain(format!("stage {stage}: {msg}")),
        other => other,
    })
}

/// Runs the constructive two-of-three argument for the scenario's
/// space at desk scale. Every stage contributes a margin; the report
/// carries the stage table on success and the failing stage's witness
/// otherwise.
pub fn two_of_three_experiment(
    space: &PNSpace,
    w: &Subspace,
    scenario: &Scenario,
    horizon: usize,
    lambda_grid: &[f64],
    seed: u64,
) -> Result<VerificationReport> {
    check_lambda_grid(lambda_grid)?;
    let seq = scenario.sequence();
    check_scan_horizon(seq, horizon)?;
    let quotient = QuotientSpace::new(space.clone(), w.clone(), QuotientStrategy::Exact)?;
    let check = format!("two-of-three-{}", scenario.name());

    let mut stages: Vec<(&'static str, f64)> = Vec::new();
    let mut fail: Option<(&'static str, f64, String)> = None;
    let run = |stage: &'static str,
                   fail_slot: &mut Option<(&'static str, f64, String)>,
                   stages: &mut Vec<(&'static str, f64)>,
                   report: VerificationReport| {
        if report.pass() {
            stages.push((stage, report.worst_margin));
            true
        } else {
            if fail_slot.is_none() {
                *fail_slot = Some((
                    stage,
                    report.worst_margin,
                    report.witness.unwrap_or_else(|| "no witness".into()),
                ));
            }
            false
        }
    };

    match scenario {
        Scenario::Ambient(_) => {
            // ν̄ ≥ ν carries Cauchyness through the projection.
            let projected = staged(
                "projection-cauchy",
                strong_cauchy_verdict(&quotient, seq, lambda_grid, horizon),
            )?;
            if run("projection-cauchy", &mut fail, &mut stages, projected.report) {
                // The limit coset, read off the tail and normalized.
                let q_rep = staged(
                    "quotient-limit",
                    CosetHandle::new(&quotient, seq.at(horizon)?.clone())
                        .and_then(|h| h.canonical_representative()),
                )?;
                let lim = staged(
                    "quotient-limit",
                    strong_limit_verdict(&quotient, seq, &q_rep, lambda_grid, horizon),
                )?;
                if run("quotient-limit", &mut fail, &mut stages, lim.report) {
                    // Corrections q_n: coset members of p_n − q pushed
                    // above the floor τ(ν̄, H_n), H_n = ε_{d_n + 1/n}
                    // with d_n the raw subspace distance. Whatever is
                    // left over, r_n = (p_n − q) − q_n, must live in W
                    // and be Cauchy there.
                    let mut floor_worst = WorstCase::new();
                    let mut floor_fail: Option<String> = None;
                    let mut remainders: Vec<Vector> = Vec::with_capacity(horizon);
                    for n in 1..=horizon {
                        let pn_q = seq.at(n)?.sub(&q_rep);
                        let d_n = staged(
                            "h-floor",
                            dist_to_subspace(&pn_q, w, space.norm_kind()),
                        )?;
                        let h_n = staged(
                            "h-floor",
                            DistFn::unit_step(d_n + 1.0 / n as f64),
                        )?;
                        let nu_bar = staged("h-floor", quotient.norm_df(&pn_q))?;
                        let strict = (min_gap(&h_n, &nu_bar) >= 0.0
                            || leq_with_rounding(&h_n, &nu_bar))
                            && h_n != nu_bar;
                        if !strict {
                            floor_fail = Some(format!(
                                "index {n}: ν̄ does not strictly dominate H_n = ε_{{{}}}",
                                d_n + 1.0 / n as f64
                            ));
                            break;
                        }
                        let q_n = staged("h-floor", lift_with_floor(&quotient, &pn_q, &h_n))?;
                        let nu_qn = staged("h-floor", space.norm_df(&q_n))?;
                        let bound = space.tau().apply(&nu_bar, &h_n);
                        let above =
                            min_gap(&bound, &nu_qn) >= 0.0 || leq_with_rounding(&bound, &nu_qn);
                        let separation =
                            staged("h-floor", sibley(&bound, &nu_qn, 1e-9))?.value();
                        if !above || separation <= 0.0 {
                            floor_fail = Some(format!(
                                "index {n}: ν_{{q_n}} failed the strict floor \
                                 τ(ν̄, H_n) (separation {separation})"
                            ));
                            break;
                        }
                        floor_worst.observe(separation, || {
                            format!("index {n}: thinnest strict clearance over the floor")
                        });
                        remainders.push(pn_q.sub(&q_n));
                    }
                    let floor_report = match floor_fail {
                        Some(witness) => VerificationReport::failing(
                            "h-floor",
                            if floor_worst.margin.is_finite() {
                                floor_worst.margin
                            } else {
                                0.0
                            },
                            witness,
                            horizon,
                            seed,
                        ),
                        None => floor_worst.into_report("h-floor", horizon, seed),
                    };
                    if run("h-floor", &mut fail, &mut stages, floor_report) {
                        let mut member_fail: Option<String> = None;
                        for (i, r) in remainders.iter().enumerate() {
                            if !staged("correction-cauchy", w.contains(r))? {
                                member_fail =
                                    Some(format!("r_{} = {r} left the subspace", i + 1));
                                break;
                            }
                        }
                        let correction_report = match member_fail {
                            Some(witness) => VerificationReport::failing(
                                "correction-cauchy",
                                -1.0,
                                witness,
                                horizon,
                                seed,
                            ),
                            None => {
                                let r_seq = PointSequence {
                                    points: remainders,
                                };
                                staged(
                                    "correction-cauchy",
                                    strong_cauchy_verdict(space, &r_seq, lambda_grid, horizon),
                                )?
                                .report
                            }
                        };
                        run("correction-cauchy", &mut fail, &mut stages, correction_report);
                    }
                }
            }
        }
        Scenario::Subspace(_) => {
            for n in 1..=horizon {
                if !staged("membership", w.contains(seq.at(n)?))? {
                    return Err(PnError::Domain(format!(
                        "stage membership: w_{n} does not lie in the subspace"
                    )));
                }
            }
            stages.push(("membership", 0.0));
            let cauchy = staged(
                "ambient-cauchy",
                strong_cauchy_verdict(space, seq, lambda_grid, horizon),
            )?;
            if run("ambient-cauchy", &mut fail, &mut stages, cauchy.report) {
                let candidate = seq.at(horizon)?.clone();
                let lim = staged(
                    "ambient-limit",
                    strong_limit_verdict(space, seq, &candidate, lambda_grid, horizon),
                )?;
                if run("ambient-limit", &mut fail, &mut stages, lim.report) {
                    // The limit must fall back into W: its coset is θ+W.
                    let d = staged("limit-in-w", quotient.norm_df(&candidate))?
                        .sibley_to_eps0()
                        .value();
                    let in_w = staged("limit-in-w", w.contains(&candidate))?;
                    // Projection against a generic basis leaves a residual
                    // on the order of the float roundoff, so the zero test
                    // carries a small absolute allowance.
                    let report = if in_w && d <= 1e-9 {
                        VerificationReport::passing("limit-in-w", 0.0, 1, seed)
                    } else {
                        VerificationReport::failing(
                            "limit-in-w",
                            -d,
                            format!("limit candidate sits {d} from ε0 in the quotient"),
                            1,
                            seed,
                        )
                    };
                    run("limit-in-w", &mut fail, &mut stages, report);
                }
            }
        }
        Scenario::Quotient(_) => {
            let cauchy = staged(
                "quotient-cauchy",
                strong_cauchy_verdict(&quotient, seq, lambda_grid, horizon),
            )?;
            if run("quotient-cauchy", &mut fail, &mut stages, cauchy.report) {
                let schedule = staged(
                    "delta-schedule",
                    build_delta_schedule(space.tau(), 5, 200, seed),
                )?;
                stages.push(("delta-schedule", 0.0));
                let lifted = staged(
                    "lift",
                    lift_cauchy_sequence(&quotient, seq, &schedule, horizon),
                )?;
                // Margin of the lift: thinnest clearance under the
                // 1/n chain bound.
                let mut chain = f64::INFINITY;
                for a in 1..lifted.horizon() {
                    for b in (a + 1)..=lifted.horizon() {
                        let v = staged(
                            "lift",
                            space.norm_df(&lifted.at(a)?.sub(lifted.at(b)?)),
                        )?
                        .sibley_to_eps0()
                        .value();
                        chain = chain.min(1.0 / a as f64 - v);
                    }
                }
                stages.push(("lift", chain));
                let candidate = lifted.at(lifted.horizon())?.clone();
                let ambient_lim = staged(
                    "ambient-limit",
                    strong_limit_verdict(
                        space,
                        &lifted,
                        &candidate,
                        lambda_grid,
                        lifted.horizon(),
                    ),
                )?;
                if run("ambient-limit", &mut fail, &mut stages, ambient_lim.report) {
                    // π of the recovered ambient limit closes the loop.
                    let projected = staged(
                        "projected-limit",
                        strong_limit_verdict(&quotient, seq, &candidate, lambda_grid, horizon),
                    )?;
                    run("projected-limit", &mut fail, &mut stages, projected.report);
                }
            }
        }
    }

    if let Some((stage, margin, witness)) = fail {
        return Ok(VerificationReport::failing(
            check,
            margin,
            format!("stage {stage}: {witness}"),
            horizon,
            seed,
        ));
    }
    let margin = stages
        .iter()
        .map(|&(_, m)| m)
        .fold(f64::INFINITY, f64::min);
    let table = stages
        .iter()
        .map(|(s, m)| format!("{s}: {m:+.6}"))
        .collect::<Vec<_>>()
        .join("; ");
    Ok(VerificationReport::passing_with_witness(
        check,
        if margin.is_finite() { margin } else { 0.0 },
        table,
        horizon,
        seed,
    ))
}

/// The σ-product of two finite-dimensional spaces: points concatenate
/// and `ν_{(a,b)} = σ(ν1_a, ν2_b)`. Construction is gated on sampled
/// dominance evidence `τ* ≫ σ` and `σ ≫ τ` plus an axiom certificate,
/// so holding a value of this type is itself the record of a passed
/// experiment.
#[derive(Debug, Clone)]
pub struct SigmaProduct {
    left: PNSpace,
    right: PNSpace,
    sigma: TriangleFn,
    certificate: VerificationReport,
}

impl SigmaProduct {
    pub fn left(&self) -> &PNSpace {
        &self.left
    }

    pub fn right(&self) -> &PNSpace {
        &self.right
    }

    pub fn sigma(&self) -> &TriangleFn {
        &self.sigma
    }

    /// The axiom certificate recorded at construction.
    pub fn certificate(&self) -> &VerificationReport {
        &self.certificate
    }

    fn factor_dims(&self) -> (usize, usize) {
        match (self.left.kind(), self.right.kind()) {
            (SpaceKind::FiniteDim(a), SpaceKind::FiniteDim(b)) => (a, b),
            _ => unreachable!("σ-products are built over finite-dimensional factors"),
        }
    }

    pub fn dim(&self) -> usize {
        let (a, b) = self.factor_dims();
        a + b
    }

    /// Splits a product point into its factor components.
    pub fn split(&self, p: &Vector) -> Result<(Vector, Vector)> {
        let (dl, _) = self.factor_dims();
        let coords = p.coords()?;
        if coords.len() != self.dim() {
            return Err(PnError::DimensionMismatch(format!(
                "product point has dimension {}, expected {}",
                coords.len(),
                self.dim()
            )));
        }
        Ok((
            Vector::dense(coords[..dl].to_vec())?,
            Vector::dense(coords[dl..].to_vec())?,
        ))
    }
}

impl ProbNormed for SigmaProduct {
    fn norm_df(&self, p: &Vector) -> Result<DistFn> {
        let (a, b) = self.split(p)?;
        Ok(self
            .sigma
            .apply(&self.left.norm_df(&a)?, &self.right.norm_df(&b)?))
    }

    fn tau(&self) -> &TriangleFn {
        self.left.tau()
    }

    fn tau_star(&self) -> &TriangleFn {
        self.left.tau_star()
    }

    fn zero(&self) -> Vector {
        Vector::zero_dense(self.dim())
    }

    fn sample_point(&self, rng: &mut ChaCha8Rng) -> Vector {
        let a = self.left.sample_point(rng);
        let b = self.right.sample_point(rng);
        let mut coords = a.coords().expect("factor samples are dense").to_vec();
        coords.extend_from_slice(b.coords().expect("factor samples are dense"));
        Vector::Dense(coords)
    }
}

/// Builds the σ-product of two spaces sharing `(τ, τ*)`. Refused
/// outright when the sampled dominance evidence `τ* ≫ σ` or `σ ≫ τ`
/// fails, or when the product flunks its own axiom check; the passing
/// axiom certificate is attached to the result.
pub fn sigma_product(
    left: PNSpace,
    right: PNSpace,
    sigma: TriangleFn,
    samples: usize,
    quadruples: usize,
    seed: u64,
) -> Result<SigmaProduct> {
    if !matches!(
        (left.kind(), right.kind()),
        (SpaceKind::FiniteDim(_), SpaceKind::FiniteDim(_))
    ) {
        return Err(PnError::Domain(
            "σ-products pair finite-dimensional factors".into(),
        ));
    }
    if left.tau() != right.tau() || left.tau_star() != right.tau_star() {
        return Err(PnError::Domain("the factors must share (τ, τ*)".into()));
    }
    if samples == 0 || quadruples == 0 {
        return Err(PnError::Domain(
            "samples and quadruples must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let quads = sample::random_quadruples(&mut rng, quadruples, 3);
    let upper = check_dominates(left.tau_star(), &sigma, &quads, seed);
    if !upper.pass() {
        return Err(PnError::Domain(format!(
            "construction refused: τ* does not dominate σ on the sampled quadruples ({})",
            upper.witness.as_deref().unwrap_or("no witness")
        )));
    }
    let quads = sample::random_quadruples(&mut rng, quadruples, 3);
    let lower = check_dominates(&sigma, left.tau(), &quads, seed);
    if !lower.pass() {
        return Err(PnError::Domain(format!(
            "construction refused: σ does not dominate τ on the sampled quadruples ({})",
            lower.witness.as_deref().unwrap_or("no witness")
        )));
    }
    // The placeholder certificate never escapes: it is replaced before
    // return, or the construction errors out.
    let mut product = SigmaProduct {
        left,
        right,
        sigma,
        certificate: VerificationReport::passing("pn-axioms", 0.0, 0, seed),
    };
    let certificate = check_axioms(&product, samples, seed)?;
    if !certificate.pass() {
        return Err(PnError::Domain(format!(
            "construction refused: the product failed its axiom check ({})",
            certificate.witness.as_deref().unwrap_or("no witness")
        )));
    }
    product.certificate = certificate;
    Ok(product)
}

/// One factor rule from a deterministic family mix: indices 0..2 are
/// Cauchy families (constant, reciprocal decay, geometric), 3 and 4
/// are not (alternating, linear drift). Parameters are drawn from
/// `rng`, the family from `family` alone.
fn factor_rule(rng: &mut ChaCha8Rng, dim: usize, family: usize) -> SequenceRule {
    match family % 5 {
        0 => SequenceRule::Constant(sample::random_dense(rng, dim, -2.0, 2.0)),
        1 => SequenceRule::Reciprocal {
            base: sample::random_dense(rng, dim, -2.0, 2.0),
            drift: Vector::zero_dense(dim),
            decay: sample::random_dense(rng, dim, -2.0, 2.0),
        },
        2 => SequenceRule::Geometric {
            direction: sample::random_dense(rng, dim, -2.0, 2.0),
            ratio: 0.5,
        },
        3 => SequenceRule::Alternating {
            direction: sample::random_dense(rng, dim, 0.5, 1.5),
        },
        _ => SequenceRule::Reciprocal {
            base: sample::random_dense(rng, dim, -2.0, 2.0),
            drift: sample::random_dense(rng, dim, 0.1, 0.5),
            decay: Vector::zero_dense(dim),
        },
    }
}

/// Runs `count` rule-generated sequences through the product and its
/// factors and demands the verdicts agree: strong Cauchy in the
/// product iff strong Cauchy in both factors. The family mix cycles
/// deterministically through Cauchy and non-Cauchy rules on each side,
/// so both directions of the equivalence get exercised.
pub fn cauchy_factorization_check(
    product: &SigmaProduct,
    count: usize,
    horizon: usize,
    lambda_grid: &[f64],
    seed: u64,
) -> Result<VerificationReport> {
    check_lambda_grid(lambda_grid)?;
    check_seq_horizon(horizon)?;
    if count == 0 {
        return Err(PnError::Domain("count must be positive".into()));
    }
    let (dl, dr) = product.factor_dims();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatch: Option<String> = None;
    for i in 0..count {
        let left_rule = factor_rule(&mut rng, dl, i % 5);
        let right_rule = factor_rule(&mut rng, dr, (i / 5) % 5);
        let left_seq = PointSequence::from_rule(&left_rule, horizon)?;
        let right_seq = PointSequence::from_rule(&right_rule, horizon)?;
        let product_seq = PointSequence::from_fn(horizon, |n| {
            let mut coords = left_seq.at(n)?.coords()?.to_vec();
            coords.extend_from_slice(right_seq.at(n)?.coords()?);
            Vector::dense(coords)
        })?;
        let pv = strong_cauchy_verdict(product, &product_seq, lambda_grid, horizon)?;
        let lv = strong_cauchy_verdict(product.left(), &left_seq, lambda_grid, horizon)?;
        let rv = strong_cauchy_verdict(product.right(), &right_seq, lambda_grid, horizon)?;
        let both = lv.report.pass() && rv.report.pass();
        if pv.report.pass() != both {
            mismatch = Some(format!(
                "sequence #{i}: product verdict {} against factor verdicts ({}, {})",
                pv.report.pass(),
                lv.report.pass(),
                rv.report.pass()
            ));
            break;
        }
    }
    Ok(match mismatch {
        Some(witness) => {
            VerificationReport::failing("cauchy-factorization", -1.0, witness, count, seed)
        }
        None => VerificationReport::passing("cauchy-factorization", 0.0, count, seed),
    })
}

/// A perturbation of `p` strictly inside the strong neighborhood
/// `N_p(eta)`, found by shrinking a random step until the membership
/// test accepts it. Shrinking terminates for any norm rule because
/// `ν_θ = ε0` certifies the zero offset.
fn perturb_within(
    rng: &mut ChaCha8Rng,
    space: &PNSpace,
    p: &Vector,
    eta: f64,
) -> Result<Vector> {
    let dim = p.coords()?.len();
    let direction = loop {
        let d = sample::random_dense(rng, dim, -1.0, 1.0);
        let len = d.norm(space.norm_kind());
        if len > 1e-9 {
            break d.scale(1.0 / len);
        }
    };
    let mut radius: f64 = rng.gen_range(0.0..0.9 * eta);
    for _ in 0..64 {
        let candidate = p.add(&direction.scale(radius));
        if crate::pnspace::in_strong_neighborhood(space, p, eta, &candidate)? {
            return Ok(candidate);
        }
        radius /= 2.0;
    }
    Ok(p.clone())
}

/// Modulus-of-continuity table from a uniform continuity probe.
#[derive(Debug, Clone)]
pub struct ContinuityVerdict {
    pub report: VerificationReport,
    /// `(η, h(η))` in ascending η, non-decreasing by construction.
    pub table: Vec<(f64, f64)>,
}

/// Measures how far the quotient norm of `p − q` moves when both ends
/// are perturbed inside η-neighborhoods. Levels are scanned in
/// ascending η and each level inherits the smaller levels' draws
/// (every N(η′)-perturbation is an N(η)-perturbation for η′ < η), so
/// the reported modulus table is monotone by construction rather than
/// by luck. Passing means the finest level obeys the `4η` bound, twice
/// the exact-arithmetic modulus with room for sampling slack.
pub fn uniform_continuity_verdict(
    q: &QuotientSpace,
    pairs: usize,
    eta_grid: &[f64],
    seed: u64,
) -> Result<ContinuityVerdict> {
    if pairs == 0 {
        return Err(PnError::Domain("pairs must be positive".into()));
    }
    if eta_grid.is_empty() {
        return Err(PnError::Domain("η grid must be nonempty".into()));
    }
    for &eta in eta_grid {
        if !(eta.is_finite() && eta > 0.0) {
            return Err(PnError::Domain(format!(
                "η values must be positive and finite, got {eta}"
            )));
        }
    }
    let mut etas = eta_grid.to_vec();
    etas.sort_by(f64::total_cmp);
    etas.dedup();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table: Vec<(f64, f64)> = Vec::with_capacity(etas.len());
    for &eta in &etas {
        let mut level = table.last().map_or(0.0, |&(_, h)| h);
        for _ in 0..pairs {
            let p = q.sample_point(&mut rng);
            let b = q.sample_point(&mut rng);
            let base = q.norm_df(&p.sub(&b))?;
            let p2 = perturb_within(&mut rng, q.ambient(), &p, eta)?;
            let b2 = perturb_within(&mut rng, q.ambient(), &b, eta)?;
            let moved = q.norm_df(&p2.sub(&b2))?;
            level = level.max(sibley(&base, &moved, 1e-6)?.value());
        }
        table.push((eta, level));
    }

    let (eta_min, h_min) = table[0];
    let bound = (4.0 * eta_min).min(1.0);
    let margin = bound - h_min;
    let rendered = table
        .iter()
        .map(|(e, h)| format!("h({e}) = {h:.6}"))
        .collect::<Vec<_>>()
        .join(", ");
    let samples = pairs * etas.len();
    let report = if margin >= 0.0 {
        VerificationReport::passing_with_witness(
            "uniform-continuity",
            margin,
            rendered,
            samples,
            seed,
        )
    } else {
        VerificationReport::failing(
            "uniform-continuity",
            margin,
            format!("h({eta_min}) = {h_min} exceeded the {bound} bound; {rendered}"),
            samples,
            seed,
        )
    };
    Ok(ContinuityVerdict { report, table })
}

/// [`uniform_continuity_verdict`] reduced to its report.
pub fn uniform_continuity_probe(
    q: &QuotientSpace,
    pairs: usize,
    eta_grid: &[f64],
    seed: u64,
) -> Result<VerificationReport> {
    Ok(uniform_continuity_verdict(q, pairs, eta_grid, seed)?.report)
}

/// Checks the scalar continuity inequality
/// `d_S(ν̄_{π((α−β)p)}, ε0) ≤ d_S(ν_{(α−β)p}, ε0)` on the given pairs,
/// and that the ambient side does not grow as `|α−β|` shrinks.
pub fn scalar_continuity_probe(
    q: &QuotientSpace,
    p: &Vector,
    alpha_beta_pairs: &[(f64, f64)],
) -> Result<VerificationReport> {
    if alpha_beta_pairs.is_empty() {
        return Err(PnError::Domain("no (α, β) pairs supplied".into()));
    }
    let mut worst = WorstCase::new();
    let mut rows: Vec<(f64, f64)> = Vec::with_capacity(alpha_beta_pairs.len());
    for &(a, b) in alpha_beta_pairs {
        if !(a.is_finite() && b.is_finite()) {
            return Err(PnError::Domain(format!(
                "scalars must be finite, got ({a}, {b})"
            )));
        }
        let scaled = p.scale(a - b);
        let ambient = q.ambient().norm_df(&scaled)?.sibley_to_eps0().value();
        let quotient = q.norm_df(&scaled)?.sibley_to_eps0().value();
        let margin = ambient - quotient;
        worst.observe(margin, || {
            format!("α = {a}, β = {b}: quotient distance {quotient} against ambient {ambient}")
        });
        rows.push(((a - b).abs(), ambient));
    }
    // The ambient distance must be monotone in the scalar gap.
    rows.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut shrink_fail: Option<String> = None;
    for w in rows.windows(2) {
        let ((g1, d1), (g2, d2)) = (w[0], w[1]);
        if d2 > d1 + 1e-9 {
            shrink_fail = Some(format!(
                "ambient distance grew as the gap shrank: |α−β| = {g1} gives {d1}, \
                 |α−β| = {g2} gives {d2}"
            ));
            break;
        }
    }
    Ok(match shrink_fail {
        Some(witness) => VerificationReport::failing(
            "scalar-continuity",
            -1.0,
            witness,
            alpha_beta_pairs.len(),
            0,
        ),
        None => worst.into_report("scalar-continuity", alpha_beta_pairs.len(), 0),
    })
}
