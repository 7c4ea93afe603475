//! Probabilistic normed spaces over concrete carriers, and the sampled
//! axiom checkers.
//!
//! A space assigns each point `p` a step distribution function `ν_p`,
//! its probabilistic norm. The axioms checked here:
//!
//! * (N1) `ν_p = ε_0` exactly when `p = θ`;
//! * (N2) `ν_{−p} = ν_p`;
//! * (N3) `ν_{p+q} ≥ τ(ν_p, ν_q)` pointwise;
//! * (N4) `ν_p ≤ τ*(ν_{αp}, ν_{(1−α)p})` for `α ∈ [0, 1]`.
//!
//! Checkers draw their population from a seeded RNG, so a report is
//! reproducible from (samples, seed). Order comparisons are exact on
//! step functions; the one concession to floating point is that a
//! comparison may also be accepted when it holds after shifting abscissas
//! by a 1e-9 relative slack, which absorbs breakpoints displaced an ulp
//! by norm arithmetic (for instance `fl(α‖p‖) + fl((1−α)‖p‖)` landing
//! just above `fl(‖p‖)`). Reported margins are always the raw ones.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::distfn::{leq_with_shift, min_gap, DistFn};
use crate::error::{PnError, Result};
use crate::report::{VerificationReport, WorstCase};
use crate::sample::{random_dense, random_sparse};
use crate::trifn::TriangleFn;
use crate::vector::{LinearMap, NormKind, Vector};

/// Which carrier the space is built over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    FiniteDim(usize),
    /// Finitely-supported real sequences.
    C00,
}

/// How `ν_p` is produced from the classical norm.
#[derive(Debug, Clone, PartialEq)]
pub enum NormRule {
    /// `ν_p = ε_{‖p‖}`, the simple space.
    SimpleStep,
    /// `ν_p(x) = F0(x / ‖p‖)` for `p ≠ θ`: the template `F0` with its
    /// breakpoints stretched by the norm.
    SerstnevScaled(DistFn),
    /// `ν_p = ε_{‖p‖²}`. Deliberately broken: squaring destroys
    /// subadditivity, so (N3) fails whenever `‖p+q‖² > ‖p‖² + ‖q‖²`.
    /// Kept as the standard falsification target for the checkers.
    SquaredNormStep,
}

/// A probabilistic normed space instance.
///
/// Construction validates what it can cheaply; "PN space" status proper
/// is the certificate attached by [`check_axioms`], which is sampled and
/// seed-stamped, not a proof.
#[derive(Debug, Clone)]
pub struct PNSpace {
    kind: SpaceKind,
    norm: NormKind,
    rule: NormRule,
    tau: TriangleFn,
    tau_star: TriangleFn,
}

/// Anything that assigns probabilistic norms to points of a carrier:
/// concrete spaces, quotients, and products. The checkers are written
/// against this interface.
pub trait ProbNormed {
    /// The probabilistic norm of `p`. Errors on carrier mismatch, or
    /// when a sampled evaluation strategy cannot conclude.
    fn norm_df(&self, p: &Vector) -> Result<DistFn>;
    fn tau(&self) -> &TriangleFn;
    fn tau_star(&self) -> &TriangleFn;
    /// The origin `θ` of the carrier.
    fn zero(&self) -> Vector;
    /// A random carrier point at desk scale.
    fn sample_point(&self, rng: &mut ChaCha8Rng) -> Vector;
}

impl PNSpace {
    /// The simple space `ν_p = ε_{‖p‖}`. Requires the ε-sum law
    /// `τ(ε_a, ε_b) = ε_{a+b}` of both triangle functions, verified
    /// structurally on a fixed grid of positions.
    pub fn simple_space(
        dim: usize,
        norm: NormKind,
        tau: TriangleFn,
        tau_star: TriangleFn,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(PnError::Domain("dimension must be at least 1".into()));
        }
        check_eps_sum_law(&tau)?;
        check_eps_sum_law(&tau_star)?;
        Ok(Self {
            kind: SpaceKind::FiniteDim(dim),
            norm,
            rule: NormRule::SimpleStep,
            tau,
            tau_star,
        })
    }

    /// A space whose norms are rescaled copies of a template `F0`:
    /// `ν_p(x) = F0(x / ‖p‖)` and `ν_θ = ε_0`. `F0` must attain 1 (lie
    /// in D+) and differ from `ε_0`, else (N1) is unsatisfiable.
    pub fn serstnev_simple_space(
        dim: usize,
        norm: NormKind,
        f0: DistFn,
        tau: TriangleFn,
        tau_star: TriangleFn,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(PnError::Domain("dimension must be at least 1".into()));
        }
        if !f0.in_d_plus() {
            return Err(PnError::Domain(
                "the template distribution must attain 1 at finite points".into(),
            ));
        }
        if f0.is_eps0() {
            return Err(PnError::Domain(
                "the template must differ from eps_0, else nonzero points get the identity norm"
                    .into(),
            ));
        }
        Ok(Self {
            kind: SpaceKind::FiniteDim(dim),
            norm,
            rule: NormRule::SerstnevScaled(f0),
            tau,
            tau_star,
        })
    }

    /// The simple space over finitely-supported sequences with the
    /// sup norm. Its subspace of zero-sum sequences is the standard
    /// non-closed testbed for the quotient experiments.
    pub fn c00_space(tau: TriangleFn, tau_star: TriangleFn) -> Result<Self> {
        check_eps_sum_law(&tau)?;
        check_eps_sum_law(&tau_star)?;
        Ok(Self {
            kind: SpaceKind::C00,
            norm: NormKind::Linf,
            rule: NormRule::SimpleStep,
            tau,
            tau_star,
        })
    }

    /// The deliberately broken rule `ν_p = ε_{‖p‖²}` on a finite
    /// dimension, for exercising the falsification paths.
    pub fn squared_norm_space(
        dim: usize,
        norm: NormKind,
        tau: TriangleFn,
        tau_star: TriangleFn,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(PnError::Domain("dimension must be at least 1".into()));
        }
        Ok(Self {
            kind: SpaceKind::FiniteDim(dim),
            norm,
            rule: NormRule::SquaredNormStep,
            tau,
            tau_star,
        })
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn norm_kind(&self) -> NormKind {
        self.norm
    }

    pub fn rule(&self) -> &NormRule {
        &self.rule
    }

    /// Errors unless `p` belongs to this carrier.
    pub fn check_point(&self, p: &Vector) -> Result<()> {
        match (self.kind, p) {
            (SpaceKind::FiniteDim(n), Vector::Dense(c)) if c.len() == n => Ok(()),
            (SpaceKind::C00, Vector::Sparse(_)) => Ok(()),
            _ => Err(PnError::DimensionMismatch(format!(
                "point {p} does not belong to the carrier"
            ))),
        }
    }
}

/// `τ(ε_a, ε_b) = ε_{a+b}` on a grid of positions, structurally. All
/// built-in triangle functions satisfy it; the constructor check guards
/// the simple-space arithmetic that every downstream experiment uses.
fn check_eps_sum_law(tau: &TriangleFn) -> Result<()> {
    let grid = [0.25, 0.5, 1.0, 1.75, 3.0];
    for &a in &grid {
        for &b in &grid {
            let lhs = tau.apply(&DistFn::unit_step(a)?, &DistFn::unit_step(b)?);
            if lhs != DistFn::unit_step(a + b)? {
                return Err(PnError::IncompatibleTriangleFns(format!(
                    "triangle function maps (eps_{a}, eps_{b}) to something other than eps_{}",
                    a + b
                )));
            }
        }
    }
    Ok(())
}

impl ProbNormed for PNSpace {
    fn norm_df(&self, p: &Vector) -> Result<DistFn> {
        self.check_point(p)?;
        let n = p.norm(self.norm);
        match &self.rule {
            NormRule::SimpleStep => DistFn::unit_step(n),
            NormRule::SquaredNormStep => DistFn::unit_step(n * n),
            NormRule::SerstnevScaled(f0) => {
                if n == 0.0 {
                    Ok(DistFn::eps0())
                } else {
                    f0.scale_abscissa(n)
                }
            }
        }
    }

    fn tau(&self) -> &TriangleFn {
        &self.tau
    }

    fn tau_star(&self) -> &TriangleFn {
        &self.tau_star
    }

    fn zero(&self) -> Vector {
        match self.kind {
            SpaceKind::FiniteDim(n) => Vector::zero_dense(n),
            SpaceKind::C00 => Vector::zero_sparse(),
        }
    }

    fn sample_point(&self, rng: &mut ChaCha8Rng) -> Vector {
        match self.kind {
            SpaceKind::FiniteDim(n) => random_dense(rng, n, -2.0, 2.0),
            SpaceKind::C00 => {
                let support = rng.gen_range(1..=6);
                random_sparse(rng, 12, support, -2.0, 2.0)
            }
        }
    }
}

/// Relative abscissa slack for order comparisons between functions whose
/// breakpoints went through different float paths.
pub(crate) fn order_slack(f: &DistFn, g: &DistFn) -> f64 {
    let scale = f
        .breakpoints()
        .last()
        .copied()
        .unwrap_or(0.0)
        .max(g.breakpoints().last().copied().unwrap_or(0.0));
    1e-9 * (1.0 + scale)
}

/// `F ≤ G` outright, or after the relative abscissa slack.
pub(crate) fn leq_with_rounding(f: &DistFn, g: &DistFn) -> bool {
    min_gap(f, g) >= 0.0 || leq_with_shift(f, g, order_slack(f, g))
}

/// Per-axiom reports for (N1)–(N4), in order. Sampled: `samples` draws
/// of points (and of `α` for N4, whose population always includes 0, 1,
/// and 1/2 to exercise the identity ends).
pub fn check_axioms_detailed(
    space: &dyn ProbNormed,
    samples: usize,
    seed: u64,
) -> Result<Vec<VerificationReport>> {
    if samples == 0 {
        return Err(PnError::Domain("at least one sample required".into()));
    }
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut n1 = WorstCase::new();
    let mut n2 = WorstCase::new();
    let mut n3 = WorstCase::new();
    let mut n4 = WorstCase::new();
    let mut n1_fail = None;
    let mut n2_fail = None;
    let mut n3_fail = None;
    let mut n4_fail = None;

    let nu_zero = space.norm_df(&space.zero())?;
    if !nu_zero.is_eps0() {
        n1_fail = Some(format!("nu at the origin is {nu_zero:?}, not eps_0"));
    }

    for i in 0..samples {
        let p = space.sample_point(&mut rng);
        let q = space.sample_point(&mut rng);
        let alpha: f64 = match i {
            0 => 0.0,
            1 => 1.0,
            2 => 0.5,
            _ => rng.gen_range(0.0..=1.0),
        };

        let nu_p = space.norm_df(&p)?;

        if !p.is_zero() {
            let m = nu_p.sibley_to_eps0().value();
            n1.observe(m, || format!("p = {p}: nu_p sits at distance {m} from eps_0"));
            if m == 0.0 && n1_fail.is_none() {
                n1_fail = Some(format!("nonzero p = {p} has nu_p = eps_0"));
            }
        }

        let nu_neg = space.norm_df(&p.scale(-1.0))?;
        if nu_neg == nu_p {
            n2.observe(0.0, || String::new());
        } else if n2_fail.is_none() {
            n2_fail = Some(format!("nu at -p differs from nu at p for p = {p}"));
        }

        // A comparison that only holds after the rounding shift counts
        // as a zero margin: the violation sits below float resolution
        // (a breakpoint displaced by ulps flips a pointwise gap to −1,
        // which would drown every honest margin in the report).
        let nu_q = space.norm_df(&q)?;
        let nu_pq = space.norm_df(&p.add(&q))?;
        let lower = space.tau().apply(&nu_p, &nu_q);
        let gap = min_gap(&lower, &nu_pq);
        if leq_with_rounding(&lower, &nu_pq) {
            n3.observe(gap.max(0.0), || format!("p = {p}, q = {q}: triangle gap {gap}"));
        } else {
            n3.observe(gap, || format!("p = {p}, q = {q}: triangle gap {gap}"));
            if n3_fail.is_none() {
                n3_fail = Some(format!(
                    "p = {p}, q = {q}: nu off the sum drops {} below tau(nu_p, nu_q)",
                    -gap
                ));
            }
        }

        let nu_ap = space.norm_df(&p.scale(alpha))?;
        let nu_bp = space.norm_df(&p.scale(1.0 - alpha))?;
        let upper = space.tau_star().apply(&nu_ap, &nu_bp);
        let gap = min_gap(&nu_p, &upper);
        if leq_with_rounding(&nu_p, &upper) {
            n4.observe(gap.max(0.0), || {
                format!("p = {p}, alpha = {alpha}: splitting gap {gap}")
            });
        } else {
            n4.observe(gap, || format!("p = {p}, alpha = {alpha}: splitting gap {gap}"));
            if n4_fail.is_none() {
                n4_fail = Some(format!(
                    "p = {p}, alpha = {alpha}: nu_p exceeds tau*(nu_ap, nu_bp) by {}",
                    -gap
                ));
            }
        }
    }

    let finish = |check: &str, worst: WorstCase, fail: Option<String>| match fail {
        Some(witness) => VerificationReport::failing(
            check,
            worst.margin.min(0.0),
            witness,
            samples,
            seed,
        ),
        None => {
            let margin = if worst.margin.is_finite() { worst.margin } else { 0.0 };
            if worst.witness.is_empty() {
                VerificationReport::passing(check, margin, samples, seed)
            } else {
                VerificationReport::passing_with_witness(check, margin, worst.witness, samples, seed)
            }
        }
    };

    Ok(vec![
        finish("n1-identity", n1, n1_fail),
        finish("n2-symmetry", n2, n2_fail),
        finish("n3-triangle", n3, n3_fail),
        finish("n4-splitting", n4, n4_fail),
    ])
}

/// Aggregate of [`check_axioms_detailed`]: worst margin across the four
/// axioms, failing if any axiom failed.
pub fn check_axioms(space: &dyn ProbNormed, samples: usize, seed: u64) -> Result<VerificationReport> {
    let detailed = check_axioms_detailed(space, samples, seed)?;
    let mut worst = f64::INFINITY;
    let mut witness: Option<String> = None;
    let mut failed = false;
    for r in &detailed {
        if r.worst_margin.is_finite() && r.worst_margin < worst {
            worst = r.worst_margin;
        }
        if !r.pass() && !failed {
            failed = true;
            witness = r.witness.clone().map(|w| format!("{}: {w}", r.check));
        }
    }
    let margin = if worst.is_finite() { worst } else { 0.0 };
    Ok(if failed {
        VerificationReport::failing("pn-axioms", margin, witness.unwrap_or_default(), samples, seed)
    } else {
        VerificationReport::passing("pn-axioms", margin, samples, seed)
    })
}

/// Sampled check of the splitting equality `ν_p = τ_M(ν_{αp}, ν_{(1−α)p})`
/// that distinguishes Šerstnev spaces. Both sides are compared up to a
/// 1e-9 structural tolerance; the two sides reach the same breakpoints
/// through different float routes.
pub fn check_serstnev(space: &dyn ProbNormed, samples: usize, seed: u64) -> Result<VerificationReport> {
    if samples == 0 {
        return Err(PnError::Domain("at least one sample required".into()));
    }
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tau_m = TriangleFn::tau_m();
    for i in 0..samples {
        let p = space.sample_point(&mut rng);
        let alpha: f64 = match i {
            0 => 0.0,
            1 => 1.0,
            _ => rng.gen_range(0.0..=1.0),
        };
        let lhs = space.norm_df(&p)?;
        let rhs = tau_m.apply(
            &space.norm_df(&p.scale(alpha))?,
            &space.norm_df(&p.scale(1.0 - alpha))?,
        );
        if !lhs.approx_eq(&rhs, 1e-9) {
            return Ok(VerificationReport::failing(
                "serstnev-splitting",
                -1.0,
                format!("p = {p}, alpha = {alpha}: splitting equality fails"),
                samples,
                seed,
            ));
        }
    }
    Ok(VerificationReport::passing("serstnev-splitting", 0.0, samples, seed))
}

/// Membership of `q` in the strong neighborhood `N_p(t)`:
/// `ν_{q−p}(t) > 1 − t`. Exact evaluation; `t ≤ 0` is out of domain.
pub fn in_strong_neighborhood(
    space: &dyn ProbNormed,
    p: &Vector,
    t: f64,
    q: &Vector,
) -> Result<bool> {
    if !(t.is_finite() && t > 0.0) {
        return Err(PnError::Domain(format!(
            "neighborhood radius must be positive, got {t}"
        )));
    }
    p.check_compatible(q)?;
    let nu = space.norm_df(&q.sub(p))?;
    Ok(nu.eval(t) > 1.0 - t)
}

/// Sampled verification that a linear map is strongly bounded with
/// constant `k`: `ν'_{Tp}(x) ≥ ν_p(x/k)` for every sampled `p`, decided
/// exactly at merged breakpoints (modulo the rounding slack).
pub fn check_strongly_bounded(
    map: &LinearMap,
    k: f64,
    source: &dyn ProbNormed,
    target: &dyn ProbNormed,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    if !(k.is_finite() && k > 0.0) {
        return Err(PnError::Domain(format!("constant must be positive, got {k}")));
    }
    if samples == 0 {
        return Err(PnError::Domain("at least one sample required".into()));
    }
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = WorstCase::new();
    let mut fail: Option<(f64, String)> = None;
    for _ in 0..samples {
        let p = source.sample_point(&mut rng);
        let image = map.apply(&p)?;
        let stretched = source.norm_df(&p)?.scale_abscissa(k.max(f64::MIN_POSITIVE))?;
        let target_nu = target.norm_df(&image)?;
        let gap = min_gap(&stretched, &target_nu);
        if leq_with_rounding(&stretched, &target_nu) {
            // Shift-absorbed rounding counts as a zero margin.
            worst.observe(gap.max(0.0), || format!("p = {p}: bound gap {gap}"));
        } else {
            worst.observe(gap, || format!("p = {p}: bound gap {gap}"));
            if fail.is_none() {
                fail = Some((gap, format!("p = {p}: image norm falls {} below the k-stretched source norm", -gap)));
            }
        }
    }
    Ok(match fail {
        Some((gap, witness)) => {
            VerificationReport::failing("strongly-bounded", gap, witness, samples, seed)
        }
        None => VerificationReport::passing(
            "strongly-bounded",
            if worst.margin.is_finite() { worst.margin } else { 0.0 },
            samples,
            seed,
        ),
    })
}

/// Sampled scalar monotonicity: `|α| ≤ |β|` forces `ν_{βp} ≤ ν_{αp}`.
/// Stretching a point away from the origin can only push its norm
/// distribution down. Exact comparison.
pub fn check_lemma_alpha(space: &dyn ProbNormed, samples: usize, seed: u64) -> Result<VerificationReport> {
    if samples == 0 {
        return Err(PnError::Domain("at least one sample required".into()));
    }
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = WorstCase::new();
    for i in 0..samples {
        let p = space.sample_point(&mut rng);
        let (alpha, beta): (f64, f64) = match i {
            0 => (1.0, 1.0),
            1 => (0.0, rng.gen_range(-3.0..3.0)),
            _ => {
                let a: f64 = rng.gen_range(-3.0..3.0);
                let b: f64 = rng.gen_range(-3.0..3.0);
                if a.abs() <= b.abs() {
                    (a, b)
                } else {
                    (b, a)
                }
            }
        };
        let nu_beta = space.norm_df(&p.scale(beta))?;
        let nu_alpha = space.norm_df(&p.scale(alpha))?;
        let gap = min_gap(&nu_beta, &nu_alpha);
        worst.observe(gap, || {
            format!("p = {p}, alpha = {alpha}, beta = {beta}: order gap {gap}")
        });
    }
    Ok(worst.into_report("scalar-monotonicity", samples, seed))
}
