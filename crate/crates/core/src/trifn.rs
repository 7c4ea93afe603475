//! t-norms, t-conorms, and triangle functions on step distribution
//! functions.
//!
//! Triangle functions are realized as convolutions: the sup-convolution
//! `τ_T(F, G)(x) = sup { T(F(u), G(v)) : u + v = x }` and the dual
//! inf-convolution `τ_{T*}(F, G)(x) = ℓ⁻ inf { T*(F(u), G(v)) : u + v = x }`.
//! For step inputs both extrema are attained near breakpoint pairs, so the
//! convolutions are computed exactly from candidate enumeration, with no
//! grids or quadrature.
//!
//! The structural checks (dominance, Archimedean, sup-continuity) are
//! sampled falsifiers: a failure is a counterexample, a pass is evidence
//! at the recorded sample count, never a proof.

use crate::distfn::{min_gap, DistFn};
use crate::error::{PnError, Result};
use crate::report::{VerificationReport, WorstCase};

/// A t-norm: commutative, associative, nondecreasing binary operation on
/// `[0, 1]` with identity 1.
#[derive(Debug, Clone, PartialEq)]
pub enum TNorm {
    /// `M(a, b) = min(a, b)`, the strongest t-norm.
    Minimum,
    /// `Π(a, b) = a b`.
    Product,
    /// `W(a, b) = max(a + b − 1, 0)`.
    Lukasiewicz,
    /// A grid-sampled table with bilinear interpolation. The t-norm laws
    /// are validated on the grid at construction; associativity is only
    /// spot-checked, so a custom kind is evidence-quality, not exact.
    Custom(CustomTNorm),
}

impl TNorm {
    /// Evaluates the t-norm, rejecting out-of-range inputs.
    pub fn eval(&self, a: f64, b: f64) -> Result<f64> {
        if !((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b)) {
            return Err(PnError::Domain(format!(
                "t-norm arguments must lie in [0, 1], got ({a}, {b})"
            )));
        }
        Ok(self.apply(a, b))
    }

    /// Evaluates the dual t-conorm `T*(a, b) = 1 − T(1 − a, 1 − b)`,
    /// rejecting out-of-range inputs.
    pub fn conorm_eval(&self, a: f64, b: f64) -> Result<f64> {
        if !((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b)) {
            return Err(PnError::Domain(format!(
                "t-conorm arguments must lie in [0, 1], got ({a}, {b})"
            )));
        }
        Ok(self.conorm(a, b))
    }

    /// Unchecked evaluation for arguments already known to be in range.
    ///
    /// The identity and annihilator laws are short-circuited before any
    /// arithmetic so that `T(v, 1) = v` and `T(v, 0) = 0` hold bitwise;
    /// the exactness of `τ(F, ε_0) = F` rests on this.
    pub(crate) fn apply(&self, a: f64, b: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
        if a == 0.0 || b == 0.0 {
            return 0.0;
        }
        if a == 1.0 {
            return b;
        }
        if b == 1.0 {
            return a;
        }
        match self {
            TNorm::Minimum => a.min(b),
            TNorm::Product => a * b,
            TNorm::Lukasiewicz => (a - (1.0 - b)).max(0.0),
            TNorm::Custom(t) => t.interpolate(a, b),
        }
    }

    /// The dual t-conorm, with the mirror short-circuits making
    /// `S(v, 0) = v` bitwise.
    pub(crate) fn conorm(&self, a: f64, b: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
        if a == 1.0 || b == 1.0 {
            return 1.0;
        }
        if a == 0.0 {
            return b;
        }
        if b == 0.0 {
            return a;
        }
        match self {
            // closed forms avoid the 1 − T(1 − a, 1 − b) rounding detour
            TNorm::Minimum => a.max(b),
            TNorm::Product => 1.0 - (1.0 - a) * (1.0 - b),
            TNorm::Lukasiewicz => (a + b).min(1.0),
            TNorm::Custom(t) => 1.0 - t.interpolate(1.0 - a, 1.0 - b),
        }
    }
}

/// A t-norm given by values on a finite grid, extended by bilinear
/// interpolation within grid cells.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomTNorm {
    grid: Vec<f64>,
    /// `table[i][j] = T(grid[i], grid[j])`
    table: Vec<Vec<f64>>,
}

impl CustomTNorm {
    /// Validates the t-norm laws on the grid and builds the table.
    ///
    /// Commutativity, monotonicity, and the boundary laws are checked
    /// exactly at every grid point. Associativity of the interpolated
    /// operation is spot-checked on grid points and cell midpoints to
    /// within 1e-9; tables whose interpolation breaks associativity
    /// (most piecewise-linear t-norms sampled coarsely do) are rejected.
    pub fn new(grid: Vec<f64>, table: Vec<Vec<f64>>) -> Result<Self> {
        let n = grid.len();
        if n < 2 {
            return Err(PnError::InvalidTNormTable(
                "grid needs at least the two endpoints 0 and 1".into(),
            ));
        }
        for &g in &grid {
            if !(0.0..=1.0).contains(&g) {
                return Err(PnError::InvalidTNormTable(format!(
                    "grid coordinate {g} outside [0, 1]"
                )));
            }
        }
        if grid[0] != 0.0 || grid[n - 1] != 1.0 {
            return Err(PnError::InvalidTNormTable(
                "grid must start at 0 and end at 1".into(),
            ));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(PnError::InvalidTNormTable(
                "grid coordinates must be strictly increasing".into(),
            ));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(PnError::InvalidTNormTable(format!(
                "table must be {n}x{n} to match the grid"
            )));
        }
        for (i, row) in table.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&v) {
                    return Err(PnError::InvalidTNormTable(format!(
                        "T({}, {}) = {v} outside [0, 1]",
                        grid[i], grid[j]
                    )));
                }
                if table[j][i] != v {
                    return Err(PnError::InvalidTNormTable(format!(
                        "not commutative at ({}, {}): {} vs {}",
                        grid[i], grid[j], v, table[j][i]
                    )));
                }
            }
        }
        for i in 0..n {
            if table[i][n - 1] != grid[i] {
                return Err(PnError::InvalidTNormTable(format!(
                    "identity fails: T({}, 1) = {}",
                    grid[i], table[i][n - 1]
                )));
            }
            if table[i][0] != 0.0 {
                return Err(PnError::InvalidTNormTable(format!(
                    "annihilator fails: T({}, 0) = {}",
                    grid[i], table[i][0]
                )));
            }
        }
        for i in 0..n {
            for j in 1..n {
                if table[i][j] < table[i][j - 1] {
                    return Err(PnError::InvalidTNormTable(format!(
                        "not monotone: T({}, {}) < T({}, {})",
                        grid[i], grid[j], grid[i], grid[j - 1]
                    )));
                }
            }
        }

        let t = Self { grid, table };
        t.spot_check_associativity()?;
        Ok(t)
    }

    /// Associativity sample set: grid values plus cell midpoints, thinned
    /// to keep the triple count bounded. Midpoints matter; pure grid
    /// triples collapse through the identity and annihilator rows and
    /// would accept tables whose interpolation is badly nonassociative.
    fn spot_check_associativity(&self) -> Result<()> {
        let mut samples: Vec<f64> = self.grid.clone();
        for w in self.grid.windows(2) {
            samples.push(0.5 * (w[0] + w[1]));
        }
        samples.sort_by(f64::total_cmp);
        let stride = samples.len().div_ceil(15).max(1);
        let thinned: Vec<f64> = samples.iter().copied().step_by(stride).collect();
        for &a in &thinned {
            for &b in &thinned {
                for &c in &thinned {
                    let left = self.interpolate(self.interpolate(a, b), c);
                    let right = self.interpolate(a, self.interpolate(b, c));
                    if (left - right).abs() > 1e-9 {
                        return Err(PnError::InvalidTNormTable(format!(
                            "interpolated table is not associative: \
                             T(T({a}, {b}), {c}) = {left} but T({a}, T({b}, {c})) = {right}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn interpolate(&self, a: f64, b: f64) -> f64 {
        let a = a.clamp(0.0, 1.0);
        let b = b.clamp(0.0, 1.0);
        if a == 0.0 || b == 0.0 {
            return 0.0;
        }
        if a == 1.0 {
            return b;
        }
        if b == 1.0 {
            return a;
        }
        let i = self.grid.partition_point(|&g| g <= a) - 1;
        let j = self.grid.partition_point(|&g| g <= b) - 1;
        // a, b < 1 so both cells have a right neighbor
        let (a0, a1) = (self.grid[i], self.grid[i + 1]);
        let (b0, b1) = (self.grid[j], self.grid[j + 1]);
        let s = (a - a0) / (a1 - a0);
        let t = (b - b0) / (b1 - b0);
        let v = self.table[i][j] * (1.0 - s) * (1.0 - t)
            + self.table[i + 1][j] * s * (1.0 - t)
            + self.table[i][j + 1] * (1.0 - s) * t
            + self.table[i + 1][j + 1] * s * t;
        v.clamp(0.0, 1.0)
    }

    /// Parses the `TN v1` text format: a `TN v1` header followed by lines
    /// `a b v`, one per grid pair. Every pair over the grid (the sorted
    /// set of first coordinates) must be present exactly once. Errors
    /// carry 1-based line numbers.
    pub fn parse_tn(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header.trim() == "TN v1" => {}
            Some((_, header)) => {
                return Err(PnError::Parse {
                    line: 1,
                    msg: format!("expected header 'TN v1', got '{}'", header.trim()),
                })
            }
            None => {
                return Err(PnError::Parse {
                    line: 1,
                    msg: "empty input".into(),
                })
            }
        }
        let mut entries: Vec<(f64, f64, f64)> = Vec::new();
        for (idx, raw) in lines {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(PnError::Parse {
                    line: line_no,
                    msg: format!("expected 'a b v', got '{line}'"),
                });
            }
            let mut vals = [0.0_f64; 3];
            for (slot, tok) in vals.iter_mut().zip(&toks) {
                *slot = tok.parse().map_err(|_| PnError::Parse {
                    line: line_no,
                    msg: format!("bad number '{tok}'"),
                })?;
            }
            entries.push((vals[0], vals[1], vals[2]));
        }
        let mut grid: Vec<f64> = entries.iter().map(|e| e.0).collect();
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let n = grid.len();
        if entries.len() != n * n {
            return Err(PnError::InvalidTNormTable(format!(
                "grid has {n} coordinates, so {} entries are required, got {}",
                n * n,
                entries.len()
            )));
        }
        let index = |x: f64| grid.iter().position(|&g| g == x);
        let mut table = vec![vec![f64::NAN; n]; n];
        for (a, b, v) in entries {
            let (Some(i), Some(j)) = (index(a), index(b)) else {
                return Err(PnError::InvalidTNormTable(format!(
                    "coordinate ({a}, {b}) is off the grid implied by the first column"
                )));
            };
            if !table[i][j].is_nan() {
                return Err(PnError::InvalidTNormTable(format!(
                    "duplicate entry for ({a}, {b})"
                )));
            }
            table[i][j] = v;
        }
        // completeness: n*n entries, none duplicated, all on-grid
        Self::new(grid, table)
    }
}

/// A triangle function on step distribution functions: a sup-convolution
/// `τ_T` or the dual inf-convolution `τ_{T*}`. Both are commutative,
/// nondecreasing in each argument, and have `ε_0` as identity exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum TriangleFn {
    /// `τ_T`, the `T`-sup-convolution.
    SupConv(TNorm),
    /// `τ_{T*}`, the inf-convolution under the conorm dual to `T`.
    InfConvDual(TNorm),
}

impl TriangleFn {
    /// `τ_M`, the minimum-t-norm sup-convolution.
    pub fn tau_m() -> Self {
        TriangleFn::SupConv(TNorm::Minimum)
    }

    /// `τ_{M*}`, the maximal triangle function among the duals used here.
    pub fn tau_m_star() -> Self {
        TriangleFn::InfConvDual(TNorm::Minimum)
    }

    pub fn apply(&self, f: &DistFn, g: &DistFn) -> DistFn {
        match self {
            TriangleFn::SupConv(t) => tau_t_conv(t, f, g),
            TriangleFn::InfConvDual(t) => tau_tstar_conv(t, f, g),
        }
    }
}

/// Exact sup-convolution `τ_T(F, G)`.
///
/// For left-continuous steps, `sup { T(F(u), G(v)) : u + v = x }` equals
/// the max of `T` over right-limit plateau pairs whose breakpoint sum
/// lies strictly below `x`, so the result jumps only at pairwise sums and
/// each plateau is a running max over sorted sums.
pub fn tau_t_conv(t: &TNorm, f: &DistFn, g: &DistFn) -> DistFn {
    if f.is_eps_inf() || g.is_eps_inf() {
        return DistFn::eps_inf();
    }
    let mut events: Vec<(f64, f64)> =
        Vec::with_capacity(f.breakpoints().len() * g.breakpoints().len());
    for (&a, &va) in f.breakpoints().iter().zip(f.plateaus()) {
        for (&b, &vb) in g.breakpoints().iter().zip(g.plateaus()) {
            events.push((a + b, t.apply(va, vb)));
        }
    }
    events.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut points: Vec<(f64, f64)> = Vec::new();
    let mut level = 0.0_f64;
    for (s, v) in events {
        if v > level {
            level = v;
            match points.last_mut() {
                Some(last) if last.0 == s => last.1 = level,
                _ => points.push((s, level)),
            }
        }
    }
    DistFn::canonicalize(points)
}

/// Exact inf-convolution `τ_{T*}(F, G)` with its left-continuous
/// regularization.
///
/// With `S = T*`, the inner `inf { S(F(u), G(x − u)) : u }` is attained
/// at a breakpoint of `F` or at `x` minus a breakpoint of `G`, evaluated
/// with left values: stepping `u` down to the nearest such point can only
/// lower `S(F(u), G(x − u))`. The resulting function of `x` is constant
/// between consecutive pairwise breakpoint sums and left-continuous, so
/// evaluating at each sum recovers the canonical step form directly.
pub fn tau_tstar_conv(t: &TNorm, f: &DistFn, g: &DistFn) -> DistFn {
    if f.is_eps_inf() || g.is_eps_inf() {
        return DistFn::eps_inf();
    }
    let mut sums: Vec<f64> = Vec::with_capacity(f.breakpoints().len() * g.breakpoints().len());
    for &a in f.breakpoints() {
        for &b in g.breakpoints() {
            sums.push(a + b);
        }
    }
    sums.sort_by(f64::total_cmp);
    sums.dedup();

    let inner_inf = |x: f64| -> f64 {
        let mut best = 1.0_f64;
        for &a in f.breakpoints() {
            best = best.min(t.conorm(f.eval(a), g.eval(x - a)));
        }
        for &b in g.breakpoints() {
            best = best.min(t.conorm(f.eval(x - b), g.eval(b)));
        }
        best
    };

    let mut points: Vec<(f64, f64)> = Vec::with_capacity(sums.len());
    for k in 1..sums.len() {
        // value on (sums[k-1], sums[k]] is the left-continuous value at sums[k]
        points.push((sums[k - 1], inner_inf(sums[k])));
    }
    let last = *sums.last().unwrap();
    let beyond = if last + 1.0 > last { last + 1.0 } else { last.next_up() };
    points.push((last, inner_inf(beyond)));
    DistFn::canonicalize(points)
}

/// The left-fold iterate `τ^n(F_1, …, F_{n+1})`. The list length must be
/// exactly `n + 1`.
pub fn tau_iterate(tau: &TriangleFn, fs: &[DistFn], n: usize) -> Result<DistFn> {
    if fs.len() != n + 1 {
        return Err(PnError::Domain(format!(
            "iterate of order {n} needs {} arguments, got {}",
            n + 1,
            fs.len()
        )));
    }
    let mut acc = fs[0].clone();
    for f in &fs[1..] {
        acc = tau.apply(&acc, f);
    }
    Ok(acc)
}

/// Sampled dominance check `τ_1 ≫ τ_2`: for each quadruple,
/// `τ_1(τ_2(F_1, G_1), τ_2(F_2, G_2)) ≥ τ_2(τ_1(F_1, F_2), τ_1(G_1, G_2))`
/// pointwise, decided exactly on merged breakpoints. One failing
/// quadruple falsifies dominance; an all-pass is sampled evidence only.
pub fn check_dominates(
    tau1: &TriangleFn,
    tau2: &TriangleFn,
    quadruples: &[(DistFn, DistFn, DistFn, DistFn)],
    seed: u64,
) -> VerificationReport {
    let mut worst = WorstCase::new();
    for (idx, (f1, g1, f2, g2)) in quadruples.iter().enumerate() {
        let lhs = tau1.apply(&tau2.apply(f1, g1), &tau2.apply(f2, g2));
        let rhs = tau2.apply(&tau1.apply(f1, f2), &tau1.apply(g1, g2));
        let gap = min_gap(&rhs, &lhs);
        worst.observe(gap, || format!("quadruple #{idx}: interchange gap {gap}"));
    }
    worst.into_report("dominance", quadruples.len(), seed)
}

/// Sampled Archimedean check: `τ(F, G) ≤ F` with strict inequality
/// somewhere, per pair. Pairs with `F = ε_∞` or `G = ε_0` are rejected;
/// the identity makes equality unavoidable there.
pub fn check_archimedean(
    tau: &TriangleFn,
    pairs: &[(DistFn, DistFn)],
    seed: u64,
) -> VerificationReport {
    for (idx, (f, g)) in pairs.iter().enumerate() {
        if f.is_eps_inf() || g.is_eps0() {
            return VerificationReport::failing(
                "archimedean",
                0.0,
                format!("pair #{idx} violates the precondition (F = eps_inf or G = eps_0)"),
                pairs.len(),
                seed,
            );
        }
    }
    let mut worst = WorstCase::new();
    for (idx, (f, g)) in pairs.iter().enumerate() {
        let conv = tau.apply(f, g);
        let order = min_gap(&conv, f);
        if order < 0.0 {
            worst.observe(order, || {
                format!("pair #{idx}: convolution exceeds F by {}", -order)
            });
            continue;
        }
        // strictness: the largest pointwise drop below F must be positive
        let strict = -min_gap(f, &conv);
        worst.observe(strict, || {
            format!("pair #{idx}: convolution equals F everywhere (no strict drop)")
        });
    }
    // a zero margin means equality somewhere, which already refutes
    // strictness, so the pass threshold is strict positivity
    if worst.margin > 0.0 && worst.margin.is_finite() {
        VerificationReport::passing("archimedean", worst.margin, pairs.len(), seed)
    } else if worst.margin == f64::INFINITY {
        VerificationReport::passing("archimedean", 0.0, pairs.len(), seed)
    } else {
        VerificationReport::failing("archimedean", worst.margin, worst.witness, pairs.len(), seed)
    }
}

/// Sup-continuity check for a finite family: compares
/// `sup_λ τ(F_λ, G)` against `τ(sup_λ F_λ, G)` structurally. Exact for
/// step inputs; sup-convolutions satisfy it identically, inf-convolutions
/// need not, and a mismatch is reported with the largest pointwise gap.
pub fn check_sup_continuity(
    tau: &TriangleFn,
    family: &[DistFn],
    g: &DistFn,
    seed: u64,
) -> Result<VerificationReport> {
    if family.is_empty() {
        return Err(PnError::Domain("sup-continuity needs a nonempty family".into()));
    }
    let convs: Vec<DistFn> = family.iter().map(|f| tau.apply(f, g)).collect();
    let sup_of_convs = DistFn::pointwise_sup(&convs);
    let conv_of_sup = tau.apply(&DistFn::pointwise_sup(family), g);
    if sup_of_convs == conv_of_sup {
        return Ok(VerificationReport::passing(
            "sup-continuity",
            0.0,
            family.len(),
            seed,
        ));
    }
    let gap = min_gap(&sup_of_convs, &conv_of_sup).min(min_gap(&conv_of_sup, &sup_of_convs));
    Ok(VerificationReport::failing(
        "sup-continuity",
        gap,
        format!(
            "sup of convolutions differs from convolution of sup; \
             largest pointwise gap {}",
            -gap
        ),
        family.len(),
        seed,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distfn::sibley;

    fn eps(a: f64) -> DistFn {
        DistFn::unit_step(a).unwrap()
    }

    #[test]
    fn tnorm_values_match_closed_forms() {
        assert_eq!(TNorm::Minimum.eval(0.4, 1.0).unwrap(), 0.4);
        assert_eq!(TNorm::Minimum.eval(0.3, 0.7).unwrap(), 0.3);
        assert!((TNorm::Lukasiewicz.eval(0.6, 0.7).unwrap() - 0.3).abs() < 1e-12);
        assert_eq!(TNorm::Lukasiewicz.eval(0.3, 0.6).unwrap(), 0.0);
        assert_eq!(TNorm::Product.eval(0.5, 0.5).unwrap(), 0.25);
        assert!(TNorm::Minimum.eval(1.2, 0.5).is_err());
        assert!(TNorm::Product.eval(0.5, -0.1).is_err());
    }

    #[test]
    fn conorm_values_and_duality() {
        assert_eq!(TNorm::Minimum.conorm_eval(0.3, 0.7).unwrap(), 0.7);
        assert_eq!(TNorm::Product.conorm_eval(0.5, 0.5).unwrap(), 0.75);
        assert_eq!(TNorm::Lukasiewicz.conorm_eval(0.6, 0.7).unwrap(), 1.0);
        for t in [TNorm::Minimum, TNorm::Product, TNorm::Lukasiewicz] {
            for a in [0.0, 0.2, 0.5, 0.9, 1.0] {
                // conorm identity at 0, bitwise
                assert_eq!(t.conorm(a, 0.0), a);
                // T** = T
                for b in [0.0, 0.3, 0.6, 1.0] {
                    let double_dual = 1.0 - t.conorm(1.0 - a, 1.0 - b);
                    assert!((double_dual - t.apply(a, b)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn identity_shortcuts_are_bitwise() {
        for t in [TNorm::Minimum, TNorm::Product, TNorm::Lukasiewicz] {
            for v in [0.1, 0.3000000000000000444, 0.7, 0.9999999] {
                assert_eq!(t.apply(v, 1.0), v);
                assert_eq!(t.apply(1.0, v), v);
                assert_eq!(t.apply(v, 0.0), 0.0);
                assert_eq!(t.conorm(v, 0.0), v);
                assert_eq!(t.conorm(0.0, v), v);
            }
        }
    }

    #[test]
    fn sup_convolution_of_unit_steps_adds_positions() {
        let out = tau_t_conv(&TNorm::Minimum, &eps(2.0), &eps(3.0));
        assert_eq!(out, eps(5.0));
        for t in [TNorm::Product, TNorm::Lukasiewicz] {
            assert_eq!(tau_t_conv(&t, &eps(0.25), &eps(4.5)), eps(4.75));
        }
    }

    #[test]
    fn convolutions_fix_the_identity_bitwise() {
        let f = DistFn::new(vec![(0.3, 0.1), (1.7, 0.65), (2.2, 1.0)]).unwrap();
        for t in [TNorm::Minimum, TNorm::Product, TNorm::Lukasiewicz] {
            assert_eq!(tau_t_conv(&t, &f, &DistFn::eps0()), f);
            assert_eq!(tau_t_conv(&t, &DistFn::eps0(), &f), f);
            assert_eq!(tau_tstar_conv(&t, &f, &DistFn::eps0()), f);
            assert_eq!(tau_tstar_conv(&t, &DistFn::eps0(), &f), f);
        }
    }

    #[test]
    fn convolutions_absorb_eps_inf() {
        let f = DistFn::new(vec![(0.5, 0.5), (1.0, 1.0)]).unwrap();
        assert!(tau_t_conv(&TNorm::Minimum, &f, &DistFn::eps_inf()).is_eps_inf());
        assert!(tau_tstar_conv(&TNorm::Minimum, &DistFn::eps_inf(), &f).is_eps_inf());
    }

    #[test]
    fn dual_inf_convolution_of_unit_steps() {
        assert_eq!(tau_tstar_conv(&TNorm::Minimum, &eps(2.0), &eps(3.0)), eps(5.0));
        assert_eq!(
            tau_tstar_conv(&TNorm::Minimum, &DistFn::eps0(), &DistFn::eps0()),
            DistFn::eps0()
        );
    }

    #[test]
    fn inf_convolution_dominates_sup_convolution() {
        let f = DistFn::new(vec![(0.4, 0.3), (1.0, 0.8), (2.5, 1.0)]).unwrap();
        let g = DistFn::new(vec![(0.1, 0.55), (3.0, 1.0)]).unwrap();
        for t in [TNorm::Minimum, TNorm::Product, TNorm::Lukasiewicz] {
            let lo = tau_t_conv(&t, &f, &g);
            let hi = tau_tstar_conv(&t, &f, &g);
            assert!(lo.leq(&hi), "tau <= tau* fails for {t:?}");
        }
    }

    #[test]
    fn convolutions_commute_structurally() {
        let f = DistFn::new(vec![(0.4, 0.3), (1.0, 0.8), (2.5, 1.0)]).unwrap();
        let g = DistFn::new(vec![(0.1, 0.55), (0.75, 0.6), (3.0, 1.0)]).unwrap();
        for t in [TNorm::Minimum, TNorm::Product, TNorm::Lukasiewicz] {
            assert_eq!(tau_t_conv(&t, &f, &g), tau_t_conv(&t, &g, &f));
            assert_eq!(tau_tstar_conv(&t, &f, &g), tau_tstar_conv(&t, &g, &f));
        }
    }

    #[test]
    fn iterate_folds_left_and_checks_arity() {
        let tau = TriangleFn::tau_m();
        let out = tau_iterate(&tau, &[eps(1.0), eps(1.0), eps(1.0)], 2).unwrap();
        assert_eq!(out, eps(3.0));
        let ident = tau_iterate(&tau, &[eps(2.0), DistFn::eps0()], 1).unwrap();
        assert_eq!(ident, eps(2.0));
        let all_eps0 = tau_iterate(
            &tau,
            &vec![DistFn::eps0(); 5],
            4,
        )
        .unwrap();
        assert!(all_eps0.is_eps0());
        assert!(tau_iterate(&tau, &[eps(1.0)], 2).is_err());
    }

    #[test]
    fn minimum_sup_convolution_dominates_itself() {
        let tau = TriangleFn::tau_m();
        // dyadic breakpoints keep all pairwise sums exact in both
        // association orders, so the comparison is genuinely exact
        let quadruples: Vec<_> = (0..32)
            .map(|k| {
                let base = |m: u32| {
                    let first = 0.25 * f64::from((k + m) % 7 + 1);
                    DistFn::new(vec![
                        (first, 0.5),
                        (first + 0.5 * f64::from((k * m) % 5 + 2), 1.0),
                    ])
                    .unwrap()
                };
                (base(1), base(2), base(3), base(4))
            })
            .collect();
        let report = check_dominates(&tau, &tau, &quadruples, 7);
        assert!(report.pass(), "{report:?}");
        assert!(report.worst_margin >= 0.0);
    }

    #[test]
    fn dual_min_dominates_min_on_adversarial_samples() {
        let tau_star = TriangleFn::tau_m_star();
        let tau = TriangleFn::tau_m();
        let mut quadruples = vec![(eps(1.0), eps(2.0), eps(0.5), eps(4.0))];
        for k in 1..=40_u32 {
            let mk = |seed: u32| {
                let s = f64::from(seed % 9 + 1) * 0.125;
                DistFn::new(vec![
                    (s, 0.0625 * f64::from(seed % 13 + 1)),
                    (s + 0.75, 1.0),
                ])
                .unwrap()
            };
            quadruples.push((mk(k), mk(3 * k + 1), mk(5 * k + 2), mk(7 * k + 3)));
        }
        let report = check_dominates(&tau_star, &tau, &quadruples, 11);
        assert!(report.pass(), "{report:?}");
    }

    #[test]
    fn archimedean_on_shifted_steps_and_its_counterexample() {
        let tau = TriangleFn::tau_m();
        let pairs = vec![(eps(1.0), eps(1.0)), (eps(0.3), eps(0.01))];
        let report = check_archimedean(&tau, &pairs, 3);
        assert!(report.pass(), "{report:?}");

        // tau_M is not Archimedean: if G jumps at 0 to a plateau that caps
        // nothing in F, the convolution reproduces F exactly
        let f = DistFn::new(vec![(1.0, 0.3)]).unwrap();
        let g = DistFn::new(vec![(0.0, 0.5)]).unwrap();
        assert!(!g.is_eps0());
        let report = check_archimedean(&tau, &[(f.clone(), g)], 3);
        assert!(!report.pass());

        let bad_pair = vec![(eps(1.0), DistFn::eps0())];
        assert!(!check_archimedean(&tau, &bad_pair, 3).pass());
    }

    #[test]
    fn sup_continuity_for_min_convolution() {
        let tau = TriangleFn::tau_m();
        let family = vec![eps(1.0), eps(2.0)];
        let report = check_sup_continuity(&tau, &family, &eps(1.0), 0).unwrap();
        assert!(report.pass());

        let chain: Vec<DistFn> = (1..=12).map(|k| eps(1.0 / f64::from(k))).collect();
        let g = DistFn::new(vec![(0.5, 0.4), (1.5, 1.0)]).unwrap();
        let report = check_sup_continuity(&tau, &chain, &g, 0).unwrap();
        assert!(report.pass());

        assert!(check_sup_continuity(&tau, &[], &g, 0).is_err());
    }

    #[test]
    fn product_table_interpolates_exactly() {
        let grid = vec![0.0, 0.25, 0.5, 0.75, 1.0];
        let table: Vec<Vec<f64>> = grid
            .iter()
            .map(|&a| grid.iter().map(|&b| a * b).collect())
            .collect();
        let custom = TNorm::Custom(CustomTNorm::new(grid, table).unwrap());
        // the product is globally bilinear, so interpolation reproduces it
        for (a, b) in [(0.3, 0.9), (0.1, 0.1), (0.624, 0.87)] {
            assert!((custom.apply(a, b) - a * b).abs() < 1e-12);
        }
        assert_eq!(tau_t_conv(&custom, &eps(1.5), &eps(2.5)), eps(4.0));
    }

    #[test]
    fn coarse_lukasiewicz_table_fails_the_associativity_spot_check() {
        let grid = vec![0.0, 0.5, 1.0];
        let w = |a: f64, b: f64| (a + b - 1.0).max(0.0);
        let table: Vec<Vec<f64>> = grid
            .iter()
            .map(|&a| grid.iter().map(|&b| w(a, b)).collect())
            .collect();
        match CustomTNorm::new(grid, table) {
            Err(PnError::InvalidTNormTable(msg)) => {
                assert!(msg.contains("associative"), "{msg}");
            }
            other => panic!("expected associativity rejection, got {other:?}"),
        }
    }

    #[test]
    fn table_validation_rejects_broken_laws() {
        let grid = vec![0.0, 0.5, 1.0];
        let mk = |f: &dyn Fn(f64, f64) -> f64| -> Vec<Vec<f64>> {
            grid.iter()
                .map(|&a| grid.iter().map(|&b| f(a, b)).collect())
                .collect()
        };
        // identity broken
        let t = mk(&|a, b| 0.5 * a * b);
        assert!(matches!(
            CustomTNorm::new(grid.clone(), t),
            Err(PnError::InvalidTNormTable(_))
        ));
        // commutativity broken
        let mut t = mk(&|a, b| a * b);
        t[1][2] = 0.4;
        assert!(matches!(
            CustomTNorm::new(grid.clone(), t),
            Err(PnError::InvalidTNormTable(_))
        ));
        // monotonicity broken (and kept symmetric to get past that check)
        let mut t = mk(&|a, b| a * b);
        t[1][1] = 0.6;
        assert!(matches!(
            CustomTNorm::new(grid.clone(), t),
            Err(PnError::InvalidTNormTable(_))
        ));
        // range broken
        let mut t = mk(&|a, b| a * b);
        t[1][1] = 1.5;
        assert!(matches!(
            CustomTNorm::new(grid.clone(), t),
            Err(PnError::InvalidTNormTable(_))
        ));
    }

    #[test]
    fn min_table_is_an_ordinal_sum_and_passes() {
        // bilinear interpolation of min on a grid is an ordinal sum of
        // product-isomorphic blocks, hence genuinely associative
        let grid = vec![0.0_f64, 0.5, 1.0];
        let table: Vec<Vec<f64>> = grid
            .iter()
            .map(|&a| grid.iter().map(|&b| a.min(b)).collect())
            .collect();
        let t = CustomTNorm::new(grid, table).unwrap();
        assert_eq!(t.interpolate(0.3, 0.9), 0.3);
        assert!((t.interpolate(0.75, 0.75) - 0.625).abs() < 1e-12);
    }

    #[test]
    fn tn_format_round_trip_and_errors() {
        let mut text = String::from("TN v1\n");
        for a in [0.0, 0.5, 1.0] {
            for b in [0.0_f64, 0.5, 1.0] {
                text.push_str(&format!("{a} {b} {}\n", a * b));
            }
        }
        let t = CustomTNorm::parse_tn(&text).unwrap();
        assert_eq!(t.interpolate(0.5, 0.5), 0.25);

        assert!(matches!(
            CustomTNorm::parse_tn("DF v1\n"),
            Err(PnError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            CustomTNorm::parse_tn("TN v1\n0 0 bad\n"),
            Err(PnError::Parse { line: 2, .. })
        ));
        // missing entries
        assert!(CustomTNorm::parse_tn("TN v1\n0 0 0\n0 1 0\n1 0 0\n").is_err());
        // duplicate entry
        let dup = "TN v1\n0 0 0\n0 0 0\n0 1 0\n1 0 0\n1 1 1\n";
        assert!(CustomTNorm::parse_tn(dup).is_err());
    }

    #[test]
    fn convolution_monotonicity_in_each_argument() {
        let f_lo = DistFn::new(vec![(0.5, 0.25), (2.0, 1.0)]).unwrap();
        let f_hi = DistFn::new(vec![(0.25, 0.5), (1.5, 1.0)]).unwrap();
        assert!(f_lo.leq(&f_hi));
        let g = DistFn::new(vec![(0.75, 0.5), (1.25, 1.0)]).unwrap();
        for tau in [TriangleFn::tau_m(), TriangleFn::tau_m_star(),
                    TriangleFn::SupConv(TNorm::Product)] {
            assert!(tau.apply(&f_lo, &g).leq(&tau.apply(&f_hi, &g)));
        }
    }

    #[test]
    fn sibley_distance_shrinks_under_identical_convolution() {
        // continuity evidence: convolving both arguments with the same G
        // does not expand the Sibley distance for tau_M on these samples
        let f1 = DistFn::new(vec![(0.5, 0.5), (1.0, 1.0)]).unwrap();
        let f2 = DistFn::new(vec![(0.6, 0.5), (1.1, 1.0)]).unwrap();
        let g = DistFn::new(vec![(0.2, 0.7), (0.9, 1.0)]).unwrap();
        let tau = TriangleFn::tau_m();
        let before = sibley(&f1, &f2, 1e-9).unwrap().value();
        let after = sibley(&tau.apply(&f1, &g), &tau.apply(&f2, &g), 1e-9)
            .unwrap()
            .value();
        assert!(after <= before + 1e-9);
    }
}
