//! Shared strategies and definition-level oracles for the integration
//! tests. The oracles compute their values straight from the metric and
//! convolution definitions (dense grid scans, brute force) and never
//! call the solvers they are used to judge.

// Each test binary compiles its own copy and uses a different subset.
#![allow(dead_code)]

use pnspace_core::distfn::DistFn;
use pnspace_core::trifn::TNorm;
use pnspace_core::vector::Vector;
use proptest::prelude::*;

/// Random canonical step functions in `D+`: cumulative abscissa gaps
/// keep breakpoints strictly increasing, normalized cumulative weights
/// keep plateaus strictly increasing with the last equal to 1.
pub fn arb_distfn() -> impl Strategy<Value = DistFn> {
    prop::collection::vec((1e-3..4.0f64, 1e-3..1.0f64), 1..6).prop_map(|pairs| {
        let total: f64 = pairs.iter().map(|(_, w)| w).sum();
        let mut x = 0.0;
        let mut acc = 0.0;
        let points = pairs
            .iter()
            .map(|(dx, w)| {
                x += dx;
                acc += w;
                (x, (acc / total).min(1.0))
            })
            .collect();
        DistFn::new(points).expect("generated points are canonical")
    })
}

/// Random dense vectors at desk scale.
pub fn arb_dense(dim: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(-5.0..5.0f64, dim)
        .prop_map(|coords| Vector::dense(coords).expect("finite coordinates"))
}

/// Smallest grid value `h ∈ {step, 2·step, …}` at which the symmetric
/// distance condition `G(x) ≤ F(x+h)+h` and `F(x) ≤ G(x+h)+h` holds on
/// the window `(−1/h, 1/h)`, or 0 for equal inputs, or 1 once the scan
/// reaches the metric's ceiling. Overshoots the true distance by at
/// most `step`.
pub fn sibley_grid_oracle(f: &DistFn, g: &DistFn, step: f64) -> f64 {
    if f == g {
        return 0.0;
    }
    let mut h = 0.0;
    loop {
        h += step;
        if h >= 1.0 {
            return 1.0;
        }
        if shifted_dominates(f, g, h) && shifted_dominates(g, f, h) {
            return h;
        }
    }
}

/// `G(x) ≤ F(x+h) + h` for all `x` in the open window `(−1/h, 1/h)`.
/// Both sides are left-continuous steps, so values and right limits at
/// the segment endpoints inside the window cover all of it; the extra
/// right limit at the window's left edge covers a windowful of segment.
fn shifted_dominates(f: &DistFn, g: &DistFn, h: f64) -> bool {
    let w = 1.0 / h;
    let mut xs: Vec<f64> = g.breakpoints().to_vec();
    xs.extend(f.breakpoints().iter().map(|b| b - h));
    xs.retain(|&x| x.abs() < w);
    for &x in &xs {
        if g.eval(x) > f.eval(x + h) + h + 1e-12 {
            return false;
        }
    }
    xs.push(-w);
    xs.into_iter()
        .all(|x| g.right_limit(x) <= f.right_limit(x + h) + h + 1e-12)
}

/// Brute-force lower bound for the sup-convolution:
/// `max_u T(F(u), G(x−u))` over the `u`-grid `{0, step, …, x}`. The
/// matching upper bound is the same scan at `x + step`, by
/// monotonicity of `F` and `G`.
pub fn sup_conv_grid(t: &TNorm, f: &DistFn, g: &DistFn, x: f64, step: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    let mut best = 0.0f64;
    let mut u = 0.0;
    while u <= x + 1e-12 {
        let v = t
            .eval(f.eval(u), g.eval(x - u))
            .expect("distribution values lie in [0, 1]");
        best = best.max(v);
        u += step;
    }
    best
}

/// Brute-force upper bound for the dual inf-convolution:
/// `min_u T*(F(u), G(x−u))` over the same grid. The matching lower
/// bound is the scan at `x − step`.
pub fn inf_conv_dual_grid(t: &TNorm, f: &DistFn, g: &DistFn, x: f64, step: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    let mut best = 1.0f64;
    let mut u = 0.0;
    while u <= x + 1e-12 {
        let v = t
            .conorm_eval(f.eval(u), g.eval(x - u))
            .expect("distribution values lie in [0, 1]");
        best = best.min(v);
        u += step;
    }
    best
}

/// Probe abscissae that exercise a convolution result: around every
/// output breakpoint, between them, and past the last one.
pub fn probe_points(h: &DistFn) -> Vec<f64> {
    let bps = h.breakpoints();
    let mut xs = Vec::with_capacity(3 * bps.len() + 2);
    for &b in bps {
        xs.push((b - 1e-6).max(0.0));
        xs.push(b);
        xs.push(b + 1e-6);
    }
    for w in bps.windows(2) {
        xs.push(0.5 * (w[0] + w[1]));
    }
    xs.push(bps.last().copied().unwrap_or(0.0) + 0.5);
    xs
}
