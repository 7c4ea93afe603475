//! Deterministic sample generators shared by the checkers and the test
//! suites. Everything is driven by a caller-provided RNG so a (seed,
//! sample count) pair pins the population exactly.

use rand::Rng;

use crate::distfn::DistFn;
use crate::vector::Vector;

/// Rounds to a multiple of 2^-20. Dyadic abscissas keep pairwise
/// breakpoint sums exact under f64 addition in any association order,
/// which the exact dominance comparisons rely on.
pub fn dyadic(x: f64) -> f64 {
    const SCALE: f64 = (1u64 << 20) as f64;
    (x * SCALE).round() / SCALE
}

/// A random step function with 1 to `max_jumps` jumps, breakpoints in
/// (0, 4) separated by at least ~0.05, plateaus separated by at least
/// ~1e-3. With `d_plus` the final plateau is exactly 1.
pub fn random_step<R: Rng>(rng: &mut R, max_jumps: usize, d_plus: bool) -> DistFn {
    let k = rng.gen_range(1..=max_jumps.max(1));
    let mut breakpoints = Vec::with_capacity(k);
    let mut x = rng.gen_range(0.05..1.0);
    for _ in 0..k {
        breakpoints.push(dyadic(x));
        x += 0.05 + rng.gen_range(0.0..0.7);
    }
    let mut weights = Vec::with_capacity(k);
    let mut total = 0.0;
    for _ in 0..k {
        let w = 0.05 + rng.gen_range(0.0..1.0);
        total += w;
        weights.push(total);
    }
    let cap = if d_plus { 1.0 } else { rng.gen_range(0.3..0.95) };
    let points = breakpoints
        .into_iter()
        .zip(weights)
        .map(|(b, c)| (b, cap * (c / total)))
        .collect();
    DistFn::new(points).expect("generator emits canonical points")
}

/// `n` independent draws from [`random_step`], all in D+.
pub fn random_steps_in_d_plus<R: Rng>(rng: &mut R, n: usize, max_jumps: usize) -> Vec<DistFn> {
    (0..n).map(|_| random_step(rng, max_jumps, true)).collect()
}

/// Quadruples for dominance checks.
pub fn random_quadruples<R: Rng>(
    rng: &mut R,
    n: usize,
    max_jumps: usize,
) -> Vec<(DistFn, DistFn, DistFn, DistFn)> {
    (0..n)
        .map(|_| {
            (
                random_step(rng, max_jumps, true),
                random_step(rng, max_jumps, true),
                random_step(rng, max_jumps, true),
                random_step(rng, max_jumps, true),
            )
        })
        .collect()
}

/// A dense vector with coordinates uniform in `lo..hi`.
pub fn random_dense<R: Rng>(rng: &mut R, dim: usize, lo: f64, hi: f64) -> Vector {
    Vector::Dense((0..dim).map(|_| rng.gen_range(lo..hi)).collect())
}

/// A finitely-supported sequence with `support` nonzero entries among
/// indices `0..index_range`, values uniform in `lo..hi` excluding zero.
pub fn random_sparse<R: Rng>(
    rng: &mut R,
    index_range: usize,
    support: usize,
    lo: f64,
    hi: f64,
) -> Vector {
    let mut entries = Vec::with_capacity(support);
    let mut used = std::collections::BTreeSet::new();
    while used.len() < support.min(index_range) {
        used.insert(rng.gen_range(0..index_range));
    }
    for idx in used {
        let mut v = rng.gen_range(lo..hi);
        if v == 0.0 {
            v = 0.5 * (hi - lo).abs().max(1e-3);
        }
        entries.push((idx, v));
    }
    Vector::sparse(entries).expect("finite draws")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dyadic_rounding_is_exactly_representable() {
        let x = dyadic(0.123456789);
        assert_eq!(x * (1u64 << 20) as f64, (x * (1u64 << 20) as f64).round());
        // sums of dyadics at this scale are exact
        let y = dyadic(2.71828);
        assert_eq!((x + y) - y, x);
    }

    #[test]
    fn random_steps_are_canonical_and_seed_pinned() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let f = random_step(&mut rng, 5, true);
            assert!(f.in_d_plus());
            assert!(!f.is_eps_inf());
            assert!(f
                .breakpoints()
                .windows(2)
                .all(|w| w[1] - w[0] >= 0.049));
        }
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(random_step(&mut a, 5, false), random_step(&mut b, 5, false));
    }

    #[test]
    fn non_d_plus_draws_cap_below_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let f = random_step(&mut rng, 4, false);
            assert!(f.limit_at_infinity() < 1.0);
        }
    }

    #[test]
    fn sparse_draws_respect_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let v = random_sparse(&mut rng, 20, 6, -1.0, 1.0);
        let m = v.support().unwrap();
        assert_eq!(m.len(), 6);
        assert!(m.keys().all(|&k| k < 20));
        assert!(m.values().all(|&x| x != 0.0 && x.abs() <= 1.0));
    }
}
