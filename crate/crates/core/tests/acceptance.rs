//! The acceptance gate: one test per advertised guarantee, each printing
//! a PASS line with its measured numbers and enforcing a wall-clock
//! budget. Tolerances here are contractual; do not loosen them to make
//! a regression pass.

mod common;

use std::time::Instant;

use common::sibley_grid_oracle;
use pnspace_core::complete::{
    build_delta_schedule, cauchy_factorization_check, lift_cauchy_sequence, lift_representative,
    scalar_continuity_probe, sigma_product, two_of_three_experiment, uniform_continuity_verdict,
    validate_delta_schedule, PointSequence, Scenario,
};
use pnspace_core::distfn::{sibley, DistFn};
use pnspace_core::pnspace::{check_axioms_detailed, PNSpace, ProbNormed};
use pnspace_core::quotient::{
    closedness_probe, coset_equal, dist_to_subspace, quotient_norm, QuotientSpace,
    QuotientStrategy, SampleSchedule, Subspace,
};
use pnspace_core::sample::{random_dense, random_quadruples, random_steps_in_d_plus};
use pnspace_core::trifn::{check_dominates, TNorm, TriangleFn};
use pnspace_core::vector::{NormKind, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn budget(name: &str, started: Instant, limit_s: f64) -> f64 {
    let secs = started.elapsed().as_secs_f64();
    assert!(
        secs < limit_s,
        "{name} blew its {limit_s}s budget: {secs:.2}s"
    );
    secs
}

fn taus() -> (TriangleFn, TriangleFn) {
    (TriangleFn::tau_m(), TriangleFn::tau_m_star())
}

fn simple(dim: usize, norm: NormKind) -> PNSpace {
    let (tau, tau_star) = taus();
    PNSpace::simple_space(dim, norm, tau, tau_star).unwrap()
}

fn unit_direction(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    loop {
        let v = random_dense(rng, dim, -1.0, 1.0);
        let n = v.norm(NormKind::L2);
        if n > 0.3 {
            return v.scale(1.0 / n);
        }
    }
}

#[test]
fn criterion_01_step_sum_is_exact() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let tnorms = [TNorm::Minimum, TNorm::Product, TNorm::Lukasiewicz];
    for _ in 0..200 {
        let a = 10.0 - rng.gen_range(0.0..10.0f64);
        let b = 10.0 - rng.gen_range(0.0..10.0f64);
        let ea = DistFn::unit_step(a).unwrap();
        let eb = DistFn::unit_step(b).unwrap();
        let expected = DistFn::unit_step(a + b).unwrap();
        for t in &tnorms {
            let out = TriangleFn::SupConv(t.clone()).apply(&ea, &eb);
            assert_eq!(out, expected, "sup-convolution under {t:?} at a = {a}, b = {b}");
        }
    }
    let secs = budget("criterion 1", t0, 1.0);
    println!(
        "criterion 1 (unit-step sum law): PASS — 600 convolutions structurally \
         equal to the shifted step, zero tolerance, {secs:.2}s"
    );
}

#[test]
fn criterion_02_sibley_matches_the_grid_oracle() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let steps = random_steps_in_d_plus(&mut rng, 400, 5);
    let mut worst = 0.0f64;
    for pair in steps.chunks(2) {
        let exact = sibley(&pair[0], &pair[1], 1e-9).unwrap().value();
        let scanned = sibley_grid_oracle(&pair[0], &pair[1], 1e-4);
        worst = worst.max((exact - scanned).abs());
    }
    assert!(worst <= 2e-4, "largest oracle gap {worst}");
    for _ in 0..50 {
        let a = 2.0 - rng.gen_range(0.0..2.0f64);
        let ea = DistFn::unit_step(a).unwrap();
        let d = sibley(&ea, &DistFn::eps0(), 1e-9).unwrap().value();
        assert!((d - a.min(1.0)).abs() <= 1e-9, "distance to identity at a = {a}: {d}");
    }
    let secs = budget("criterion 2", t0, 10.0);
    println!(
        "criterion 2 (metric oracle agreement): PASS — 200 random pairs within \
         {worst:.2e} of the 1e-4 grid scan, 50 unit steps at the closed form, {secs:.2}s"
    );
}

#[test]
fn criterion_03_axiom_checker_separates_good_from_broken() {
    let t0 = Instant::now();
    let names = ["n1-identity", "n2-symmetry", "n3-triangle", "n4-splitting"];
    for dim in [2usize, 3] {
        for norm in [NormKind::L1, NormKind::L2, NormKind::Linf] {
            let space = simple(dim, norm);
            let reports = check_axioms_detailed(&space, 500, 103).unwrap();
            assert_eq!(reports.len(), 4);
            for (report, name) in reports.iter().zip(names) {
                assert_eq!(report.check, name);
                assert!(report.pass(), "{name} failed on dim {dim} {norm:?}");
                assert!(
                    report.worst_margin >= 0.0,
                    "{name} margin {} on dim {dim} {norm:?}",
                    report.worst_margin
                );
            }
        }
    }
    let (tau, tau_star) = taus();
    let broken = PNSpace::squared_norm_space(2, NormKind::L2, tau, tau_star).unwrap();
    let reports = check_axioms_detailed(&broken, 500, 103).unwrap();
    assert!(!reports[2].pass(), "squared-norm rule slipped past the triangle check");
    assert_eq!(reports[2].check, "n3-triangle");
    let witness = reports[2].witness.as_deref().unwrap();
    assert!(!witness.is_empty());
    let secs = budget("criterion 3", t0, 30.0);
    println!(
        "criterion 3 (axiom verdicts): PASS — 6 simple spaces all green at 500 \
         samples, squared-norm rule rejected with witness `{witness}`, {secs:.2}s"
    );
}

#[test]
fn criterion_04_sampled_quotient_tracks_the_exact_one() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut cases: Vec<(Vector, Vec<Vector>, usize)> = Vec::new();
    for _ in 0..25 {
        let b = unit_direction(&mut rng, 2);
        cases.push((random_dense(&mut rng, 2, -2.0, 2.0), vec![b], 2));
    }
    for _ in 0..20 {
        let b = unit_direction(&mut rng, 3);
        cases.push((random_dense(&mut rng, 3, -2.0, 2.0), vec![b], 3));
    }
    for _ in 0..5 {
        let b1 = unit_direction(&mut rng, 3);
        let b2 = loop {
            let c = unit_direction(&mut rng, 3);
            if b1.dot(&c).abs() < 0.2 {
                break c;
            }
        };
        cases.push((random_dense(&mut rng, 3, -1.5, 1.5), vec![b1, b2], 3));
    }
    let mut worst = 0.0f64;
    for (p, basis, dim) in cases {
        let w = Subspace::span(basis, dim).unwrap();
        let exact =
            QuotientSpace::new(simple(dim, NormKind::L2), w.clone(), QuotientStrategy::Exact)
                .unwrap();
        let sampled = QuotientSpace::new(
            simple(dim, NormKind::L2),
            w,
            QuotientStrategy::Sampled(SampleSchedule::default()),
        )
        .unwrap();
        let de = quotient_norm(&exact, &p).unwrap().sibley_to_eps0().value();
        let ds = quotient_norm(&sampled, &p).unwrap().sibley_to_eps0().value();
        worst = worst.max((de - ds).abs());
    }
    assert!(worst <= 2e-2, "largest exact/sampled gap {worst}");
    let secs = budget("criterion 4", t0, 30.0);
    println!(
        "criterion 4 (quotient norm agreement): PASS — 50 subspace draws, \
         exact vs sampled within {worst:.2e} (allowed 2e-2), {secs:.2}s"
    );
}

#[test]
fn criterion_05_closedness_split_verdict() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    // Closed case: every finite-dimensional subspace keeps the quotient
    // norm away from the identity on points off the subspace.
    for dim in [2usize, 3] {
        let w = Subspace::span(vec![unit_direction(&mut rng, dim)], dim).unwrap();
        let mut probes = Vec::new();
        while probes.len() < 5 {
            let p = random_dense(&mut rng, dim, -2.0, 2.0);
            if dist_to_subspace(&p, &w, NormKind::L2).unwrap() >= 0.05 {
                probes.push(p);
            }
        }
        let q = QuotientSpace::new(
            simple(dim, NormKind::L2),
            w.clone(),
            QuotientStrategy::Sampled(SampleSchedule::default()),
        )
        .unwrap();
        for p in &probes {
            let est = quotient_norm(&q, p).unwrap().sibley_to_eps0().value();
            let dist = dist_to_subspace(p, &w, NormKind::L2).unwrap();
            assert!(
                est >= dist.min(1.0) - 1e-6,
                "estimate {est} fell under the classical distance {dist}"
            );
        }
        let report = closedness_probe(&q, &probes, 100).unwrap();
        assert!(report.pass(), "closed subspace flagged: {:?}", report.witness);
    }
    // Dense case: the summing kernel pulls every probe's quotient norm
    // under any positive threshold, and the probe must say so.
    let (tau, tau_star) = taus();
    let c00 = PNSpace::c00_space(tau, tau_star).unwrap();
    let kernel = Subspace::c00_sum_kernel();
    let q = QuotientSpace::new(
        c00,
        kernel,
        QuotientStrategy::Sampled(SampleSchedule::default()),
    )
    .unwrap();
    let probes = vec![
        Vector::sparse(vec![(0, 1.0)]).unwrap(),
        Vector::sparse(vec![(1, -2.0), (4, 3.5)]).unwrap(),
        Vector::sparse(vec![(2, 0.25)]).unwrap(),
    ];
    let report = closedness_probe(&q, &probes, 100).unwrap();
    assert!(!report.pass(), "dense kernel passed a closedness probe");
    assert!(report.worst_margin < 0.0);
    let estimate = 1.0 / 100.0 + report.worst_margin;
    assert!(
        estimate < 1.0 / 100.0,
        "kernel estimate {estimate} did not sink below the 1/horizon threshold"
    );
    let secs = budget("criterion 5", t0, 10.0);
    println!(
        "criterion 5 (closedness split): PASS — finite-dimensional probes held \
         their distance, summing kernel sank to {estimate:.4} < 0.01, {secs:.2}s"
    );
}

#[test]
fn criterion_06_lifts_stay_in_coset_and_near_the_norm() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let mut min_margin = f64::INFINITY;
    for i in 0..50 {
        let dim = if i % 2 == 0 { 2 } else { 3 };
        let eps = if i % 4 < 2 { 0.1 } else { 0.01 };
        let w = Subspace::span(vec![unit_direction(&mut rng, dim)], dim).unwrap();
        let p = random_dense(&mut rng, dim, -2.0, 2.0);
        let q = QuotientSpace::new(
            simple(dim, NormKind::L2),
            w.clone(),
            QuotientStrategy::Exact,
        )
        .unwrap();
        let value = quotient_norm(&q, &p).unwrap().sibley_to_eps0().value();
        let rep = lift_representative(&q, &p, eps).unwrap();
        assert!(
            coset_equal(&rep, &p, &w).unwrap(),
            "lift left the coset at draw {i}"
        );
        let d = simple(dim, NormKind::L2)
            .norm_df(&rep)
            .unwrap()
            .sibley_to_eps0()
            .value();
        let margin = value + eps - d;
        assert!(margin > 0.0, "draw {i}: lift distance {d} vs bound {value} + {eps}");
        min_margin = min_margin.min(margin);
    }
    let secs = budget("criterion 6", t0, 10.0);
    println!(
        "criterion 6 (representative lifts): PASS — 50 lifts coset-exact with \
         strict slack, smallest margin {min_margin:.3}, {secs:.2}s"
    );
}

#[test]
fn criterion_07_delta_schedule_drives_the_diagonal_lift() {
    let t0 = Instant::now();
    let space = simple(2, NormKind::L2);
    let w = Subspace::span(vec![Vector::dense(vec![1.0, 0.0]).unwrap()], 2).unwrap();
    let q = QuotientSpace::new(space.clone(), w, QuotientStrategy::Exact).unwrap();
    let seq = PointSequence::from_fn(50, |n| {
        Vector::dense(vec![10.0 * n as f64, 1.0 / n as f64])
    })
    .unwrap();

    let schedule = build_delta_schedule(&TriangleFn::tau_m(), 5, 200, 107).unwrap();
    assert_eq!(schedule.deltas(), &[0.5, 0.25, 0.125, 0.0625, 0.03125]);
    let revalidation = validate_delta_schedule(&TriangleFn::tau_m(), &schedule, 250, 1007).unwrap();
    assert!(revalidation.pass());
    assert_eq!(revalidation.samples, 1000);

    let lifted = lift_cauchy_sequence(&q, &seq, &schedule, 50).unwrap();
    assert_eq!(lifted.horizon(), 5);
    for i in 1..lifted.horizon() {
        let diff = lifted.at(i).unwrap().sub(lifted.at(i + 1).unwrap());
        let delta = schedule.delta(i + 1).unwrap();
        let quotient_gap = q.norm_df(&diff).unwrap().sibley_to_eps0().value();
        let ambient_gap = space.norm_df(&diff).unwrap().sibley_to_eps0().value();
        assert!(quotient_gap < delta, "quotient gap {quotient_gap} at step {i} vs {delta}");
        assert!(ambient_gap < delta, "ambient gap {ambient_gap} at step {i} vs {delta}");
    }
    for a in 1..lifted.horizon() {
        for b in (a + 1)..=lifted.horizon() {
            let d = space
                .norm_df(&lifted.at(a).unwrap().sub(lifted.at(b).unwrap()))
                .unwrap()
                .sibley_to_eps0()
                .value();
            assert!(d < 1.0 / a as f64, "chain broke at ({a}, {b}): {d}");
        }
    }
    let secs = budget("criterion 7", t0, 30.0);
    println!(
        "criterion 7 (diagonal lifting): PASS — schedule halved five times, \
         1000-draw revalidation green, lifted gaps under their deltas and the \
         1/n chain intact, {secs:.2}s"
    );
}

#[test]
fn criterion_08_two_of_three_on_all_scenarios() {
    let t0 = Instant::now();
    let space = simple(3, NormKind::L2);
    let w = Subspace::span(vec![Vector::dense(vec![1.0, 0.0, 0.0]).unwrap()], 3).unwrap();
    let grid = [0.2, 0.1, 0.05];
    let horizon = 200;

    let ambient = Scenario::Ambient(
        PointSequence::from_fn(horizon, |n| {
            let n = n as f64;
            Vector::dense(vec![2.0 + n.sin() / n, 1.0 / n, 1.0 / n])
        })
        .unwrap(),
    );
    let subspace = Scenario::Subspace(
        PointSequence::from_fn(horizon, |n| {
            Vector::dense(vec![3.0 + 1.0 / n as f64, 0.0, 0.0])
        })
        .unwrap(),
    );
    let quotient = Scenario::Quotient(
        PointSequence::from_fn(horizon, |n| {
            let n = n as f64;
            Vector::dense(vec![n.sin(), 1.0 / n, 1.0 / n])
        })
        .unwrap(),
    );

    for scenario in [ambient, subspace, quotient] {
        let name = scenario.name();
        let report = two_of_three_experiment(&space, &w, &scenario, horizon, &grid, 108).unwrap();
        assert_eq!(report.check, format!("two-of-three-{name}"));
        assert!(
            report.pass(),
            "{name} scenario failed: {:?}",
            report.witness
        );
        // Exact-equality stages (a limit sitting inside W) record a zero
        // margin, so the aggregate slack is only required to be clean.
        assert!(report.worst_margin >= 0.0, "{name} scenario had negative slack");
    }
    let secs = budget("criterion 8", t0, 30.0);
    println!(
        "criterion 8 (two-of-three transfer): PASS — ambient, subspace and \
         quotient scenarios all certified at horizon {horizon}, {secs:.2}s"
    );
}

#[test]
fn criterion_09_sigma_product_certificate_and_factorization() {
    let t0 = Instant::now();
    let (tau, tau_star) = taus();
    let line = PNSpace::simple_space(1, NormKind::L2, tau.clone(), tau_star.clone()).unwrap();
    let product = sigma_product(line.clone(), line, tau.clone(), 500, 100, 109).unwrap();
    assert!(product.certificate().pass());
    assert_eq!(product.dim(), 2);
    let combined = product
        .norm_df(&Vector::dense(vec![0.8, -0.6]).unwrap())
        .unwrap();
    assert_eq!(combined, DistFn::unit_step(0.8 + 0.6).unwrap());

    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let quads = random_quadruples(&mut rng, 100, 3);
    assert!(check_dominates(&tau_star, &tau, &quads, 109).pass());
    let quads = random_quadruples(&mut rng, 100, 3);
    assert!(check_dominates(&tau, &tau, &quads, 109).pass());

    let factorization = cauchy_factorization_check(&product, 20, 40, &[0.2, 0.05], 1090).unwrap();
    assert!(
        factorization.pass(),
        "factorization mismatch: {:?}",
        factorization.witness
    );
    assert_eq!(factorization.samples, 20);
    let secs = budget("criterion 9", t0, 30.0);
    println!(
        "criterion 9 (sigma products): PASS — construction certified, dominance \
         chain verified on 200 quadruples, 20 sequences factor cleanly, {secs:.2}s"
    );
}

#[test]
fn criterion_10_quotient_map_continuity() {
    let t0 = Instant::now();
    let space = simple(2, NormKind::L2);
    let w = Subspace::span(vec![Vector::dense(vec![1.0, 0.0]).unwrap()], 2).unwrap();
    let q = QuotientSpace::new(space.clone(), w, QuotientStrategy::Exact).unwrap();

    let etas = [0.2, 0.1, 0.05, 0.025];
    let verdict = uniform_continuity_verdict(&q, 50, &etas, 110).unwrap();
    assert!(verdict.report.pass(), "{:?}", verdict.report.witness);
    assert_eq!(verdict.table.len(), etas.len());
    for pair in verdict.table.windows(2) {
        assert!(pair[0].0 < pair[1].0, "table must be ascending in eta");
        assert!(
            pair[0].1 <= pair[1].1 + 1e-12,
            "modulus rose as the radius shrank: {pair:?}"
        );
    }
    let finest = verdict.table[0];
    assert!(finest.1 <= 0.1, "h({}) = {} above 0.1", finest.0, finest.1);

    let p = Vector::dense(vec![0.0, 1.0]).unwrap();
    let scalar = scalar_continuity_probe(&q, &p, &[(1.0, 0.2), (0.5, 0.1), (0.3, 0.1), (1.0, 0.9)])
        .unwrap();
    assert!(scalar.pass(), "{:?}", scalar.witness);
    for gap in [0.8, 0.4, 0.2, 0.1] {
        let scaled = p.scale(gap);
        let ambient = space.norm_df(&scaled).unwrap().sibley_to_eps0().value();
        let through = q.norm_df(&scaled).unwrap().sibley_to_eps0().value();
        assert!((ambient - gap).abs() <= 1e-12, "ambient distance {ambient} at gap {gap}");
        assert!(through <= ambient + 1e-12);
    }
    let secs = budget("criterion 10", t0, 10.0);
    println!(
        "criterion 10 (continuity of the quotient map): PASS — modulus table \
         monotone with h({}) = {:.3}, scalar probe proportional, {secs:.2}s",
        finest.0, finest.1
    );
}
