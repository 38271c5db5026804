//! Acceptance suite: one test per shipped guarantee, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them).
//!
//! Every tolerance and time limit is pinned here; nothing is calibrated at
//! run time.

use guesswork::channels::{generate_hsic, HsicFamily};
use guesswork::model::{CostFunction, Numbering, Prior, QubitCqChannel};
use guesswork::oracle::{brute_force_norm, random_channel, DEFAULT_CAP};
use guesswork::rng::SplitMix64;
use guesswork::score::{
    build_optimal_measurement, guesswork_of_numbering_measurement, normalize_cost,
    weighted_vector_sum,
};
use guesswork::sim::{bayes_order_check, covariantize_measurement, max_over_priors, simulate_game};
use guesswork::solver::{
    count_leaves, greedy_init, solve, Regime, SolveError, SolveOptions, SolveResult,
};
use guesswork::symmetry::detect_symmetries;
use guesswork::BlochVector;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

fn sqrt5() -> f64 {
    5f64.sqrt()
}

/// Closed-form guesswork of each constellation under the identity cost.
/// The cuboctahedron value is the one fixed by exhaustive enumeration
/// (criterion 1 re-derives it below); the rest follow the published radicals.
fn closed_form(family: HsicFamily) -> f64 {
    match family {
        HsicFamily::Tetrahedron => 2.5 - 15f64.sqrt() / 6.0,
        HsicFamily::Octahedron => 3.5 - 35f64.sqrt() / 6.0,
        HsicFamily::Cube => 4.5 - 7f64.sqrt() / 2.0,
        HsicFamily::Icosahedron => 6.5 - (110.0 * (65.0 + 29.0 * sqrt5())).sqrt() / 60.0,
        HsicFamily::Dodecahedron => 10.5 - (6.0 * (3321.0 + 1483.0 * sqrt5())).sqrt() / 60.0,
        HsicFamily::Cuboctahedron => 6.5 - 570f64.sqrt() / 12.0,
        HsicFamily::Icosidodecahedron => {
            15.5 - (117490.0 + 52534.0 * sqrt5()).sqrt() / (30.0 * (6.0 + 2.0 * sqrt5()).sqrt())
        }
    }
}

/// An optimal icosidodecahedral query order, frozen from a converged search
/// run; `verified_icosidodecahedron_numbering` proves its optimality at test
/// time by matching its value against the closed form.
const ICOSIDODECAHEDRON_OPTIMAL: [usize; 30] = [
    1, 21, 19, 17, 29, 15, 25, 13, 27, 11, 23, 9, 5, 3, 7, 12, 2, 4, 10, 28, 8, 24, 6, 26, 20,
    22, 18, 16, 14, 0,
];

fn solve_family(family: HsicFamily) -> SolveResult {
    let channel = generate_hsic(family);
    let cost = CostFunction::identity(channel.len());
    solve(&channel, &cost, &SolveOptions::default()).expect("balanced identity cost")
}

fn dodecahedron_solution() -> &'static SolveResult {
    static CELL: OnceLock<SolveResult> = OnceLock::new();
    CELL.get_or_init(|| solve_family(HsicFamily::Dodecahedron))
}

fn verified_icosidodecahedron_numbering() -> Numbering {
    let channel = generate_hsic(HsicFamily::Icosidodecahedron);
    let cost = CostFunction::identity(30);
    let numbering = Numbering::new(ICOSIDODECAHEDRON_OPTIMAL.to_vec()).unwrap();
    let value = cost.mean()
        - weighted_vector_sum(channel.bloch(), &cost.centered(), &numbering).norm() / 30.0;
    let target = closed_form(HsicFamily::Icosidodecahedron);
    assert!(
        (value - target).abs() < 1e-9,
        "frozen numbering no longer reproduces the closed form: {value} vs {target}"
    );
    numbering
}

/// Uniformly seeded proper rotation: orthonormalize two random directions and
/// complete with the cross product.
fn random_rotation(rng: &mut SplitMix64) -> [BlochVector; 3] {
    loop {
        let u1 = rng.unit_vector();
        let raw = rng.unit_vector();
        let residual = raw - u1 * u1.dot(&raw);
        if let Some(u2) = residual.normalized() {
            return [u1, u2, u1.cross(&u2)];
        }
    }
}

fn rotate(rotation: &[BlochVector; 3], v: &BlochVector) -> BlochVector {
    // Columns of the rotation are the images of the axes.
    rotation[0] * v.x + rotation[1] * v.y + rotation[2] * v.z
}

#[test]
fn criterion_1_golden_closed_forms() {
    let limits = [
        (HsicFamily::Tetrahedron, 1.0),
        (HsicFamily::Octahedron, 1.0),
        (HsicFamily::Cube, 1.0),
        (HsicFamily::Icosahedron, 10.0),
        (HsicFamily::Dodecahedron, 600.0),
    ];
    for (family, limit_s) in limits {
        let result = if family == HsicFamily::Dodecahedron {
            dodecahedron_solution().clone()
        } else {
            solve_family(family)
        };
        let expected = closed_form(family);
        assert!(
            (result.value - expected).abs() < 1e-9,
            "{family}: solver {} vs closed form {expected}",
            result.value
        );
        assert!(
            result.wall_time < Duration::from_secs_f64(limit_s),
            "{family}: took {:?}, limit {limit_s} s",
            result.wall_time
        );
    }

    // Cuboctahedron: the printed radical √570/6 contradicts its own decimal
    // (6.5 − √570/6 ≈ 2.52); exhaustive enumeration fixes the value at
    // 6.5 − √570/12 ≈ 4.51, which rounds to the quoted ~4.5.
    let start = Instant::now();
    let channel = generate_hsic(HsicFamily::Cuboctahedron);
    let cost = CostFunction::identity(12);
    let weights = normalize_cost(&cost).weights;
    let oracle = brute_force_norm(&channel, &weights, Regime::TransitiveCs, DEFAULT_CAP).unwrap();
    let elapsed = start.elapsed();
    assert_eq!(oracle.leaves, 3840);
    assert!(elapsed < Duration::from_secs(1), "cuboctahedron oracle took {elapsed:?}");
    let solved = solve_family(HsicFamily::Cuboctahedron);
    assert_eq!(
        solved.best_norm.to_bits(),
        (oracle.norm / 12.0).to_bits(),
        "solver must match the oracle exactly"
    );
    assert!((oracle.norm * oracle.norm - 570.0).abs() < 1e-9);
    assert!((solved.value - closed_form(HsicFamily::Cuboctahedron)).abs() < 1e-9);
    assert_eq!((solved.value * 10.0).round() / 10.0, 4.5);

    println!("acceptance 1 (golden closed-form values, 1e-9): PASS");
}

#[test]
fn criterion_2_icosidodecahedron_desk_scale() {
    let channel = generate_hsic(HsicFamily::Icosidodecahedron);
    let cost = CostFunction::identity(30);
    let target = closed_form(HsicFamily::Icosidodecahedron);

    let info = detect_symmetries(&channel);
    let weights = normalize_cost(&cost).weights;
    let (_, greedy_norm) =
        greedy_init(&channel, &weights, &info, Regime::TransitiveCs).unwrap();
    let greedy_value = cost.mean() - greedy_norm / 30.0;
    assert!(
        (greedy_value - target).abs() <= 0.01 * target,
        "greedy {greedy_value} not within 1% of {target}"
    );

    let options = SolveOptions {
        time_budget: Some(Duration::from_secs(60)),
        ..SolveOptions::default()
    };
    let incumbent = match solve(&channel, &cost, &options) {
        Ok(result) => result.value,
        Err(SolveError::TimeBudgetExceeded { partial }) => {
            assert!(partial.bound_only);
            partial.value
        }
        Err(e) => panic!("unexpected error {e}"),
    };
    assert!(
        (incumbent - target).abs() <= 0.01 * target,
        "60 s incumbent {incumbent} not within 1% of {target}"
    );
    println!(
        "acceptance 2 (icosidodecahedron desk scale, greedy {:+.3}% / 60 s incumbent {:+.5}%): PASS",
        100.0 * (greedy_value - target) / target,
        100.0 * (incumbent - target) / target
    );
}

/// Full icosidodecahedron optimality proof; takes long even on many cores.
#[cfg(feature = "exhaustive")]
#[test]
fn criterion_2_icosidodecahedron_exhaustive() {
    let channel = generate_hsic(HsicFamily::Icosidodecahedron);
    let cost = CostFunction::identity(30);
    let result = solve(&channel, &cost, &SolveOptions::default()).unwrap();
    let target = closed_form(HsicFamily::Icosidodecahedron);
    assert!((result.value - target).abs() < 1e-6);
    println!("acceptance 2x (icosidodecahedron exhaustive): PASS");
}

#[test]
fn criterion_3_oracle_equivalence() {
    let start = Instant::now();
    let mut checked = 0;
    for size in 4..=8usize {
        for run in 0..20u64 {
            let channel = random_channel(size, 31_000 + 100 * size as u64 + run, true).unwrap();
            let cost = CostFunction::identity(size);
            let normalized = normalize_cost(&cost);
            let oracle =
                brute_force_norm(&channel, &normalized.weights, Regime::General, DEFAULT_CAP)
                    .unwrap();
            let solved = solve(&channel, &cost, &SolveOptions::default()).unwrap();
            assert_eq!(solved.regime, Regime::General, "random channels have no symmetry");
            let oracle_norm = oracle.norm / size as f64;
            let oracle_value = normalized.mean - oracle_norm;
            assert!(
                (solved.value - oracle_value).abs() <= 1e-12
                    && (solved.best_norm - oracle_norm).abs() <= 1e-12,
                "size {size} run {run}: value {} vs {oracle_value}",
                solved.value
            );
            assert_eq!(
                solved.best_numbering,
                normalized.to_query_order(&oracle.numbering),
                "size {size} run {run}: argmax differs"
            );
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    assert_eq!(checked, 100);
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    println!("acceptance 3 (oracle equivalence on 100 random channels, 1e-12): PASS");
}

#[test]
fn criterion_4_complexity_regimes() {
    let start = Instant::now();
    let octahedron = generate_hsic(HsicFamily::Octahedron);
    let expected = [
        (Regime::General, 720),
        (Regime::Transitive, 120),
        (Regime::Cs, 48),
        (Regime::TransitiveCs, 8),
    ];
    for (regime, leaves) in expected {
        assert_eq!(
            count_leaves(&octahedron, regime).unwrap(),
            leaves,
            "octahedron {regime}"
        );
        assert_eq!(regime.leaf_count(6), leaves as u128);
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("acceptance 4 (leaf counts 720/120/48/8 with bounding disabled): PASS");
}

#[test]
fn criterion_5_saddle_point() {
    let start = Instant::now();
    for family in [
        HsicFamily::Tetrahedron,
        HsicFamily::Octahedron,
        HsicFamily::Cube,
        HsicFamily::Icosahedron,
        HsicFamily::Cuboctahedron,
    ] {
        let channel = generate_hsic(family);
        let cost = CostFunction::identity(channel.len());
        let solved = solve(&channel, &cost, &SolveOptions::default()).unwrap();
        let info = detect_symmetries(&channel);
        let optimal = build_optimal_measurement(&channel, &cost, &solved.best_numbering).unwrap();
        let covariant = covariantize_measurement(&channel, &info, &optimal).unwrap();
        let (worst_prior_value, _) = max_over_priors(&channel, &cost, &covariant).unwrap();
        assert!(
            (worst_prior_value - solved.value).abs() < 1e-9,
            "{family}: max over priors {worst_prior_value} vs solver {}",
            solved.value
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!("acceptance 5 (saddle point at every constellation with |M| <= 12, 1e-9): PASS");
}

#[test]
fn criterion_6_monte_carlo() {
    // Icosahedron and dodecahedron: 20 seeds each at 4000 shots per state,
    // empirical value within 3 computed standard errors at least 19 times.
    for family in [HsicFamily::Icosahedron, HsicFamily::Dodecahedron] {
        let channel = generate_hsic(family);
        let cost = CostFunction::identity(channel.len());
        let solved = if family == HsicFamily::Dodecahedron {
            dodecahedron_solution().clone()
        } else {
            solve_family(family)
        };
        let measurement =
            build_optimal_measurement(&channel, &cost, &solved.best_numbering).unwrap();
        let prior = Prior::uniform(channel.len());
        let mut hits = 0;
        for seed in 1..=20 {
            let report =
                simulate_game(&channel, &prior, &cost, &measurement, 4000, seed).unwrap();
            if (report.empirical_guesswork - solved.value).abs()
                <= 3.0 * report.standard_error
            {
                hits += 1;
            }
        }
        assert!(hits >= 19, "{family}: only {hits}/20 seeds within 3 standard errors");
    }

    // Icosidodecahedron: the simulated run lands within 1% of the closed
    // form at the published shot count.
    let channel = generate_hsic(HsicFamily::Icosidodecahedron);
    let cost = CostFunction::identity(30);
    let numbering = verified_icosidodecahedron_numbering();
    let measurement = build_optimal_measurement(&channel, &cost, &numbering).unwrap();
    let target = closed_form(HsicFamily::Icosidodecahedron);
    let report =
        simulate_game(&channel, &Prior::uniform(30), &cost, &measurement, 4000, 1).unwrap();
    assert!(
        (report.empirical_guesswork - target).abs() <= 0.01 * target,
        "empirical {} not within 1% of {target}",
        report.empirical_guesswork
    );
    println!("acceptance 6 (Monte Carlo reproduction at 4000 shots/state): PASS");
}

#[test]
fn criterion_7a_rotation_invariance() {
    let mut rng = SplitMix64::new(0x5157);
    let mut worst: f64 = 0.0;
    for i in 0..10usize {
        let size = 4 + i % 5;
        let channel = random_channel(size, 41_000 + i as u64, true).unwrap();
        let cost = CostFunction::identity(size);
        let baseline = solve(&channel, &cost, &SolveOptions::default()).unwrap().value;
        for _ in 0..20 {
            let rotation = random_rotation(&mut rng);
            let rotated = channel.map_bloch(|v| rotate(&rotation, v)).unwrap();
            let value = solve(&rotated, &cost, &SolveOptions::default()).unwrap().value;
            worst = worst.max((value - baseline).abs());
        }
    }
    assert!(worst <= 1e-9, "rotation drift {worst}");
    println!("acceptance 7a (rotation invariance, drift {worst:.2e} <= 1e-9): PASS");
}

#[test]
fn criterion_7b_shrink_linearity() {
    let channels: Vec<QubitCqChannel> = vec![
        generate_hsic(HsicFamily::Tetrahedron),
        generate_hsic(HsicFamily::Octahedron),
        random_channel(6, 4242, true).unwrap(),
    ];
    for channel in channels {
        let cost = CostFunction::identity(channel.len());
        let full = solve(&channel, &cost, &SolveOptions::default()).unwrap().value;
        for lambda in [0.0, 0.25, 0.5, 1.0] {
            let shrunk = channel.map_bloch(|v| *v * lambda).unwrap();
            let value = solve(&shrunk, &cost, &SolveOptions::default()).unwrap().value;
            let predicted = cost.mean() - lambda * (cost.mean() - full);
            assert!(
                (value - predicted).abs() <= 1e-9,
                "lambda {lambda}: {value} vs {predicted}"
            );
        }
    }
    println!("acceptance 7b (shrink linearity for lambda in {{0, 0.25, 0.5, 1}}, 1e-9): PASS");
}

#[test]
fn criterion_7c_bound_soundness() {
    use guesswork::solver::SearchTree;
    let mut rng = SplitMix64::new(777);
    let mut checked = 0;
    while checked < 1000 {
        let size = 4 + (checked % 4); // 4..=7 keeps enumeration small
        let channel = random_channel(size, 52_000 + checked as u64, true).unwrap();
        let cost = CostFunction::identity(size);
        let weights = normalize_cost(&cost).weights;
        let info = detect_symmetries(&channel);
        let tree = SearchTree::new(&channel, &weights, &info, Regime::General).unwrap();

        // Random node: descend a random number of levels choosing random
        // children.
        let mut node = tree.root();
        let depth = 1 + rng.next_index(tree.ranks());
        for _ in 0..depth {
            let children = tree.branch(&node);
            if children.is_empty() {
                break;
            }
            let pick = rng.next_index(children.len());
            node = children.into_iter().nth(pick).unwrap();
        }

        // Enumerate all completions and compare against the bound.
        let bound = tree.bound(&node);
        let mut stack = vec![node];
        let mut max_completion: f64 = 0.0;
        while let Some(current) = stack.pop() {
            if tree.is_leaf(&current) {
                let numbering = tree.numbering(&current);
                let norm =
                    weighted_vector_sum(channel.bloch(), &weights, &numbering).norm();
                max_completion = max_completion.max(norm);
            } else {
                stack.extend(tree.branch(&current));
            }
        }
        assert!(
            bound >= max_completion - 1e-12,
            "bound {bound} below completion {max_completion}"
        );
        checked += 1;
    }
    println!("acceptance 7c (bound soundness on 1000 random nodes): PASS");
}

#[test]
fn criterion_7d_measurement_consistency() {
    let mut channels: Vec<QubitCqChannel> = vec![
        generate_hsic(HsicFamily::Tetrahedron),
        generate_hsic(HsicFamily::Octahedron),
        generate_hsic(HsicFamily::Cube),
        generate_hsic(HsicFamily::Icosahedron),
        generate_hsic(HsicFamily::Cuboctahedron),
    ];
    for i in 0..10u64 {
        channels.push(random_channel(4 + (i as usize) % 5, 63_000 + i, true).unwrap());
    }
    for channel in &channels {
        let cost = CostFunction::identity(channel.len());
        let solved = solve(channel, &cost, &SolveOptions::default()).unwrap();
        let measurement =
            build_optimal_measurement(channel, &cost, &solved.best_numbering).unwrap();
        let evaluated = guesswork_of_numbering_measurement(
            channel,
            &Prior::uniform(channel.len()),
            &cost,
            &measurement,
        )
        .unwrap();
        assert!(
            (evaluated.value - solved.value).abs() <= 1e-12,
            "measurement value {} vs solver {}",
            evaluated.value,
            solved.value
        );
    }
    println!("acceptance 7d (measurement consistency, 1e-12): PASS");
}

#[test]
fn criterion_7e_bayes_row_monotonicity() {
    let mut channels: Vec<QubitCqChannel> = vec![
        generate_hsic(HsicFamily::Tetrahedron),
        generate_hsic(HsicFamily::Octahedron),
        generate_hsic(HsicFamily::Cube),
    ];
    for i in 0..10u64 {
        channels.push(random_channel(4 + (i as usize) % 5, 74_000 + i, true).unwrap());
    }
    for channel in &channels {
        let cost = CostFunction::identity(channel.len());
        let solved = solve(channel, &cost, &SolveOptions::default()).unwrap();
        let measurement =
            build_optimal_measurement(channel, &cost, &solved.best_numbering).unwrap();
        let report = bayes_order_check(
            channel,
            &Prior::uniform(channel.len()),
            &cost,
            &measurement,
        )
        .unwrap();
        assert!(report.monotone, "optimal measurement has a non-monotone row");
        assert!(report.reordered_value <= report.original_value + 1e-12);
    }
    println!("acceptance 7e (Bayes row monotonicity of optimal measurements): PASS");
}

#[test]
fn criterion_7f_thread_determinism() {
    let mut channels: Vec<QubitCqChannel> = vec![
        generate_hsic(HsicFamily::Cube),
        generate_hsic(HsicFamily::Icosahedron),
    ];
    for i in 0..2u64 {
        channels.push(random_channel(7, 85_000 + i, true).unwrap());
    }
    for channel in &channels {
        let cost = CostFunction::identity(channel.len());
        let mut results = Vec::new();
        for threads in [1usize, 2, 8] {
            let options = SolveOptions { threads, ..SolveOptions::default() };
            results.push(solve(channel, &cost, &options).unwrap());
        }
        for result in &results[1..] {
            assert_eq!(result.value.to_bits(), results[0].value.to_bits());
            assert_eq!(result.best_norm.to_bits(), results[0].best_norm.to_bits());
            assert_eq!(result.best_numbering, results[0].best_numbering);
        }
    }
    println!("acceptance 7f (bit-identical results across 1/2/8 threads): PASS");
}
