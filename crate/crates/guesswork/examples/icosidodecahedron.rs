//! The 30-state icosidodecahedral channel: greedy incumbent, then a budgeted
//! branch-and-bound run, compared against the closed-form target.
//!
//! Run with: cargo run --release --example icosidodecahedron [budget-seconds]

use guesswork::channels::{generate_hsic, HsicFamily};
use guesswork::model::CostFunction;
use guesswork::score::normalize_cost;
use guesswork::solver::{greedy_init, solve, Regime, SolveError, SolveOptions};
use guesswork::symmetry::detect_symmetries;
use std::time::Duration;

fn main() {
    let budget: f64 =
        std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(60.0);
    let sqrt5 = 5f64.sqrt();
    let target = 15.5 - (117490.0 + 52534.0 * sqrt5).sqrt() / (30.0 * (6.0 + 2.0 * sqrt5).sqrt());
    println!("closed-form target: {target:.9}");

    let channel = generate_hsic(HsicFamily::Icosidodecahedron);
    let cost = CostFunction::identity(30);
    let info = detect_symmetries(&channel);
    println!(
        "symmetry: |G| = {}, transitive = {}, centrally symmetric = {}",
        info.order(),
        info.transitive,
        info.centrally_symmetric
    );

    let normalized = normalize_cost(&cost);
    let (_, greedy_norm) =
        greedy_init(&channel, &normalized.weights, &info, Regime::TransitiveCs).unwrap();
    let greedy_value = normalized.mean - greedy_norm / 30.0;
    println!(
        "greedy incumbent:   {greedy_value:.9} ({:+.4}% off target)",
        100.0 * (greedy_value - target) / target
    );

    let options = SolveOptions {
        time_budget: Some(Duration::from_secs_f64(budget)),
        ..SolveOptions::default()
    };
    match solve(&channel, &cost, &options) {
        Ok(result) => {
            println!(
                "exact optimum:      {:.9} after {:?} ({} leaves, {} nodes)",
                result.value, result.wall_time, result.leaves_visited, result.nodes_expanded
            );
            println!("numbering: {:?}", result.best_numbering.order());
            println!("matches target: {}", (result.value - target).abs() < 1e-9);
        }
        Err(SolveError::TimeBudgetExceeded { partial }) => {
            println!(
                "budget hit after {:?}: incumbent {:.9} ({:+.4}% off target, bound only)",
                partial.wall_time,
                partial.value,
                100.0 * (partial.value - target) / target
            );
            println!("numbering: {:?}", partial.best_numbering.order());
        }
        Err(e) => println!("error: {e}"),
    }
}
