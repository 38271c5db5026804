//! Monte Carlo guessing game on the icosahedral channel: build the optimal
//! measurement, play 4000 rounds per state, and compare the empirical
//! guesswork with the exact value.
//!
//! Run with: cargo run --release --example guessing_game [seed]

use guesswork::channels::{generate_hsic, HsicFamily};
use guesswork::model::{CostFunction, Prior};
use guesswork::score::build_optimal_measurement;
use guesswork::sim::simulate_game;
use guesswork::solver::solve_default;

fn main() {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let channel = generate_hsic(HsicFamily::Icosahedron);
    let cost = CostFunction::identity(channel.len());

    let solved = solve_default(&channel, &cost).unwrap();
    println!("exact guesswork:     {:.9}", solved.value);

    let measurement =
        build_optimal_measurement(&channel, &cost, &solved.best_numbering).unwrap();
    let prior = Prior::uniform(channel.len());
    let report = simulate_game(&channel, &prior, &cost, &measurement, 4000, seed).unwrap();

    println!("empirical guesswork: {:.9}", report.empirical_guesswork);
    println!("standard error:      {:.9}", report.standard_error);
    let sigmas = (report.empirical_guesswork - solved.value).abs() / report.standard_error;
    println!("deviation:           {sigmas:.2} standard errors");

    println!("\nprobability that the t-th query is correct:");
    for (t, q) in report.q_histogram.iter().enumerate() {
        let bar = "#".repeat((q * 200.0).round() as usize);
        println!("  t = {:>2}: {:>8.5} {}", t + 1, q, bar);
    }
}
