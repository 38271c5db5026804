//! Cross-check the branch-and-bound solver against exhaustive enumeration on
//! seeded random channels.
//!
//! Run with: cargo run --release --example oracle_vs_solver

use guesswork::model::CostFunction;
use guesswork::oracle::{brute_force_norm, random_channel, DEFAULT_CAP};
use guesswork::score::normalize_cost;
use guesswork::solver::{solve, Regime, SolveOptions};

fn main() {
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for size in 4..=8 {
        for seed in 0..10 {
            let channel = random_channel(size, 1000 * size as u64 + seed, true).unwrap();
            let cost = CostFunction::identity(size);
            let weights = normalize_cost(&cost).weights;
            let oracle =
                brute_force_norm(&channel, &weights, Regime::General, DEFAULT_CAP).unwrap();
            let solved = solve(&channel, &cost, &SolveOptions::default()).unwrap();
            let gap = (solved.best_norm * size as f64 - oracle.norm).abs();
            worst = worst.max(gap);
            checked += 1;
            assert!(gap < 1e-12, "size {size} seed {seed}: gap {gap}");
        }
        println!("|M| = {size}: 10 random channels agree");
    }
    println!("checked {checked} channels; worst |solver − oracle| = {worst:.2e}");
}
