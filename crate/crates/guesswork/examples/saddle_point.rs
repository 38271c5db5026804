//! Numerical saddle-point check: for transitive channels the worst-case
//! prior of the covariantized optimal measurement equals the uniform-prior
//! optimum, so maximizing over priors first or minimizing over measurements
//! first gives the same value.
//!
//! Run with: cargo run --release --example saddle_point

use guesswork::channels::{generate_hsic, HsicFamily};
use guesswork::model::CostFunction;
use guesswork::score::build_optimal_measurement;
use guesswork::sim::{covariantize_measurement, max_over_priors};
use guesswork::solver::solve_default;
use guesswork::symmetry::detect_symmetries;

fn main() {
    println!(
        "{:<16} {:>12} {:>14} {:>10} {:>9}",
        "channel", "solver", "worst prior", "outcomes", "gap"
    );
    for family in [
        HsicFamily::Tetrahedron,
        HsicFamily::Octahedron,
        HsicFamily::Cube,
        HsicFamily::Icosahedron,
        HsicFamily::Cuboctahedron,
    ] {
        let channel = generate_hsic(family);
        let cost = CostFunction::identity(channel.len());
        let solved = solve_default(&channel, &cost).unwrap();

        let info = detect_symmetries(&channel);
        let optimal =
            build_optimal_measurement(&channel, &cost, &solved.best_numbering).unwrap();
        let covariant = covariantize_measurement(&channel, &info, &optimal).unwrap();
        let (worst, _) = max_over_priors(&channel, &cost, &covariant).unwrap();

        println!(
            "{:<16} {:>12.8} {:>14.8} {:>10} {:>9.1e}",
            family.name(),
            solved.value,
            worst,
            covariant.outcomes().len(),
            (worst - solved.value).abs(),
        );
    }
}
