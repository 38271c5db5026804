//! Solve every highly symmetric channel with the identity cost and compare
//! against the closed-form values.
//!
//! Run with: cargo run --release --example hsic_closed_forms

use guesswork::channels::{generate_hsic, HsicFamily};
use guesswork::model::CostFunction;
use guesswork::solver::{solve, SolveOptions};

fn closed_form(family: HsicFamily) -> f64 {
    let sqrt5 = 5f64.sqrt();
    match family {
        HsicFamily::Tetrahedron => 2.5 - 15f64.sqrt() / 6.0,
        HsicFamily::Octahedron => 3.5 - 35f64.sqrt() / 6.0,
        HsicFamily::Cube => 4.5 - 7f64.sqrt() / 2.0,
        HsicFamily::Icosahedron => 6.5 - (110.0 * (65.0 + 29.0 * sqrt5)).sqrt() / 60.0,
        HsicFamily::Dodecahedron => 10.5 - (6.0 * (3321.0 + 1483.0 * sqrt5)).sqrt() / 60.0,
        HsicFamily::Cuboctahedron => 6.5 - 570f64.sqrt() / 12.0,
        HsicFamily::Icosidodecahedron => {
            15.5 - (117490.0 + 52534.0 * sqrt5).sqrt() / (30.0 * (6.0 + 2.0 * sqrt5).sqrt())
        }
    }
}

fn main() {
    println!(
        "{:<16} {:>4} {:>14} {:>12} {:>12} {:>12} {:>10}",
        "channel", "|M|", "regime", "value", "closed form", "leaves", "time"
    );
    for family in [
        HsicFamily::Tetrahedron,
        HsicFamily::Octahedron,
        HsicFamily::Cube,
        HsicFamily::Icosahedron,
        HsicFamily::Cuboctahedron,
        HsicFamily::Dodecahedron,
    ] {
        let channel = generate_hsic(family);
        let cost = CostFunction::identity(channel.len());
        let result = solve(&channel, &cost, &SolveOptions::default()).unwrap();
        let expected = closed_form(family);
        println!(
            "{:<16} {:>4} {:>14} {:>12.8} {:>12.8} {:>12} {:>9.2?} {}",
            family.name(),
            channel.len(),
            result.regime.name(),
            result.value,
            expected,
            result.leaves_visited,
            result.wall_time,
            if (result.value - expected).abs() < 1e-9 { "ok" } else { "MISMATCH" },
        );
        println!("    numbering: {:?}", result.best_numbering.order());
    }
}
