//! Detect the symmetry structure of the built-in constellations and of a
//! hand-made asymmetric channel.
//!
//! Run with: cargo run --release --example symmetries

use guesswork::channels::{generate_hsic, HsicFamily};
use guesswork::model::{BlochVector, QubitCqChannel};
use guesswork::symmetry::{antipodal_pairing, detect_symmetries};

fn main() {
    println!("{:<18} {:>4} {:>7} {:>11} {:>6} {:>9}", "channel", "|M|", "|group|", "transitive", "CS", "improper");
    for family in HsicFamily::ALL {
        let channel = generate_hsic(family);
        let info = detect_symmetries(&channel);
        let improper =
            info.group.iter().filter(|e| e.realization.determinant() < 0.0).count();
        println!(
            "{:<18} {:>4} {:>7} {:>11} {:>6} {:>9}",
            family.name(),
            channel.len(),
            info.order(),
            info.transitive,
            info.centrally_symmetric,
            improper,
        );
    }

    println!("\nantipodal pairs of the octahedron:");
    let octahedron = generate_hsic(HsicFamily::Octahedron);
    let info = detect_symmetries(&octahedron);
    for (a, b) in antipodal_pairing(&info, &octahedron).unwrap() {
        println!(
            "  {} {} <-> {} {}",
            octahedron.labels()[a],
            octahedron.bloch()[a],
            octahedron.labels()[b],
            octahedron.bloch()[b]
        );
    }

    // A channel with no useful symmetry: one orbit check fails, no pairing.
    let lopsided = QubitCqChannel::new(
        vec!["up".into(), "down".into(), "side".into()],
        vec![
            BlochVector::new(0.0, 0.0, 1.0),
            BlochVector::new(0.0, 0.0, -1.0),
            BlochVector::new(1.0, 0.0, 0.0),
        ],
    )
    .unwrap();
    let info = detect_symmetries(&lopsided);
    println!(
        "\nlopsided 3-state channel: |group| = {}, transitive = {}, CS = {}",
        info.order(),
        info.transitive,
        info.centrally_symmetric
    );
}
