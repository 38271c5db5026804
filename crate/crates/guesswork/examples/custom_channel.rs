//! Round-trip a hand-made channel through the JSON file format and solve it
//! under a custom balanced cost.
//!
//! Run with: cargo run --release --example custom_channel

use guesswork::channels::{load_channel_file, save_channel};
use guesswork::model::{BlochVector, CostFunction, QubitCqChannel};
use guesswork::solver::solve_default;

fn main() {
    // Three antipodal pairs of different purities: a squashed octahedron.
    let channel = QubitCqChannel::new(
        vec!["x+".into(), "x-".into(), "y+".into(), "y-".into(), "z+".into(), "z-".into()],
        vec![
            BlochVector::new(1.0, 0.0, 0.0),
            BlochVector::new(-1.0, 0.0, 0.0),
            BlochVector::new(0.0, 0.7, 0.0),
            BlochVector::new(0.0, -0.7, 0.0),
            BlochVector::new(0.0, 0.0, 0.4),
            BlochVector::new(0.0, 0.0, -0.4),
        ],
    )
    .unwrap();

    let path = std::env::temp_dir().join("squashed_octahedron.json");
    save_channel(&channel, Some("squashed octahedron"), &path).unwrap();
    println!("wrote {}", path.display());

    let file = load_channel_file(&path).unwrap();
    let reloaded = file.channel().unwrap();
    assert_eq!(reloaded, channel, "file round-trip must be bit-exact");

    // Identity cost.
    let result = solve_default(&reloaded, &CostFunction::identity(6)).unwrap();
    println!("identity cost:  value {:.9} regime {}", result.value, result.regime);
    println!("  query order: {:?}", result.best_numbering.order());

    // A steeper balanced cost: quadratic gaps around the same mean.
    let steep = CostFunction::new(vec![0.0, 5.0, 6.0, 8.0, 9.0, 14.0]).unwrap();
    assert!(steep.is_balanced());
    let result = solve_default(&reloaded, &steep).unwrap();
    println!("steep cost:     value {:.9} regime {}", result.value, result.regime);
    println!("  query order: {:?}", result.best_numbering.order());
}
