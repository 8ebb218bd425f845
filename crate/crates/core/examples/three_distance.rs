//! Gap lengths of `{n alpha mod 1}` for a few rotations.

use quasilr::diophantine::three_distance_gaps;

fn main() {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    for (name, alpha) in [("phi", phi), ("sqrt2", 2f64.sqrt()), ("pi", std::f64::consts::PI)] {
        for n in [10, 100, 1000, 10000] {
            let gaps = three_distance_gaps(alpha, n);
            println!("{name:>5} N={n:<6} gaps={gaps:.6?}");
        }
    }
}
