//! Running minima of `n ||n a|| ||n b||` for (sqrt2, sqrt3), and the
//! one-dimensional floor for phi.

use quasilr::diophantine::littlewood_scan;

fn main() {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let single = littlewood_scan(&[phi], 100_000);
    println!("phi: floor {:.7} over n <= 1e5", single.floor);

    let pair = littlewood_scan(&[2f64.sqrt(), 3f64.sqrt()], 1_000_000);
    println!("(sqrt2, sqrt3) records:");
    for (n, v) in &pair.records {
        println!("{n:>8} {v:.6e}");
    }
}
