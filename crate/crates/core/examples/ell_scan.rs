//! Truncated products along an SL_2(Z) orbit of a badly approximable pair.

use quasilr::diophantine::{ell_orbit_scan, ell_truncated};

fn main() -> quasilr::Result<()> {
    let x = [2f64.sqrt(), 3f64.sqrt()];
    println!("l_N(x) for N = 1e5: {:.6e}", ell_truncated(&x, 100_000));
    let scan = ell_orbit_scan(&x, 10_000, 5, 7)?;
    println!("{}", serde_json::to_string_pretty(&scan).unwrap());
    Ok(())
}
