//! Converts cubical points to the canonical window and back, and checks both
//! directions against direct acceptance.

use std::collections::BTreeSet;

use quasilr::io::preset;
use quasilr::scheme::{canonical_direct, CanonicalConverter, SitePoint};

fn keys(points: &[SitePoint], lo: i64, hi: i64) -> BTreeSet<(Vec<i64>, Vec<i64>)> {
    points
        .iter()
        .filter(|p| p.label.iter().all(|&x| lo <= x && x <= hi))
        .map(|p| (p.label.clone(), p.lift.clone()))
        .collect()
}

fn main() -> quasilr::Result<()> {
    let spec = preset("witness-reduced")?;
    let conv = CanonicalConverter::new(&spec)?;
    let (lo, hi) = (vec![-21; 2], vec![21; 2]);
    let cubical = spec.generate_box(&lo, &hi)?;
    let direct = canonical_direct(&spec, &lo, &hi)?;
    let forward = conv.forward(&cubical, &lo, &hi)?;
    let backward = conv.backward(&direct, &lo, &hi);
    println!("cubical {} points, canonical {} points", keys(&cubical, -20, 20).len(), keys(&direct, -20, 20).len());
    println!("forward matches direct: {}", keys(&forward, -20, 20) == keys(&direct, -20, 20));
    println!("backward matches cubical: {}", keys(&backward, -20, 20) == keys(&cubical, -20, 20));

    match CanonicalConverter::new(&preset("witness-phi-sqrt2")?) {
        Ok(_) => println!("(phi, sqrt2) converts"),
        Err(e) => println!("(phi, sqrt2): {e}"),
    }
    Ok(())
}
