//! Points of the Fibonacci chain with labels 0..=20, with physical positions.

use quasilr::io::{preset, write_points_csv};
use quasilr::shapes::Shape;

fn main() -> quasilr::Result<()> {
    let spec = preset("fibonacci")?;
    let points = spec.generate(&Shape::rect(vec![0], vec![20])?)?;
    write_points_csv(std::io::stdout().lock(), &points, Some(&spec))?;
    Ok(())
}
