//! Critical constants over aligned rectangles for the (phi, sqrt2) witness.

use quasilr::io::preset;
use quasilr::repetitivity::{family_scan, CriticalOptions, Mode};
use quasilr::shapes::rect_family;

fn main() -> quasilr::Result<()> {
    let spec = preset("witness-phi-sqrt2")?;
    let family = rect_family(2, 64);
    let report = family_scan(&spec, &family, "rect", Mode::LrOmega, &CriticalOptions::default());
    print!("{}", report.to_csv()?);
    eprintln!("trend {:?}, slope {:?}", report.summary.trend, report.summary.slope);
    Ok(())
}
