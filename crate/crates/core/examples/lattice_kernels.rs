//! Kernels mod 1 and the rank conditions for two schemes.

use quasilr::exact::{kernel_mod_one, rank_conditions};
use quasilr::io::preset;

fn main() -> quasilr::Result<()> {
    for name in ["witness-phi-sqrt2", "coupled"] {
        let spec = preset(name)?;
        println!("{name}:");
        for (i, form) in spec.forms().iter().enumerate() {
            let s = kernel_mod_one(form, spec.d())?;
            println!("  S_{i} basis {:?}", s.basis());
        }
        let report = rank_conditions(spec.forms(), spec.d())?;
        println!("  {}", serde_json::to_string(&report).unwrap());
    }
    Ok(())
}
