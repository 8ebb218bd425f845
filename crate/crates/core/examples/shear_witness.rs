//! Sheared cubes whose window partition has a tiny arc, and a hull shape
//! whose dilates run out of points before components.

use quasilr::exact::lambda_subgroups;
use quasilr::io::preset;
use quasilr::partition::window_partition;
use quasilr::repetitivity::shear_witness_search;
use quasilr::shapes::hull_witness_shape;

fn main() -> quasilr::Result<()> {
    let spec = preset("witness-phi-sqrt2")?;
    match shear_witness_search(&spec, 4, 50, 0.01, 0, 0)? {
        Some(w) => println!("A = {:?}: min arc {:.3e}, beta1 {:?}", w.matrix, w.min_arc, w.beta1),
        None => println!("no shear witness"),
    }

    let (lambdas, _) = lambda_subgroups(spec.forms(), spec.d())?;
    let vs: Vec<Vec<i64>> = lambdas.iter().map(|l| l.basis()[0].clone()).collect();
    for n in [4, 16, 64] {
        let shape = hull_witness_shape(&vs, n)?;
        let part = window_partition(&spec, &shape)?;
        println!("{shape}: {} points, {} components", shape.integer_points().len(), part.component_count());
    }
    Ok(())
}
