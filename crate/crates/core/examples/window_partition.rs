//! Cut sets of the Fibonacci window for growing intervals, and the patch
//! classes they induce.

use std::collections::BTreeSet;

use quasilr::io::preset;
use quasilr::partition::{classify_labels, window_partition};
use quasilr::shapes::Shape;

fn main() -> quasilr::Result<()> {
    let spec = preset("fibonacci")?;
    for n in [1, 2, 3, 5, 8] {
        let shape = Shape::rect(vec![0], vec![n])?;
        let part = window_partition(&spec, &shape)?;
        let labels: Vec<Vec<i64>> = (0..500).map(|x| vec![x]).collect();
        let seen: BTreeSet<usize> = classify_labels(&spec, &part, &labels)?.into_iter().collect();
        let arcs: Vec<String> = part.arcs[0].iter().map(|a| format!("{a:.4}")).collect();
        println!("[0,{n}]: {} components, {} classes seen, arcs {}", part.component_count(), seen.len(), arcs.join(" "));
    }
    Ok(())
}
