//! Cut decomposition of a planted-partition graph and the weak regular
//! partition derived from it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regularity::cut::{cut_metric, CutOracle};
use regularity::weak::{fk_decompose, fk_partition, iteration_bound};
use regularity::WeightedGraph;

fn main() -> regularity::Result<()> {
    let n = 20;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if (u < n / 2) == (v < n / 2) { 0.8 } else { 0.1 };
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    let g = WeightedGraph::from_edges(n, &edges)?;
    let oracle = CutOracle::exact();
    let eps = 0.08;

    let (dec, trace) = fk_decompose(&g, eps, &oracle)?;
    let d = cut_metric(&g, &dec.realize_graph()?, &oracle)?;
    println!(
        "{} terms in {} iterations (bound {}), d_cut = {:.4}",
        dec.len(),
        trace.iterations,
        iteration_bound(eps),
        d.value
    );
    for t in &dec.terms {
        println!("  {:+.4} · K[{:?}, {:?}]", t.c, t.s, t.t);
    }

    let p = fk_partition(&g, 0.15, &oracle)?;
    println!(
        "weak regular partition: {} parts, distance {:.4}, certified {}",
        p.partition.k(),
        p.distance,
        p.certified
    );
    Ok(())
}
