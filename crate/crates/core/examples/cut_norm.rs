//! Cut norm of a signed matrix, exact and heuristic, and the cut distance
//! between two graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regularity::cut::{cut_metric, exact_cut_norm, heuristic_cut, CutOracle, SeedPolicy, DEFAULT_EXACT_LIMIT};
use regularity::{Matrix, WeightedGraph};

fn main() -> regularity::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = Matrix::from_fn(10, 14, |_, _| rng.gen_range(-1.0..1.0));
    let exact = exact_cut_norm(&a, DEFAULT_EXACT_LIMIT)?;
    let heur = heuristic_cut(&a, SeedPolicy::Full);
    println!("exact     {:.6}  S={:?} T={:?}", exact.value, exact.s, exact.t);
    println!("heuristic {:.6}  (never above the exact value)", heur.value);

    let k8 = WeightedGraph::complete(8);
    let empty = WeightedGraph::empty(8);
    let d = cut_metric(&k8, &empty, &CutOracle::exact())?;
    println!("d_cut(K8, empty) = {:.6} (exact: {})", d.value, d.exact);
    Ok(())
}
