//! Pair regularity: a random bipartite graph passes, a half graph yields a
//! witness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regularity::pair::{check_pair, exact_pair_regularity, PairConfig};
use regularity::{BipartiteWeightedGraph, Matrix};

fn main() -> regularity::Result<()> {
    let cfg = PairConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let random = BipartiteWeightedGraph::new(Matrix::from_fn(12, 12, |_, _| {
        if rng.gen_bool(0.5) { 1.0 } else { 0.0 }
    }))?;
    let half = BipartiteWeightedGraph::new(Matrix::from_fn(12, 12, |i, j| {
        if i <= j { 1.0 } else { 0.0 }
    }))?;
    for (name, g) in [("random", &random), ("half", &half)] {
        let v = check_pair(g, 0.5, 0.4, &cfg)?;
        let exact = exact_pair_regularity(g, 0.5)?;
        println!("{name}: {:?} via {:?} (exact check: {:?})", v.kind, v.path, exact.kind);
        if let Some(w) = &v.witness {
            println!(
                "  U={:?} W={:?} d(U,W)={:.3} d(X,Y)={:.3}, not {:.2}-regular",
                w.u, w.w, w.d_uw, w.d_xy, (1.0 - 0.4) * 0.5
            );
        }
    }
    Ok(())
}
