//! Interval regularity of a random permutation: energies along the
//! geometric scan and the verdict on the chosen equipartition.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regularity::interval::{
    check_interval_partition, perm_to_matrix, select_interval_k, IntervalPartition, Permutation,
    PrefixMatrix, Remainder,
};

fn main() -> regularity::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let sigma = Permutation::random(500, &mut rng);
    let y = PrefixMatrix::new(&perm_to_matrix(&sigma))?;
    let sel = select_interval_k(&y, 0.5, 2)?;
    println!("q = {}, accepted grid {} after {} steps", sel.q, sel.grid_k, sel.steps);
    for (k, e) in &sel.energies {
        println!("  ‖f_{k}‖² = {e:.6}");
    }
    let p = IntervalPartition::equipartition(sigma.len(), sel.k, Remainder::Spread)?;
    let v = check_interval_partition(&y, &p, 0.5)?;
    println!(
        "{:?} mode, k = {}: regular {}, failing pairs {}",
        sel.mode, sel.k, v.regular, v.failing_pairs
    );
    Ok(())
}
