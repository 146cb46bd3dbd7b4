//! Equitable refinement of an unbalanced partition and its irregularity
//! before and after.

use regularity::cut::CutOracle;
use regularity::search::{equitable_refine, partition_irregularity};
use regularity::{VertexPartition, WeightedGraph};

fn main() -> regularity::Result<()> {
    let edges: Vec<(usize, usize)> = (0..24)
        .flat_map(|u| (u + 1..24).map(move |v| (u, v)))
        .filter(|(u, v)| (u * 7 + v * 3) % 5 < 2)
        .collect();
    let g = WeightedGraph::from_edges(24, &edges)?;
    let p = VertexPartition::from_lists(24, &[(0..15).collect(), (15..24).collect()])?;
    let oracle = CutOracle::exact();
    let before = partition_irregularity(&g, &p, &oracle)?;
    for seed in 0..3 {
        let r = equitable_refine(&p, 0.5, seed)?;
        let after = partition_irregularity(&g, &r.partition, &oracle)?;
        println!(
            "seed {seed}: chunk {}, {} parts, irregularity {:.2} -> {:.2} (additive allowance αn² = {:.0})",
            r.chunk_size,
            r.partition.k(),
            before.value,
            after.value,
            0.5 * 24.0 * 24.0
        );
    }
    Ok(())
}
