//! Search for an equitable regular partition of two disjoint cliques, then
//! check it pair by pair.

use regularity::pair::{check_partition, PairConfig};
use regularity::search::{find_regular_partition, SearchConfig};
use regularity::WeightedGraph;

fn main() -> regularity::Result<()> {
    let mut edges = Vec::new();
    for c in [0, 8] {
        for u in c..c + 8 {
            for v in u + 1..c + 8 {
                edges.push((u, v));
            }
        }
    }
    let g = WeightedGraph::from_edges(16, &edges)?;
    let (eps, alpha) = (0.3, 0.3);
    let out = find_regular_partition(&g, eps, alpha, 2, &SearchConfig::default())?;
    println!(
        "{} terms, {} atoms, {} size tuples (nominal 10^{:.0}), {} checked",
        out.terms, out.atoms, out.tuple_count, out.nominal_log10, out.tuples_checked
    );
    match out.partition {
        Some(p) => {
            println!("partition {:?}", p.to_lists());
            let v = check_partition(&g, &p, eps, alpha, &PairConfig::default())?;
            println!("regular at ({}, {}): {}", eps, alpha, v.regular);
        }
        None => println!("no certified partition"),
    }
    Ok(())
}
