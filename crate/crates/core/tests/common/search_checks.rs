//! Reusable checks for the partition search and refinement.

use super::{brute_pair_regular, random_graph};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regularity::cut::CutOracle;
use regularity::graph::VertexPartition;
use regularity::pair::{check_partition, exact_pair_regularity, PairConfig};
use regularity::search::{equitable_refine, find_regular_partition, partition_irregularity, SearchConfig};
use regularity::{VertexSet, Weighted, WeightedGraph};

/// Random partition of `0..n` into `m` nonempty blocks.
pub fn random_partition<R: Rng>(n: usize, m: usize, rng: &mut R) -> VertexPartition {
    let mut vs: Vec<usize> = (0..n).collect();
    vs.shuffle(rng);
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts[..m - 1].to_vec();
    cuts.sort_unstable();
    cuts.insert(0, 0);
    cuts.push(n);
    let lists: Vec<Vec<usize>> = cuts.windows(2).map(|w| vs[w[0]..w[1]].to_vec()).collect();
    VertexPartition::from_lists(n, &lists).unwrap()
}

/// Structural guarantees of the refinement: equitable, few parts, and
/// chunks cut from one block stay inside it apart from spread vertices.
pub fn check_refinement(p: &VertexPartition, alpha: f64, seed: u64) -> Result<(), String> {
    let r = equitable_refine(p, alpha, seed).map_err(|e| e.to_string())?;
    let q = &r.partition;
    if q.n() != p.n() || !q.is_equitable() {
        return Err(format!("not an equitable partition: {:?}", q.sizes()));
    }
    let bound = (4.0 * p.k() as f64 / alpha - 1e-9).ceil() as usize + 1;
    if q.k() > bound {
        return Err(format!("{} parts exceed {bound}", q.k()));
    }
    for (j, src) in r.source_block.iter().enumerate() {
        if let Some(b) = src {
            let outside = q.blocks()[j]
                .iter()
                .filter(|v| !r.spread.contains(v) && !p.blocks()[*b].contains(*v))
                .count();
            if outside > 0 {
                return Err(format!("part {j} leaves block {b}"));
            }
        }
    }
    Ok(())
}

/// Mean irregularity after refinement stays within the documented slack
/// `20n²/k^{1/4} + 2mkn` of the starting partition.
pub fn refinement_irregularity_trial() -> (f64, f64, f64) {
    let n = 16;
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let g = random_graph(n, 0.5, &mut rng);
    let p = VertexPartition::from_lists(n, &[(0..7).collect(), (7..16).collect()]).unwrap();
    let alpha = 0.5;
    let exact = CutOracle::exact();
    let before = partition_irregularity(&g, &p, &exact).unwrap().value;
    let mut total = 0.0;
    let mut k = 0;
    for seed in 0..50 {
        let r = equitable_refine(&p, alpha, seed).unwrap();
        k = r.chunk_size;
        let v = partition_irregularity(&g, &r.partition, &exact).unwrap();
        assert!(v.exact);
        total += v.value;
    }
    let mean = total / 50.0;
    let (nf, kf, m) = (n as f64, k as f64, p.k() as f64);
    (before, mean, 20.0 * nf * nf / kf.powf(0.25) + 2.0 * m * kf * nf)
}

/// Frequency over 400 draws of `|d(X',Y') − d(X,Y)| ≥ δ` for uniform
/// 16-subsets of two fixed 64-sets, against `3·2e^{−δ²k/4}`.
pub fn sampling_deviation(delta: f64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let g = random_graph(128, 0.5, &mut rng);
    let x = VertexSet::from_indices(128, 0..64);
    let y = VertexSet::from_indices(128, 64..128);
    let d = g.density(&x, &y).unwrap();
    let k = 16;
    let draws = 400;
    let mut hits = 0;
    for _ in 0..draws {
        let xs: Vec<usize> = (0..64).collect::<Vec<_>>().choose_multiple(&mut rng, k).copied().collect();
        let ys: Vec<usize> = (64..128).collect::<Vec<_>>().choose_multiple(&mut rng, k).copied().collect();
        let dd = g
            .density(&VertexSet::from_indices(128, xs), &VertexSet::from_indices(128, ys))
            .unwrap();
        if (dd - d).abs() >= delta {
            hits += 1;
        }
    }
    (hits as f64 / draws as f64, 3.0 * 2.0 * (-delta * delta * k as f64 / 4.0).exp())
}

/// Run the search and validate the result with [`check_partition`] and an
/// exact oracle on every pair.
pub fn search_and_verify(g: &WeightedGraph, eps: f64, alpha: f64, k: usize) -> Result<(), String> {
    let out = find_regular_partition(g, eps, alpha, k, &SearchConfig::default()).map_err(|e| e.to_string())?;
    let p = out.partition.ok_or("no partition certified")?;
    if !p.is_equitable() || p.k() != k {
        return Err(format!("bad shape {:?}", p.sizes()));
    }
    let level = (1.0 + alpha) * eps;
    let v = check_partition(g, &p, level, alpha, &PairConfig::default()).map_err(|e| e.to_string())?;
    if !v.regular {
        return Err("check_partition rejects the output".into());
    }
    let mut good = k;
    for i in 0..k {
        for j in i + 1..k {
            let b = g.between(&p.blocks()[i], &p.blocks()[j]);
            let exact = exact_pair_regularity(&b, level).map_err(|e| e.to_string())?;
            if exact.is_regular() != brute_pair_regular(&b, level) {
                return Err("exact oracles disagree".into());
            }
            if exact.is_regular() {
                good += 2;
            }
        }
    }
    if (good as f64) < (1.0 - level) * (k * k) as f64 - 1e-9 {
        return Err(format!("only {good} of {} cells are {level}-regular", k * k));
    }
    Ok(())
}
