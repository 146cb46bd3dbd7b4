//! Brute-force oracles and instance generators shared by the integration
//! tests. Nothing here calls the algorithms under test.
#![allow(dead_code)]

pub mod interval_checks;
pub mod lp_oracle;
pub mod perturb;
pub mod search_checks;

use rand::Rng;
use regularity::hom::PatternGraph;
use regularity::{BipartiteWeightedGraph, Matrix, Weighted, WeightedGraph};

/// `max_{S,T} |Σ_{S×T} a|` over all `2^rows · 2^cols` pairs.
pub fn brute_cut_norm(a: &Matrix) -> f64 {
    let (r, c) = (a.rows(), a.cols());
    assert!(r <= 12 && c <= 12);
    let mut best: f64 = 0.0;
    for s in 0u32..1 << r {
        // column sums restricted to S, then every T
        let col: Vec<f64> = (0..c)
            .map(|j| (0..r).filter(|i| s >> i & 1 == 1).map(|i| a[(i, j)]).sum())
            .collect();
        for t in 0u32..1 << c {
            let v: f64 = (0..c).filter(|j| t >> j & 1 == 1).map(|j| col[j]).sum();
            best = best.max(v.abs());
        }
    }
    best
}

/// Cut norm of a matrix given by distinct row and column types with
/// multiplicities. Identical rows (columns) are all in or all out at an
/// optimum, so enumerating types is exact.
pub fn typed_cut_norm(values: &Matrix, row_mult: &[usize], col_mult: &[usize]) -> f64 {
    let scaled = Matrix::from_fn(values.rows(), values.cols(), |i, j| {
        values[(i, j)] * (row_mult[i] * col_mult[j]) as f64
    });
    brute_cut_norm(&scaled)
}

pub fn random_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..1.0))
}

pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> WeightedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    WeightedGraph::from_edges(n, &edges).unwrap()
}

/// Symmetric weights in `[0,1]` with a zero diagonal.
pub fn random_weighted<R: Rng>(n: usize, rng: &mut R) -> WeightedGraph {
    let mut m = Matrix::zeros(n, n);
    for u in 0..n {
        for v in u + 1..n {
            let w = rng.gen_range(0.0..1.0);
            m[(u, v)] = w;
            m[(v, u)] = w;
        }
    }
    WeightedGraph::new(m).unwrap()
}

pub fn random_bipartite<R: Rng>(nx: usize, ny: usize, p: f64, rng: &mut R) -> BipartiteWeightedGraph {
    BipartiteWeightedGraph::new(Matrix::from_fn(nx, ny, |_, _| {
        if rng.gen_bool(p) { 1.0 } else { 0.0 }
    }))
    .unwrap()
}

/// Bipartite graph from the bits of `mask`, row-major.
pub fn bipartite_from_mask(nx: usize, ny: usize, mask: u64) -> BipartiteWeightedGraph {
    BipartiteWeightedGraph::new(Matrix::from_fn(nx, ny, |i, j| {
        (mask >> (i * ny + j) & 1) as f64
    }))
    .unwrap()
}

/// Vertex pairs `(u, v)`, `u < v`, in the order used by [`graph_from_mask`].
pub fn pair_list(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

pub fn graph_from_mask(n: usize, mask: u32) -> WeightedGraph {
    let edges: Vec<_> = pair_list(n)
        .into_iter()
        .enumerate()
        .filter(|(b, _)| mask >> b & 1 == 1)
        .map(|(_, e)| e)
        .collect();
    WeightedGraph::from_edges(n, &edges).unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// One edge mask per isomorphism class of graphs on `n` vertices.
pub fn graph_classes(n: usize) -> Vec<u32> {
    let pairs = pair_list(n);
    let index = |u: usize, v: usize| {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        pairs.iter().position(|&e| e == (a, b)).unwrap()
    };
    let perms = permutations(n);
    let maps: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| pairs.iter().map(|&(u, v)| index(p[u], p[v])).collect())
        .collect();
    let mut seen = std::collections::HashSet::new();
    let mut reps = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let canon = maps
            .iter()
            .map(|m| {
                m.iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .fold(0u32, |acc, (_, &t)| acc | 1 << t)
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            reps.push(canon);
        }
    }
    reps
}

/// `e(U,W)` for every pair of subset masks of a graph on `n ≤ 6` vertices.
pub fn edge_table(g: &WeightedGraph) -> Vec<Vec<f64>> {
    let n = g.n();
    let full = 1usize << n;
    let mut t = vec![vec![0.0; full]; full];
    for u in 0..full {
        for w in 0..full {
            let mut s = 0.0;
            for x in 0..n {
                if u >> x & 1 == 1 {
                    for y in 0..n {
                        if w >> y & 1 == 1 {
                            s += g.weight(x, y);
                        }
                    }
                }
            }
            t[u][w] = s;
        }
    }
    t
}

/// Exact ε-regularity by the definition: every `U ⊆ X`, `W ⊆ Y` with
/// `|U| ≥ ε|X|`, `|W| ≥ ε|Y|` has `|d(U,W) − d(X,Y)| ≤ ε`.
pub fn brute_pair_regular(g: &BipartiteWeightedGraph, eps: f64) -> bool {
    let w = g.weights();
    let (nx, ny) = (w.rows(), w.cols());
    assert!(nx <= 12 && ny <= 12);
    let total: f64 = w.sum();
    let d = total / (nx * ny) as f64;
    for u in 1u32..1 << nx {
        let us = u.count_ones() as f64;
        if us < eps * nx as f64 - 1e-9 {
            continue;
        }
        let col: Vec<f64> = (0..ny)
            .map(|j| (0..nx).filter(|i| u >> i & 1 == 1).map(|i| w[(i, j)]).sum())
            .collect();
        for t in 1u32..1 << ny {
            let ws = t.count_ones() as f64;
            if ws < eps * ny as f64 - 1e-9 {
                continue;
            }
            let e: f64 = (0..ny).filter(|j| t >> j & 1 == 1).map(|j| col[j]).sum();
            if (e / (us * ws) - d).abs() > eps + 1e-12 {
                return false;
            }
        }
    }
    true
}

/// `hom(H, G)` by summing over all `n^v` vertex maps.
pub fn brute_hom(h: &PatternGraph, g: &WeightedGraph) -> f64 {
    let (v, n) = (h.vertex_count(), g.n());
    let mut map = vec![0usize; v];
    let mut total = 0.0;
    loop {
        total += h
            .edges()
            .iter()
            .map(|&(a, b)| g.weight(map[a], map[b]))
            .product::<f64>();
        let mut i = 0;
        while i < v {
            map[i] += 1;
            if map[i] < n {
                break;
            }
            map[i] = 0;
            i += 1;
        }
        if i == v {
            return total;
        }
    }
}

/// Injective homomorphisms by the same enumeration.
pub fn brute_injective_hom(h: &PatternGraph, g: &WeightedGraph) -> f64 {
    let (v, n) = (h.vertex_count(), g.n());
    let mut map = vec![0usize; v];
    let mut total = 0.0;
    loop {
        let mut used = vec![false; n];
        if map.iter().all(|&x| !std::mem::replace(&mut used[x], true)) {
            total += h
                .edges()
                .iter()
                .map(|&(a, b)| g.weight(map[a], map[b]))
                .product::<f64>();
        }
        let mut i = 0;
        while i < v {
            map[i] += 1;
            if map[i] < n {
                break;
            }
            map[i] = 0;
            i += 1;
        }
        if i == v {
            return total;
        }
    }
}

/// Blow-up of a random symmetric 0/1 pattern on `k` classes with shuffled
/// labels; the class partition is exactly regular. Returns the graph and
/// the classes.
pub fn planted_blocks<R: Rng>(n: usize, k: usize, rng: &mut R) -> (WeightedGraph, Vec<Vec<usize>>) {
    let mut pat = vec![vec![false; k]; k];
    for a in 0..k {
        for b in a..k {
            let on = rng.gen_bool(0.5);
            pat[a][b] = on;
            pat[b][a] = on;
        }
    }
    let mut labels: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        labels.swap(i, rng.gen_range(0..=i));
    }
    let class = |v: usize| labels[v] * k / n;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if pat[class(u)][class(v)] {
                edges.push((u, v));
            }
        }
    }
    let mut classes = vec![Vec::new(); k];
    for v in 0..n {
        classes[class(v)].push(v);
    }
    (WeightedGraph::from_edges(n, &edges).unwrap(), classes)
}
