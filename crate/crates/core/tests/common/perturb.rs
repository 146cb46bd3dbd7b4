//! Exhaustive harnesses for the density perturbation bounds on small graphs.

use super::{edge_table, graph_classes, graph_from_mask};
use regularity::pair::exact_pair_regularity;
use regularity::VertexSet;

/// Outcome of one exhaustive sweep.
#[derive(Debug, Default)]
pub struct Sweep {
    pub graphs: usize,
    pub checked: u64,
    /// Cases where the hypothesis holds without being trivially equal.
    pub nontrivial: u64,
    pub violations: u64,
}

fn density(table: &[Vec<f64>], u: usize, w: usize) -> f64 {
    table[u][w] / (u.count_ones() * w.count_ones()) as f64
}

/// `X ⊆ X'`, `|X| ≥ (1−δ)|X'|` gives `|d(X',Y) − d(X,Y)| ≤ δ`, with the
/// tightest `δ = 1 − |X|/|X'|`, over all graphs up to isomorphism.
pub fn nested_subsets(n: usize) -> Sweep {
    let mut out = Sweep::default();
    let full = (1usize << n) - 1;
    for mask in graph_classes(n) {
        let t = edge_table(&graph_from_mask(n, mask));
        out.graphs += 1;
        for xp in 1..=full {
            // every nonempty X ⊆ X'
            let mut x = xp;
            while x > 0 {
                let delta = 1.0 - x.count_ones() as f64 / xp.count_ones() as f64;
                for y in 1..=full {
                    out.checked += 1;
                    if x != xp {
                        out.nontrivial += 1;
                    }
                    if (density(&t, xp, y) - density(&t, x, y)).abs() > delta + 1e-12 {
                        out.violations += 1;
                    }
                }
                x = (x - 1) & xp;
            }
        }
    }
    out
}

/// `|UΔU'| ≤ δ|U∪U'|`, `|WΔW'| ≤ δ|W∪W'|` gives `|d(U,W) − d(U',W')| ≤ 2δ`
/// with the tightest `δ`. Pairs with `δ ≥ 1/2` are skipped since densities
/// lie in `[0, 1]`.
pub fn symmetric_differences(n: usize) -> Sweep {
    let mut out = Sweep::default();
    let full = (1usize << n) - 1;
    let mut close = Vec::new();
    for a in 1..=full {
        for b in 1..=full {
            let delta = (a ^ b).count_ones() as f64 / (a | b).count_ones() as f64;
            if delta < 0.5 {
                close.push((a, b, delta));
            }
        }
    }
    for mask in graph_classes(n) {
        let t = edge_table(&graph_from_mask(n, mask));
        out.graphs += 1;
        for &(u, up, du) in &close {
            for &(w, wp, dw) in &close {
                out.checked += 1;
                if u != up || w != wp {
                    out.nontrivial += 1;
                }
                let delta = du.max(dw);
                if (density(&t, u, w) - density(&t, up, wp)).abs() > 2.0 * delta + 1e-12 {
                    out.violations += 1;
                }
            }
        }
    }
    out
}

fn regular_by_table(t: &[Vec<f64>], x: usize, y: usize, eps: f64) -> bool {
    let d = density(t, x, y);
    let (fx, fy) = (eps * x.count_ones() as f64 - 1e-9, eps * y.count_ones() as f64 - 1e-9);
    let mut u = x;
    while u > 0 {
        if u.count_ones() as f64 >= fx {
            let mut w = y;
            while w > 0 {
                if w.count_ones() as f64 >= fy && (density(t, u, w) - d).abs() > eps + 1e-12 {
                    return false;
                }
                w = (w - 1) & y;
            }
        }
        u = (u - 1) & x;
    }
    true
}

/// Sets `V'` with `|V Δ V'| ≤ r`, nonempty, inside `full`.
fn nearby(v: usize, r: usize, full: usize) -> Vec<usize> {
    (1..=full).filter(|&c| ((c ^ v).count_ones() as usize) <= r).collect()
}

/// An ε-regular pair `(V₁, V₂)` of disjoint sets stays `(ε+4δ)`-regular
/// after moving at most `δε|Vᵢ|` vertices of each side, checked with
/// [`exact_pair_regularity`] on the perturbed pair.
pub fn perturbed_pairs(n: usize, eps_grid: &[f64], delta_grid: &[f64]) -> Sweep {
    let mut out = Sweep::default();
    let full = (1usize << n) - 1;
    for mask in graph_classes(n) {
        let g = graph_from_mask(n, mask);
        let t = edge_table(&g);
        out.graphs += 1;
        for v1 in 1..=full {
            let rest = full & !v1;
            let mut v2 = rest;
            while v2 > 0 {
                for &eps in eps_grid {
                    if !regular_by_table(&t, v1, v2, eps) {
                        continue;
                    }
                    for &delta in delta_grid {
                        let r1 = (delta * eps * v1.count_ones() as f64 + 1e-9).floor() as usize;
                        let r2 = (delta * eps * v2.count_ones() as f64 + 1e-9).floor() as usize;
                        let level = eps + 4.0 * delta;
                        for a in nearby(v1, r1, full) {
                            for b in nearby(v2, r2, full) {
                                out.checked += 1;
                                if a != v1 || b != v2 {
                                    out.nontrivial += 1;
                                }
                                let pair = g.between(
                                    &VertexSet::from_mask(n, a as u64),
                                    &VertexSet::from_mask(n, b as u64),
                                );
                                let ok = eps + 4.0 * delta >= 1.0
                                    || exact_pair_regularity(&pair, level).unwrap().is_regular();
                                if !ok {
                                    out.violations += 1;
                                }
                            }
                        }
                    }
                }
                v2 = (v2 - 1) & rest;
            }
        }
    }
    out
}
