//! Independent feasibility oracle for the atom-mass programs.

use rand::Rng;
use regularity::lp::{violation, AtomSystem, RangeRow};

/// Feasibility of `0 ≤ x ≤ s` with range rows by vertex search. A vertex
/// has at most `rows` coordinates strictly inside their bounds, and those
/// are fixed by as many independent tight rows.
pub fn vertex_feasible(upper: &[f64], rows: &[RangeRow]) -> bool {
    let n = upper.len();
    let mut member = vec![vec![false; n]; rows.len()];
    for (r, row) in rows.iter().enumerate() {
        for &a in &row.atoms {
            member[r][a] = true;
        }
    }
    let mut status = vec![0u8; n];
    dfs(0, upper, rows, &member, &mut status)
}

fn dfs(i: usize, upper: &[f64], rows: &[RangeRow], member: &[Vec<bool>], status: &mut [u8]) -> bool {
    let n = upper.len();
    // row ranges reachable under the partial assignment
    for (r, row) in rows.iter().enumerate() {
        let (mut lo, mut hi) = (0.0, 0.0);
        for a in 0..n {
            if !member[r][a] {
                continue;
            }
            match (a < i, status[a]) {
                (true, 0) => {}
                (true, 1) => {
                    lo += upper[a];
                    hi += upper[a];
                }
                _ => hi += upper[a],
            }
        }
        if hi < row.lo - 1e-9 || lo > row.hi + 1e-9 {
            return false;
        }
    }
    let free = status[..i].iter().filter(|&&s| s == 2).count();
    if i == n {
        return leaf(upper, rows, member, status);
    }
    for s in 0..3u8 {
        if s == 2 && free == rows.len() {
            continue;
        }
        status[i] = s;
        if dfs(i + 1, upper, rows, member, status) {
            return true;
        }
    }
    false
}

fn leaf(upper: &[f64], rows: &[RangeRow], member: &[Vec<bool>], status: &[u8]) -> bool {
    let n = upper.len();
    let free: Vec<usize> = (0..n).filter(|&a| status[a] == 2).collect();
    let base: Vec<f64> = (0..n).map(|a| if status[a] == 1 { upper[a] } else { 0.0 }).collect();
    let f = free.len();
    if f == 0 {
        return violation(upper, rows, &base) <= 1e-9;
    }
    // choose f tight rows, each at its lower or upper end
    let r = rows.len();
    for mask in 0u32..1 << r {
        if mask.count_ones() as usize != f {
            continue;
        }
        let chosen: Vec<usize> = (0..r).filter(|&k| mask >> k & 1 == 1).collect();
        for sides in 0u32..1 << f {
            let mut m = vec![vec![0.0; f + 1]; f];
            for (e, &k) in chosen.iter().enumerate() {
                let fixed: f64 = (0..n).filter(|&a| member[k][a]).map(|a| base[a]).sum();
                let target = if sides >> e & 1 == 1 { rows[k].hi } else { rows[k].lo };
                for (c, &a) in free.iter().enumerate() {
                    m[e][c] = if member[k][a] { 1.0 } else { 0.0 };
                }
                m[e][f] = target - fixed;
            }
            if let Some(sol) = solve(m) {
                let mut x = base.clone();
                for (c, &a) in free.iter().enumerate() {
                    x[a] = sol[c];
                }
                if violation(upper, rows, &x) <= 1e-9 {
                    return true;
                }
            }
        }
    }
    false
}

fn solve(mut m: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let f = m.len();
    for c in 0..f {
        let p = (c..f).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))?;
        if m[p][c].abs() < 1e-12 {
            return None;
        }
        m.swap(c, p);
        for r in 0..f {
            if r != c {
                let k = m[r][c] / m[c][c];
                for j in c..=f {
                    m[r][j] -= k * m[c][j];
                }
            }
        }
    }
    Some((0..f).map(|r| m[r][f] / m[r][r]).collect())
}

/// Random atom system with `k` sets, distinct signatures, integer sizes and
/// integer targets.
pub fn random_lp<R: Rng>(rng: &mut R) -> (AtomSystem, f64, Vec<f64>, f64) {
    let k = rng.gen_range(1..=4usize);
    let mut sigs: Vec<u32> = (0..1u32 << k).collect();
    for i in (1..sigs.len()).rev() {
        sigs.swap(i, rng.gen_range(0..=i));
    }
    sigs.truncate(rng.gen_range(1..=sigs.len().min(12)));
    let sizes: Vec<f64> = sigs.iter().map(|_| rng.gen_range(1..=8) as f64).collect();
    let membership: Vec<Vec<bool>> = sigs.iter().map(|s| (0..k).map(|i| s >> i & 1 == 1).collect()).collect();
    let total: f64 = sizes.iter().sum();
    let u = rng.gen_range(0..=total as usize) as f64;
    let ui = (0..k)
        .map(|i| {
            let cap: f64 = sizes.iter().zip(&membership).filter(|(_, m)| m[i]).map(|(s, _)| s).sum();
            rng.gen_range(0..=(cap as usize).min(u as usize + 1)) as f64
        })
        .collect();
    let tol = [0.0, 0.5, 1.0, 1.5][rng.gen_range(0..4)];
    (AtomSystem::new(sizes, membership), u, ui, tol)
}

