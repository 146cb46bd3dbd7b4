//! Reusable checks for interval regularity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regularity::interval::{
    check_interval_pair, check_interval_partition, perm_to_matrix, select_interval_k, stepfn_energy,
    IntervalPartition, Permutation, PrefixMatrix, Remainder,
};
use regularity::Matrix;
use std::ops::Range;

/// Averages of the step function of `y` over the `k × k` grid cells, from
/// the overlap lengths of each row with each cell.
pub fn cell_averages(y: &Matrix, k: usize) -> Vec<Vec<f64>> {
    let n = y.rows();
    let overlap = |i: usize, c: usize| {
        // [i/n, (i+1)/n) ∩ [c/k, (c+1)/k), in units of 1/(nk)
        let lo = (i * k).max(c * n);
        let hi = ((i + 1) * k).min((c + 1) * n);
        hi.saturating_sub(lo) as f64 / (n * k) as f64
    };
    let mut out = vec![vec![0.0; k]; k];
    for (a, row) in out.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate() {
            let mut s = 0.0;
            for i in (a * n / k)..((a + 1) * n).div_ceil(k).min(n) {
                let oi = overlap(i, a);
                if oi == 0.0 {
                    continue;
                }
                for j in (b * n / k)..((b + 1) * n).div_ceil(k).min(n) {
                    s += y[(i, j)] * oi * overlap(j, b);
                }
            }
            *cell = s * (k * k) as f64;
        }
    }
    out
}

/// `(‖f_k‖², ‖f_{kq}‖², ‖f_k − f_{kq}‖²)` from cell averages.
pub fn grid_norms(y: &Matrix, k: usize, q: usize) -> (f64, f64, f64) {
    let coarse = cell_averages(y, k);
    let fine = cell_averages(y, k * q);
    let (kf, kqf) = (k as f64, (k * q) as f64);
    let nk: f64 = coarse.iter().flatten().map(|v| v * v).sum::<f64>() / (kf * kf);
    let mut nkq = 0.0;
    let mut diff = 0.0;
    for (a, row) in fine.iter().enumerate() {
        for (b, v) in row.iter().enumerate() {
            nkq += v * v;
            let d = coarse[a / q][b / q] - v;
            diff += d * d;
        }
    }
    (nk, nkq / (kqf * kqf), diff / (kqf * kqf))
}

/// Pythagoras for nested grids with library energies, and agreement of
/// library energies with cell averages. Returns the largest error.
pub fn pythagoras_trial<R: Rng>(rng: &mut R) -> f64 {
    let n = rng.gen_range(1..=100);
    let y = Matrix::from_fn(n, n, |_, _| rng.gen_range(0.0..1.0));
    let pm = PrefixMatrix::new(&y).unwrap();
    let k = rng.gen_range(1..=12);
    let q = rng.gen_range(2..=5);
    let ek = stepfn_energy(&pm, k as u64).unwrap();
    let ekq = stepfn_energy(&pm, (k * q) as u64).unwrap();
    let (nk, nkq, diff) = grid_norms(&y, k, q);
    [(ekq - (ek + diff)).abs(), (ek - nk).abs(), (ekq - nkq).abs()]
        .into_iter()
        .fold(0.0, f64::max)
}

pub fn random_interval<R: Rng>(n: usize, rng: &mut R) -> Range<usize> {
    let a = rng.gen_range(0..n);
    a..rng.gen_range(a + 1..=n)
}

pub fn overlap(a: &Range<usize>, b: &Range<usize>) -> usize {
    a.end.min(b.end).saturating_sub(a.start.max(b.start))
}

/// `λ((A×B) Δ (A'×B'))` in cell units.
pub fn box_sym_diff(a: &Range<usize>, b: &Range<usize>, a2: &Range<usize>, b2: &Range<usize>) -> f64 {
    let inter = overlap(a, a2) * overlap(b, b2);
    (a.len() * b.len() + a2.len() * b2.len() - 2 * inter) as f64
}

/// Counts of `(instances, hypothesis met, I'×J' regular)` for the nudge
/// robustness statement on nudged intervals of permutation matrices.
pub fn nudge_trials(count: usize, seed: u64) -> Result<(usize, usize, usize), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut met, mut regular) = (0, 0);
    for _ in 0..count {
        let n = 160;
        let y = perm_to_matrix(&Permutation::random(n, &mut rng));
        let pm = PrefixMatrix::new(&y).unwrap();
        let eps: f64 = rng.gen_range(0.6..1.0);
        let i0 = rng.gen_range(0..20);
        let i = i0..i0 + rng.gen_range(110..=140);
        let j0 = rng.gen_range(0..20);
        let j = j0..j0 + rng.gen_range(110..=140);
        let nudge = |r: &Range<usize>, rng: &mut ChaCha8Rng| {
            let s = (r.start + rng.gen_range(0..=2)).saturating_sub(1);
            let e = (r.end + rng.gen_range(0..=2)).saturating_sub(1).min(n);
            s..e
        };
        let (i2, j2) = (nudge(&i, &mut rng), nudge(&j, &mut rng));
        let (li, lj) = (i.len() as f64, j.len() as f64);
        let q1 = eps - 4.0 * box_sym_diff(&i, &j, &i2, &j2) / (eps * eps * li * lj);
        let q2 = (li * eps - (i.len() - overlap(&i, &i2)) as f64) / i2.len() as f64;
        let q3 = (lj * eps - (j.len() - overlap(&j, &j2)) as f64) / j2.len() as f64;
        let eps2 = q1.min(q2).min(q3) - 1e-9;
        if eps2 <= 0.0 {
            continue;
        }
        met += 1;
        if check_interval_pair(&pm, i2.clone(), j2.clone(), eps2).unwrap().is_some() {
            continue;
        }
        regular += 1;
        if let Some(w) = check_interval_pair(&pm, i.clone(), j.clone(), eps).unwrap() {
            return Err(format!("{i:?}×{j:?} fails at {eps} with {w:?}; {i2:?}×{j2:?} regular at {eps2}"));
        }
    }
    Ok((count, met, regular))
}

/// Select `k` for a random permutation and check three equipartitions.
/// Returns the selection's mode and `k`.
pub fn select_and_check(n: usize, eps: f64, m: u64, seed: u64) -> Result<(String, usize), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y = perm_to_matrix(&Permutation::random(n, &mut rng));
    let pm = PrefixMatrix::new(&y).unwrap();
    let sel = select_interval_k(&pm, eps, m).map_err(|e| e.to_string())?;
    let max_steps = (4.0 / eps.powi(5) - 1e-9).ceil() as usize;
    if sel.steps >= max_steps {
        return Err(format!("scan took {} steps", sel.steps));
    }
    if sel.energies.windows(2).any(|w| w[1].1 < w[0].1 - 1e-12) {
        return Err("energies decrease along nested grids".into());
    }
    for rem in [Remainder::Front, Remainder::Back, Remainder::Spread] {
        let p = IntervalPartition::equipartition(n, sel.k, rem).map_err(|e| e.to_string())?;
        let v = check_interval_partition(&pm, &p, eps).map_err(|e| e.to_string())?;
        if !v.regular {
            return Err(format!("{rem:?} equipartition has {} failing pairs", v.failing_pairs));
        }
    }
    Ok((format!("{:?}", sel.mode), sel.k))
}
