//! Interval regularity of permutation matrices: the 0/1 encoding, prefix-sum
//! box densities, grid step-function energies, the geometric scan for the
//! number of intervals, and exhaustive interval-pair verification.
//!
//! Indexing: with `σ` and `j` both 0-indexed, `y_{ij} = 1` iff `σ(i) < j`.

use crate::error::{domain, Error, Result};
use crate::matrix::Matrix;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use std::ops::Range;

/// A bijection on `0..n` stored as its image array.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Permutation {
    sigma: Vec<usize>,
}

impl Permutation {
    pub fn new(sigma: Vec<usize>) -> Result<Self> {
        let n = sigma.len();
        let mut seen = vec![false; n];
        for &v in &sigma {
            if v >= n || seen[v] {
                return Err(Error::InvalidPermutation(format!(
                    "value {v} out of range or repeated in a permutation of length {n}"
                )));
            }
            seen[v] = true;
        }
        Ok(Permutation { sigma })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            sigma: (0..n).collect(),
        }
    }

    pub fn reverse(n: usize) -> Self {
        Permutation {
            sigma: (0..n).rev().collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut sigma: Vec<usize> = (0..n).collect();
        sigma.shuffle(rng);
        Permutation { sigma }
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.sigma
    }
}

/// `Y^σ` with `y_{ij} = 1` iff `σ(i) < j`.
pub fn perm_to_matrix(sigma: &Permutation) -> Matrix {
    let n = sigma.len();
    Matrix::from_fn(n, n, |i, j| if sigma.sigma[i] < j { 1.0 } else { 0.0 })
}

/// Two-dimensional prefix sums `C(i,j) = Σ_{i'<i, j'<j} y_{i'j'}`.
#[derive(Clone, Debug)]
pub struct PrefixMatrix {
    rows: usize,
    cols: usize,
    c: Vec<f64>,
}

impl PrefixMatrix {
    pub fn new(y: &Matrix) -> Result<Self> {
        if let Some((i, j)) = y.first_non_finite() {
            return Err(Error::NonFinite(i, j));
        }
        let (rows, cols) = (y.rows(), y.cols());
        let w = cols + 1;
        let mut c = vec![0.0; (rows + 1) * w];
        for i in 0..rows {
            let mut run = 0.0;
            for j in 0..cols {
                run += y[(i, j)];
                c[(i + 1) * w + j + 1] = c[i * w + j + 1] + run;
            }
        }
        Ok(PrefixMatrix { rows, cols, c })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.c[i * (self.cols + 1) + j]
    }

    /// `Σ_{i∈I, j∈J} y_{ij}`.
    pub fn box_sum(&self, i: Range<usize>, j: Range<usize>) -> f64 {
        debug_assert!(i.end <= self.rows && j.end <= self.cols);
        if i.start >= i.end || j.start >= j.end {
            return 0.0;
        }
        self.at(i.end, j.end) - self.at(i.start, j.end) - self.at(i.end, j.start)
            + self.at(i.start, j.start)
    }

    /// `d_Y(I,J)`, mean of `y` over `I × J`.
    pub fn density(&self, i: Range<usize>, j: Range<usize>) -> Result<f64> {
        let area = i.len() * j.len();
        if area == 0 {
            return Err(Error::EmptySet("interval"));
        }
        Ok(self.box_sum(i, j) / area as f64)
    }
}

/// How the remainder of `n mod k` is placed in an equipartition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Remainder {
    /// Longer intervals first.
    Front,
    /// Longer intervals last.
    Back,
    /// Longer intervals spaced evenly.
    Spread,
}

/// Partition of `0..n` into consecutive intervals, by breakpoints
/// `0 = b₀ < b₁ < … < b_k = n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalPartition {
    breakpoints: Vec<usize>,
}

impl IntervalPartition {
    pub fn new(breakpoints: Vec<usize>) -> Result<Self> {
        if breakpoints.len() < 2 || breakpoints[0] != 0 {
            return Err(domain("breakpoints must start at 0 and contain at least two entries"));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(domain("breakpoints must be strictly increasing"));
        }
        Ok(IntervalPartition { breakpoints })
    }

    /// Equipartition of `0..n` into `k` intervals.
    pub fn equipartition(n: usize, k: usize, rem: Remainder) -> Result<Self> {
        if k == 0 || k > n {
            return Err(domain(format!("cannot split {n} points into {k} intervals")));
        }
        let (base, r) = (n / k, n % k);
        let long = |j: usize| match rem {
            Remainder::Front => j < r,
            Remainder::Back => j >= k - r,
            Remainder::Spread => (j + 1) * r / k > j * r / k,
        };
        let mut b = vec![0];
        for j in 0..k {
            let last = b[j];
            b.push(last + base + usize::from(long(j)));
        }
        debug_assert_eq!(b[k], n);
        Ok(IntervalPartition { breakpoints: b })
    }

    pub fn singletons(n: usize) -> Result<Self> {
        Self::equipartition(n, n, Remainder::Front)
    }

    pub fn n(&self) -> usize {
        *self.breakpoints.last().expect("non-empty")
    }

    pub fn k(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn breakpoints(&self) -> &[usize] {
        &self.breakpoints
    }

    pub fn intervals(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        self.breakpoints.windows(2).map(|w| w[0]..w[1])
    }

    /// Every pair of intervals differs in length by at most one.
    pub fn is_equipartition(&self) -> bool {
        let lens: Vec<usize> = self.intervals().map(|r| r.len()).collect();
        let (lo, hi) = (lens.iter().min(), lens.iter().max());
        matches!((lo, hi), (Some(a), Some(b)) if b - a <= 1)
    }
}

/// Overlap of box `a` of a `k`-grid (`k ≤ n`) with the cells of an
/// `n`-grid: a run of full cells plus up to two partial cells.
struct Cover {
    full: Range<usize>,
    partial: [(usize, f64); 2],
}

fn cover(a: usize, k: usize, n: usize) -> Cover {
    // box spans [a·n/k, (a+1)·n/k) in cell units
    let (p0, p1) = (a * n, (a + 1) * n);
    let (lo, hi) = (p0 / k, p1 / k);
    let (r0, r1) = (p0 % k, p1 % k);
    let mut partial = [(0, 0.0); 2];
    let start = if r0 > 0 {
        partial[0] = (lo, (k - r0) as f64 / k as f64);
        lo + 1
    } else {
        lo
    };
    if r1 > 0 {
        partial[1] = (hi, r1 as f64 / k as f64);
    }
    Cover {
        full: start..hi,
        partial,
    }
}

fn pieces(c: &Cover) -> [(Range<usize>, f64); 3] {
    [
        (c.full.clone(), 1.0),
        (c.partial[0].0..c.partial[0].0 + 1, c.partial[0].1),
        (c.partial[1].0..c.partial[1].0 + 1, c.partial[1].1),
    ]
}

/// `‖f_k‖₂²`, where `f` is `Y` on `[0,1]²` with cells of side `1/n` and
/// `f_k` averages `f` over the boxes of the `k × k` grid. Box averages use
/// exact fractional cell overlaps, so `k` need not divide `n`.
pub fn stepfn_energy(y: &PrefixMatrix, k: u64) -> Result<f64> {
    let n = y.rows();
    if y.cols() != n {
        return Err(Error::ShapeMismatch("energy needs a square matrix".into()));
    }
    if k == 0 {
        return Err(domain("grid size must be positive"));
    }
    if n == 0 {
        return Ok(0.0);
    }
    if k <= n as u64 {
        Ok(energy_boxes(y, k as usize))
    } else {
        Ok(energy_gram(y, k))
    }
}

fn energy_boxes(y: &PrefixMatrix, k: usize) -> f64 {
    let n = y.rows();
    let len = n as f64 / k as f64;
    let covers: Vec<Cover> = (0..k).map(|a| cover(a, k, n)).collect();
    let mut total = 0.0;
    for ca in &covers {
        let pa = pieces(ca);
        for cb in &covers {
            let pb = pieces(cb);
            let mut s = 0.0;
            for (ra, wa) in &pa {
                if *wa == 0.0 {
                    continue;
                }
                for (rb, wb) in &pb {
                    if *wb != 0.0 {
                        s += wa * wb * y.box_sum(ra.clone(), rb.clone());
                    }
                }
            }
            total += s * s;
        }
    }
    // box area len²/n², average s/len², energy area·avg²
    total / (len * len * (n * n) as f64)
}

/// `k > n`: every box meets at most two cells per axis, so `WᵀW` is
/// tridiagonal and the energy is `k²/n⁴ · tr(Y G Yᵀ G)`.
fn energy_gram(y: &PrefixMatrix, k: u64) -> f64 {
    let n = y.rows();
    let (nn, kk) = (n as u128, k as u128);
    let kf = k as f64;
    let len = n as f64 / kf;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    for (i, d) in diag.iter_mut().enumerate() {
        // boxes a with a·n ≥ i·k and (a+1)·n ≤ (i+1)·k
        let first = (i as u128 * kk).div_ceil(nn);
        let last = ((i as u128 + 1) * kk) / nn;
        let full = last.saturating_sub(first);
        *d += full as f64 * len * len;
    }
    for c in 1..n {
        let ck = c as u128 * kk;
        if ck % nn != 0 {
            let a = ck / nn;
            let left = (ck - a * nn) as f64 / kf;
            let right = ((a + 1) * nn - ck) as f64 / kf;
            diag[c - 1] += left * left;
            diag[c] += right * right;
            off[c - 1] += left * right;
        }
    }
    let cell = |i: usize, j: usize| y.box_sum(i..i + 1, j..j + 1);
    // M = Y G, then tr(M Yᵀ G) = Σ_{i,i'} G_{i i'} (M Yᵀ)_{i' i}
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut v = cell(i, j) * diag[j];
            if j > 0 {
                v += cell(i, j - 1) * off[j - 1];
            }
            if j + 1 < n {
                v += cell(i, j + 1) * off[j];
            }
            m[i * n + j] = v;
        }
    }
    let myt = |ip: usize, i: usize| -> f64 { (0..n).map(|j| m[ip * n + j] * cell(i, j)).sum() };
    let mut tr = 0.0;
    for i in 0..n {
        tr += diag[i] * myt(i, i);
        if i + 1 < n {
            tr += off[i] * (myt(i, i + 1) + myt(i + 1, i));
        }
    }
    kf * kf / (n as f64).powi(4) * tr
}

/// Grid mode or the singleton fallback.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IntervalMode {
    Grid,
    Singletons,
}

/// Output of [`select_interval_k`].
#[derive(Clone, Debug, Serialize)]
pub struct IntervalSelection {
    /// Number of intervals to use (`n` in singleton mode).
    pub k: usize,
    pub mode: IntervalMode,
    /// Ratio `q = ⌈16ε⁻³⌉` of the geometric scan.
    pub q: u64,
    /// Accepted scan index `i`, with grid size `m·qⁱ`.
    pub steps: usize,
    /// Grid size accepted by the scan before any fallback.
    pub grid_k: u64,
    /// `(k, ‖f_k‖₂²)` for every grid visited.
    pub energies: Vec<(u64, f64)>,
}

/// Scan `k = m, mq, mq², …` for the first `k` with
/// `‖f_{kq}‖₂² ≤ ‖f_k‖₂² + ε⁵/4`. Falls back to singletons when `k > n` or
/// `n < 100k³ε⁻³`.
pub fn select_interval_k(y: &PrefixMatrix, eps: f64, m: u64) -> Result<IntervalSelection> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(domain(format!("eps must lie in (0, 1], got {eps}")));
    }
    if m == 0 {
        return Err(domain("m must be positive"));
    }
    let n = y.rows();
    let q = (16.0 / eps.powi(3) - 1e-9).ceil() as u64;
    let gain = eps.powi(5) / 4.0;
    let max_steps = (4.0 / eps.powi(5) - 1e-9).ceil() as usize;
    // energies of grids that are multiples of n equal ‖f‖₂²
    let limit = if n == 0 { 0.0 } else { stepfn_energy(y, n as u64)? };
    let energy = |k: Option<u64>| -> Result<f64> {
        match k {
            Some(k) if k <= (n as u64).saturating_mul(1 << 40) => stepfn_energy(y, k),
            _ => Ok(limit),
        }
    };
    let mut energies = Vec::new();
    let mut k = Some(m);
    let mut e_k = energy(k)?;
    energies.push((m, e_k));
    let mut i = 0;
    let grid_k = loop {
        assert!(i < max_steps, "scan exceeded its step bound");
        let next = k.and_then(|k| k.checked_mul(q));
        let e_next = energy(next)?;
        if let Some(kn) = next {
            energies.push((kn, e_next));
        }
        if e_next <= e_k + gain {
            break k.unwrap_or(u64::MAX);
        }
        k = next;
        e_k = e_next;
        i += 1;
    };
    let kf = grid_k as f64;
    let grid_ok = grid_k <= n as u64 && n as f64 >= 100.0 * kf.powi(3) / eps.powi(3);
    let (k, mode) = if grid_ok {
        (grid_k as usize, IntervalMode::Grid)
    } else {
        (n, IntervalMode::Singletons)
    };
    Ok(IntervalSelection {
        k,
        mode,
        q,
        steps: i,
        grid_k,
        energies,
    })
}

/// A pair of subintervals `(A, B)` violating interval regularity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntervalWitness {
    pub a: Range<usize>,
    pub b: Range<usize>,
    pub d_ab: f64,
    pub d_ij: f64,
}

/// Smallest admissible subinterval length `⌈ε|I|⌉` (at least 1).
pub fn interval_floor(eps: f64, len: usize) -> usize {
    ((eps * len as f64 - 1e-9).ceil() as usize).max(1)
}

/// Exhaustive scan of subintervals `A ⊆ I`, `B ⊆ J` with `|A| ≥ ⌈ε|I|⌉`,
/// `|B| ≥ ⌈ε|J|⌉`. Returns the first `(A, B)` in lexicographic order of
/// `(A.start, A.end, B.start, B.end)` with `|d(A,B) − d(I,J)| > ε`.
pub fn check_interval_pair(
    y: &PrefixMatrix,
    i: Range<usize>,
    j: Range<usize>,
    eps: f64,
) -> Result<Option<IntervalWitness>> {
    if i.end > y.rows() || j.end > y.cols() {
        return Err(Error::ShapeMismatch("interval outside the matrix".into()));
    }
    if i.is_empty() || j.is_empty() {
        return Ok(None);
    }
    let d_ij = y.density(i.clone(), j.clone())?;
    let (fa, fb) = (interval_floor(eps, i.len()), interval_floor(eps, j.len()));
    if fa > i.len() || fb > j.len() {
        return Ok(None);
    }
    for a0 in i.start..=i.end - fa {
        for a1 in a0 + fa..=i.end {
            for b0 in j.start..=j.end - fb {
                for b1 in b0 + fb..=j.end {
                    let area = ((a1 - a0) * (b1 - b0)) as f64;
                    let d_ab = y.box_sum(a0..a1, b0..b1) / area;
                    if (d_ab - d_ij).abs() > eps + 1e-12 {
                        return Ok(Some(IntervalWitness {
                            a: a0..a1,
                            b: b0..b1,
                            d_ab,
                            d_ij,
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Result of [`check_interval_partition`].
#[derive(Clone, Debug, Serialize)]
pub struct IntervalVerdict {
    pub regular: bool,
    /// Failing ordered pairs, diagonal included.
    pub failing_pairs: usize,
    pub k: usize,
}

/// Regular iff at most `εk²` ordered interval pairs fail
/// [`check_interval_pair`].
pub fn check_interval_partition(
    y: &PrefixMatrix,
    p: &IntervalPartition,
    eps: f64,
) -> Result<IntervalVerdict> {
    if p.n() != y.rows() || p.n() != y.cols() {
        return Err(Error::ShapeMismatch("partition does not cover the matrix".into()));
    }
    let parts: Vec<Range<usize>> = p.intervals().collect();
    let mut failing = 0;
    for i in &parts {
        for j in &parts {
            if check_interval_pair(y, i.clone(), j.clone(), eps)?.is_some() {
                failing += 1;
            }
        }
    }
    let k = parts.len();
    Ok(IntervalVerdict {
        regular: failing as f64 <= eps * (k * k) as f64 + 1e-9,
        failing_pairs: failing,
        k,
    })
}
