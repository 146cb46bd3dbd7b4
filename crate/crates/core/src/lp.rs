//! Feasibility of the atom-mass linear programs behind pair regularity.
//!
//! For one side with atoms of sizes `s_I`, a target `(u, u₁, …, u_k)` and a
//! tolerance `a`, find masses `x_I` with
//!
//! ```text
//! 0 ≤ x_I ≤ s_I,   |Σ_I x_I − u| ≤ a,   |Σ_{I ∋ i} x_I − u_i| ≤ a.
//! ```
//!
//! Solved by a dense phase-1 simplex with Bland's rule, in exact rational
//! arithmetic up to [`EXACT_ATOM_LIMIT`] atoms and in `f64` above.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Atom counts up to this use exact rationals.
pub const EXACT_ATOM_LIMIT: usize = 20;

/// Accepted constraint violation of floating solutions.
pub const FLOAT_SLACK: f64 = 1e-7;

const FLOAT_TOL: f64 = 1e-9;
const FLOAT_PIVOT_CAP: usize = 100_000;

/// One side of the common refinement: atom sizes and, per atom, membership
/// in each of the `k` sets.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AtomSystem {
    pub sizes: Vec<f64>,
    pub membership: Vec<Vec<bool>>,
}

impl AtomSystem {
    pub fn new(sizes: Vec<f64>, membership: Vec<Vec<bool>>) -> Self {
        assert_eq!(sizes.len(), membership.len(), "one signature per atom");
        AtomSystem { sizes, membership }
    }

    pub fn atoms(&self) -> usize {
        self.sizes.len()
    }

    /// Number of sets `k` (0 when there are no atoms).
    pub fn sets(&self) -> usize {
        self.membership.first().map_or(0, Vec::len)
    }

    /// Range rows for target `(u, uᵢ)` and tolerance `a`.
    pub fn rows(&self, u: f64, ui: &[f64], tol: f64) -> Vec<RangeRow> {
        let mut rows = vec![RangeRow {
            atoms: (0..self.atoms()).collect(),
            lo: u - tol,
            hi: u + tol,
        }];
        for (i, &t) in ui.iter().enumerate() {
            rows.push(RangeRow {
                atoms: (0..self.atoms()).filter(|&a| self.membership[a][i]).collect(),
                lo: t - tol,
                hi: t + tol,
            });
        }
        rows
    }
}

/// `lo ≤ Σ_{I ∈ atoms} x_I ≤ hi`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RangeRow {
    pub atoms: Vec<usize>,
    pub lo: f64,
    pub hi: f64,
}

/// Rounded target masses `u, uᵢ` on `X` and `w, wᵢ` on `Y`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeasibleSequence {
    pub u: f64,
    pub u_i: Vec<f64>,
    pub w: f64,
    pub w_i: Vec<f64>,
    pub granularity_x: usize,
    pub granularity_y: usize,
}

/// Fractional vertex weighting aggregated per atom.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AtomWeights {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// Solve both sides of a sequence. The sides share no variables, so they are
/// independent systems.
pub fn feasibility_lp(
    atoms_x: &AtomSystem,
    atoms_y: &AtomSystem,
    seq: &FeasibleSequence,
    tol_x: f64,
    tol_y: f64,
) -> Option<AtomWeights> {
    let x = side_feasible(atoms_x, seq.u, &seq.u_i, tol_x)?;
    let y = side_feasible(atoms_y, seq.w, &seq.w_i, tol_y)?;
    Some(AtomWeights { x, y })
}

/// One side of [`feasibility_lp`].
pub fn side_feasible(sys: &AtomSystem, u: f64, ui: &[f64], tol: f64) -> Option<Vec<f64>> {
    range_feasible(&sys.sizes, &sys.rows(u, ui, tol))
}

/// Find `0 ≤ x ≤ upper` meeting every range row, or `None`.
pub fn range_feasible(upper: &[f64], rows: &[RangeRow]) -> Option<Vec<f64>> {
    if upper.len() <= EXACT_ATOM_LIMIT {
        return phase_one::<BigRational>(upper, rows);
    }
    match phase_one_capped::<f64>(upper, rows, Some(FLOAT_PIVOT_CAP)) {
        Ok(r) => r.filter(|x| violation(upper, rows, x) <= FLOAT_SLACK),
        // cycling from rounding: settle it exactly
        Err(()) => phase_one::<BigRational>(upper, rows),
    }
}

/// Largest constraint violation of `x`.
pub fn violation(upper: &[f64], rows: &[RangeRow], x: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for (v, &s) in x.iter().zip(upper) {
        worst = worst.max(-v).max(v - s);
    }
    for r in rows {
        let sum: f64 = r.atoms.iter().map(|&a| x[a]).sum();
        worst = worst.max(r.lo - sum).max(sum - r.hi);
    }
    worst
}

/// Arithmetic the tableau needs.
pub trait Scalar:
    Clone
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_pos(&self) -> bool {
        *self > FLOAT_TOL
    }
    fn is_neg(&self) -> bool {
        *self < -FLOAT_TOL
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(|| BigRational::from_integer(BigInt::zero()))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_pos(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
}

fn phase_one<S: Scalar>(upper: &[f64], rows: &[RangeRow]) -> Option<Vec<f64>> {
    phase_one_capped::<S>(upper, rows, None).expect("uncapped simplex terminates")
}

/// Phase-1 simplex on `A x ≤ b, x ≥ 0` built from the range rows and the
/// upper bounds. `Err` when the pivot cap is hit.
fn phase_one_capped<S: Scalar>(
    upper: &[f64],
    rows: &[RangeRow],
    cap: Option<usize>,
) -> Result<Option<Vec<f64>>, ()> {
    let nv = upper.len();
    // (coefficients over the atom variables, rhs)
    let mut ineq: Vec<(Vec<f64>, f64)> = Vec::new();
    for r in rows {
        let mut hi = vec![0.0; nv];
        let mut lo = vec![0.0; nv];
        for &a in &r.atoms {
            hi[a] += 1.0;
            lo[a] -= 1.0;
        }
        ineq.push((hi, r.hi));
        ineq.push((lo, -r.lo));
    }
    for (i, &s) in upper.iter().enumerate() {
        let mut e = vec![0.0; nv];
        e[i] = 1.0;
        ineq.push((e, s));
    }
    let m = ineq.len();
    let needs_art: Vec<bool> = ineq.iter().map(|(_, b)| *b < 0.0).collect();
    let n_art = needs_art.iter().filter(|&&x| x).count();
    // columns: atoms | slacks | artificials | rhs
    let ncol = nv + m + n_art;
    let rhs = ncol;
    let mut t: Vec<Vec<S>> = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut next_art = nv + m;
    for (i, (coef, b)) in ineq.iter().enumerate() {
        let mut row = vec![S::zero(); ncol + 1];
        let sign = if needs_art[i] { -1.0 } else { 1.0 };
        for (j, &c) in coef.iter().enumerate() {
            if c != 0.0 {
                row[j] = S::from_f64(sign * c);
            }
        }
        row[nv + i] = S::from_f64(sign);
        row[rhs] = S::from_f64(sign * b);
        if needs_art[i] {
            row[next_art] = S::one();
            basis.push(next_art);
            next_art += 1;
        } else {
            basis.push(nv + i);
        }
        t.push(row);
    }
    // reduced costs of minimizing the artificial sum; obj[rhs] = −value
    let mut obj = vec![S::zero(); ncol + 1];
    for j in nv + m..ncol {
        obj[j] = S::one();
    }
    for (i, row) in t.iter().enumerate() {
        if basis[i] >= nv + m {
            for j in 0..=ncol {
                obj[j] = obj[j].clone() - row[j].clone();
            }
        }
    }

    let mut pivots = 0usize;
    loop {
        let Some(enter) = (0..ncol).find(|&j| obj[j].is_neg()) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best: Option<S> = None;
        for i in 0..m {
            if t[i][enter].is_pos() {
                let ratio = t[i][rhs].clone() / t[i][enter].clone();
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b || (!(ratio > *b) && basis[i] < basis[leave.expect("set")])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        // phase 1 is bounded below by 0, so some row always limits the step
        let r = leave.expect("phase-one objective is bounded");
        let p = t[r][enter].clone();
        for j in 0..=ncol {
            t[r][j] = t[r][j].clone() / p.clone();
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !is_zero(&row[enter]) {
                let f = row[enter].clone();
                for j in 0..=ncol {
                    if !is_zero(&pivot_row[j]) {
                        row[j] = row[j].clone() - f.clone() * pivot_row[j].clone();
                    }
                }
            }
        }
        if !is_zero(&obj[enter]) {
            let f = obj[enter].clone();
            for j in 0..=ncol {
                if !is_zero(&pivot_row[j]) {
                    obj[j] = obj[j].clone() - f.clone() * pivot_row[j].clone();
                }
            }
        }
        basis[r] = enter;
        pivots += 1;
        if cap.is_some_and(|c| pivots >= c) {
            return Err(());
        }
    }
    // remaining artificial mass is −obj[rhs]
    if (-obj[rhs].clone()).is_pos() {
        return Ok(None);
    }
    let mut x = vec![0.0; nv];
    for (i, &b) in basis.iter().enumerate() {
        if b < nv {
            x[b] = t[i][rhs].to_f64();
        }
    }
    Ok(Some(x))
}

fn is_zero<S: Scalar>(x: &S) -> bool {
    !x.is_pos() && !x.is_neg()
}
