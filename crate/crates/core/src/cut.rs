//! Cut norms, the cut metric and the "find a violating cut or certify
//! smallness" oracle used by every decomposition loop.
//!
//! All values here are unnormalized: `value = |Σ_{x∈S, y∈T} A(x, y)|`.

use crate::error::{Error, Result};
use crate::graph::{BipartiteWeightedGraph, Weighted, WeightedGraph};
use crate::matrix::Matrix;
use crate::set::VertexSet;
use serde::Serialize;

/// Absolute tolerance on unnormalized sums.
pub const CUT_TOL: f64 = 1e-9;

/// Row and column sums within this of zero count as zero and are left out
/// of optimal sets.
const ZERO_SUM: f64 = 1e-12;

/// Default bound on the enumerated side of the exact oracle.
pub const DEFAULT_EXACT_LIMIT: usize = 22;

/// Maximizing pair of a cut norm computation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutResult {
    pub value: f64,
    /// Σ over `S × T` with its sign, so `value == signed_sum.abs()`.
    pub signed_sum: f64,
    #[serde(rename = "S")]
    pub s: VertexSet,
    #[serde(rename = "T")]
    pub t: VertexSet,
    pub exact: bool,
}

impl CutResult {
    fn from_sets(a: &Matrix, s: VertexSet, t: VertexSet, exact: bool) -> Self {
        let signed_sum = a.block_sum(&s, &t);
        CutResult {
            value: signed_sum.abs(),
            signed_sum,
            s,
            t,
            exact,
        }
    }

    fn empty(a: &Matrix, exact: bool) -> Self {
        Self::from_sets(
            a,
            VertexSet::empty(a.rows()),
            VertexSet::empty(a.cols()),
            exact,
        )
    }
}

/// Exact cut norm `max_{S,T} |Σ_{S×T} A|`.
///
/// Enumerates subsets of the smaller side in Gray-code order with running
/// column sums; for a fixed side the optimal partner set is read off the
/// signs of those sums. Rows and columns whose sum is zero are left out of
/// the returned sets, which does not change the value. The value is
/// recomputed from the returned sets. A zero maximum is reported with
/// `S = T = ∅`.
pub fn exact_cut_norm(a: &Matrix, limit: usize) -> Result<CutResult> {
    let side = a.rows().min(a.cols());
    if side > limit || side > 62 {
        return Err(Error::SizeLimit {
            what: "cut norm enumeration side",
            size: side,
            limit: limit.min(62),
        });
    }
    if a.rows() > a.cols() {
        let r = exact_cut_norm(&a.transpose(), limit)?;
        return Ok(CutResult::from_sets(a, r.t, r.s, true));
    }
    let (rows, cols) = (a.rows(), a.cols());
    let mut colsum = vec![0.0f64; cols];
    // (value, mask, positive?) with the lowest mask and positive sign winning ties
    let mut best = (0.0f64, 0u64, true);
    let consider = |best: &mut (f64, u64, bool), value: f64, mask: u64, positive: bool| {
        let better = value > best.0 + CUT_TOL
            || ((value - best.0).abs() <= CUT_TOL && (mask, !positive) < (best.1, !best.2));
        if better {
            *best = (value, mask, positive);
        }
    };
    let evaluate = |colsum: &[f64]| {
        // four independent accumulators let the loop vectorize
        let (mut pos, mut neg) = ([0.0f64; 4], [0.0f64; 4]);
        let mut chunks = colsum.chunks_exact(4);
        for ch in &mut chunks {
            for l in 0..4 {
                pos[l] += ch[l].max(0.0);
                neg[l] -= ch[l].min(0.0);
            }
        }
        for &c in chunks.remainder() {
            pos[0] += c.max(0.0);
            neg[0] -= c.min(0.0);
        }
        ((pos[0] + pos[1]) + (pos[2] + pos[3]), (neg[0] + neg[1]) + (neg[2] + neg[3]))
    };
    let (p, q) = evaluate(&colsum);
    consider(&mut best, p, 0, true);
    consider(&mut best, q, 0, false);
    let mut mask = 0u64;
    for step in 1u64..(1u64 << rows) {
        let bit = step.trailing_zeros() as usize;
        mask ^= 1 << bit;
        let row = a.row(bit);
        if mask >> bit & 1 == 1 {
            for (c, r) in colsum.iter_mut().zip(row) {
                *c += r;
            }
        } else {
            for (c, r) in colsum.iter_mut().zip(row) {
                *c -= r;
            }
        }
        let (p, q) = evaluate(&colsum);
        consider(&mut best, p, mask, true);
        consider(&mut best, q, mask, false);
    }
    if best.0 <= CUT_TOL {
        return Ok(CutResult::empty(a, true));
    }
    let s = VertexSet::from_mask(rows, best.1);
    let t = best_partner(a, &s, best.2);
    // drop zero-sum rows, then zero-sum columns; neither step lowers the value
    let s = best_rows(a, &t, best.2);
    let t = best_partner(a, &s, best.2);
    Ok(CutResult::from_sets(a, s, t, true))
}

/// Columns whose sum over `rows` has the favored sign.
fn best_partner(a: &Matrix, rows: &VertexSet, positive: bool) -> VertexSet {
    let mut colsum = vec![0.0; a.cols()];
    for i in rows.iter() {
        for (c, r) in colsum.iter_mut().zip(a.row(i)) {
            *c += r;
        }
    }
    VertexSet::from_indices(
        a.cols(),
        colsum
            .iter()
            .enumerate()
            .filter(|(_, &c)| if positive { c > ZERO_SUM } else { c < -ZERO_SUM })
            .map(|(j, _)| j),
    )
}

/// Rows whose sum over `cols` has the favored sign.
fn best_rows(a: &Matrix, cols: &VertexSet, positive: bool) -> VertexSet {
    let cols: Vec<usize> = cols.to_vec();
    VertexSet::from_indices(
        a.rows(),
        (0..a.rows()).filter(|&i| {
            let r = a.row(i);
            let s: f64 = cols.iter().map(|&j| r[j]).sum();
            if positive {
                s > ZERO_SUM
            } else {
                s < -ZERO_SUM
            }
        }),
    )
}

/// Which starting row sets the alternating heuristic uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedPolicy {
    /// Every singleton row, all rows, and the positive-row-sum rows.
    Full,
    /// As `Full` but only the first `n` singleton rows.
    Singletons(usize),
}

impl Default for SeedPolicy {
    fn default() -> Self {
        SeedPolicy::Full
    }
}

const MAX_ALTERNATIONS: usize = 200;

/// Deterministic alternating maximization from a fixed seed family.
///
/// From each seed row set and each sign, alternately pick the best columns
/// for the rows and the best rows for the columns until the signed sum stops
/// improving. The best fixed point wins (ties: lexicographically smallest
/// `S`, then `T`). The result is a certified lower bound on the cut norm.
pub fn heuristic_cut(a: &Matrix, seeds: SeedPolicy) -> CutResult {
    let (rows, cols) = (a.rows(), a.cols());
    if rows == 0 || cols == 0 {
        return CutResult::empty(a, false);
    }
    let singles = match seeds {
        SeedPolicy::Full => rows,
        SeedPolicy::Singletons(k) => k.min(rows),
    };
    let mut seed_sets: Vec<VertexSet> = (0..singles)
        .map(|i| VertexSet::from_indices(rows, [i]))
        .collect();
    seed_sets.push(VertexSet::full(rows));
    seed_sets.push(VertexSet::from_indices(
        rows,
        (0..rows).filter(|&i| a.row(i).iter().sum::<f64>() > 0.0),
    ));

    let mut best: Option<CutResult> = None;
    for seed in &seed_sets {
        for positive in [true, false] {
            let sign = if positive { 1.0 } else { -1.0 };
            let mut s = seed.clone();
            let mut t = best_partner(a, &s, positive);
            let mut val = sign * a.block_sum(&s, &t);
            for _ in 0..MAX_ALTERNATIONS {
                let s2 = best_rows(a, &t, positive);
                let t2 = best_partner(a, &s2, positive);
                let v2 = sign * a.block_sum(&s2, &t2);
                if v2 <= val + CUT_TOL {
                    break;
                }
                s = s2;
                t = t2;
                val = v2;
            }
            let cand = CutResult::from_sets(a, s, t, false);
            let replace = match &best {
                None => true,
                Some(b) => {
                    cand.value > b.value + CUT_TOL
                        || ((cand.value - b.value).abs() <= CUT_TOL
                            && (&cand.s, &cand.t) < (&b.s, &b.t))
                }
            };
            if replace {
                best = Some(cand);
            }
        }
    }
    let best = best.expect("at least two seeds");
    if best.value <= CUT_TOL {
        CutResult::empty(a, false)
    } else {
        best
    }
}

/// How the oracle computes cut norms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMode {
    /// Exact whenever the smaller side is within `exact_limit`.
    Auto,
    Exact,
    Heuristic,
}

/// Oracle configuration shared by all decomposition loops.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CutOracle {
    pub mode: OracleMode,
    pub exact_limit: usize,
    pub seeds: SeedPolicy,
}

impl Default for CutOracle {
    fn default() -> Self {
        CutOracle {
            mode: OracleMode::Auto,
            exact_limit: DEFAULT_EXACT_LIMIT,
            seeds: SeedPolicy::Full,
        }
    }
}

impl CutOracle {
    pub fn exact() -> Self {
        CutOracle {
            mode: OracleMode::Exact,
            ..Default::default()
        }
    }

    pub fn heuristic() -> Self {
        CutOracle {
            mode: OracleMode::Heuristic,
            ..Default::default()
        }
    }

    pub fn with_exact_limit(mut self, limit: usize) -> Self {
        self.exact_limit = limit;
        self
    }

    /// Whether this configuration runs the exact algorithm on `a`.
    pub fn is_exact_for(&self, a: &Matrix) -> bool {
        match self.mode {
            OracleMode::Exact => true,
            OracleMode::Heuristic => false,
            OracleMode::Auto => a.rows().min(a.cols()) <= self.exact_limit,
        }
    }

    /// Cut norm of `a` in the configured regime.
    pub fn cut_norm(&self, a: &Matrix) -> Result<CutResult> {
        if self.is_exact_for(a) {
            exact_cut_norm(a, self.exact_limit)
        } else {
            Ok(heuristic_cut(a, self.seeds))
        }
    }

    /// Either certify `‖a‖ ≤ eps·normalizer` or return a cut exceeding it.
    ///
    /// A `BelowThreshold` verdict from the heuristic regime is uncertified.
    pub fn check(&self, a: &Matrix, eps: f64, normalizer: f64) -> Result<OracleVerdict> {
        if eps <= 0.0 {
            return Err(crate::error::domain("oracle threshold must be positive"));
        }
        let r = self.cut_norm(a)?;
        if r.value > eps * normalizer + CUT_TOL {
            Ok(OracleVerdict::Found(r))
        } else {
            Ok(OracleVerdict::BelowThreshold { certified: r.exact })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum OracleVerdict {
    BelowThreshold { certified: bool },
    Found(CutResult),
}

/// [`CutOracle::check`] with the given configuration.
pub fn cut_oracle(a: &Matrix, eps: f64, normalizer: f64, oracle: &CutOracle) -> Result<OracleVerdict> {
    oracle.check(a, eps, normalizer)
}

/// Cut metric value together with whether it is exact.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CutDistance {
    pub value: f64,
    pub exact: bool,
}

/// `d_□(G1, G2) = max_{U,W} |e_1(U,W) − e_2(U,W)| / n²`.
pub fn cut_metric(g1: &WeightedGraph, g2: &WeightedGraph, oracle: &CutOracle) -> Result<CutDistance> {
    if g1.n() != g2.n() {
        return Err(Error::ShapeMismatch(format!(
            "graphs on {} and {} vertices",
            g1.n(),
            g2.n()
        )));
    }
    matrix_cut_distance(g1.weights(), g2.weights(), oracle)
}

/// Bipartite cut metric, normalized by `|X||Y|`.
pub fn cut_metric_bipartite(
    g1: &BipartiteWeightedGraph,
    g2: &BipartiteWeightedGraph,
    oracle: &CutOracle,
) -> Result<CutDistance> {
    if (g1.nx(), g1.ny()) != (g2.nx(), g2.ny()) {
        return Err(Error::ShapeMismatch("bipartite sides differ".into()));
    }
    matrix_cut_distance(g1.weights(), g2.weights(), oracle)
}

pub(crate) fn matrix_cut_distance(a: &Matrix, b: &Matrix, oracle: &CutOracle) -> Result<CutDistance> {
    let norm = (a.rows() * a.cols()) as f64;
    if norm == 0.0 {
        return Ok(CutDistance {
            value: 0.0,
            exact: true,
        });
    }
    let r = oracle.cut_norm(&a.sub(b))?;
    Ok(CutDistance {
        value: r.value / norm,
        exact: r.exact,
    })
}
