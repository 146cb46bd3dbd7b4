//! Frieze–Kannan cut decompositions and FK-regular partitions.
//!
//! The loop keeps the residual `R = G − G'` explicitly. While the oracle
//! finds a cut `(S, T)` with `|Σ_{S×T} R| > ε·N`, a term `c·K_{S,T}` is
//! subtracted from `R` and appended to the decomposition.
//!
//! On square shapes `c = σ / (|S||T| + |S∩T|²)`, the least-squares
//! coefficient for the symmetric `K_{S,T}` (which doubles pairs inside
//! `S ∩ T`). Its energy drop `2σ² / (|S||T| + |S∩T|²)` is at least
//! `σ²/(|S||T|) ≥ ε²n²`, so for weights in `[−1, 1]` at most `⌈ε⁻²⌉` steps
//! run under an exact oracle. On bipartite shapes `c = σ / (|S||T|)`.

use crate::cut::{CutOracle, OracleVerdict, CUT_TOL};
use crate::error::{domain, Error, Result};
use crate::graph::{
    add_term, common_refinement, BipartiteWeightedGraph, CutDecomposition, CutTerm, Shape,
    VertexPartition, Weighted, WeightedGraph,
};
use crate::matrix::Matrix;
use crate::set::VertexSet;
use serde::Serialize;

/// Per-run record of the decomposition loop.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FKTrace {
    pub iterations: usize,
    /// `Σ residual²` before the first and after every step.
    pub energy_sequence: Vec<f64>,
    /// The final below-threshold verdict came from the exact oracle.
    pub certified: bool,
    /// The loop ended on a below-threshold verdict rather than a term cap.
    pub converged: bool,
}

/// `⌈ε⁻²⌉`, the step bound of the variable-step loop under an exact oracle.
pub fn iteration_bound(eps: f64) -> usize {
    (1.0 / (eps * eps) - 1e-9).ceil() as usize
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(domain(format!("eps must lie in (0, 1], got {eps}")));
    }
    Ok(())
}

/// Step rule of the decomposition loop.
#[derive(Clone, Copy, Debug)]
enum Step {
    Variable,
    Fixed { step: f64, max_stall: usize, max_iterations: usize },
}

fn run_loop(
    w: &Matrix,
    shape: Shape,
    base: f64,
    eps: f64,
    oracle: &CutOracle,
    rule: Step,
    max_terms: Option<usize>,
) -> Result<(CutDecomposition, FKTrace)> {
    if let Some((i, j)) = w.first_non_finite() {
        return Err(Error::NonFinite(i, j));
    }
    let normalizer = shape.normalizer();
    let mut dec = CutDecomposition::constant(shape, base);
    let mut residual = Matrix::from_fn(w.rows(), w.cols(), |i, j| w[(i, j)] - base);
    let mut energy = vec![residual.frobenius_sq()];
    let mut stall = 0usize;
    let mut best = energy[0];
    loop {
        if max_terms.is_some_and(|m| dec.len() >= m) {
            let trace = FKTrace {
                iterations: dec.len(),
                energy_sequence: energy,
                certified: false,
                converged: false,
            };
            return Ok((dec, trace));
        }
        if normalizer == 0.0 {
            let trace = FKTrace {
                iterations: 0,
                energy_sequence: energy,
                certified: true,
                converged: true,
            };
            return Ok((dec, trace));
        }
        let found = match oracle.check(&residual, eps, normalizer)? {
            OracleVerdict::BelowThreshold { certified } => {
                let trace = FKTrace {
                    iterations: dec.len(),
                    energy_sequence: energy,
                    certified,
                    converged: true,
                };
                return Ok((dec, trace));
            }
            OracleVerdict::Found(r) => r,
        };
        let (s, t, sigma) = (found.s, found.t, found.signed_sum);
        let st = (s.len() * t.len()) as f64;
        let fitted = match shape {
            Shape::Square { .. } => {
                let overlap = s.intersection_len(&t) as f64;
                sigma / (st + overlap * overlap)
            }
            Shape::Bipartite { .. } => sigma / st,
        };
        let c = match rule {
            Step::Variable => fitted,
            Step::Fixed { step, .. } => step.copysign(sigma),
        };
        let term = CutTerm { s, t, c };
        add_term(&mut residual, shape, &term, -1.0);
        dec.terms.push(term);
        let e = residual.frobenius_sq();
        let prev = *energy.last().expect("nonempty");
        energy.push(e);
        match rule {
            Step::Variable => {
                debug_assert!(e < prev + CUT_TOL, "variable-step energy rose");
            }
            Step::Fixed { step, max_stall, max_iterations } => {
                if step <= fitted.abs() {
                    debug_assert!(e <= prev + CUT_TOL, "fixed step below the cut average raised energy");
                }
                // an overshooting step tends to oscillate, so a stall is a run
                // of steps that fail to reach a new minimum energy
                if e < best {
                    best = e;
                    stall = 0;
                } else {
                    stall += 1;
                    if stall >= max_stall {
                        return Err(Error::Stalled(stall));
                    }
                }
                if dec.len() >= max_iterations {
                    return Err(Error::Budget {
                        what: "fixed-step iterations",
                        estimate: dec.len() as f64 + 1.0,
                        budget: max_iterations as f64,
                    });
                }
            }
        }
    }
}

/// Variable-step decomposition of a graph: `G ≈ d(G) + Σ cᵢK_{Sᵢ,Tᵢ}` with
/// `‖G − G'‖_□ ≤ ε n²` when the returned trace is certified.
pub fn fk_decompose(
    g: &WeightedGraph,
    eps: f64,
    oracle: &CutOracle,
) -> Result<(CutDecomposition, FKTrace)> {
    check_eps(eps)?;
    let n = g.n();
    run_loop(
        g.weights(),
        Shape::Square { n },
        g.overall_density(),
        eps,
        oracle,
        Step::Variable,
        None,
    )
}

/// Variable-step decomposition of a bipartite graph around `d(X, Y)` with
/// terms `c·1_S 1_Tᵀ`, `S ⊆ X`, `T ⊆ Y`.
///
/// With `max_terms = Some(m)` the loop stops after `m` terms even if the
/// residual is still above threshold (`converged = false`).
pub fn fk_decompose_bipartite(
    g: &BipartiteWeightedGraph,
    eps: f64,
    oracle: &CutOracle,
    max_terms: Option<usize>,
) -> Result<(CutDecomposition, FKTrace)> {
    check_eps(eps)?;
    run_loop(
        g.weights(),
        Shape::Bipartite { nx: g.nx(), ny: g.ny() },
        g.overall_density(),
        eps,
        oracle,
        Step::Variable,
        max_terms,
    )
}

/// `ε⁸ / 300`.
pub fn default_step(eps: f64) -> f64 {
    eps.powi(8) / 300.0
}

/// Settings of [`fk_decompose_fixed_step`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedStep {
    pub step: f64,
    /// Consecutive steps without a new minimum energy tolerated before
    /// giving up.
    pub max_stall: usize,
    pub max_iterations: usize,
}

impl FixedStep {
    pub fn for_eps(eps: f64) -> Self {
        FixedStep {
            step: default_step(eps),
            max_stall: 10,
            max_iterations: 1_000_000,
        }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }
}

/// Decomposition with every coefficient equal to `±step`, the sign taken from
/// the violating cut. The realized weight bound is `|d(G)| + 2·step·r`.
pub fn fk_decompose_fixed_step(
    g: &WeightedGraph,
    eps: f64,
    opts: FixedStep,
    oracle: &CutOracle,
) -> Result<(CutDecomposition, FKTrace)> {
    check_eps(eps)?;
    if !(opts.step > 0.0 && opts.step.is_finite()) {
        return Err(domain(format!("step must be positive, got {}", opts.step)));
    }
    if opts.max_stall == 0 {
        return Err(domain("max_stall must be at least 1"));
    }
    let n = g.n();
    run_loop(
        g.weights(),
        Shape::Square { n },
        g.overall_density(),
        eps,
        oracle,
        Step::Fixed {
            step: opts.step,
            max_stall: opts.max_stall,
            max_iterations: opts.max_iterations,
        },
        None,
    )
}

/// Output of [`fk_partition`].
#[derive(Clone, Debug, Serialize)]
pub struct FkPartition {
    pub partition: VertexPartition,
    pub decomposition: CutDecomposition,
    pub trace: FKTrace,
    /// `‖G − G_P‖_□ / n²` as computed by the oracle.
    pub distance: f64,
    /// The distance is exact and at most `eps`.
    pub certified: bool,
    /// `4^k` for the `k` decomposition terms.
    pub refinement_bound: f64,
    /// `2 / ε²`, the base-2 logarithm of the classical part bound.
    pub classical_bound_log2: f64,
}

/// FK-regular partition: decompose at `eps / 2`, take the common refinement
/// of all `Sᵢ, Tᵢ`, and verify `d_□(G, G_P) ≤ eps` with the oracle.
pub fn fk_partition(g: &WeightedGraph, eps: f64, oracle: &CutOracle) -> Result<FkPartition> {
    check_eps(eps)?;
    let (dec, trace) = fk_decompose(g, eps / 2.0, oracle)?;
    let sets: Vec<VertexSet> = dec
        .terms
        .iter()
        .flat_map(|t| [t.s.clone(), t.t.clone()])
        .collect();
    let partition = common_refinement(g.n(), &sets);
    let averaged = g.averaged(&partition)?;
    let diff = g.weights().sub(averaged.weights());
    let r = oracle.cut_norm(&diff)?;
    let norm = (g.n() * g.n()).max(1) as f64;
    let distance = r.value / norm;
    Ok(FkPartition {
        certified: r.exact && distance <= eps + CUT_TOL / norm,
        refinement_bound: 4f64.powi(dec.len() as i32),
        classical_bound_log2: 2.0 / (eps * eps),
        partition,
        decomposition: dec,
        trace,
        distance,
    })
}

/// `|e(S,T) − Σ_{i,j} d(Vᵢ,Vⱼ)|S∩Vᵢ||T∩Vⱼ||`, unnormalized.
pub fn fk_violation(
    g: &WeightedGraph,
    p: &VertexPartition,
    s: &VertexSet,
    t: &VertexSet,
) -> Result<f64> {
    if p.n() != g.n() {
        return Err(Error::ShapeMismatch("partition universe differs from graph".into()));
    }
    let blocks: Vec<&VertexSet> = p.blocks().iter().filter(|b| !b.is_empty()).collect();
    let mut predicted = 0.0;
    for bi in &blocks {
        let si = s.intersection_len(bi) as f64;
        if si == 0.0 {
            continue;
        }
        for bj in &blocks {
            let tj = t.intersection_len(bj) as f64;
            if tj == 0.0 {
                continue;
            }
            predicted += g.density(bi, bj)? * si * tj;
        }
    }
    Ok((g.edge_count(s, t) - predicted).abs())
}
