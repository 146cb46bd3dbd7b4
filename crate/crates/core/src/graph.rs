//! Graph, bipartite graph and partition data model.
//!
//! Edge counts use the ordered-pair convention: `e(X, Y)` sums `w(x, y)` over
//! all `(x, y) ∈ X × Y`, so an edge inside `X ∩ Y` is counted once per order.
//! Diagonal entries are kept as stored; simple graphs have a zero diagonal
//! while constant comparison graphs carry their value on the diagonal too.

use crate::error::{domain, Error, Result};
use crate::matrix::Matrix;
use crate::set::VertexSet;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Symmetric tolerance when validating user-supplied matrices.
const SYMMETRY_TOL: f64 = 1e-12;

/// Anything that carries a weight matrix whose rows and columns are vertices.
pub trait Weighted {
    fn weights(&self) -> &Matrix;

    /// Σ_{x∈X, y∈Y} w(x,y). Empty sides give 0.
    fn edge_count(&self, x: &VertexSet, y: &VertexSet) -> f64 {
        self.weights().block_sum(x, y)
    }

    /// `e(X,Y) / (|X||Y|)`.
    fn density(&self, x: &VertexSet, y: &VertexSet) -> Result<f64> {
        if x.is_empty() {
            return Err(Error::EmptySet("density row side"));
        }
        if y.is_empty() {
            return Err(Error::EmptySet("density column side"));
        }
        Ok(self.edge_count(x, y) / (x.len() * y.len()) as f64)
    }

    /// Errors unless every weight lies in `[0, 1]`.
    fn check_unit_weights(&self) -> Result<()> {
        let w = self.weights();
        for i in 0..w.rows() {
            for (j, &v) in w.row(i).iter().enumerate() {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::NotSimple {
                        row: i,
                        col: j,
                        weight: v,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Edge-weighted graph on `0..n` with a symmetric weight matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    w: Matrix,
    weight_bound: f64,
}

impl WeightedGraph {
    pub fn new(w: Matrix) -> Result<Self> {
        if w.rows() != w.cols() {
            return Err(Error::ShapeMismatch(format!(
                "graph matrix must be square, got {}x{}",
                w.rows(),
                w.cols()
            )));
        }
        if let Some((i, j)) = w.first_non_finite() {
            return Err(Error::NonFinite(i, j));
        }
        for i in 0..w.rows() {
            for j in 0..i {
                let (a, b) = (w[(i, j)], w[(j, i)]);
                if (a - b).abs() > SYMMETRY_TOL * (1.0 + a.abs().max(b.abs())) {
                    return Err(domain(format!("weights not symmetric at ({i}, {j})")));
                }
            }
        }
        let weight_bound = w.max_abs();
        Ok(WeightedGraph { w, weight_bound })
    }

    /// Simple graph from an undirected edge list. Self-loops are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut w = Matrix::zeros(n, n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(domain(format!("edge ({u}, {v}) outside 0..{n}")));
            }
            if u == v {
                return Err(domain(format!("self-loop at {u}")));
            }
            w[(u, v)] = 1.0;
            w[(v, u)] = 1.0;
        }
        Ok(WeightedGraph {
            weight_bound: if edges.is_empty() { 0.0 } else { 1.0 },
            w,
        })
    }

    pub fn empty(n: usize) -> Self {
        WeightedGraph {
            w: Matrix::zeros(n, n),
            weight_bound: 0.0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let w = Matrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { 1.0 });
        WeightedGraph {
            weight_bound: if n > 1 { 1.0 } else { 0.0 },
            w,
        }
    }

    pub fn n(&self) -> usize {
        self.w.rows()
    }

    pub fn weight(&self, x: usize, y: usize) -> f64 {
        self.w[(x, y)]
    }

    pub fn weight_bound(&self) -> f64 {
        self.weight_bound
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    /// `d(G) = e(V,V) / n²`.
    pub fn overall_density(&self) -> f64 {
        let n = self.n();
        if n == 0 {
            0.0
        } else {
            self.w.sum() / (n * n) as f64
        }
    }

    /// Bipartite graph induced between `X` (rows) and `Y` (columns).
    pub fn between(&self, x: &VertexSet, y: &VertexSet) -> BipartiteWeightedGraph {
        let m = self.w.select(&x.to_vec(), &y.to_vec());
        BipartiteWeightedGraph::from_matrix_unchecked(m)
    }

    /// The averaged graph `G_P`: every block pair carries its density.
    pub fn averaged(&self, p: &VertexPartition) -> Result<WeightedGraph> {
        if p.n() != self.n() {
            return Err(Error::ShapeMismatch("partition universe differs from graph".into()));
        }
        let blocks: Vec<&VertexSet> = p.blocks().iter().filter(|b| !b.is_empty()).collect();
        let mut owner = vec![0usize; self.n()];
        for (bi, b) in blocks.iter().enumerate() {
            for v in b.iter() {
                owner[v] = bi;
            }
        }
        let t = blocks.len();
        let mut d = vec![0.0; t * t];
        for i in 0..t {
            for j in 0..t {
                d[i * t + j] = self.density(blocks[i], blocks[j])?;
            }
        }
        let w = Matrix::from_fn(self.n(), self.n(), |x, y| d[owner[x] * t + owner[y]]);
        WeightedGraph::new(w)
    }
}

impl Weighted for WeightedGraph {
    fn weights(&self) -> &Matrix {
        &self.w
    }
}

/// Edge-weighted bipartite graph between `X = 0..nx` and `Y = 0..ny`.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteWeightedGraph {
    w: Matrix,
    weight_bound: f64,
}

impl BipartiteWeightedGraph {
    pub fn new(w: Matrix) -> Result<Self> {
        if let Some((i, j)) = w.first_non_finite() {
            return Err(Error::NonFinite(i, j));
        }
        Ok(Self::from_matrix_unchecked(w))
    }

    fn from_matrix_unchecked(w: Matrix) -> Self {
        let weight_bound = w.max_abs();
        BipartiteWeightedGraph { w, weight_bound }
    }

    pub fn from_edges(nx: usize, ny: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut w = Matrix::zeros(nx, ny);
        for &(x, y) in edges {
            if x >= nx || y >= ny {
                return Err(domain(format!("edge ({x}, {y}) outside {nx}x{ny}")));
            }
            w[(x, y)] = 1.0;
        }
        Ok(Self::from_matrix_unchecked(w))
    }

    pub fn nx(&self) -> usize {
        self.w.rows()
    }

    pub fn ny(&self) -> usize {
        self.w.cols()
    }

    pub fn weight_bound(&self) -> f64 {
        self.weight_bound
    }

    pub fn x_side(&self) -> VertexSet {
        VertexSet::full(self.nx())
    }

    pub fn y_side(&self) -> VertexSet {
        VertexSet::full(self.ny())
    }

    /// `d(X, Y)` over the full sides.
    pub fn overall_density(&self) -> f64 {
        if self.nx() == 0 || self.ny() == 0 {
            0.0
        } else {
            self.w.sum() / (self.nx() * self.ny()) as f64
        }
    }

    /// Swap the roles of `X` and `Y`.
    pub fn transpose(&self) -> BipartiteWeightedGraph {
        BipartiteWeightedGraph {
            w: self.w.transpose(),
            weight_bound: self.weight_bound,
        }
    }
}

impl Weighted for BipartiteWeightedGraph {
    fn weights(&self) -> &Matrix {
        &self.w
    }
}

/// Ordered list of disjoint blocks covering `0..n`. Blocks may be empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPartition {
    n: usize,
    blocks: Vec<VertexSet>,
}

impl VertexPartition {
    pub fn new(n: usize, blocks: Vec<VertexSet>) -> Result<Self> {
        let mut seen = VertexSet::empty(n);
        for (bi, b) in blocks.iter().enumerate() {
            if b.universe() != n {
                return Err(Error::ShapeMismatch(format!(
                    "block {bi} lives in universe {} not {n}",
                    b.universe()
                )));
            }
            if seen.intersection_len(b) > 0 {
                return Err(domain(format!("block {bi} overlaps an earlier block")));
            }
            seen = seen.union(b);
        }
        if seen.len() != n {
            return Err(domain(format!("blocks cover {} of {n} vertices", seen.len())));
        }
        Ok(VertexPartition { n, blocks })
    }

    pub fn from_lists(n: usize, lists: &[Vec<usize>]) -> Result<Self> {
        let mut blocks = Vec::with_capacity(lists.len());
        for l in lists {
            if let Some(&bad) = l.iter().find(|&&v| v >= n) {
                return Err(domain(format!("vertex {bad} outside 0..{n}")));
            }
            blocks.push(VertexSet::from_indices(n, l.iter().copied()));
        }
        Self::new(n, blocks)
    }

    pub fn trivial(n: usize) -> Self {
        VertexPartition {
            n,
            blocks: vec![VertexSet::full(n)],
        }
    }

    pub fn singletons(n: usize) -> Self {
        VertexPartition {
            n,
            blocks: (0..n).map(|v| VertexSet::from_indices(n, [v])).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[VertexSet] {
        &self.blocks
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(VertexSet::len).collect()
    }

    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(VertexSet::to_vec).collect()
    }

    pub fn is_equitable(&self) -> bool {
        let sizes = self.sizes();
        match (sizes.iter().max(), sizes.iter().min()) {
            (Some(max), Some(min)) => max - min <= 1,
            _ => true,
        }
    }

    /// Block index of every vertex.
    pub fn owners(&self) -> Vec<usize> {
        let mut owner = vec![0; self.n];
        for (bi, b) in self.blocks.iter().enumerate() {
            for v in b.iter() {
                owner[v] = bi;
            }
        }
        owner
    }

    /// True if every block of `self` lies inside one block of `coarser`.
    pub fn refines(&self, coarser: &VertexPartition) -> bool {
        let owner = coarser.owners();
        self.blocks.iter().all(|b| {
            let mut it = b.iter();
            match it.next() {
                None => true,
                Some(first) => it.all(|v| owner[v] == owner[first]),
            }
        })
    }
}

impl Serialize for VertexPartition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_lists().serialize(s)
    }
}

/// Atoms of the common refinement of `sets` over `0..n`.
///
/// Atom `S_I` collects the vertices whose membership signature across the
/// sets is exactly `I`. Empty atoms are dropped and the rest are ordered by
/// signature read as a binary number (set `i` is bit `i`).
pub fn common_refinement(n: usize, sets: &[VertexSet]) -> VertexPartition {
    let words = sets.len().div_ceil(64).max(1);
    let mut atoms: BTreeMap<Vec<u64>, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        // most significant word first so that Vec ordering is numeric
        let mut sig = vec![0u64; words];
        for (i, s) in sets.iter().enumerate() {
            if s.contains(v) {
                sig[words - 1 - i / 64] |= 1 << (i % 64);
            }
        }
        atoms.entry(sig).or_default().push(v);
    }
    VertexPartition {
        n,
        blocks: atoms
            .into_values()
            .map(|vs| VertexSet::from_indices(n, vs))
            .collect(),
    }
}

/// Membership signature of each atom of [`common_refinement`], as booleans
/// per input set.
pub fn atom_signatures(atoms: &VertexPartition, sets: &[VertexSet]) -> Vec<Vec<bool>> {
    atoms
        .blocks()
        .iter()
        .map(|b| {
            let rep = b.iter().next().expect("atoms are nonempty");
            sets.iter().map(|s| s.contains(rep)).collect()
        })
        .collect()
}

/// Result of [`make_equitable`].
#[derive(Clone, Debug)]
pub struct Rebalanced {
    pub partition: VertexPartition,
    pub moved: usize,
}

/// Move the minimum number of vertices so that block sizes differ by at most
/// one, keeping the block count.
///
/// The `n mod k` larger targets go to the currently largest blocks (ties by
/// block index). Surplus vertices are taken lowest index first from each
/// over-full block and handed to under-full blocks in block order.
pub fn make_equitable(p: &VertexPartition) -> Result<Rebalanced> {
    let (n, k) = (p.n(), p.k());
    if k == 0 {
        return Err(domain("partition has no blocks"));
    }
    if k > n {
        return Err(domain(format!("{k} blocks cannot be equitable over {n} vertices")));
    }
    let sizes = p.sizes();
    let (q, r) = (n / k, n % k);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]).then(a.cmp(&b)));
    let mut target = vec![q; k];
    for &b in order.iter().take(r) {
        target[b] = q + 1;
    }

    let mut blocks: Vec<VertexSet> = p.blocks().to_vec();
    let mut pool = Vec::new();
    for (b, block) in blocks.iter_mut().enumerate() {
        if sizes[b] > target[b] {
            let surplus: Vec<usize> = block.iter().take(sizes[b] - target[b]).collect();
            for &v in &surplus {
                block.remove(v);
            }
            pool.extend(surplus);
        }
    }
    pool.sort_unstable();
    let moved = pool.len();
    let mut pool = pool.into_iter();
    for (b, block) in blocks.iter_mut().enumerate() {
        for _ in sizes[b]..target[b] {
            block.insert(pool.next().expect("surplus matches deficit"));
        }
    }
    debug_assert!(pool.next().is_none());
    Ok(Rebalanced {
        partition: VertexPartition::new(n, blocks)?,
        moved,
    })
}

/// One weighted complete bipartite term `c · K_{S,T}`.
///
/// On a square shape it realizes `c·(1_S(x)1_T(y) + 1_T(x)1_S(y))`, so pairs
/// inside `S ∩ T` carry `2c`. On a bipartite shape `S ⊆ X`, `T ⊆ Y` and it
/// realizes `c·1_S(x)1_T(y)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutTerm {
    #[serde(rename = "S")]
    pub s: VertexSet,
    #[serde(rename = "T")]
    pub t: VertexSet,
    pub c: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Square { n: usize },
    Bipartite { nx: usize, ny: usize },
}

impl Shape {
    pub fn dims(&self) -> (usize, usize) {
        match *self {
            Shape::Square { n } => (n, n),
            Shape::Bipartite { nx, ny } => (nx, ny),
        }
    }

    /// `n²` or `|X||Y|`.
    pub fn normalizer(&self) -> f64 {
        let (a, b) = self.dims();
        (a * b) as f64
    }
}

/// `base + Σ cᵢ K_{Sᵢ,Tᵢ}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutDecomposition {
    pub shape: Shape,
    pub base: f64,
    pub terms: Vec<CutTerm>,
}

impl CutDecomposition {
    pub fn constant(shape: Shape, base: f64) -> Self {
        CutDecomposition {
            shape,
            base,
            terms: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `|base| + Σ 2|cᵢ|`, an a-priori bound on every realized weight.
    pub fn weight_bound_estimate(&self) -> f64 {
        self.base.abs() + self.terms.iter().map(|t| 2.0 * t.c.abs()).sum::<f64>()
    }

    /// Materialize the weight matrix.
    pub fn realize(&self) -> Matrix {
        let (r, c) = self.shape.dims();
        let mut m = Matrix::filled(r, c, self.base);
        for term in &self.terms {
            add_term(&mut m, self.shape, term, 1.0);
        }
        m
    }

    /// Square decompositions realize to a symmetric weighted graph.
    pub fn realize_graph(&self) -> Result<WeightedGraph> {
        match self.shape {
            Shape::Square { .. } => WeightedGraph::new(self.realize()),
            Shape::Bipartite { .. } => Err(Error::ShapeMismatch(
                "bipartite decomposition does not realize to a graph".into(),
            )),
        }
    }

    /// Re-home term sets in the decomposition's own universes (needed after
    /// deserialization, where set universes are inferred from the indices).
    pub fn normalize_universes(&mut self) -> Result<()> {
        let (r, c) = self.shape.dims();
        for (i, t) in self.terms.iter_mut().enumerate() {
            t.s = t
                .s
                .with_universe(r)
                .ok_or_else(|| domain(format!("term {i}: S outside 0..{r}")))?;
            t.t = t
                .t
                .with_universe(c)
                .ok_or_else(|| domain(format!("term {i}: T outside 0..{c}")))?;
        }
        Ok(())
    }
}

/// `m += sign · c·K_{S,T}` in the layout of `shape`.
pub(crate) fn add_term(m: &mut Matrix, shape: Shape, term: &CutTerm, sign: f64) {
    let delta = sign * term.c;
    let t: Vec<usize> = term.t.to_vec();
    for x in term.s.iter() {
        let row = m.row_mut(x);
        for &y in &t {
            row[y] += delta;
        }
    }
    if let Shape::Square { .. } = shape {
        let s: Vec<usize> = term.s.to_vec();
        for x in term.t.iter() {
            let row = m.row_mut(x);
            for &y in &s {
                row[y] += delta;
            }
        }
    }
}
