//! Graphs with complex edge biases and labelled vertex blocks.
//!
//! Every edge `(i, j)` with `i < j` stores a unit-modulus `bias` and a real
//! positive `weight`; the adjacency entry is `weight * bias` above the
//! diagonal and its conjugate below, so the matrix is Hermitian with a zero
//! diagonal by construction. Weights other than one appear only on the weak
//! cross edges of [`disjoint_union_coupled`].

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QlError, Result};

/// Tolerance on `|bias| = 1`.
pub const BIAS_TOL: f64 = 1e-12;

const MAX_PAIRING_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub bias: Complex64,
    pub weight: f64,
}

impl Edge {
    /// Adjacency entry at `(i, j)`; the `(j, i)` entry is its conjugate.
    pub fn entry(&self) -> Complex64 {
        self.bias * self.weight
    }
}

/// Undirected simple graph with unit-modulus complex edge biases and a
/// block label for every vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasedGraph {
    n: usize,
    edges: Vec<Edge>,
    labels: Vec<String>,
}

fn check_bias(bias: Complex64) -> Result<()> {
    if !bias.re.is_finite() || !bias.im.is_finite() || (bias.norm() - 1.0).abs() > BIAS_TOL {
        return Err(QlError::Parameter(format!(
            "edge bias must have unit modulus, got |{bias}| = {}",
            bias.norm()
        )));
    }
    Ok(())
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(QlError::Parameter(format!(
            "edge probability must lie in [0, 1], got {p}"
        )));
    }
    Ok(())
}

impl BiasedGraph {
    /// Build a graph from an edge list. Edges may be given in either
    /// orientation; a `(j, i)` edge is stored as `(i, j)` with the conjugate
    /// bias.
    pub fn new(n: usize, edges: Vec<Edge>, labels: Vec<String>) -> Result<Self> {
        if n == 0 {
            return Err(QlError::Parameter("graph needs at least one vertex".into()));
        }
        if labels.len() != n {
            return Err(QlError::Contract(format!(
                "{} block labels for {n} vertices",
                labels.len()
            )));
        }
        let mut seen = BTreeSet::new();
        let mut normalized = Vec::with_capacity(edges.len());
        for e in edges {
            if e.i >= n || e.j >= n {
                return Err(QlError::Contract(format!(
                    "edge ({}, {}) out of range for {n} vertices",
                    e.i, e.j
                )));
            }
            if e.i == e.j {
                return Err(QlError::Contract(format!("self-loop at vertex {}", e.i)));
            }
            check_bias(e.bias).map_err(|err| QlError::Contract(err.to_string()))?;
            if !(e.weight.is_finite() && e.weight > 0.0) {
                return Err(QlError::Contract(format!(
                    "edge ({}, {}) has non-positive weight {}",
                    e.i, e.j, e.weight
                )));
            }
            let e = if e.i < e.j {
                e
            } else {
                Edge {
                    i: e.j,
                    j: e.i,
                    bias: e.bias.conj(),
                    weight: e.weight,
                }
            };
            if !seen.insert((e.i, e.j)) {
                return Err(QlError::Contract(format!(
                    "parallel edge ({}, {})",
                    e.i, e.j
                )));
            }
            normalized.push(e);
        }
        normalized.sort_by_key(|e| (e.i, e.j));
        Ok(Self {
            n,
            edges: normalized,
            labels,
        })
    }

    /// Same as [`BiasedGraph::new`] with every vertex in block `label` and all
    /// biases `+1`.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)], label: &str) -> Result<Self> {
        let edges = pairs
            .iter()
            .map(|&(i, j)| Edge {
                i,
                j,
                bias: Complex64::new(1.0, 0.0),
                weight: 1.0,
            })
            .collect();
        Self::new(n, edges, vec![label.to_string(); n])
    }

    /// Read a dense Hermitian matrix back into a graph.
    pub fn from_adjacency(matrix: &DMatrix<Complex64>, labels: Vec<String>) -> Result<Self> {
        let n = matrix.nrows();
        if matrix.ncols() != n {
            return Err(QlError::Contract("adjacency matrix is not square".into()));
        }
        let mut edges = Vec::new();
        for i in 0..n {
            if matrix[(i, i)].norm() > BIAS_TOL {
                return Err(QlError::Contract(format!("nonzero diagonal at {i}")));
            }
            for j in (i + 1)..n {
                let a = matrix[(i, j)];
                if (a - matrix[(j, i)].conj()).norm() > BIAS_TOL {
                    return Err(QlError::Contract(format!(
                        "adjacency is not Hermitian at ({i}, {j})"
                    )));
                }
                if a.norm() > 0.0 {
                    let weight = a.norm();
                    edges.push(Edge {
                        i,
                        j,
                        bias: a / weight,
                        weight,
                    });
                }
            }
        }
        Self::new(n, edges, labels)
    }

    /// Cycle graph `C_n`, all vertices labelled `label`.
    pub fn cycle(n: usize, label: &str) -> Result<Self> {
        if n < 3 {
            return Err(QlError::Parameter(format!("cycle needs n >= 3, got {n}")));
        }
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_pairs(n, &pairs, label)
    }

    /// Complete graph `K_n`.
    pub fn complete(n: usize, label: &str) -> Result<Self> {
        let pairs: Vec<_> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect();
        Self::from_pairs(n, &pairs, label)
    }

    /// `K_1` with an empty label, the identity of the Cartesian product.
    pub fn single_vertex() -> Self {
        Self {
            n: 1,
            edges: Vec::new(),
            labels: vec![String::new()],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, vertex: usize) -> &str {
        &self.labels[vertex]
    }

    /// Relabel every vertex with the same block label.
    pub fn with_label(mut self, label: &str) -> Self {
        self.labels = vec![label.to_string(); self.n];
        self
    }

    /// Block label to sorted vertex list.
    pub fn blocks(&self) -> BTreeMap<String, Vec<usize>> {
        let mut map: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (v, l) in self.labels.iter().enumerate() {
            map.entry(l.clone()).or_default().push(v);
        }
        map
    }

    pub fn block_vertices(&self, label: &str) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, l)| l.as_str() == label)
            .map(|(v, _)| v)
            .collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            deg[e.i] += 1;
            deg[e.j] += 1;
        }
        deg
    }

    /// Dense complex adjacency matrix.
    pub fn adjacency(&self) -> DMatrix<Complex64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for e in &self.edges {
            a[(e.i, e.j)] = e.entry();
            a[(e.j, e.i)] = e.entry().conj();
        }
        a
    }

    /// Induced subgraph on `vertices` (in the given order).
    pub fn subgraph(&self, vertices: &[usize]) -> Result<Self> {
        let mut index = vec![usize::MAX; self.n];
        for (k, &v) in vertices.iter().enumerate() {
            if v >= self.n {
                return Err(QlError::Contract(format!("vertex {v} out of range")));
            }
            index[v] = k;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| index[e.i] != usize::MAX && index[e.j] != usize::MAX)
            .map(|e| Edge {
                i: index[e.i],
                j: index[e.j],
                ..*e
            })
            .collect();
        let labels = vertices.iter().map(|&v| self.labels[v].clone()).collect();
        Self::new(vertices.len(), edges, labels)
    }

    /// Normalized indicator vector of block `label`.
    pub fn block_indicator(&self, label: &str) -> Result<BlockIndicator> {
        let members = self.block_vertices(label);
        if members.is_empty() {
            return Err(QlError::Parameter(format!("unknown block label `{label}`")));
        }
        let value = Complex64::new(1.0 / (members.len() as f64).sqrt(), 0.0);
        let mut vector = vec![Complex64::new(0.0, 0.0); self.n];
        for v in members {
            vector[v] = value;
        }
        Ok(BlockIndicator {
            vector,
            block: label.to_string(),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&GraphJson::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: GraphJson = serde_json::from_str(text)?;
        parsed.try_into()
    }
}

/// Unit-norm indicator of one vertex block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockIndicator {
    pub vector: Vec<Complex64>,
    pub block: String,
}

impl BlockIndicator {
    /// `⟨self, v⟩`, conjugate-linear in the indicator.
    pub fn inner(&self, v: &[Complex64]) -> Complex64 {
        self.vector.iter().zip(v).map(|(j, x)| j.conj() * x).sum()
    }
}

/// Random `d`-regular simple graph on `n` vertices, all biases `+1`, every
/// vertex labelled `"g"`.
///
/// Uses the pairing model: stubs are shuffled and paired, pairs that would
/// form a loop or a parallel edge are re-paired among themselves, and the
/// whole attempt restarts when no admissible pair remains. Dense requests
/// (`d > (n - 1) / 2`) build the complement of an `(n - 1 - d)`-regular graph.
pub fn gen_d_regular_random(n: usize, d: usize, seed: u64) -> Result<BiasedGraph> {
    if d == 0 || d >= n {
        return Err(QlError::Parameter(format!(
            "d-regular graph needs 0 < d < n, got n = {n}, d = {d}"
        )));
    }
    if (n * d) % 2 == 1 {
        return Err(QlError::Parameter(format!(
            "n * d must be even, got n = {n}, d = {d}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let complement = 2 * d > n - 1;
    let target = if complement { n - 1 - d } else { d };

    let mut pairs = BTreeSet::new();
    if target > 0 {
        let mut found = None;
        for _ in 0..MAX_PAIRING_ATTEMPTS {
            if let Some(p) = pairing_attempt(n, target, &mut rng) {
                found = Some(p);
                break;
            }
        }
        pairs = found.ok_or_else(|| {
            QlError::Numeric(format!(
                "pairing model failed {MAX_PAIRING_ATTEMPTS} times for n = {n}, d = {d}"
            ))
        })?;
    }
    let pairs: Vec<(usize, usize)> = if complement {
        (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .filter(|p| !pairs.contains(p))
            .collect()
    } else {
        pairs.into_iter().collect()
    };
    BiasedGraph::from_pairs(n, &pairs, "g")
}

fn pairing_attempt(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<BTreeSet<(usize, usize)>> {
    let mut edges = BTreeSet::new();
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    while !stubs.is_empty() {
        stubs.shuffle(rng);
        let mut leftover = Vec::new();
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u != v && edges.insert((u, v)) {
                continue;
            }
            leftover.extend_from_slice(pair);
        }
        if leftover.is_empty() {
            return Some(edges);
        }
        let admissible = leftover.iter().enumerate().any(|(a, &u)| {
            leftover[a + 1..]
                .iter()
                .any(|&v| u != v && !edges.contains(&(u.min(v), u.max(v))))
        });
        if !admissible {
            return None;
        }
        stubs = leftover;
    }
    Some(edges)
}

/// Disjoint union of `g1` and `g2` (`g2` shifted by `g1.n()`) plus random
/// cross edges: each pair `(i in g1, j in g2)` is joined independently with
/// probability `p`, carrying `bias` at entry `(i, j)`.
pub fn connect_subgraphs(
    g1: &BiasedGraph,
    g2: &BiasedGraph,
    p: f64,
    bias: Complex64,
    seed: u64,
) -> Result<BiasedGraph> {
    check_probability(p)?;
    check_bias(bias)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let offset = g1.n;
    let mut edges = union_edges(&[g1, g2]);
    for i in 0..g1.n {
        for j in 0..g2.n {
            if rng.gen_bool(p) {
                edges.push(Edge {
                    i,
                    j: offset + j,
                    bias,
                    weight: 1.0,
                });
            }
        }
    }
    let labels = g1.labels.iter().chain(&g2.labels).cloned().collect();
    BiasedGraph::new(g1.n + g2.n, edges, labels)
}

fn union_edges(graphs: &[&BiasedGraph]) -> Vec<Edge> {
    let mut offset = 0;
    let mut edges = Vec::new();
    for g in graphs {
        edges.extend(g.edges.iter().map(|e| Edge {
            i: e.i + offset,
            j: e.j + offset,
            ..*e
        }));
        offset += g.n;
    }
    edges
}

/// One QL bit: two random `d`-regular graphs on `n0` vertices labelled
/// `labels.0` and `labels.1`, joined with probability `p` by edges of bias
/// `bias`.
pub fn ql_bit(
    n0: usize,
    d: usize,
    p: f64,
    bias: Complex64,
    labels: (&str, &str),
    seed: u64,
) -> Result<BiasedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g1 = gen_d_regular_random(n0, d, rng.gen())?.with_label(labels.0);
    let g2 = gen_d_regular_random(n0, d, rng.gen())?.with_label(labels.1);
    connect_subgraphs(&g1, &g2, p, bias, rng.gen())
}

/// Cartesian product `G □ H`. Vertex `(u, x)` has index `u * H.n() + x`
/// and label `label(u) + label(x)`; product edges copy the bias and weight
/// of the factor edge they come from.
pub fn cartesian_product(g: &BiasedGraph, h: &BiasedGraph) -> BiasedGraph {
    let nh = h.n;
    let mut edges = Vec::with_capacity(g.edges.len() * nh + h.edges.len() * g.n);
    for e in &g.edges {
        for x in 0..nh {
            edges.push(Edge {
                i: e.i * nh + x,
                j: e.j * nh + x,
                ..*e
            });
        }
    }
    for u in 0..g.n {
        for e in &h.edges {
            edges.push(Edge {
                i: u * nh + e.i,
                j: u * nh + e.j,
                ..*e
            });
        }
    }
    edges.sort_by_key(|e| (e.i, e.j));
    let labels = g
        .labels
        .iter()
        .flat_map(|lu| h.labels.iter().map(move |lx| format!("{lu}{lx}")))
        .collect();
    BiasedGraph {
        n: g.n * nh,
        edges,
        labels,
    }
}

/// Random coupling between two members of a [`disjoint_union_coupled`]
/// union: each vertex pair across graphs `a` and `b` is joined with
/// probability `p`, carrying `bias` and real `weight`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterCoupling {
    pub a: usize,
    pub b: usize,
    pub p: f64,
    pub bias: Complex64,
    pub weight: f64,
}

/// Block-diagonal union of `graphs` plus weighted random cross edges.
///
/// Cross edges are drawn in the order of `inter`, each loop running over the
/// vertices of graph `a` then graph `b`, so a two-graph union with weight one
/// reproduces [`connect_subgraphs`] for the same seed.
pub fn disjoint_union_coupled(
    graphs: &[BiasedGraph],
    inter: &[InterCoupling],
    seed: u64,
) -> Result<BiasedGraph> {
    if graphs.is_empty() {
        return Err(QlError::Parameter("empty graph list".into()));
    }
    let offsets: Vec<usize> = graphs
        .iter()
        .scan(0, |acc, g| {
            let o = *acc;
            *acc += g.n;
            Some(o)
        })
        .collect();
    let refs: Vec<&BiasedGraph> = graphs.iter().collect();
    let mut edges = union_edges(&refs);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for c in inter {
        if c.a >= graphs.len() || c.b >= graphs.len() || c.a == c.b {
            return Err(QlError::Parameter(format!(
                "inter coupling ({}, {}) does not name two distinct graphs",
                c.a, c.b
            )));
        }
        check_probability(c.p)?;
        check_bias(c.bias)?;
        if !(c.weight.is_finite() && c.weight > 0.0) {
            return Err(QlError::Parameter(format!(
                "inter coupling weight must be positive, got {}",
                c.weight
            )));
        }
        for i in 0..graphs[c.a].n {
            for j in 0..graphs[c.b].n {
                if rng.gen_bool(c.p) {
                    edges.push(Edge {
                        i: offsets[c.a] + i,
                        j: offsets[c.b] + j,
                        bias: c.bias,
                        weight: c.weight,
                    });
                }
            }
        }
    }
    let labels = graphs
        .iter()
        .flat_map(|g| g.labels.iter().cloned())
        .collect();
    let n = graphs.iter().map(|g| g.n).sum();
    BiasedGraph::new(n, edges, labels)
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EdgeJson {
    Unit(usize, usize, f64, f64),
    Weighted(usize, usize, f64, f64, f64),
}

/// Serialized graph: `{n, edges: [[i, j, re, im], ...], blocks}`. Edges are
/// listed once with `i < j`; `re, im` is the bias. Weighted edges carry the
/// weight as a fifth element. Without `blocks` every vertex is unlabelled.
#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<EdgeJson>,
    #[serde(default)]
    blocks: BTreeMap<String, Vec<usize>>,
}

impl From<&BiasedGraph> for GraphJson {
    fn from(g: &BiasedGraph) -> Self {
        let edges = g
            .edges
            .iter()
            .map(|e| {
                if e.weight == 1.0 {
                    EdgeJson::Unit(e.i, e.j, e.bias.re, e.bias.im)
                } else {
                    EdgeJson::Weighted(e.i, e.j, e.bias.re, e.bias.im, e.weight)
                }
            })
            .collect();
        GraphJson {
            n: g.n,
            edges,
            blocks: g.blocks(),
        }
    }
}

impl TryFrom<GraphJson> for BiasedGraph {
    type Error = QlError;

    fn try_from(value: GraphJson) -> Result<Self> {
        let unlabelled = value.blocks.is_empty();
        let mut labels: Vec<Option<String>> = vec![
            if unlabelled {
                Some(String::new())
            } else {
                None
            };
            value.n
        ];
        for (label, members) in value.blocks {
            for v in members {
                let slot = labels
                    .get_mut(v)
                    .ok_or_else(|| QlError::Contract(format!("block vertex {v} out of range")))?;
                if slot.replace(label.clone()).is_some() {
                    return Err(QlError::Contract(format!(
                        "vertex {v} belongs to more than one block"
                    )));
                }
            }
        }
        let labels = labels
            .into_iter()
            .enumerate()
            .map(|(v, l)| l.ok_or_else(|| QlError::Contract(format!("vertex {v} has no block"))))
            .collect::<Result<Vec<_>>>()?;
        let edges = value
            .edges
            .into_iter()
            .map(|e| {
                let (i, j, re, im, weight) = match e {
                    EdgeJson::Unit(i, j, re, im) => (i, j, re, im, 1.0),
                    EdgeJson::Weighted(i, j, re, im, w) => (i, j, re, im, w),
                };
                Edge {
                    i,
                    j,
                    bias: Complex64::new(re, im),
                    weight,
                }
            })
            .collect();
        BiasedGraph::new(value.n, edges, labels)
    }
}
