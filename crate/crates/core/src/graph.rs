//! Graph families and symmetry machinery.
//!
//! Vertices carry opaque string labels but are indexed densely in
//! construction order, which fixes the coordinate layout used by the
//! polytope and certificate modules: for `H_k` the order is
//! `1_0, 1_1, 1_2, 2_0, ...`.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::real::Rat;
use crate::{Error, Result};

use num::traits::Zero;

/// Backtracking isomorphism search is only ever applied to small graphs.
pub const MAX_ISO_VERTICES: usize = 20;

/// Labeled undirected graph without self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<BTreeSet<usize>>,
    edges: BTreeSet<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<String>,
    edges: Vec<[String; 2]>,
}

impl Graph {
    pub fn new<L: Into<String>>(labels: Vec<L>, edge_labels: &[(String, String)]) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate vertex label {l:?}")));
            }
        }
        let mut g = Graph { adj: vec![BTreeSet::new(); labels.len()], edges: BTreeSet::new(), labels, index };
        for (u, v) in edge_labels {
            let iu = g.index_of(u)?;
            let iv = g.index_of(v)?;
            g.add_edge_idx(iu, iv)?;
        }
        Ok(g)
    }

    fn empty_with_labels(labels: Vec<String>) -> Result<Self> {
        Graph::new(labels, &[])
    }

    fn add_edge_idx(&mut self, u: usize, v: usize) -> Result<()> {
        if u == v {
            return Err(Error::InvalidArgument(format!(
                "self-loop at vertex {:?}",
                self.labels[u]
            )));
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.edges.insert((a, b));
        self.adj[a].insert(b);
        self.adj[b].insert(a);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.edges.contains(&(a, b))
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn is_regular(&self) -> Option<usize> {
        let d = self.degree(0);
        if (0..self.n()).all(|v| self.degree(v) == d) {
            Some(d)
        } else {
            None
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n()
    }

    /// BFS 2-coloring.
    pub fn is_bipartite(&self) -> bool {
        let mut color = vec![u8::MAX; self.n()];
        for start in 0..self.n() {
            if color[start] != u8::MAX {
                continue;
            }
            color[start] = 0;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for w in self.neighbors(v) {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[v];
                        queue.push_back(w);
                    } else if color[w] == color[v] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Induced subgraph on the given vertex indices (kept in graph order).
    pub fn induced(&self, keep: &[usize]) -> Result<Graph> {
        let mut sorted: Vec<usize> = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if let Some(&bad) = sorted.iter().find(|&&v| v >= self.n()) {
            return Err(Error::InvalidArgument(format!("vertex index {bad} out of range")));
        }
        let labels: Vec<String> = sorted.iter().map(|&v| self.labels[v].clone()).collect();
        let mut g = Graph::empty_with_labels(labels)?;
        for (new_u, &old_u) in sorted.iter().enumerate() {
            for (new_v, &old_v) in sorted.iter().enumerate().skip(new_u + 1) {
                if self.has_edge(old_u, old_v) {
                    g.add_edge_idx(new_u, new_v)?;
                }
            }
        }
        Ok(g)
    }

    /// Deletion `G - S`.
    pub fn delete(&self, s: &[&str]) -> Result<Graph> {
        let mut drop = vec![false; self.n()];
        for label in s {
            drop[self.index_of(label)?] = true;
        }
        let keep: Vec<usize> = (0..self.n()).filter(|&v| !drop[v]).collect();
        self.induced(&keep)
    }

    /// Destruction `G (-) v`: removes the vertex together with its whole
    /// neighborhood.
    pub fn destroy(&self, v: &str) -> Result<Graph> {
        let vi = self.index_of(v)?;
        let mut drop = vec![false; self.n()];
        drop[vi] = true;
        for w in self.neighbors(vi) {
            drop[w] = true;
        }
        let keep: Vec<usize> = (0..self.n()).filter(|&u| !drop[u]).collect();
        self.induced(&keep)
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty_with_labels(self.labels.clone()).expect("labels already unique");
        for u in 0..self.n() {
            for v in (u + 1)..self.n() {
                if !self.has_edge(u, v) {
                    g.add_edge_idx(u, v).expect("u != v");
                }
            }
        }
        g
    }

    /// Rebuilds the graph with labels transformed by `f` (must stay unique).
    pub fn relabel(&self, f: impl Fn(&str) -> String) -> Result<Graph> {
        let labels: Vec<String> = self.labels.iter().map(|l| f(l)).collect();
        let mut g = Graph::empty_with_labels(labels)?;
        for (u, v) in self.edges() {
            g.add_edge_idx(u, v)?;
        }
        Ok(g)
    }

    /// Adjacency bitmasks for the enumeration kernels; requires n <= 64.
    pub fn adjacency_masks(&self) -> Result<Vec<u64>> {
        if self.n() > 64 {
            return Err(Error::SizeGuard { actual: self.n(), limit: 64 });
        }
        let mut masks = vec![0u64; self.n()];
        for (u, v) in self.edges() {
            masks[u] |= 1 << v;
            masks[v] |= 1 << u;
        }
        Ok(masks)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let edges: Vec<[String; 2]> = self
            .edges
            .iter()
            .map(|&(u, v)| [self.labels[u].clone(), self.labels[v].clone()])
            .collect();
        serde_json::to_value(GraphJson { vertices: self.labels.clone(), edges })
            .expect("graph serialization cannot fail")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Graph> {
        let raw: GraphJson = serde_json::from_value(value.clone())?;
        let edges: Vec<(String, String)> =
            raw.edges.into_iter().map(|[u, v]| (u, v)).collect();
        Graph::new(raw.vertices, &edges)
    }
}

/// A vertex of the three-layer family: index `i` in `1..=k`, layer `p`
/// in `{0, 1, 2}`. Bijective with the vertex set of `build_hk(k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HkLabel {
    pub i: usize,
    pub p: usize,
}

impl HkLabel {
    pub fn new(k: usize, i: usize, p: usize) -> Result<Self> {
        if i < 1 || i > k || p > 2 {
            return Err(Error::InvalidArgument(format!(
                "label ({i}, {p}) outside 1..={k} x 0..=2"
            )));
        }
        Ok(HkLabel { i, p })
    }

    /// Position in the fixed vertex order of `build_hk`.
    pub fn index(&self) -> usize {
        hk_index(self.i, self.p)
    }

    pub fn label(&self) -> String {
        hk_label(self.i, self.p)
    }

    pub fn parse(label: &str) -> Result<Self> {
        let (i, p) = label
            .split_once('_')
            .ok_or_else(|| Error::Parse(format!("bad layer label {label:?}")))?;
        let i = i
            .parse()
            .map_err(|_| Error::Parse(format!("bad index in {label:?}")))?;
        let p = p
            .parse()
            .map_err(|_| Error::Parse(format!("bad layer in {label:?}")))?;
        if p > 2 {
            return Err(Error::Parse(format!("layer out of range in {label:?}")));
        }
        Ok(HkLabel { i, p })
    }
}

/// Vertex label of the `p`-th layer copy of index `i` (1-based).
pub fn hk_label(i: usize, p: usize) -> String {
    format!("{i}_{p}")
}

/// The three-layer graph on `3k` vertices: paths `i_0 - i_1 - i_2` plus the
/// complete bipartite pattern `i_0 ~ j_2` for `i != j`.
pub fn build_hk(k: usize) -> Result<Graph> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("build_hk requires k >= 2, got {k}")));
    }
    let mut labels = Vec::with_capacity(3 * k);
    for i in 1..=k {
        for p in 0..3 {
            labels.push(hk_label(i, p));
        }
    }
    let mut g = Graph::empty_with_labels(labels)?;
    let idx = |i: usize, p: usize| 3 * (i - 1) + p;
    for i in 1..=k {
        g.add_edge_idx(idx(i, 0), idx(i, 1))?;
        g.add_edge_idx(idx(i, 1), idx(i, 2))?;
        for j in 1..=k {
            if i != j {
                g.add_edge_idx(idx(i, 0), idx(j, 2))?;
            }
        }
    }
    Ok(g)
}

/// Index of vertex `i_p` inside `build_hk(k)`'s fixed ordering.
pub fn hk_index(i: usize, p: usize) -> usize {
    3 * (i - 1) + p
}

/// Path with `n` edges on vertices labeled `0..=n`.
pub fn path_graph(n: usize) -> Result<Graph> {
    let labels: Vec<String> = (0..=n).map(|v| v.to_string()).collect();
    let edges: Vec<(String, String)> =
        (0..n).map(|v| (v.to_string(), (v + 1).to_string())).collect();
    Graph::new(labels, &edges)
}

/// Cycle on `n` vertices labeled `0..n`.
pub fn cycle_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidArgument("cycle needs at least 3 vertices".into()));
    }
    let labels: Vec<String> = (0..n).map(|v| v.to_string()).collect();
    let edges: Vec<(String, String)> =
        (0..n).map(|v| (v.to_string(), ((v + 1) % n).to_string())).collect();
    Graph::new(labels, &edges)
}

/// Layer blowup: `i_p ~ j_q` iff (`i = j` and `pq` is an edge of the base) or
/// (`i != j`, `p != q`, and `pq` is a non-edge of the base).
pub fn build_lk(base: &Graph, k: usize) -> Result<Graph> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("build_lk requires k >= 2, got {k}")));
    }
    build_lk2(base, &base.complement(), k)
}

/// Two-pattern layer blowup: within-layer edges follow `g1`, cross-layer
/// edges follow `g2`. Requires identical vertex sets.
pub fn build_lk2(g1: &Graph, g2: &Graph, k: usize) -> Result<Graph> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("build_lk2 requires k >= 2, got {k}")));
    }
    if g1.labels() != g2.labels() {
        return Err(Error::InvalidArgument(
            "build_lk2 requires both patterns on the same vertex list".into(),
        ));
    }
    let m = g1.n();
    let mut labels = Vec::with_capacity(k * m);
    for i in 1..=k {
        for p in g1.labels() {
            labels.push(format!("{i}_{p}"));
        }
    }
    let mut g = Graph::empty_with_labels(labels)?;
    let idx = |i: usize, p: usize| (i - 1) * m + p;
    for i in 1..=k {
        for j in i..=k {
            for p in 0..m {
                for q in 0..m {
                    let adjacent = if i == j {
                        p < q && g1.has_edge(p, q)
                    } else {
                        g2.has_edge(p, q)
                    };
                    if adjacent {
                        g.add_edge_idx(idx(i, p), idx(j, q))?;
                    }
                }
            }
        }
    }
    Ok(g)
}

/// Hamming-distance graph on the `2^l` binary strings of length `l`, with an
/// edge whenever the number of differing positions lies in `s`.
pub fn build_qls(l: usize, s: &BTreeSet<usize>) -> Result<Graph> {
    if l < 1 {
        return Err(Error::InvalidArgument("build_qls requires l >= 1".into()));
    }
    if s.is_empty() || s.iter().any(|&d| d == 0 || d > l) {
        return Err(Error::InvalidArgument(format!(
            "distance set must be a nonempty subset of 1..={l}"
        )));
    }
    let count = 1usize << l;
    let labels: Vec<String> = (0..count)
        .map(|v| (0..l).rev().map(|b| if v >> b & 1 == 1 { '1' } else { '0' }).collect())
        .collect();
    let mut g = Graph::empty_with_labels(labels)?;
    for u in 0..count {
        for v in (u + 1)..count {
            if s.contains(&((u ^ v).count_ones() as usize)) {
                g.add_edge_idx(u, v)?;
            }
        }
    }
    Ok(g)
}

/// Kneser graph on the 2-subsets of a 5-set: 10 vertices, 3-regular.
pub fn petersen() -> Graph {
    let mut labels = Vec::new();
    let mut sets = Vec::new();
    for a in 1..=5u8 {
        for b in (a + 1)..=5 {
            labels.push(format!("{a}{b}"));
            sets.push((a, b));
        }
    }
    let mut g = Graph::empty_with_labels(labels).expect("unique labels");
    for u in 0..sets.len() {
        for v in (u + 1)..sets.len() {
            let (a, b) = sets[u];
            let (c, d) = sets[v];
            if a != c && a != d && b != c && b != d {
                g.add_edge_idx(u, v).expect("u != v");
            }
        }
    }
    g
}

/// A vertex permutation of a specific graph, stored by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    map: Vec<usize>,
}

impl Automorphism {
    /// Validates that `map` is a bijection preserving edges and non-edges.
    pub fn new(g: &Graph, map: Vec<usize>) -> Result<Self> {
        if map.len() != g.n() {
            return Err(Error::DimensionMismatch { expected: g.n(), got: map.len() });
        }
        let mut seen = vec![false; g.n()];
        for &im in &map {
            if im >= g.n() || seen[im] {
                return Err(Error::InvalidArgument("mapping is not a bijection".into()));
            }
            seen[im] = true;
        }
        for u in 0..g.n() {
            for v in (u + 1)..g.n() {
                if g.has_edge(u, v) != g.has_edge(map[u], map[v]) {
                    return Err(Error::Verification(format!(
                        "mapping does not preserve the pair ({}, {})",
                        g.label(u),
                        g.label(v)
                    )));
                }
            }
        }
        Ok(Automorphism { map })
    }

    pub fn image(&self, v: usize) -> usize {
        self.map[v]
    }

    /// `self` after `other`: (self o other)(v) = self(other(v)).
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism { map: other.map.iter().map(|&v| self.map[v]).collect() }
    }

    /// Pullback action on vectors: `sigma(x)_i = x_{sigma(i)}`.
    pub fn apply_vec(&self, x: &[Rat]) -> Vec<Rat> {
        (0..x.len()).map(|i| x[self.map[i]].clone()).collect()
    }
}

/// A vertex partition together with automorphisms that shuffle each block
/// uniformly.
#[derive(Debug, Clone)]
pub struct BalancingFamily {
    pub partition: Vec<Vec<usize>>,
    pub automorphisms: Vec<Automorphism>,
}

impl BalancingFamily {
    /// Checks the two balancing conditions: each automorphism maps each block
    /// onto itself, and within a block every image count equals
    /// `|family| / |block|`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let mut block_of = vec![usize::MAX; g.n()];
        for (b, block) in self.partition.iter().enumerate() {
            for &v in block {
                if v >= g.n() || block_of[v] != usize::MAX {
                    return Err(Error::InvalidArgument(
                        "partition blocks must be disjoint subsets of V".into(),
                    ));
                }
                block_of[v] = b;
            }
        }
        if block_of.contains(&usize::MAX) {
            return Err(Error::InvalidArgument("partition must cover V".into()));
        }
        for sigma in &self.automorphisms {
            for v in 0..g.n() {
                if block_of[sigma.image(v)] != block_of[v] {
                    return Err(Error::Verification(format!(
                        "automorphism moves {} across blocks",
                        g.label(v)
                    )));
                }
            }
        }
        for block in &self.partition {
            if !self.automorphisms.len().is_multiple_of(block.len()) {
                return Err(Error::Verification("family size not divisible by block size".into()));
            }
            let expected = self.automorphisms.len() / block.len();
            for &i in block {
                for &j in block {
                    let count =
                        self.automorphisms.iter().filter(|s| s.image(i) == j).count();
                    if count != expected {
                        return Err(Error::Verification(format!(
                            "image count for ({}, {}) is {count}, expected {expected}",
                            g.label(i),
                            g.label(j)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The rotation `sigma_1` of `H_k`.
fn hk_sigma1(g: &Graph, k: usize) -> Result<Automorphism> {
    let mut map = vec![0; 3 * k];
    for i in 1..=k {
        let next = if i == k { 1 } else { i + 1 };
        for p in 0..3 {
            map[hk_index(i, p)] = hk_index(next, p);
        }
    }
    Automorphism::new(g, map)
}

/// The layer reflection `sigma_2(j_p) = j_(2-p)` of `H_k`.
fn hk_sigma2(g: &Graph, k: usize) -> Result<Automorphism> {
    let mut map = vec![0; 3 * k];
    for i in 1..=k {
        for p in 0..3 {
            map[hk_index(i, p)] = hk_index(i, 2 - p);
        }
    }
    Automorphism::new(g, map)
}

/// The two balancing families of `H_k`: the `k` rotations balancing the
/// layer partition `{[k]_0, [k]_1, [k]_2}`, and the `2k` rotations-with-
/// reflection balancing `{[k]_0 u [k]_2, [k]_1}`.
pub fn hk_balancing_families(k: usize) -> Result<(BalancingFamily, BalancingFamily)> {
    let g = build_hk(k)?;
    let sigma1 = hk_sigma1(&g, k)?;
    let sigma2 = hk_sigma2(&g, k)?;
    let mut rotations = Vec::with_capacity(k);
    let mut power = sigma1.clone();
    for _ in 0..k {
        rotations.push(power.clone());
        power = sigma1.compose(&power);
    }
    let layer = |p: usize| (1..=k).map(|i| hk_index(i, p)).collect::<Vec<_>>();
    let family1 = BalancingFamily {
        partition: vec![layer(0), layer(1), layer(2)],
        automorphisms: rotations.clone(),
    };
    let mut with_reflection = rotations.clone();
    for rot in &rotations {
        with_reflection.push(rot.compose(&sigma2));
    }
    let mut outer = layer(0);
    outer.extend(layer(2));
    let family2 =
        BalancingFamily { partition: vec![outer, layer(1)], automorphisms: with_reflection };
    family1.validate(&g)?;
    family2.validate(&g)?;
    Ok((family1, family2))
}

/// Block-averages a vector: each coordinate is replaced by the mean of its
/// partition block. Equals the average of the family's automorphism images.
pub fn symmetrize(g: &Graph, family: &BalancingFamily, x: &[Rat]) -> Result<Vec<Rat>> {
    if x.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: x.len() });
    }
    let mut out = vec![Rat::zero(); g.n()];
    for block in &family.partition {
        let sum: Rat = block.iter().map(|&v| x[v].clone()).sum();
        let avg = sum / Rat::from_integer(block.len().into());
        for &v in block {
            out[v] = avg.clone();
        }
    }
    Ok(out)
}

/// Direct automorphism average `(1/|S|) sum sigma(x)`; used as the oracle for
/// [`symmetrize`].
pub fn automorphism_average(family: &BalancingFamily, x: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); x.len()];
    for sigma in &family.automorphisms {
        for (acc, value) in out.iter_mut().zip(sigma.apply_vec(x)) {
            *acc += value;
        }
    }
    let size = Rat::from_integer(family.automorphisms.len().into());
    out.into_iter().map(|v| v / &size).collect()
}

/// Verifies that the label mapping `f` is an isomorphism from `a` onto `b`.
/// Works at any size since no search is involved.
pub fn is_isomorphism_map(a: &Graph, b: &Graph, f: impl Fn(&str) -> String) -> Result<bool> {
    if a.n() != b.n() {
        return Ok(false);
    }
    let mut image = Vec::with_capacity(a.n());
    let mut hit = vec![false; b.n()];
    for v in 0..a.n() {
        let target = f(a.label(v));
        let Ok(t) = b.index_of(&target) else {
            return Ok(false);
        };
        if hit[t] {
            return Ok(false);
        }
        hit[t] = true;
        image.push(t);
    }
    for u in 0..a.n() {
        for v in (u + 1)..a.n() {
            if a.has_edge(u, v) != b.has_edge(image[u], image[v]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Exact backtracking isomorphism search with degree and neighborhood
/// pruning. Guarded to small graphs.
pub fn find_isomorphism(a: &Graph, b: &Graph) -> Result<Option<Vec<usize>>> {
    if a.n() > MAX_ISO_VERTICES || b.n() > MAX_ISO_VERTICES {
        return Err(Error::SizeGuard {
            actual: a.n().max(b.n()),
            limit: MAX_ISO_VERTICES,
        });
    }
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return Ok(None);
    }
    let mut deg_a: Vec<usize> = (0..a.n()).map(|v| a.degree(v)).collect();
    let mut deg_b: Vec<usize> = (0..b.n()).map(|v| b.degree(v)).collect();
    deg_a.sort_unstable();
    deg_b.sort_unstable();
    if deg_a != deg_b {
        return Ok(None);
    }

    // Order vertices of `a` to maximize adjacency with already-placed ones.
    let mut order: Vec<usize> = Vec::with_capacity(a.n());
    let mut placed = vec![false; a.n()];
    for _ in 0..a.n() {
        let best = (0..a.n())
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let connectivity = a.neighbors(v).filter(|&w| placed[w]).count();
                (connectivity, a.degree(v))
            })
            .expect("unplaced vertex exists");
        placed[best] = true;
        order.push(best);
    }

    fn extend(
        a: &Graph,
        b: &Graph,
        order: &[usize],
        depth: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        assignment: &mut HashMap<usize, usize>,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        'candidates: for t in 0..b.n() {
            if used[t] || a.degree(v) != b.degree(t) {
                continue;
            }
            for w in a.neighbors(v) {
                if let Some(&tw) = assignment.get(&w) {
                    if !b.has_edge(t, tw) {
                        continue 'candidates;
                    }
                }
            }
            // Non-edges to mapped vertices must stay non-edges.
            for (&w, &tw) in assignment.iter() {
                if !a.has_edge(v, w) && b.has_edge(t, tw) {
                    continue 'candidates;
                }
            }
            used[t] = true;
            assignment.insert(v, t);
            map[v] = t;
            if extend(a, b, order, depth + 1, map, used, assignment) {
                return true;
            }
            used[t] = false;
            assignment.remove(&v);
        }
        false
    }

    let mut map = vec![0usize; a.n()];
    let mut used = vec![false; b.n()];
    let mut assignment = HashMap::new();
    if extend(a, b, &order, 0, &mut map, &mut used, &mut assignment) {
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::rat;
    use num::traits::One;

    #[test]
    fn hk_basic_shape() {
        let h2 = build_hk(2).unwrap();
        assert_eq!(h2.n(), 6);
        assert_eq!(h2.edge_count(), 6);
        assert!(h2.is_connected());
        assert!(h2.is_bipartite());
        assert!(h2.is_regular() == Some(2)); // the 6-cycle

        let h3 = build_hk(3).unwrap();
        assert_eq!(h3.n(), 9);
        assert_eq!(h3.edge_count(), 12);
        for k in 2..=8 {
            let g = build_hk(k).unwrap();
            assert_eq!(g.edge_count(), 2 * k + k * (k - 1));
        }
        assert!(build_hk(1).is_err());
    }

    #[test]
    fn destroy_and_delete() {
        let h2 = build_hk(2).unwrap();
        assert!(h2.destroy("1_1").unwrap().is_bipartite());
        assert_eq!(h2.delete(&[]).unwrap(), h2);
        assert!(h2.destroy("9_9").is_err());

        for k in 3..=5 {
            let hk = build_hk(k).unwrap();
            let destroyed = hk.destroy(&hk_label(1, 1)).unwrap();
            let target = build_hk(k - 1).unwrap();
            let iso = find_isomorphism(&destroyed, &target).unwrap();
            assert!(iso.is_some(), "H_{k} (-) 1_1 must be isomorphic to H_{}", k - 1);
        }
        for k in 3..=4 {
            let hk = build_hk(k).unwrap();
            assert!(hk.destroy(&hk_label(1, 0)).unwrap().is_bipartite());
            assert!(hk.destroy(&hk_label(2, 2)).unwrap().is_bipartite());
        }
    }

    #[test]
    fn lk_specializations() {
        let p2 = path_graph(2).unwrap();
        for k in 2..=5 {
            assert_eq!(build_lk(&p2, k).unwrap(), build_hk(k).unwrap());
        }
        assert!(build_lk(&p2, 1).is_err());

        let c4 = cycle_graph(4).unwrap();
        let l4c4 = build_lk(&c4, 4).unwrap();
        assert_eq!(l4c4.n(), 16);
        assert_eq!(l4c4.is_regular(), Some(5));

        // L_k(G, complement G) coincides with L_k(G).
        let l3a = build_lk2(&c4, &c4.complement(), 3).unwrap();
        assert_eq!(l3a, build_lk(&c4, 3).unwrap());

        // Mismatched vertex sets rejected.
        let p1 = path_graph(1).unwrap();
        assert!(build_lk2(&p2, &p1, 2).is_err());

        // Two empty one-vertex patterns give isolated vertices.
        let e1 = Graph::new(vec!["0"], &[]).unwrap();
        let g = build_lk2(&e1, &e1, 2).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn qls_families() {
        let s1: BTreeSet<usize> = [1].into();
        let cube = build_qls(3, &s1).unwrap();
        assert_eq!(cube.n(), 8);
        assert_eq!(cube.edge_count(), 12);
        assert!(cube.is_bipartite());

        for k in [3usize, 5] {
            let s: BTreeSet<usize> = [1, k].into();
            assert!(build_qls(k, &s).unwrap().is_bipartite(), "odd folded cube {k}");
        }
        for k in [4usize, 6] {
            let s: BTreeSet<usize> = [1, k].into();
            assert!(!build_qls(k, &s).unwrap().is_bipartite(), "even folded cube {k}");
        }

        let single = build_qls(1, &[1].into()).unwrap();
        assert_eq!((single.n(), single.edge_count()), (2, 1));

        assert!(build_qls(2, &[3].into()).is_err());
        assert!(build_qls(2, &BTreeSet::new()).is_err());
    }

    #[test]
    fn clebsch_destroys_to_petersen() {
        let clebsch = build_lk(&cycle_graph(4).unwrap(), 4).unwrap();
        let target = petersen();
        for v in 0..clebsch.n() {
            let reduced = clebsch.destroy(clebsch.label(v)).unwrap();
            assert_eq!(reduced.n(), 10);
            assert!(find_isomorphism(&reduced, &target).unwrap().is_some());
        }
    }

    #[test]
    fn folded_cube_blowup_identity() {
        // Explicit witness map, valid at any size.
        for l in 2..=3usize {
            let q_dist1 = build_qls(l, &[1].into()).unwrap();
            let q_distl = build_qls(l, &[l].into()).unwrap();
            let left = build_lk2(&q_dist1, &q_distl, 4).unwrap();
            let right = build_qls(l + 2, &[1, l + 2].into()).unwrap();
            let flip = |p: &str| -> String {
                p.chars().map(|c| if c == '0' { '1' } else { '0' }).collect()
            };
            let witness = |label: &str| -> String {
                let (i, p) = label.split_once('_').expect("layer label");
                match i {
                    "1" => format!("00{p}"),
                    "2" => format!("01{}", flip(p)),
                    "3" => format!("10{}", flip(p)),
                    _ => format!("11{p}"),
                }
            };
            assert!(is_isomorphism_map(&left, &right, witness).unwrap(), "l = {l}");
        }
        // The 16-vertex case is within reach of the search as a cross-check.
        let left = build_lk2(
            &build_qls(2, &[1].into()).unwrap(),
            &build_qls(2, &[2].into()).unwrap(),
            4,
        )
        .unwrap();
        let right = build_qls(4, &[1, 4].into()).unwrap();
        assert!(find_isomorphism(&left, &right).unwrap().is_some());
    }

    #[test]
    fn balancing_families_counts() {
        let (s1, s2) = hk_balancing_families(3).unwrap();
        assert_eq!(s1.automorphisms.len(), 3);
        assert_eq!(s2.automorphisms.len(), 6);
        // Block [3]_1 has image count 6/3 = 2 inside family 2.
        let g = build_hk(3).unwrap();
        let i = hk_index(1, 1);
        let j = hk_index(2, 1);
        let count = s2.automorphisms.iter().filter(|a| a.image(i) == j).count();
        assert_eq!(count, 2);
        // sigma_2 swaps j_0 and j_2 and fixes j_1.
        let sigma2 = hk_sigma2(&g, 3).unwrap();
        assert_eq!(sigma2.image(hk_index(2, 0)), hk_index(2, 2));
        assert_eq!(sigma2.image(hk_index(2, 1)), hk_index(2, 1));

        for k in 2..=6 {
            hk_balancing_families(k).unwrap();
        }
    }

    #[test]
    fn symmetrize_examples() {
        let g = build_hk(3).unwrap();
        let (_, s2) = hk_balancing_families(3).unwrap();
        let constant: Vec<Rat> = vec![rat(2, 7); 9];
        assert_eq!(symmetrize(&g, &s2, &constant).unwrap(), constant);

        let mut unit = vec![Rat::zero(); 9];
        unit[hk_index(1, 0)] = Rat::one();
        let averaged = symmetrize(&g, &s2, &unit).unwrap();
        for i in 1..=3 {
            assert_eq!(averaged[hk_index(i, 0)], rat(1, 6));
            assert_eq!(averaged[hk_index(i, 2)], rat(1, 6));
            assert_eq!(averaged[hk_index(i, 1)], Rat::zero());
        }

        assert!(symmetrize(&g, &s2, &vec![Rat::zero(); 4]).is_err());
    }

    #[test]
    fn block_average_equals_automorphism_average() {
        // Deterministic pseudo-random rational vectors.
        let g = build_hk(4).unwrap();
        let (s1, s2) = hk_balancing_families(4).unwrap();
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..100 {
            let x: Vec<Rat> = (0..12)
                .map(|_| rat((next() % 2001) as i64 - 1000, (next() % 97 + 1) as i64))
                .collect();
            for fam in [&s1, &s2] {
                assert_eq!(
                    symmetrize(&g, fam, &x).unwrap(),
                    automorphism_average(fam, &x)
                );
            }
        }
    }

    #[test]
    fn layer_labels_biject_with_vertices() {
        let k = 4;
        let g = build_hk(k).unwrap();
        for v in 0..g.n() {
            let parsed = HkLabel::parse(g.label(v)).unwrap();
            assert_eq!(parsed.index(), v);
            assert_eq!(parsed.label(), g.label(v));
        }
        assert!(HkLabel::new(4, 5, 0).is_err());
        assert!(HkLabel::new(4, 1, 3).is_err());
        assert!(HkLabel::parse("1-0").is_err());
    }

    #[test]
    fn json_round_trip_is_deterministic() {
        let g = build_hk(3).unwrap();
        let v = g.to_json();
        let g2 = Graph::from_json(&v).unwrap();
        assert_eq!(g, g2);
        assert_eq!(v.to_string(), g2.to_json().to_string());
    }

    #[test]
    fn iso_guard_and_negative_case() {
        let big = build_hk(7).unwrap();
        assert!(find_isomorphism(&big, &big).is_err());
        let c6 = cycle_graph(6).unwrap();
        let two_triangles = Graph::new(
            vec!["a", "b", "c", "d", "e", "f"],
            &[
                ("a".into(), "b".into()),
                ("b".into(), "c".into()),
                ("c".into(), "a".into()),
                ("d".into(), "e".into()),
                ("e".into(), "f".into()),
                ("f".into(), "d".into()),
            ],
        )
        .unwrap();
        assert!(find_isomorphism(&c6, &two_triangles).unwrap().is_none());
        assert!(find_isomorphism(&c6, &build_hk(2).unwrap()).unwrap().is_some());
    }
}
