//! Hypergraphs: validation, JSON ingestion, and the specific constructions
//! used by the random-graph bounds (triangles, paths, degrees, cliques).
//!
//! A hypergraph is a finite vertex set plus a family of nonempty vertex
//! subsets. Vertices are opaque strings mapped to dense indices in input
//! order; edges are stored as sorted duplicate-free index lists so that
//! duplicate detection and intersection tests are cheap. All types are
//! immutable after construction.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::DependencyGraph;
use crate::rational::{binomial, factorial};

#[derive(Debug, Error)]
pub enum HypergraphError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("invalid hypergraph: {0}")]
    Invalid(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("json: {0}")]
    Json(String),
}

/// A structural invariant violation, reported as data rather than a failure
/// so that ingested files can be diagnosed in full.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UnknownVertex { edge: usize, vertex: String },
    EmptyEdge { edge: usize },
    DuplicateEdge { first: usize, second: usize },
    DuplicateVertex { vertex: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownVertex { edge, vertex } => {
                write!(f, "edge {edge} references unknown vertex {vertex}")
            }
            Violation::EmptyEdge { edge } => write!(f, "edge {edge} is empty"),
            Violation::DuplicateEdge { first, second } => {
                write!(
                    f,
                    "edge {second} duplicates edge {first} (multi-edges not enabled)"
                )
            }
            Violation::DuplicateVertex { vertex } => {
                write!(f, "vertex {vertex} listed more than once")
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct HypergraphFile {
    vertices: Vec<String>,
    edges: Vec<Vec<String>>,
}

#[derive(Debug, Clone)]
pub struct Hypergraph {
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    /// Canonical edges: sorted, duplicate-free vertex indices. Edges that
    /// reference unknown vertices are dropped here and recorded as
    /// violations.
    edges: Vec<Vec<usize>>,
    multi_edge: bool,
    violations: Vec<Violation>,
}

impl Hypergraph {
    pub fn new(vertices: Vec<String>, edges: Vec<Vec<String>>) -> Self {
        Self::build(vertices, edges, false)
    }

    /// Like [`Hypergraph::new`] but allows repeated edge subsets.
    pub fn new_multi(vertices: Vec<String>, edges: Vec<Vec<String>>) -> Self {
        Self::build(vertices, edges, true)
    }

    fn build(vertices: Vec<String>, raw_edges: Vec<Vec<String>>, multi_edge: bool) -> Self {
        let mut violations = Vec::new();
        let mut index = HashMap::with_capacity(vertices.len());
        for v in &vertices {
            if index.insert(v.clone(), index.len()).is_some() {
                violations.push(Violation::DuplicateVertex { vertex: v.clone() });
            }
        }
        // rebuild with first-occurrence indices if duplicates collapsed slots
        if violations
            .iter()
            .any(|v| matches!(v, Violation::DuplicateVertex { .. }))
        {
            index.clear();
            for v in &vertices {
                let next = index.len();
                index.entry(v.clone()).or_insert(next);
            }
        }

        let mut edges = Vec::with_capacity(raw_edges.len());
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        for (ei, raw) in raw_edges.iter().enumerate() {
            if raw.is_empty() {
                violations.push(Violation::EmptyEdge { edge: ei });
                continue;
            }
            let mut resolved = Vec::with_capacity(raw.len());
            let mut ok = true;
            for name in raw {
                match index.get(name) {
                    Some(&i) => resolved.push(i),
                    None => {
                        violations.push(Violation::UnknownVertex {
                            edge: ei,
                            vertex: name.clone(),
                        });
                        ok = false;
                    }
                }
            }
            if !ok {
                continue;
            }
            resolved.sort_unstable();
            resolved.dedup();
            if let Some(&first) = seen.get(&resolved) {
                if !multi_edge {
                    violations.push(Violation::DuplicateEdge { first, second: ei });
                    continue;
                }
            } else {
                seen.insert(resolved.clone(), ei);
            }
            edges.push(resolved);
        }

        Hypergraph {
            vertices,
            index,
            edges,
            multi_edge,
            violations,
        }
    }

    /// Builds directly from dense indices; panics on out-of-range indices.
    /// Intended for generators, which construct valid hypergraphs by design.
    pub(crate) fn from_indices(
        vertices: Vec<String>,
        edges: Vec<Vec<usize>>,
        multi_edge: bool,
    ) -> Self {
        let n = vertices.len();
        let index = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let mut canonical = Vec::with_capacity(edges.len());
        for mut e in edges {
            assert!(!e.is_empty(), "generator produced an empty edge");
            e.sort_unstable();
            e.dedup();
            assert!(*e.last().unwrap() < n, "generator edge index out of range");
            canonical.push(e);
        }
        Hypergraph {
            vertices,
            index,
            edges: canonical,
            multi_edge,
            violations: Vec::new(),
        }
    }

    /// Returns all invariant violations; empty iff the hypergraph is valid.
    pub fn validate(&self) -> &[Violation] {
        &self.violations
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn ensure_valid(&self) -> Result<(), HypergraphError> {
        if self.is_valid() {
            Ok(())
        } else {
            let msgs: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
            Err(HypergraphError::Invalid(msgs.join("; ")))
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_label(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Canonical edges as sorted index lists.
    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn multi_edge(&self) -> bool {
        self.multi_edge
    }

    /// Canonical display form of edge `i`, e.g. `{a,b,c}`.
    pub fn edge_label(&self, i: usize) -> String {
        let names: Vec<&str> = self.edges[i]
            .iter()
            .map(|&v| self.vertices[v].as_str())
            .collect();
        format!("{{{}}}", names.join(","))
    }

    /// Number of edges containing the named vertex.
    pub fn degree(&self, vertex: &str) -> Result<usize, HypergraphError> {
        let v = self
            .vertex_index(vertex)
            .ok_or_else(|| HypergraphError::UnknownVertex(vertex.to_owned()))?;
        Ok(self.degree_of_index(v))
    }

    pub fn degree_of_index(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.binary_search(&v).is_ok())
            .count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertices.len())
            .map(|v| self.degree_of_index(v))
            .max()
            .unwrap_or(0)
    }

    /// `Some(k)` if every edge has cardinality k.
    pub fn uniformity(&self) -> Option<usize> {
        let mut sizes = self.edges.iter().map(|e| e.len());
        let k = sizes.next()?;
        sizes.all(|s| s == k).then_some(k)
    }

    /// Intersection graph of the edge family: one vertex per hyperedge,
    /// adjacent iff the hyperedges share a vertex. This is the canonical
    /// dependency graph for variables correlated through this hypergraph.
    pub fn dependency_graph(&self) -> Result<DependencyGraph, HypergraphError> {
        self.ensure_valid()?;
        let m = self.edges.len();
        let labels: Vec<String> = (0..m).map(|i| format!("e{i}")).collect();
        let mut pairs = Vec::new();
        for i in 0..m {
            for j in (i + 1)..m {
                if intersects(&self.edges[i], &self.edges[j]) {
                    pairs.push((i, j));
                }
            }
        }
        DependencyGraph::from_index_pairs(labels, pairs)
            .map_err(|e| HypergraphError::Invalid(e.to_string()))
    }

    /// Reads the canonical JSON form
    /// `{"vertices": ["a", ...], "edges": [["a","b"], ...]}`.
    pub fn from_json(text: &str) -> Result<Self, HypergraphError> {
        let file: HypergraphFile =
            serde_json::from_str(text).map_err(|e| HypergraphError::Json(e.to_string()))?;
        Ok(Self::new(file.vertices, file.edges))
    }

    pub fn to_json(&self) -> String {
        let file = HypergraphFile {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| e.iter().map(|&v| self.vertices[v].clone()).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("hypergraph json")
    }

    /// 2-uniform view of a graph, sharing its labels.
    pub fn from_graph(g: &DependencyGraph) -> Self {
        let vertices: Vec<String> = g.labels().to_vec();
        let edges: Vec<Vec<usize>> = g.edge_pairs().map(|(u, v)| vec![u, v]).collect();
        Hypergraph::from_indices(vertices, edges, false)
    }
}

pub(crate) fn intersects(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Label for the potential K_n edge {i, j}.
fn kn_edge_label(i: usize, j: usize) -> String {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    format!("{a}-{b}")
}

/// Vertex set shared by all K_n-edge constructions: one hypergraph vertex
/// per potential edge of the complete graph on n labelled vertices,
/// enumerated in lexicographic order.
fn kn_edge_vertices(n: usize) -> (Vec<String>, HashMap<(usize, usize), usize>) {
    let mut labels = Vec::with_capacity(n * (n - 1) / 2);
    let mut idx = HashMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            idx.insert((i, j), labels.len());
            labels.push(kn_edge_label(i, j));
        }
    }
    (labels, idx)
}

fn kn_edge_index(idx: &HashMap<(usize, usize), usize>, i: usize, j: usize) -> usize {
    let key = if i < j { (i, j) } else { (j, i) };
    idx[&key]
}

/// Hypergraph whose vertices are the potential edges of K_n and whose
/// hyperedges are the edge-triples of its triangles: C(n,2) vertices,
/// C(n,3) 3-uniform edges, every vertex in exactly n−2 of them.
pub fn triangle_hypergraph(n: usize) -> Result<Hypergraph, HypergraphError> {
    clique_hypergraph(n, 3)
}

/// Generalisation of [`triangle_hypergraph`]: one hyperedge per k-subset of
/// the n graph vertices, containing the C(k,2) edges of that clique.
pub fn clique_hypergraph(n: usize, k: usize) -> Result<Hypergraph, HypergraphError> {
    if k < 3 {
        return Err(HypergraphError::Parameter(format!(
            "clique size must be at least 3, got {k}"
        )));
    }
    if n < k {
        return Err(HypergraphError::Parameter(format!(
            "need n >= {k} graph vertices, got {n}"
        )));
    }
    let (labels, idx) = kn_edge_vertices(n);
    let mut edges = Vec::new();
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let mut edge = Vec::with_capacity(k * (k - 1) / 2);
        for a in 0..k {
            for b in (a + 1)..k {
                edge.push(kn_edge_index(&idx, subset[a], subset[b]));
            }
        }
        edges.push(edge);
        // next k-combination of 0..n in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(Hypergraph::from_indices(labels, edges, false));
            }
            i -= 1;
            if subset[i] != i + n - k {
                break;
            }
        }
        subset[i] += 1;
        for j in (i + 1)..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

/// Hypergraph of length-k paths between two fixed vertices u, v of K_n:
/// vertices are the potential edges of K_n, one hyperedge per undirected
/// u–v path (a path and its reverse are the same edge set), so there are
/// C(n−2, k−1)·(k−1)! hyperedges of cardinality k.
pub fn path_hypergraph(
    n: usize,
    k: usize,
    u: usize,
    v: usize,
) -> Result<Hypergraph, HypergraphError> {
    if k < 3 {
        return Err(HypergraphError::Parameter(format!(
            "path length must be at least 3, got {k}"
        )));
    }
    if k > n.saturating_sub(1) {
        return Err(HypergraphError::Parameter(format!(
            "path length {k} needs at least {} vertices, got {n}",
            k + 1
        )));
    }
    if u == v {
        return Err(HypergraphError::Parameter("endpoints must differ".into()));
    }
    if u >= n || v >= n {
        return Err(HypergraphError::Parameter(format!(
            "endpoints must lie in 0..{n}"
        )));
    }
    let (labels, idx) = kn_edge_vertices(n);
    let others: Vec<usize> = (0..n).filter(|&x| x != u && x != v).collect();
    let mut edges = Vec::new();
    // ordered (k-1)-tuples of interior vertices
    let mut stack: Vec<usize> = Vec::with_capacity(k - 1);
    let mut used = vec![false; others.len()];
    fn rec(
        others: &[usize],
        used: &mut [bool],
        stack: &mut Vec<usize>,
        want: usize,
        u: usize,
        v: usize,
        idx: &HashMap<(usize, usize), usize>,
        edges: &mut Vec<Vec<usize>>,
    ) {
        if stack.len() == want {
            let mut edge = Vec::with_capacity(want + 1);
            let mut prev = u;
            for &w in stack.iter() {
                edge.push(kn_edge_index(idx, prev, w));
                prev = w;
            }
            edge.push(kn_edge_index(idx, prev, v));
            edges.push(edge);
            return;
        }
        for i in 0..others.len() {
            if !used[i] {
                used[i] = true;
                stack.push(others[i]);
                rec(others, used, stack, want, u, v, idx, edges);
                stack.pop();
                used[i] = false;
            }
        }
    }
    rec(
        &others,
        &mut used,
        &mut stack,
        k - 1,
        u,
        v,
        &idx,
        &mut edges,
    );
    Ok(Hypergraph::from_indices(labels, edges, false))
}

/// Degree hypergraph: vertices are the potential edges of K_n and hyperedge
/// E_i collects the edges incident to graph vertex i, so |E| = n and every
/// hypergraph vertex has degree exactly 2. For n = 2 the two hyperedges
/// coincide and the multi-edge flag is set.
pub fn degree_hypergraph(n: usize) -> Result<Hypergraph, HypergraphError> {
    if n < 2 {
        return Err(HypergraphError::Parameter(format!(
            "need at least 2 graph vertices, got {n}"
        )));
    }
    let (labels, idx) = kn_edge_vertices(n);
    let mut edges = Vec::with_capacity(n);
    for i in 0..n {
        let edge: Vec<usize> = (0..n)
            .filter(|&j| j != i)
            .map(|j| kn_edge_index(&idx, i, j))
            .collect();
        edges.push(edge);
    }
    Ok(Hypergraph::from_indices(labels, edges, n == 2))
}

/// Which K_n edge an edge-degree count refers to: incident to one of the two
/// fixed path endpoints, or interior (disjoint from both).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeClass {
    IncidentToEndpoint,
    Interior,
}

/// Closed-form count of length-k u–v paths in K_n passing through a fixed
/// edge of the given class: C(n−3, k−2)·(k−2)! for an edge incident to an
/// endpoint, 2(k−2)·C(n−4, k−3)·(k−3)! for an interior edge.
pub fn path_count_through_edge(
    n: usize,
    k: usize,
    class: EdgeClass,
) -> Result<u64, HypergraphError> {
    if k < 3 {
        return Err(HypergraphError::Parameter(format!(
            "path length must be at least 3, got {k}"
        )));
    }
    if k > n.saturating_sub(1) {
        return Err(HypergraphError::Parameter(format!(
            "path length {k} needs at least {} vertices, got {n}",
            k + 1
        )));
    }
    let err = |e: String| HypergraphError::Parameter(e);
    match class {
        EdgeClass::IncidentToEndpoint => {
            if n < 3 {
                return Err(err(format!("need n >= 3, got {n}")));
            }
            let c = binomial((n - 3) as u64, (k - 2) as u64).map_err(err)?;
            let f = factorial((k - 2) as u64).map_err(err)?;
            c.checked_mul(f)
                .ok_or_else(|| err("path count overflows u64".into()))
        }
        EdgeClass::Interior => {
            if n < 4 {
                return Err(err(format!("need n >= 4 for an interior edge, got {n}")));
            }
            let c = binomial((n - 4) as u64, (k - 3) as u64).map_err(err)?;
            let f = factorial((k - 3) as u64).map_err(err)?;
            (2 * (k as u64 - 2))
                .checked_mul(c)
                .and_then(|x| x.checked_mul(f))
                .ok_or_else(|| err("path count overflows u64".into()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(vertices: &[&str], edges: &[&[&str]]) -> Hypergraph {
        Hypergraph::new(
            vertices.iter().map(|s| s.to_string()).collect(),
            edges
                .iter()
                .map(|e| e.iter().map(|s| s.to_string()).collect())
                .collect(),
        )
    }

    #[test]
    fn edgeless_hypergraph_is_valid() {
        let g = h(&["a"], &[]);
        assert!(g.validate().is_empty());
        assert_eq!(g.max_degree(), 0);
    }

    #[test]
    fn unknown_vertex_is_reported() {
        let g = h(&["a", "b"], &[&["a", "x"]]);
        assert_eq!(g.validate().len(), 1);
        assert_eq!(
            g.validate()[0].to_string(),
            "edge 0 references unknown vertex x"
        );
    }

    #[test]
    fn duplicate_edge_reported_unless_multi() {
        let g = h(&["a", "b"], &[&["a", "b"], &["b", "a"]]);
        assert_eq!(g.validate().len(), 1);
        assert!(matches!(
            g.validate()[0],
            Violation::DuplicateEdge {
                first: 0,
                second: 1
            }
        ));
        let m = Hypergraph::new_multi(
            vec!["a".into(), "b".into()],
            vec![vec!["a".into(), "b".into()], vec!["b".into(), "a".into()]],
        );
        assert!(m.validate().is_empty());
        assert_eq!(m.edge_count(), 2);
    }

    #[test]
    fn empty_edge_and_duplicate_vertex_reported() {
        let g = Hypergraph::new(vec!["a".into(), "a".into()], vec![vec![]]);
        assert_eq!(g.validate().len(), 2);
    }

    #[test]
    fn degree_counts_edges() {
        let g = h(&["a", "b", "c"], &[&["a", "b"]]);
        assert_eq!(g.degree("a").unwrap(), 1);
        assert_eq!(g.degree("c").unwrap(), 0);
        assert!(matches!(
            g.degree("zz"),
            Err(HypergraphError::UnknownVertex(_))
        ));
    }

    #[test]
    fn triangle_hypergraph_counts() {
        // n=5: C(5,2)=10 vertices, C(5,3)=10 triangles, 3-uniform, 3-regular
        let t5 = triangle_hypergraph(5).unwrap();
        assert_eq!(t5.vertex_count(), 10);
        assert_eq!(t5.edge_count(), 10);
        assert_eq!(t5.uniformity(), Some(3));
        for v in 0..10 {
            assert_eq!(t5.degree_of_index(v), 3);
        }
        assert!(t5.validate().is_empty());

        let t3 = triangle_hypergraph(3).unwrap();
        assert_eq!((t3.vertex_count(), t3.edge_count()), (3, 1));

        let t6 = triangle_hypergraph(6).unwrap();
        assert_eq!((t6.vertex_count(), t6.edge_count()), (15, 20));

        assert!(triangle_hypergraph(2).is_err());
    }

    #[test]
    fn triangle_regularity_matches_direct_count() {
        for n in 3..=8 {
            let t = triangle_hypergraph(n).unwrap();
            for v in 0..t.vertex_count() {
                assert_eq!(t.degree_of_index(v), n - 2, "n={n} v={v}");
            }
        }
    }

    #[test]
    fn dependency_graph_of_disjoint_edges_is_edgeless() {
        let g = h(&["a", "b", "c", "d"], &[&["a", "b"], &["c", "d"]]);
        let dep = g.dependency_graph().unwrap();
        assert_eq!(dep.vertex_count(), 2);
        assert_eq!(dep.edge_count(), 0);
    }

    #[test]
    fn dependency_graph_of_k4_triangles_is_complete() {
        // all 4 triangles of K_4 pairwise share an edge of K_4
        let t = triangle_hypergraph(4).unwrap();
        let dep = t.dependency_graph().unwrap();
        assert_eq!(dep.vertex_count(), 4);
        assert_eq!(dep.edge_count(), 6);
        // brute-force pairwise intersection agrees
        for i in 0..4 {
            for j in (i + 1)..4 {
                let shared = t.edges()[i].iter().any(|x| t.edges()[j].contains(x));
                assert_eq!(dep.is_edge(i, j), shared);
            }
        }
    }

    #[test]
    fn path_hypergraph_dependency_matches_brute_force() {
        let p = path_hypergraph(5, 3, 0, 1).unwrap();
        let dep = p.dependency_graph().unwrap();
        for i in 0..p.edge_count() {
            for j in (i + 1)..p.edge_count() {
                let shared = p.edges()[i].iter().any(|x| p.edges()[j].contains(x));
                assert_eq!(dep.is_edge(i, j), shared, "edges {i},{j}");
            }
        }
    }

    #[test]
    fn path_hypergraph_counts() {
        let p = path_hypergraph(5, 3, 0, 1).unwrap();
        assert_eq!(p.edge_count(), 6); // C(3,2)·2!
        assert!(p.edges().iter().all(|e| e.len() == 3));
        assert!(p.validate().is_empty());

        let p2 = path_hypergraph(4, 3, 0, 1).unwrap();
        assert_eq!(p2.edge_count(), 2); // C(2,2)·2!

        assert!(path_hypergraph(5, 3, 0, 0).is_err());
        assert!(path_hypergraph(5, 5, 0, 1).is_err());
        assert!(path_hypergraph(5, 2, 0, 1).is_err());
    }

    #[test]
    fn path_hyperedge_count_formula() {
        for n in 4..=7usize {
            for k in 3..n {
                let p = path_hypergraph(n, k, 0, 1).unwrap();
                let expect = binomial((n - 2) as u64, (k - 1) as u64).unwrap()
                    * factorial((k - 1) as u64).unwrap();
                assert_eq!(p.edge_count() as u64, expect, "n={n} k={k}");
            }
        }
    }

    /// Brute-force oracle: count length-k u–v paths of K_n through a fixed
    /// edge by enumerating interior-vertex sequences directly.
    fn brute_paths_through(n: usize, k: usize, edge: (usize, usize)) -> u64 {
        let (u, v) = (0usize, 1usize);
        let others: Vec<usize> = (0..n).filter(|&x| x != u && x != v).collect();
        let mut count = 0u64;
        let mut stack = Vec::new();
        let mut used = vec![false; others.len()];
        fn rec(
            others: &[usize],
            used: &mut [bool],
            stack: &mut Vec<usize>,
            want: usize,
            edge: (usize, usize),
            count: &mut u64,
        ) {
            if stack.len() == want {
                let mut prev = 0usize;
                let mut hit = false;
                for &w in stack.iter().chain(std::iter::once(&1usize)) {
                    let e = if prev < w { (prev, w) } else { (w, prev) };
                    if e == edge {
                        hit = true;
                    }
                    prev = w;
                }
                if hit {
                    *count += 1;
                }
                return;
            }
            for i in 0..others.len() {
                if !used[i] {
                    used[i] = true;
                    stack.push(others[i]);
                    rec(others, used, stack, want, edge, count);
                    stack.pop();
                    used[i] = false;
                }
            }
        }
        rec(&others, &mut used, &mut stack, k - 1, edge, &mut count);
        count
    }

    #[test]
    fn path_count_through_edge_examples() {
        assert_eq!(
            path_count_through_edge(6, 3, EdgeClass::IncidentToEndpoint).unwrap(),
            3
        );
        assert_eq!(
            path_count_through_edge(6, 4, EdgeClass::Interior).unwrap(),
            8
        );
        assert_eq!(
            path_count_through_edge(5, 3, EdgeClass::Interior).unwrap(),
            2
        );
        assert!(path_count_through_edge(5, 2, EdgeClass::Interior).is_err());
    }

    #[test]
    fn path_count_through_edge_matches_enumeration() {
        // u=0, v=1; edge (0,2) is incident to an endpoint, (2,3) interior
        for n in 4..=7usize {
            for k in 3..=5usize.min(n - 1) {
                let incident = brute_paths_through(n, k, (0, 2));
                assert_eq!(
                    path_count_through_edge(n, k, EdgeClass::IncidentToEndpoint).unwrap(),
                    incident,
                    "incident n={n} k={k}"
                );
                let interior = brute_paths_through(n, k, (2, 3));
                assert_eq!(
                    path_count_through_edge(n, k, EdgeClass::Interior).unwrap(),
                    interior,
                    "interior n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn degree_hypergraph_shape() {
        let d4 = degree_hypergraph(4).unwrap();
        assert_eq!(d4.vertex_count(), 6);
        assert_eq!(d4.edge_count(), 4);
        assert!(d4.edges().iter().all(|e| e.len() == 3));
        assert_eq!(d4.max_degree(), 2);

        let d3 = degree_hypergraph(3).unwrap();
        assert_eq!(d3.vertex_count(), 3);
        assert_eq!(d3.edge_count(), 3);
        assert!(d3.edges().iter().all(|e| e.len() == 2));

        for n in 2..=9 {
            let d = degree_hypergraph(n).unwrap();
            assert_eq!(d.max_degree(), 2, "n={n}");
            assert!(d.validate().is_empty());
        }
        assert!(degree_hypergraph(1).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let g = triangle_hypergraph(4).unwrap();
        let text = g.to_json();
        let back = Hypergraph::from_json(&text).unwrap();
        assert_eq!(back.vertex_count(), g.vertex_count());
        assert_eq!(back.edges(), g.edges());
        assert!(Hypergraph::from_json("{not json").is_err());
    }
}
