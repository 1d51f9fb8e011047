//! Dependency graphs: loopless undirected graphs over random-variable
//! indices.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::Hypergraph;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("loop at vertex `{0}`")]
    Loop(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("graph edge must have exactly 2 vertices, got {0}")]
    EdgeArity(usize),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("json: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GraphFile {
    vertices: Vec<String>,
    edges: Vec<Vec<String>>,
}

/// Loopless undirected graph with labelled vertices. Adjacency is stored
/// symmetrically; edges are exposed as ordered pairs (u < v).
#[derive(Debug, Clone)]
pub struct DependencyGraph {
    labels: Vec<String>,
    adj: Vec<BTreeSet<usize>>,
}

impl DependencyGraph {
    pub fn new(labels: Vec<String>, edges: &[(String, String)]) -> Result<Self, GraphError> {
        let index: std::collections::HashMap<&str, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let pairs = edges
            .iter()
            .map(|(a, b)| {
                let u = *index
                    .get(a.as_str())
                    .ok_or_else(|| GraphError::UnknownVertex(a.clone()))?;
                let v = *index
                    .get(b.as_str())
                    .ok_or_else(|| GraphError::UnknownVertex(b.clone()))?;
                Ok((u, v))
            })
            .collect::<Result<Vec<_>, GraphError>>()?;
        Self::from_index_pairs(labels, pairs)
    }

    pub fn from_index_pairs(
        labels: Vec<String>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, GraphError> {
        let n = labels.len();
        let mut adj = vec![BTreeSet::new(); n];
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::Loop(labels[u].clone()));
            }
            if u >= n || v >= n {
                return Err(GraphError::Parameter(format!(
                    "edge ({u},{v}) out of range 0..{n}"
                )));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(DependencyGraph { labels, adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u).is_some_and(|s| s.contains(&v))
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges as (u, v) pairs with u < v, in vertex order.
    pub fn edge_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, s)| s.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        let mut edges = Vec::with_capacity(file.edges.len());
        for e in &file.edges {
            if e.len() != 2 {
                return Err(GraphError::EdgeArity(e.len()));
            }
            edges.push((e[0].clone(), e[1].clone()));
        }
        Self::new(file.vertices, &edges)
    }

    pub fn to_json(&self) -> String {
        let file = GraphFile {
            vertices: self.labels.clone(),
            edges: self
                .edge_pairs()
                .map(|(u, v)| vec![self.labels[u].clone(), self.labels[v].clone()])
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("graph json")
    }

    pub fn to_hypergraph(&self) -> Hypergraph {
        Hypergraph::from_graph(self)
    }
}

/// The cycle C_n with vertices v1..vn and edges {v_i, v_{i+1}}, {v_n, v_1}.
pub fn cycle_graph(n: usize) -> Result<DependencyGraph, GraphError> {
    if n < 3 {
        return Err(GraphError::Parameter(format!(
            "cycle needs at least 3 vertices, got {n}"
        )));
    }
    let labels: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    DependencyGraph::from_index_pairs(labels, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_structure() {
        let c5 = cycle_graph(5).unwrap();
        assert_eq!(c5.vertex_count(), 5);
        assert_eq!(c5.edge_count(), 5);
        for v in 0..5 {
            assert_eq!(c5.degree(v), 2);
        }
        assert!(c5.is_edge(0, 4));
        assert!(!c5.is_edge(0, 2));

        let c3 = cycle_graph(3).unwrap();
        assert_eq!(c3.edge_count(), 3); // K_3

        // C_4 is bipartite: parts {0,2} and {1,3}
        let c4 = cycle_graph(4).unwrap();
        assert!(!c4.is_edge(0, 2) && !c4.is_edge(1, 3));

        assert!(cycle_graph(2).is_err());
    }

    #[test]
    fn rejects_loops_and_unknowns() {
        let labels = vec!["a".to_string(), "b".to_string()];
        assert!(matches!(
            DependencyGraph::from_index_pairs(labels.clone(), vec![(0, 0)]),
            Err(GraphError::Loop(_))
        ));
        assert!(DependencyGraph::new(labels, &[("a".to_string(), "zz".to_string())]).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let c5 = cycle_graph(5).unwrap();
        let back = DependencyGraph::from_json(&c5.to_json()).unwrap();
        assert_eq!(back.edge_count(), 5);
        assert!(DependencyGraph::from_json(
            r#"{"vertices":["a","b","c"],"edges":[["a","b","c"]]}"#
        )
        .is_err());
    }

    #[test]
    fn graph_hypergraph_conversion() {
        let c5 = cycle_graph(5).unwrap();
        let h = c5.to_hypergraph();
        assert_eq!(h.vertex_count(), 5);
        assert_eq!(h.edge_count(), 5);
        assert_eq!(h.uniformity(), Some(2));
    }
}
