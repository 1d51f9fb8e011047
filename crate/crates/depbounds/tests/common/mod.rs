//! Shared corpus builders for the integration and acceptance suites.
#![allow(dead_code)] // each test target uses its own subset

use num_rational::BigRational;
use num_traits::{One, Zero};

use depbounds::cycle_graph;
use depbounds::graph::DependencyGraph;
use depbounds::hypergraph::{degree_hypergraph, path_hypergraph, triangle_hypergraph, Hypergraph};
use depbounds::mc::CounterRng;
use depbounds::oracle::DiscreteJointDistribution;
use depbounds::probability::VertexProbabilities;
use depbounds::rational::parse_rational;

pub fn r(s: &str) -> BigRational {
    parse_rational(s).unwrap()
}

/// p ∈ {1/10, …, 9/10} as exact rationals.
pub fn probability_grid() -> Vec<BigRational> {
    (1..=9).map(|i| r(&format!("{i}/10"))).collect()
}

/// Seeded random hypergraph with 4..=max_vertices vertices and
/// 1..=max_edges distinct edges of size 2..=4.
pub fn random_hypergraph(seed: u64, max_vertices: usize, max_edges: usize) -> Hypergraph {
    let mut rng = CounterRng::for_sample(seed, 0xC0FFEE, 0);
    let n = 4 + (rng.next_u64() as usize) % (max_vertices - 3);
    let m = 1 + (rng.next_u64() as usize) % max_edges;
    let vertices: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let mut attempts = 0;
    while edges.len() < m && attempts < 10 * m {
        attempts += 1;
        let size = 2 + (rng.next_u64() as usize) % 3;
        let mut edge = std::collections::BTreeSet::new();
        while edge.len() < size.min(n) {
            edge.insert((rng.next_u64() as usize) % n);
        }
        let edge: Vec<usize> = edge.into_iter().collect();
        if seen.insert(edge.clone()) {
            edges.push(edge);
        }
    }
    let named: Vec<Vec<String>> = edges
        .iter()
        .map(|e| e.iter().map(|&v| vertices[v].clone()).collect())
        .collect();
    let h = Hypergraph::new(vertices, named);
    assert!(h.validate().is_empty());
    h
}

/// The Petersen graph: outer 5-cycle, inner pentagram, spokes.
pub fn petersen_graph() -> DependencyGraph {
    let labels: Vec<String> = (0..10).map(|i| format!("p{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5)); // outer cycle
        edges.push((i, i + 5)); // spoke
        edges.push((i + 5, ((i + 2) % 5) + 5)); // inner pentagram
    }
    DependencyGraph::from_index_pairs(labels, edges).unwrap()
}

/// Fixed hypergraph corpus: generator outputs plus seeded random instances,
/// all within the exact-enumeration range.
pub fn hypergraph_corpus() -> Vec<(String, Hypergraph)> {
    let mut corpus: Vec<(String, Hypergraph)> = vec![
        ("cycle5".into(), cycle_graph(5).unwrap().to_hypergraph()),
        ("cycle7".into(), cycle_graph(7).unwrap().to_hypergraph()),
        ("triangles4".into(), triangle_hypergraph(4).unwrap()),
        ("triangles5".into(), triangle_hypergraph(5).unwrap()),
        ("triangles6".into(), triangle_hypergraph(6).unwrap()),
        ("paths5_3".into(), path_hypergraph(5, 3, 0, 1).unwrap()),
        ("paths6_3".into(), path_hypergraph(6, 3, 0, 1).unwrap()),
        ("degrees4".into(), degree_hypergraph(4).unwrap()),
        ("degrees5".into(), degree_hypergraph(5).unwrap()),
    ];
    for seed in 0..6u64 {
        corpus.push((
            format!("random{seed}"),
            random_hypergraph(1000 + seed, 12, 8),
        ));
    }
    corpus
}

/// Fixed graph corpus for chromatic invariants.
pub fn graph_corpus() -> Vec<(String, DependencyGraph)> {
    let k = |n: usize| {
        let labels = (0..n).map(|i| format!("u{i}")).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                edges.push((i, j));
            }
        }
        DependencyGraph::from_index_pairs(labels, edges).unwrap()
    };
    vec![
        ("cycle4".into(), cycle_graph(4).unwrap()),
        ("cycle5".into(), cycle_graph(5).unwrap()),
        ("cycle7".into(), cycle_graph(7).unwrap()),
        ("k3".into(), k(3)),
        ("k5".into(), k(5)),
        ("petersen".into(), petersen_graph()),
    ]
}

/// Random hypergraph-correlated family: a seeded hypergraph plus one random
/// boolean function per edge applied to its seed bits. Returns the exact
/// joint law of (Y_e)_e together with the intersection dependency graph.
pub fn random_correlated_family(seed: u64) -> (DiscreteJointDistribution, DependencyGraph) {
    let h = random_hypergraph(seed, 12, 6);
    let mut rng = CounterRng::for_sample(seed, 0xFA111, 1);
    let n = h.vertex_count();
    let p: Vec<BigRational> = (0..n)
        .map(|_| {
            let tenths = 1 + rng.next_u64() % 9;
            r(&format!("{tenths}/10"))
        })
        .collect();
    let prob = VertexProbabilities::per_vertex(&h, p).unwrap();

    // one truth table per edge over its seed bits
    let tables: Vec<Vec<bool>> = h
        .edges()
        .iter()
        .map(|e| {
            (0..(1u32 << e.len()))
                .map(|_| rng.next_u64() & 1 == 1)
                .collect()
        })
        .collect();

    let m = h.edge_count();
    let mut law: std::collections::BTreeMap<Vec<u8>, BigRational> = Default::default();
    for x in 0u32..(1 << n) {
        let mut mass = BigRational::one();
        for v in 0..n {
            if x & (1 << v) != 0 {
                mass *= prob.get(v);
            } else {
                mass *= BigRational::one() - prob.get(v);
            }
        }
        let pattern: Vec<u8> = (0..m)
            .map(|e| {
                let edge = &h.edges()[e];
                let local = edge.iter().enumerate().fold(0usize, |acc, (i, &v)| {
                    acc | (usize::from(x & (1 << v) != 0) << i)
                });
                u8::from(tables[e][local])
            })
            .collect();
        *law.entry(pattern).or_insert_with(BigRational::zero) += mass;
    }
    let support = law
        .into_iter()
        .map(|(pat, mass)| {
            let values = pat
                .iter()
                .map(|&b| {
                    if b == 1 {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect();
            (values, mass)
        })
        .collect();
    let d = DiscreteJointDistribution::new_rational(m, support).unwrap();
    let g = h.dependency_graph().unwrap();
    (d, g)
}
