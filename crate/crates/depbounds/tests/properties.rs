//! Cross-module properties: bound/oracle consistency over the corpus,
//! monotonicity, the closed-form matching witnesses, and the χ_b/b → χ*
//! relationship.

mod common;

use common::{graph_corpus, hypergraph_corpus, petersen_graph, probability_grid, r};

use num_rational::BigRational;
use num_traits::ToPrimitive;

use depbounds::bounds::finner_independence_bound;
use depbounds::hypergraph::{path_hypergraph, triangle_hypergraph, Hypergraph};
use depbounds::invariants::{
    b_fold_chromatic_number, fractional_chromatic_number, fractional_matching_number,
    fractional_vertex_cover_number, FractionalWeighting,
};
use depbounds::oracle::{
    check_dependency_graph, edge_indicator_distribution, exact_independence_probability,
    verify_finner, DEPENDENCY_SUBSET_CAP,
};
use depbounds::probability::VertexProbabilities;
use depbounds::rational::{binomial, from_u64, to_f64};

/// Finner's bound with the optimal matching dominates the exact
/// independence probability on every corpus hypergraph and p in the grid:
/// the numerical verification of the whole inequality chain.
#[test]
fn finner_bound_dominates_exact_independence_probability() {
    for (name, h) in hypergraph_corpus() {
        let (_, phi) = fractional_matching_number(&h).unwrap();
        for p in probability_grid() {
            let vp = VertexProbabilities::uniform(&h, &p).unwrap();
            let exact = exact_independence_probability(&h, &vp).unwrap();
            let bound = finner_independence_bound(&h, &vp, &phi).unwrap();
            let exact_f = to_f64(&exact);
            assert!(
                exact_f <= bound.value + 1e-10,
                "{name} p={p}: exact {exact_f} > bound {}",
                bound.value
            );
        }
    }
}

/// verify_finner holds on every corpus hypergraph with its optimal φ.
#[test]
fn finner_inequality_holds_on_corpus() {
    for (name, h) in hypergraph_corpus() {
        let (_, phi) = fractional_matching_number(&h).unwrap();
        for p in probability_grid() {
            let vp = VertexProbabilities::uniform(&h, &p).unwrap();
            let check = verify_finner(&h, &vp, &phi).unwrap();
            assert!(check.holds, "{name} p={p}");
        }
    }
}

/// The intersection graph is a legal dependency graph for the edge
/// indicators built on the hypergraph.
#[test]
fn intersection_graph_is_dependency_graph_for_indicator_products() {
    for (name, h) in hypergraph_corpus() {
        if h.vertex_count() > 12 || h.edge_count() > 8 {
            continue; // joint-law enumeration budget
        }
        let vp = VertexProbabilities::uniform(&h, &r("1/2")).unwrap();
        let d = edge_indicator_distribution(&h, &vp).unwrap();
        let g = h.dependency_graph().unwrap();
        let check = check_dependency_graph(&d, &g, DEPENDENCY_SUBSET_CAP).unwrap();
        assert!(check.holds(), "{name}: {:?}", check.violations);
    }
}

/// ν* equals the independently computed fractional vertex-cover optimum on
/// every corpus hypergraph (LP duality).
#[test]
fn matching_equals_vertex_cover_on_corpus() {
    for (name, h) in hypergraph_corpus() {
        let (nu, phi) = fractional_matching_number(&h).unwrap();
        let cover = fractional_vertex_cover_number(&h).unwrap();
        assert_eq!(nu, cover, "{name}");
        assert_eq!(phi.total(), nu, "{name}");
        phi.check_matching(&h).unwrap();
    }
}

/// Nested k-uniform hypergraphs: adding edges can only shrink the bound.
#[test]
fn finner_bound_monotone_under_edge_addition() {
    let full = triangle_hypergraph(6).unwrap();
    let sub = Hypergraph::new(
        full.vertices().to_vec(),
        full.edges()[..10]
            .iter()
            .map(|e| e.iter().map(|&v| full.vertex_label(v).to_owned()).collect())
            .collect(),
    );
    assert!(sub.validate().is_empty());
    let (nu_full, phi_full) = fractional_matching_number(&full).unwrap();
    let (nu_sub, phi_sub) = fractional_matching_number(&sub).unwrap();
    assert!(nu_full >= nu_sub);
    for p in probability_grid() {
        let vp_full = VertexProbabilities::uniform(&full, &p).unwrap();
        let vp_sub = VertexProbabilities::uniform(&sub, &p).unwrap();
        let b_full = finner_independence_bound(&full, &vp_full, &phi_full).unwrap();
        let b_sub = finner_independence_bound(&sub, &vp_sub, &phi_sub).unwrap();
        assert!(b_full.value <= b_sub.value + 1e-12, "p={p}");
    }
}

/// The uniform witness φ ≡ 1/(n−2) certifies ν* ≥ C(n,3)/(n−2) for all
/// n ≤ 8, and the LP meets it.
#[test]
fn triangle_uniform_witness_all_n() {
    for n in 3..=8u64 {
        let h = triangle_hypergraph(n as usize).unwrap();
        let witness = FractionalWeighting::uniform(
            h.edge_count(),
            BigRational::new(1.into(), (n as i64 - 2).into()),
        );
        witness.check_matching(&h).unwrap();
        let target = BigRational::new(
            binomial(n, 3).unwrap().to_i64().unwrap().into(),
            (n as i64 - 2).into(),
        );
        assert_eq!(witness.total(), target, "n={n}");
        let (nu, _) = fractional_matching_number(&h).unwrap();
        assert!(nu >= target, "n={n}");
    }
}

/// Path hypergraphs meet the closed-form matching lower bounds in both
/// degree regimes.
#[test]
fn path_hypergraph_matching_lower_bounds() {
    // k ≤ (n−1)/2: ν* ≥ n−2
    for (n, k) in [(5usize, 3usize), (7, 3), (8, 3)] {
        let h = path_hypergraph(n, k, 0, 1).unwrap();
        let (nu, _) = fractional_matching_number(&h).unwrap();
        assert!(nu >= from_u64(n as u64 - 2), "n={n} k={k} nu={nu}");
    }
    // k > (n−1)/2: ν* ≥ (n−2)(n−3)/(2(k−2))
    for (n, k) in [(6usize, 4usize), (7, 4), (6, 5)] {
        let h = path_hypergraph(n, k, 0, 1).unwrap();
        let (nu, _) = fractional_matching_number(&h).unwrap();
        let target = BigRational::new(
            ((n as i64 - 2) * (n as i64 - 3)).into(),
            (2 * (k as i64 - 2)).into(),
        );
        assert!(nu >= target, "n={n} k={k} nu={nu} target={target}");
    }
}

/// χ_b/b never falls below χ*, and meets it when b is the denominator of
/// χ*: C5 and Petersen at b=2, C7 at b=3.
#[test]
fn chi_b_ratio_meets_chi_star_at_denominator() {
    let cases: Vec<(&str, depbounds::DependencyGraph, u32)> = vec![
        ("cycle5", depbounds::cycle_graph(5).unwrap(), 2),
        ("cycle7", depbounds::cycle_graph(7).unwrap(), 3),
        ("petersen", petersen_graph(), 2),
    ];
    for (name, g, denom) in cases {
        let (chi_star, cert) = fractional_chromatic_number(&g).unwrap();
        cert.check(&g).unwrap();
        for b in 1..=denom {
            let (a, bcert) = b_fold_chromatic_number(&g, b).unwrap();
            bcert.check(&g).unwrap();
            let ratio = from_u64(a as u64) / from_u64(b as u64);
            assert!(ratio >= chi_star, "{name} b={b}");
            if b == denom {
                assert_eq!(ratio, chi_star, "{name} b={b}");
            }
        }
    }
}

/// Monte Carlo on the triangle hypergraph of K_6 agrees with the exact
/// enumeration oracle (the triangle-free probability of G(6, 1/2)).
#[test]
fn mc_matches_exhaustive_triangle_oracle() {
    let h = triangle_hypergraph(6).unwrap();
    let vp = VertexProbabilities::uniform(&h, &r("1/2")).unwrap();
    let exact = to_f64(&exact_independence_probability(&h, &vp).unwrap());
    let est = depbounds::mc::mc_independence(&h, &vp, 200_000, 424242).unwrap();
    assert!(
        (est.estimate - exact).abs() <= 3.0 * est.half_width,
        "estimate {} vs exact {exact}, half-width {}",
        est.estimate,
        est.half_width
    );
}

/// Triangle dependency graphs have no isolated vertices once n ≥ 4: every
/// triangle of K_n shares an edge with some other triangle.
#[test]
fn triangle_dependency_graph_has_no_isolated_vertices() {
    for n in 4..=6 {
        let dep = triangle_hypergraph(n).unwrap().dependency_graph().unwrap();
        for v in 0..dep.vertex_count() {
            assert!(dep.degree(v) >= 1, "n={n} vertex {v}");
        }
    }
}

/// χ* on the corpus graphs stays within its combinatorial sandwich
/// n/α ≤ χ* ≤ χ_1.
#[test]
fn chi_star_sandwich_on_corpus() {
    for (name, g) in graph_corpus() {
        let (chi_star, cert) = fractional_chromatic_number(&g).unwrap();
        cert.check(&g).unwrap();
        let (chi_1, _) = b_fold_chromatic_number(&g, 1).unwrap();
        let alpha = depbounds::invariants::maximal_independent_sets(&g)
            .unwrap()
            .iter()
            .map(|s| s.len())
            .max()
            .unwrap() as u64;
        let lower = from_u64(g.vertex_count() as u64) / from_u64(alpha);
        assert!(chi_star >= lower, "{name}");
        assert!(chi_star <= from_u64(chi_1 as u64), "{name}");
    }
}
