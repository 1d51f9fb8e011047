//! Fractional invariants: matching number ν*(H) with certificate, fractional
//! and b-fold chromatic numbers of dependency graphs, and the
//! independence-system variant.
//!
//! Everything here is exact: invariants are solved in rational arithmetic
//! and certificates satisfy their defining constraints with equality checks,
//! not tolerances.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::graph::DependencyGraph;
use crate::hypergraph::Hypergraph;
use crate::indep::IndependenceSystem;
use crate::lp::{self, LpOutcome, LpProblem, RelOp};
use crate::rational::{ceil_to_u32, format_rational, from_u64};

/// Enumeration caps: explicit errors instead of silent approximation.
pub const MAX_ENUM_VERTICES: usize = 24;
pub const MAX_FOLD: u32 = 8;

#[derive(Debug, Error)]
pub enum InvariantError {
    #[error("{what} has {got} vertices, enumeration cap is {cap}; use greedy_coloring_upper_bound for an approximate value")]
    CapExceeded {
        what: &'static str,
        got: usize,
        cap: usize,
    },
    #[error("fold count {got} exceeds cap {cap}")]
    FoldCapExceeded { got: u32, cap: u32 },
    #[error("fold count must be positive")]
    ZeroFold,
    #[error("hypergraph is invalid: {0}")]
    InvalidHypergraph(String),
    #[error(
        "singleton {{{0}}} is not in the independence system; every singleton must be independent"
    )]
    SingletonMissing(String),
    #[error("lp: {0}")]
    Lp(#[from] lp::LpError),
    #[error("unexpected lp status `{0}` for an invariant computation")]
    UnexpectedStatus(&'static str),
}

/// Nonnegative rational weights on the edges of a hypergraph (a fractional
/// matching certificate) or on independent sets (coloring weights).
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalWeighting {
    weights: Vec<BigRational>,
}

impl FractionalWeighting {
    pub fn new(weights: Vec<BigRational>) -> Self {
        FractionalWeighting { weights }
    }

    pub fn uniform(count: usize, w: BigRational) -> Self {
        FractionalWeighting {
            weights: vec![w; count],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, e: usize) -> &BigRational {
        &self.weights[e]
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn total(&self) -> BigRational {
        self.weights.iter().sum()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.weights.iter().map(crate::rational::to_f64).collect()
    }

    /// Checks the fractional-matching role exactly: every weight in [0,1]
    /// and every vertex load Σ_{e∋v} φ(e) ≤ 1. On failure names the
    /// offending vertex (or edge for a range violation).
    pub fn check_matching(&self, h: &Hypergraph) -> Result<(), MatchingViolation> {
        if self.weights.len() != h.edge_count() {
            return Err(MatchingViolation::Arity {
                expected: h.edge_count(),
                got: self.weights.len(),
            });
        }
        let one = BigRational::one();
        for (e, w) in self.weights.iter().enumerate() {
            if w.is_negative() || w > &one {
                return Err(MatchingViolation::WeightRange {
                    edge: e,
                    weight: format_rational(w),
                });
            }
        }
        let mut load = vec![BigRational::zero(); h.vertex_count()];
        for (e, edge) in h.edges().iter().enumerate() {
            for &v in edge {
                load[v] += &self.weights[e];
            }
        }
        for (v, l) in load.iter().enumerate() {
            if l > &one {
                return Err(MatchingViolation::VertexOverload {
                    vertex: h.vertex_label(v).to_owned(),
                    load: format_rational(l),
                });
            }
        }
        Ok(())
    }

    /// JSON form keyed by edge content, e.g. `{"value":"5/2","weights":{"{a,b}":"1/2"}}`.
    /// Weights of repeated multi-edges merge onto one key.
    pub fn to_json(&self, h: &Hypergraph) -> Value {
        let mut weights = Map::new();
        for (e, w) in self.weights.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            let key = h.edge_label(e);
            let merged = match weights.get(&key) {
                Some(Value::String(prev)) => {
                    let prev: BigRational = crate::rational::parse_rational(prev).unwrap();
                    prev + w
                }
                _ => w.clone(),
            };
            weights.insert(key, Value::String(format_rational(&merged)));
        }
        let mut obj = Map::new();
        obj.insert(
            "value".into(),
            Value::String(format_rational(&self.total())),
        );
        obj.insert("weights".into(), Value::Object(weights));
        Value::Object(obj)
    }
}

#[derive(Debug, Error)]
pub enum MatchingViolation {
    #[error("weighting has {got} entries, hypergraph has {expected} edges")]
    Arity { expected: usize, got: usize },
    #[error("weight of edge {edge} is {weight}, outside [0,1]")]
    WeightRange { edge: usize, weight: String },
    #[error("vertex {vertex} is overloaded: total weight {load} exceeds 1")]
    VertexOverload { vertex: String, load: String },
}

/// Weighted family of independent sets witnessing a chromatic value:
/// rational weights covering every vertex at least once (fractional mode)
/// or exactly `fold` color classes per vertex (b-fold mode).
#[derive(Debug, Clone)]
pub struct ChromaticCertificate {
    pub value: BigRational,
    pub fold: Option<u32>,
    /// Support sets as sorted vertex indices, parallel to `weights`.
    pub sets: Vec<Vec<usize>>,
    pub weights: Vec<BigRational>,
}

impl ChromaticCertificate {
    /// Exact validity check against the graph: every set independent, and
    /// the covering constraint for the certificate's mode.
    pub fn check(&self, g: &DependencyGraph) -> Result<(), String> {
        for set in &self.sets {
            for (i, &u) in set.iter().enumerate() {
                for &v in &set[i + 1..] {
                    if g.is_edge(u, v) {
                        return Err(format!("set {set:?} is not independent: {u} ~ {v}"));
                    }
                }
            }
        }
        if self.weights.iter().any(|w| w.is_negative()) {
            return Err("negative weight".into());
        }
        let mut cover = vec![BigRational::zero(); g.vertex_count()];
        for (set, w) in self.sets.iter().zip(&self.weights) {
            for &v in set {
                cover[v] += w;
            }
        }
        let total: BigRational = self.weights.iter().sum();
        if total != self.value {
            return Err("weights do not sum to the reported value".into());
        }
        match self.fold {
            Some(b) => {
                let b = from_u64(b as u64);
                for (v, c) in cover.iter().enumerate() {
                    if *c != b {
                        return Err(format!(
                            "vertex {v} is in {} classes, expected {}",
                            format_rational(c),
                            format_rational(&b)
                        ));
                    }
                }
            }
            None => {
                let one = BigRational::one();
                for (v, c) in cover.iter().enumerate() {
                    if *c < one {
                        return Err(format!("vertex {v} covered only {}", format_rational(c)));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self, labels: &[String]) -> Value {
        let mut weights = Map::new();
        for (set, w) in self.sets.iter().zip(&self.weights) {
            if w.is_zero() {
                continue;
            }
            let names: Vec<&str> = set.iter().map(|&v| labels[v].as_str()).collect();
            weights.insert(
                format!("{{{}}}", names.join(",")),
                Value::String(format_rational(w)),
            );
        }
        let mut obj = Map::new();
        obj.insert("value".into(), Value::String(format_rational(&self.value)));
        if let Some(b) = self.fold {
            obj.insert("fold".into(), Value::Number(b.into()));
        }
        obj.insert("weights".into(), Value::Object(weights));
        Value::Object(obj)
    }
}

/// LP behind ν*(H): maximize Σ φ_e subject to Σ_{e∋v} φ_e ≤ 1 per vertex.
pub fn nu_star_lp(h: &Hypergraph) -> LpProblem<BigRational> {
    let m = h.edge_count();
    let mut p = LpProblem::maximize(vec![BigRational::one(); m]);
    for v in 0..h.vertex_count() {
        let mut row = vec![BigRational::zero(); m];
        let mut nonzero = false;
        for (e, edge) in h.edges().iter().enumerate() {
            if edge.binary_search(&v).is_ok() {
                row[e] = BigRational::one();
                nonzero = true;
            }
        }
        if nonzero {
            p.constrain(row, RelOp::Le, BigRational::one());
        }
    }
    p
}

/// LP behind the fractional vertex cover: minimize Σ y_v subject to
/// Σ_{v∈e} y_v ≥ 1 per edge. By LP duality its optimum equals ν*(H);
/// computed independently as a cross-check.
pub fn vertex_cover_lp(h: &Hypergraph) -> LpProblem<BigRational> {
    let n = h.vertex_count();
    let mut p = LpProblem::minimize(vec![BigRational::one(); n]);
    for edge in h.edges() {
        let mut row = vec![BigRational::zero(); n];
        for &v in edge {
            row[v] = BigRational::one();
        }
        p.constrain(row, RelOp::Ge, BigRational::one());
    }
    p
}

/// Fractional matching number ν*(H) with an optimal certificate φ.
pub fn fractional_matching_number(
    h: &Hypergraph,
) -> Result<(BigRational, FractionalWeighting), InvariantError> {
    if !h.is_valid() {
        let msgs: Vec<String> = h.validate().iter().map(|v| v.to_string()).collect();
        return Err(InvariantError::InvalidHypergraph(msgs.join("; ")));
    }
    if h.edge_count() == 0 {
        return Ok((BigRational::zero(), FractionalWeighting::new(Vec::new())));
    }
    let p = nu_star_lp(h);
    let sol = match lp::solve_rational(&p)? {
        LpOutcome::Optimal(s) => s,
        other => return Err(InvariantError::UnexpectedStatus(other.status())),
    };
    let phi = FractionalWeighting::new(sol.primal);
    debug_assert!(phi.check_matching(h).is_ok());
    Ok((sol.value, phi))
}

/// Optimum of the independent fractional vertex-cover LP.
pub fn fractional_vertex_cover_number(h: &Hypergraph) -> Result<BigRational, InvariantError> {
    if h.edge_count() == 0 {
        return Ok(BigRational::zero());
    }
    let p = vertex_cover_lp(h);
    match lp::solve_rational(&p)? {
        LpOutcome::Optimal(s) => Ok(s.value),
        other => Err(InvariantError::UnexpectedStatus(other.status())),
    }
}

fn adjacency_masks(g: &DependencyGraph) -> Result<Vec<u32>, InvariantError> {
    let n = g.vertex_count();
    if n > MAX_ENUM_VERTICES {
        return Err(InvariantError::CapExceeded {
            what: "graph",
            got: n,
            cap: MAX_ENUM_VERTICES,
        });
    }
    let mut adj = vec![0u32; n];
    for (u, v) in g.edge_pairs() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    Ok(adj)
}

/// All maximal independent sets, as sorted vertex lists in a deterministic
/// (lexicographic) order. Bron–Kerbosch with pivoting on the non-adjacency
/// relation; capped at [`MAX_ENUM_VERTICES`] vertices.
pub fn maximal_independent_sets(g: &DependencyGraph) -> Result<Vec<Vec<usize>>, InvariantError> {
    let masks = maximal_independent_set_masks(g)?;
    let mut out: Vec<Vec<usize>> = masks
        .into_iter()
        .map(|m| mask_to_vec(m, g.vertex_count()))
        .collect();
    out.sort();
    Ok(out)
}

pub(crate) fn mask_to_vec(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| mask & (1 << v) != 0).collect()
}

pub(crate) fn maximal_independent_set_masks(
    g: &DependencyGraph,
) -> Result<Vec<u32>, InvariantError> {
    let adj = adjacency_masks(g)?;
    let n = g.vertex_count();
    if n == 0 {
        return Ok(Vec::new());
    }
    // Bron–Kerbosch over the complement: cliques of the non-adjacency
    // relation are exactly the independent sets
    let all = (1u32 << n) - 1;
    let nonadj: Vec<u32> = (0..n).map(|v| all & !adj[v] & !(1 << v)).collect();
    let mut found = Vec::new();
    bron_kerbosch(0, all, 0, &nonadj, &mut found);
    found.sort_unstable();
    Ok(found)
}

fn bron_kerbosch(r: u32, mut p: u32, mut x: u32, nonadj: &[u32], out: &mut Vec<u32>) {
    if p == 0 && x == 0 {
        out.push(r);
        return;
    }
    // pivot: vertex of P ∪ X maximizing |P ∩ N(u)|
    let mut pivot = usize::MAX;
    let mut best = 0u32;
    let mut bits = p | x;
    while bits != 0 {
        let v = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let score = (p & nonadj[v]).count_ones();
        if pivot == usize::MAX || score > best {
            best = score;
            pivot = v;
        }
    }
    let mut ext = p & !nonadj[pivot];
    while ext != 0 {
        let v = ext.trailing_zeros() as usize;
        ext &= ext - 1;
        let vb = 1u32 << v;
        bron_kerbosch(r | vb, p & nonadj[v], x & nonadj[v], nonadj, out);
        p &= !vb;
        x |= vb;
    }
}

/// Covering LP behind χ*: minimize Σ x_I over the independent-set columns,
/// subject to Σ_{I∋v} x_I ≥ 1 per vertex. Restricting columns to maximal
/// sets loses nothing: a cover using a non-maximal set is dominated.
pub fn chi_star_lp(n_vertices: usize, sets: &[u32]) -> LpProblem<BigRational> {
    let mut p = LpProblem::minimize(vec![BigRational::one(); sets.len()]);
    for v in 0..n_vertices {
        let row: Vec<BigRational> = sets
            .iter()
            .map(|&m| {
                if m & (1 << v) != 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        p.constrain(row, RelOp::Ge, BigRational::one());
    }
    p
}

/// Fractional chromatic number χ*(G) = inf_b χ_b(G)/b, computed exactly via
/// the covering LP over maximal independent sets.
pub fn fractional_chromatic_number(
    g: &DependencyGraph,
) -> Result<(BigRational, ChromaticCertificate), InvariantError> {
    let masks = maximal_independent_set_masks(g)?;
    if g.vertex_count() == 0 {
        let cert = ChromaticCertificate {
            value: BigRational::zero(),
            fold: None,
            sets: Vec::new(),
            weights: Vec::new(),
        };
        return Ok((BigRational::zero(), cert));
    }
    let p = chi_star_lp(g.vertex_count(), &masks);
    let sol = match lp::solve_rational(&p)? {
        LpOutcome::Optimal(s) => s,
        other => return Err(InvariantError::UnexpectedStatus(other.status())),
    };
    let mut sets = Vec::new();
    let mut weights = Vec::new();
    for (i, w) in sol.primal.iter().enumerate() {
        if !w.is_zero() {
            sets.push(mask_to_vec(masks[i], g.vertex_count()));
            weights.push(w.clone());
        }
    }
    let cert = ChromaticCertificate {
        value: sol.value.clone(),
        fold: None,
        sets,
        weights,
    };
    debug_assert!(cert.check(g).is_ok());
    Ok((sol.value, cert))
}

/// Greedy multicover upper bound on χ_b: repeatedly take the maximal
/// independent set covering the largest remaining deficit. Returns the
/// chosen set masks.
fn greedy_multicover(n: usize, sets: &[u32], b: u32) -> Vec<u32> {
    let mut deficit = vec![b; n];
    let mut chosen = Vec::new();
    loop {
        let total: u32 = deficit.iter().sum();
        if total == 0 {
            return chosen;
        }
        let mut best_set = sets[0];
        let mut best_gain = 0u32;
        for &m in sets {
            let gain = (0..n)
                .filter(|&v| deficit[v] > 0 && m & (1 << v) != 0)
                .count() as u32;
            if gain > best_gain {
                best_gain = gain;
                best_set = m;
            }
        }
        debug_assert!(
            best_gain > 0,
            "some vertex lies in no maximal independent set"
        );
        chosen.push(best_set);
        for v in 0..n {
            if deficit[v] > 0 && best_set & (1 << v) != 0 {
                deficit[v] -= 1;
            }
        }
    }
}

/// 1-fold greedy coloring upper bound, usable when exact enumeration is out
/// of reach.
pub fn greedy_coloring_upper_bound(g: &DependencyGraph) -> u32 {
    let n = g.vertex_count();
    let mut color: Vec<Option<u32>> = vec![None; n];
    let mut palette = 0u32;
    for v in 0..n {
        let used: std::collections::BTreeSet<u32> =
            g.neighbors(v).filter_map(|u| color[u]).collect();
        let c = (0..).find(|c| !used.contains(c)).unwrap();
        color[v] = Some(c);
        palette = palette.max(c + 1);
    }
    palette
}

/// Exact b-fold chromatic number χ_b(G) with a certificate assigning each
/// vertex exactly b color classes. Branch-and-bound over multisets of
/// maximal independent sets, seeded by the ⌈b·χ*⌉ lower bound and the
/// greedy upper bound.
pub fn b_fold_chromatic_number(
    g: &DependencyGraph,
    b: u32,
) -> Result<(u32, ChromaticCertificate), InvariantError> {
    if b == 0 {
        return Err(InvariantError::ZeroFold);
    }
    if b > MAX_FOLD {
        return Err(InvariantError::FoldCapExceeded {
            got: b,
            cap: MAX_FOLD,
        });
    }
    let n = g.vertex_count();
    if n == 0 {
        let cert = ChromaticCertificate {
            value: BigRational::zero(),
            fold: Some(b),
            sets: Vec::new(),
            weights: Vec::new(),
        };
        return Ok((0, cert));
    }
    let sets = maximal_independent_set_masks(g)?;
    let (chi_star, _) = fractional_chromatic_number(g)?;
    let lower = ceil_to_u32(&(chi_star * from_u64(b as u64)));

    let mut best = greedy_multicover(n, &sets, b);
    if best.len() as u32 > lower {
        let mut chosen: Vec<u32> = Vec::new();
        let mut deficit = vec![b; n];
        let max_set_size = sets.iter().map(|m| m.count_ones()).max().unwrap_or(1);
        let mut sets_containing: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &m in &sets {
            for v in 0..n {
                if m & (1 << v) != 0 {
                    sets_containing[v].push(m);
                }
            }
        }
        // larger candidate sets first so good solutions appear early
        for list in sets_containing.iter_mut() {
            list.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
        }
        search(
            &mut chosen,
            &mut deficit,
            &sets_containing,
            max_set_size,
            lower,
            &mut best,
        );
    }

    let chi_b = best.len() as u32;
    let cert = trim_to_exact_fold(g, &best, b, chi_b);
    debug_assert!(cert.check(g).is_ok());
    Ok((chi_b, cert))
}

fn search(
    chosen: &mut Vec<u32>,
    deficit: &mut [u32],
    sets_containing: &[Vec<u32>],
    max_set_size: u32,
    global_lower: u32,
    best: &mut Vec<u32>,
) {
    let total: u32 = deficit.iter().sum();
    if total == 0 {
        if chosen.len() < best.len() {
            *best = chosen.clone();
        }
        return;
    }
    if best.len() as u32 == global_lower {
        return; // already optimal
    }
    let max_deficit = deficit.iter().copied().max().unwrap();
    let lb = max_deficit.max(total.div_ceil(max_set_size));
    if chosen.len() as u32 + lb >= best.len() as u32 {
        return;
    }
    let v = deficit.iter().position(|&d| d > 0).unwrap();
    for &m in &sets_containing[v] {
        let mut touched = Vec::new();
        for (u, d) in deficit.iter_mut().enumerate() {
            if *d > 0 && m & (1 << u) != 0 {
                *d -= 1;
                touched.push(u);
            }
        }
        chosen.push(m);
        search(
            chosen,
            deficit,
            sets_containing,
            max_set_size,
            global_lower,
            best,
        );
        chosen.pop();
        for u in touched {
            deficit[u] += 1;
        }
    }
}

/// Turns a multicover (every vertex in ≥ b classes) into an exact b-fold
/// coloring by removing over-covered vertices from their largest classes.
fn trim_to_exact_fold(
    g: &DependencyGraph,
    cover: &[u32],
    b: u32,
    chi_b: u32,
) -> ChromaticCertificate {
    let n = g.vertex_count();
    let mut classes: Vec<u32> = cover.to_vec();
    for v in 0..n {
        let vb = 1u32 << v;
        let mut count = classes.iter().filter(|&&m| m & vb != 0).count() as u32;
        while count > b {
            // drop v from the class with the most remaining vertices
            let (idx, _) = classes
                .iter()
                .enumerate()
                .filter(|(_, &m)| m & vb != 0)
                .max_by_key(|(_, &m)| m.count_ones())
                .unwrap();
            classes[idx] &= !vb;
            count -= 1;
        }
    }
    debug_assert!(
        classes.iter().all(|&m| m != 0),
        "minimal multicover should not trim a class away entirely"
    );
    let mut sets = Vec::new();
    let mut weights = Vec::new();
    // merge repeated classes into one entry with integral weight
    let mut counts: std::collections::BTreeMap<u32, u32> = std::collections::BTreeMap::new();
    for &m in &classes {
        *counts.entry(m).or_insert(0) += 1;
    }
    for (m, c) in counts {
        sets.push(mask_to_vec(m, n));
        weights.push(from_u64(c as u64));
    }
    ChromaticCertificate {
        value: from_u64(chi_b as u64),
        fold: Some(b),
        sets,
        weights,
    }
}

/// Fractional chromatic number of an independence system: the LP value of
/// min Σ x_A with Σ_{A∋v} x_A ≥ 1 over the listed independent sets. The
/// covering relaxation (≥ in place of the defining equality) is tight
/// because the family is hereditary: any over-cover shrinks to equality.
pub fn independence_system_chi_star(
    a: &IndependenceSystem,
) -> Result<(BigRational, ChromaticCertificate), InvariantError> {
    if let Some(missing) = a.missing_singleton() {
        return Err(InvariantError::SingletonMissing(missing.to_owned()));
    }
    let n = a.ground_size();
    if n == 0 {
        let cert = ChromaticCertificate {
            value: BigRational::zero(),
            fold: None,
            sets: Vec::new(),
            weights: Vec::new(),
        };
        return Ok((BigRational::zero(), cert));
    }
    let maximal = a.maximal_sets();
    let p = chi_star_lp(n, &maximal);
    let sol = match lp::solve_rational(&p)? {
        LpOutcome::Optimal(s) => s,
        other => return Err(InvariantError::UnexpectedStatus(other.status())),
    };
    let mut sets = Vec::new();
    let mut weights = Vec::new();
    for (i, w) in sol.primal.iter().enumerate() {
        if !w.is_zero() {
            sets.push(mask_to_vec(maximal[i], n));
            weights.push(w.clone());
        }
    }
    let cert = ChromaticCertificate {
        value: sol.value.clone(),
        fold: None,
        sets,
        weights,
    };
    Ok((sol.value, cert))
}
