//! Ground-truth engines: exact enumeration of independence probabilities
//! and product expectations on small instances, the five-cycle counterexample
//! distribution, and numerical verification of the two Hölder-type
//! inequalities.
//!
//! Enumeration is exact rational arithmetic throughout; floating point only
//! enters where a bound's exponent is genuinely transcendental, and then a
//! fixed absolute tolerance of [`PROBABILITY_TOLERANCE`] applies.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::graph::DependencyGraph;
use crate::hypergraph::Hypergraph;
use crate::invariants::{self, FractionalWeighting, InvariantError};
use crate::probability::{ProbabilityError, VertexProbabilities};
use crate::rational::{format_rational, is_strictly_between_zero_and_one, pow_u32, to_f64};

pub const MAX_ORACLE_VERTICES: usize = 24;
/// Absolute tolerance for float-mode inequality checks; enumeration values
/// are exact, so slack only covers transcendental exponents.
pub const PROBABILITY_TOLERANCE: f64 = 1e-10;
/// Dependency-graph factorization checks enumerate non-neighbor subsets up
/// to this size; the full definition is exponential.
pub const DEPENDENCY_SUBSET_CAP: usize = 4;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("instance has {got} vertices, enumeration cap is {cap}")]
    CapExceeded { got: usize, cap: usize },
    #[error("invalid distribution: {0}")]
    BadDistribution(String),
    #[error("coordinate {coordinate} takes value {value}, outside [0,1]")]
    ValueRange { coordinate: usize, value: String },
    #[error("hypergraph is invalid: {0}")]
    InvalidHypergraph(String),
    #[error("p = {0} must lie strictly in (0,1)")]
    ProbabilityRange(String),
    #[error(transparent)]
    Probability(#[from] ProbabilityError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error("invalid fractional matching: {0}")]
    InvalidMatching(#[from] invariants::MatchingViolation),
    #[error("{0}")]
    Parameter(String),
}

type Result<T> = std::result::Result<T, OracleError>;

/// Finite joint law of a [0,1]-valued random vector, with exact rational
/// support values and probabilities.
#[derive(Debug, Clone)]
pub struct DiscreteJointDistribution {
    dim: usize,
    support: Vec<(Vec<BigRational>, BigRational)>,
}

impl DiscreteJointDistribution {
    /// Exact-mode constructor: probabilities must be nonnegative and sum to
    /// exactly 1; every coordinate value must lie in [0,1].
    pub fn new_rational(dim: usize, support: Vec<(Vec<BigRational>, BigRational)>) -> Result<Self> {
        let mut total = BigRational::zero();
        for (vec, prob) in &support {
            if vec.len() != dim {
                return Err(OracleError::BadDistribution(format!(
                    "support vector has {} coordinates, expected {dim}",
                    vec.len()
                )));
            }
            if prob.is_negative() {
                return Err(OracleError::BadDistribution(
                    "negative probability".to_string(),
                ));
            }
            for (j, v) in vec.iter().enumerate() {
                if v.is_negative() || v > &BigRational::one() {
                    return Err(OracleError::ValueRange {
                        coordinate: j,
                        value: format_rational(v),
                    });
                }
            }
            total += prob;
        }
        if !total.is_one() {
            return Err(OracleError::BadDistribution(format!(
                "probabilities sum to {}, expected exactly 1",
                format_rational(&total)
            )));
        }
        Ok(DiscreteJointDistribution { dim, support })
    }

    /// Float-mode constructor: converts entries exactly and accepts a total
    /// mass within 1e-12 of 1.
    pub fn new_float(dim: usize, support: &[(Vec<f64>, f64)]) -> Result<Self> {
        let total: f64 = support.iter().map(|(_, p)| p).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(OracleError::BadDistribution(format!(
                "probabilities sum to {total}, expected 1 within 1e-12"
            )));
        }
        let conv = |x: f64| -> Result<BigRational> {
            BigRational::from_float(x)
                .ok_or_else(|| OracleError::BadDistribution(format!("non-finite entry {x}")))
        };
        let mut out = Vec::with_capacity(support.len());
        for (vec, prob) in support {
            if vec.len() != dim {
                return Err(OracleError::BadDistribution(format!(
                    "support vector has {} coordinates, expected {dim}",
                    vec.len()
                )));
            }
            if *prob < 0.0 {
                return Err(OracleError::BadDistribution("negative probability".into()));
            }
            let v = vec.iter().map(|&x| conv(x)).collect::<Result<Vec<_>>>()?;
            for (j, value) in v.iter().enumerate() {
                if value.is_negative() || value > &BigRational::one() {
                    return Err(OracleError::ValueRange {
                        coordinate: j,
                        value: format_rational(value),
                    });
                }
            }
            out.push((v, conv(*prob)?));
        }
        Ok(DiscreteJointDistribution { dim, support: out })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support(&self) -> &[(Vec<BigRational>, BigRational)] {
        &self.support
    }

    /// True when every support value is 0 or 1.
    pub fn is_indicator(&self) -> bool {
        self.support
            .iter()
            .all(|(v, _)| v.iter().all(|x| x.is_zero() || x.is_one()))
    }

    /// E[Y_j], exact.
    pub fn marginal_mean(&self, j: usize) -> BigRational {
        self.support.iter().map(|(v, p)| &v[j] * p).sum()
    }

    /// E[Y_j^k] for integer k ≥ 1, exact.
    pub fn moment(&self, j: usize, k: u32) -> BigRational {
        self.support
            .iter()
            .map(|(v, p)| pow_u32(&v[j], k) * p)
            .sum()
    }

    /// E[Π_v Y_v], exact.
    pub fn product_moment(&self) -> BigRational {
        self.support
            .iter()
            .map(|(v, p)| v.iter().fold(p.clone(), |acc, x| acc * x))
            .sum()
    }

    /// E[Π_v Y_v^{e_v}] by exact summation over the support, with the
    /// convention 0^0 = 1. Power evaluation is f64.
    pub fn product_expectation(&self, exponents: &[f64]) -> f64 {
        assert_eq!(exponents.len(), self.dim, "one exponent per coordinate");
        self.support
            .iter()
            .map(|(v, p)| {
                let term: f64 = v
                    .iter()
                    .zip(exponents)
                    .map(|(x, &e)| if e == 0.0 { 1.0 } else { to_f64(x).powf(e) })
                    .product();
                to_f64(p) * term
            })
            .sum()
    }

    /// Joint law of the coordinates listed in `coords`, exact.
    pub fn project(&self, coords: &[usize]) -> BTreeMap<Vec<BigRational>, BigRational> {
        let mut out: BTreeMap<Vec<BigRational>, BigRational> = BTreeMap::new();
        for (v, p) in &self.support {
            let key: Vec<BigRational> = coords.iter().map(|&c| v[c].clone()).collect();
            *out.entry(key).or_insert_with(BigRational::zero) += p;
        }
        out.retain(|_, p| !p.is_zero());
        out
    }
}

/// The exact 32-point law from the five-cycle counterexample: marginals all
/// p, the cycle C5 is a dependency graph, yet P[all ones] = (p²+p³)/2
/// exceeds the p^{5/2} ceiling forced on hypergraph-correlated variables.
pub fn c5_distribution(p: &BigRational) -> Result<DiscreteJointDistribution> {
    if !is_strictly_between_zero_and_one(p) {
        return Err(OracleError::ProbabilityRange(format_rational(p)));
    }
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());
    let q = &one - p; // 1−p
    let p2 = p * p;
    let p3 = &p2 * p;

    let mass_zero = (&two - p) * &q * &q / &two; // ½(2−p)(1−p)²
    let mass_ones = (&p2 + &p3) / &two; // (p²+p³)/2
    let mass_two = p * &q * &q / &two; // p(1−p)²/2
    let mass_three = (&p2 - &p3) / &two; // (p²−p³)/2

    let patterns_two: [[u8; 5]; 5] = [
        [0, 0, 0, 1, 1],
        [0, 0, 1, 1, 0],
        [0, 1, 1, 0, 0],
        [1, 1, 0, 0, 0],
        [1, 0, 0, 0, 1],
    ];
    let patterns_three: [[u8; 5]; 5] = [
        [0, 0, 1, 1, 1],
        [0, 1, 1, 1, 0],
        [1, 1, 1, 0, 0],
        [1, 1, 0, 0, 1],
        [1, 0, 0, 1, 1],
    ];

    let bits = |pat: &[u8; 5]| -> Vec<BigRational> {
        pat.iter()
            .map(|&b| {
                if b == 1 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect()
    };

    let mut support = Vec::with_capacity(12);
    support.push((bits(&[0, 0, 0, 0, 0]), mass_zero));
    support.push((bits(&[1, 1, 1, 1, 1]), mass_ones));
    for pat in &patterns_two {
        support.push((bits(pat), mass_two.clone()));
    }
    for pat in &patterns_three {
        support.push((bits(pat), mass_three.clone()));
    }
    DiscreteJointDistribution::new_rational(5, support)
}

fn check_oracle_input(h: &Hypergraph, p: &VertexProbabilities) -> Result<()> {
    if !h.is_valid() {
        let msgs: Vec<String> = h.validate().iter().map(|v| v.to_string()).collect();
        return Err(OracleError::InvalidHypergraph(msgs.join("; ")));
    }
    if h.vertex_count() > MAX_ORACLE_VERTICES {
        return Err(OracleError::CapExceeded {
            got: h.vertex_count(),
            cap: MAX_ORACLE_VERTICES,
        });
    }
    if p.len() != h.vertex_count() {
        return Err(OracleError::Parameter(format!(
            "{} probabilities for {} vertices",
            p.len(),
            h.vertex_count()
        )));
    }
    Ok(())
}

/// Exact probability that a random vertex subset (independent inclusions
/// with probabilities p_v) is independent in H: the sum over independent
/// subsets S of Π_{v∈S} p_v · Π_{v∉S} (1−p_v). Depth-first enumeration,
/// pruning any branch that has already completed an edge.
pub fn exact_independence_probability(
    h: &Hypergraph,
    p: &VertexProbabilities,
) -> Result<BigRational> {
    check_oracle_input(h, p)?;
    let n = h.vertex_count();
    // edges sorted by max vertex so completion can be detected at the
    // moment the last vertex is decided
    let mut edges_by_last: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, edge) in h.edges().iter().enumerate() {
        if let Some(&last) = edge.last() {
            edges_by_last[last].push(e);
        }
    }
    let edges = h.edges();
    let mut included = vec![false; n];
    let one = BigRational::one();

    fn rec(
        v: usize,
        n: usize,
        acc: &BigRational,
        included: &mut Vec<bool>,
        edges: &[Vec<usize>],
        edges_by_last: &[Vec<usize>],
        p: &VertexProbabilities,
        one: &BigRational,
        total: &mut BigRational,
    ) {
        if v == n {
            *total += acc;
            return;
        }
        // exclude v
        let acc_out = acc * &(one - p.get(v));
        included[v] = false;
        rec(
            v + 1,
            n,
            &acc_out,
            included,
            edges,
            edges_by_last,
            p,
            one,
            total,
        );
        // include v unless that completes an edge
        included[v] = true;
        let completes = edges_by_last[v]
            .iter()
            .any(|&e| edges[e].iter().all(|&u| included[u]));
        if !completes {
            let acc_in = acc * p.get(v);
            rec(
                v + 1,
                n,
                &acc_in,
                included,
                edges,
                edges_by_last,
                p,
                one,
                total,
            );
        }
        included[v] = false;
    }

    let mut total = BigRational::zero();
    rec(
        0,
        n,
        &BigRational::one(),
        &mut included,
        edges,
        &edges_by_last,
        p,
        &one,
        &mut total,
    );
    Ok(total)
}

/// Exact joint law of the edge indicators Y_e = Π_{v∈e} X_v under
/// independent Bernoulli(p_v) seeds, by enumerating all seed assignments.
pub fn edge_indicator_distribution(
    h: &Hypergraph,
    p: &VertexProbabilities,
) -> Result<DiscreteJointDistribution> {
    check_oracle_input(h, p)?;
    let n = h.vertex_count();
    if n > 20 {
        return Err(OracleError::CapExceeded { got: n, cap: 20 });
    }
    let m = h.edge_count();
    let mut masks: Vec<u32> = Vec::with_capacity(m);
    for edge in h.edges() {
        masks.push(edge.iter().fold(0u32, |acc, &v| acc | (1 << v)));
    }
    let mut law: BTreeMap<Vec<u8>, BigRational> = BTreeMap::new();
    let mut prob_of = vec![BigRational::one(); 1 << n];
    for x in 1usize..(1 << n) {
        let v = x.trailing_zeros() as usize;
        let rest = x & (x - 1);
        let ratio = p.get(v) / (BigRational::one() - p.get(v));
        prob_of[x] = &prob_of[rest] * ratio;
    }
    let all_out: BigRational = (0..n).map(|v| BigRational::one() - p.get(v)).product();
    for x in 0usize..(1 << n) {
        let pattern: Vec<u8> = masks
            .iter()
            .map(|&mask| u8::from((x as u32) & mask == mask))
            .collect();
        let prob = &prob_of[x] * &all_out;
        *law.entry(pattern).or_insert_with(BigRational::zero) += prob;
    }
    let support = law
        .into_iter()
        .map(|(pat, prob)| {
            let v = pat
                .iter()
                .map(|&b| {
                    if b == 1 {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect();
            (v, prob)
        })
        .collect();
    DiscreteJointDistribution::new_rational(m, support)
}

/// Outcome of a dependency-graph factorization check.
#[derive(Debug, Clone)]
pub struct DependencyCheck {
    pub violations: Vec<String>,
    pub subset_cap: usize,
    /// True when the cap covered every non-neighbor subset, making the
    /// check a full verification of the definition.
    pub exhaustive: bool,
}

impl DependencyCheck {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that `g` is a dependency graph for `d`: for every vertex v and
/// every non-neighbor subset W (|W| ≤ cap), the joint law of (Y_v, Y_W)
/// factorizes exactly into marginal × joint.
pub fn check_dependency_graph(
    d: &DiscreteJointDistribution,
    g: &DependencyGraph,
    subset_cap: usize,
) -> Result<DependencyCheck> {
    if d.dim() != g.vertex_count() {
        return Err(OracleError::Parameter(format!(
            "distribution has {} coordinates, graph has {} vertices",
            d.dim(),
            g.vertex_count()
        )));
    }
    let n = d.dim();
    let mut violations = Vec::new();
    let mut exhaustive = true;
    for v in 0..n {
        let non_neighbors: Vec<usize> = (0..n).filter(|&u| u != v && !g.is_edge(u, v)).collect();
        if non_neighbors.len() > subset_cap {
            exhaustive = false;
        }
        let marginal_v = d.project(&[v]);
        for subset in subsets_up_to(&non_neighbors, subset_cap) {
            if subset.is_empty() {
                continue;
            }
            let joint_w = d.project(&subset);
            let mut with_v = vec![v];
            with_v.extend_from_slice(&subset);
            let joint_all = d.project(&with_v);
            for (key, prob) in &joint_all {
                let pv = marginal_v
                    .get(&key[..1])
                    .cloned()
                    .unwrap_or_else(BigRational::zero);
                let pw = joint_w
                    .get(&key[1..])
                    .cloned()
                    .unwrap_or_else(BigRational::zero);
                if *prob != pv.clone() * pw.clone() {
                    violations.push(format!(
                        "Y_{} vs {:?}: P = {} but product = {}",
                        g.label(v),
                        subset.iter().map(|&u| g.label(u)).collect::<Vec<_>>(),
                        format_rational(prob),
                        format_rational(&(pv * pw)),
                    ));
                }
            }
            // zero joint entries where both factors are positive also break
            // factorization; scan the product support
            for (kv, pv) in &marginal_v {
                for (kw, pw) in &joint_w {
                    let mut key = kv.clone();
                    key.extend(kw.iter().cloned());
                    if !joint_all.contains_key(&key) && !(pv * pw).is_zero() {
                        violations.push(format!(
                            "Y_{} vs {:?}: product mass {} missing from joint",
                            g.label(v),
                            subset.iter().map(|&u| g.label(u)).collect::<Vec<_>>(),
                            format_rational(&(pv * pw)),
                        ));
                    }
                }
            }
        }
    }
    violations.sort();
    violations.dedup();
    Ok(DependencyCheck {
        violations,
        subset_cap,
        exhaustive,
    })
}

fn subsets_up_to(items: &[usize], cap: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &x in items {
        let mut extended = Vec::new();
        for s in &out {
            if s.len() < cap {
                let mut t = s.clone();
                t.push(x);
                extended.push(t);
            }
        }
        out.extend(extended);
    }
    out
}

/// Result of one inequality verification: left side is exact enumeration,
/// right side may involve transcendental exponents. `exact` marks whether
/// the comparison itself was settled in rational arithmetic.
#[derive(Debug, Clone)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub exact: bool,
    pub tolerance: f64,
}

/// Verification of the graph-Hölder inequality
/// E[Π Y_v] ≤ Π_v E[Y_v^{χ_b/b}]^{b/χ_b} for the given joint law and
/// dependency graph. For indicator distributions the comparison is exact:
/// lhs^{χ_b} ≤ (Π E[Y_v])^b.
#[derive(Debug, Clone)]
pub struct ProductInequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub exact: bool,
    pub chi_b: u32,
    pub fold: u32,
}

pub fn verify_product_inequality(
    d: &DiscreteJointDistribution,
    g: &DependencyGraph,
    b: u32,
) -> Result<ProductInequalityCheck> {
    if d.dim() != g.vertex_count() {
        return Err(OracleError::Parameter(format!(
            "distribution has {} coordinates, graph has {} vertices",
            d.dim(),
            g.vertex_count()
        )));
    }
    let (chi_b, _) = invariants::b_fold_chromatic_number(g, b)?;
    let lhs = d.product_moment();
    let lhs_f = to_f64(&lhs);

    if d.is_indicator() {
        // E[Y^c] = E[Y] for 0/1 values, so rhs = (Π m_v)^{b/χ_b};
        // compare lhs^{χ_b} ≤ (Π m_v)^b exactly
        let product: BigRational = (0..d.dim()).map(|v| d.marginal_mean(v)).product();
        let holds = pow_u32(&lhs, chi_b) <= pow_u32(&product, b);
        let rhs = to_f64(&product).powf(b as f64 / chi_b as f64);
        return Ok(ProductInequalityCheck {
            lhs: lhs_f,
            rhs,
            holds,
            exact: true,
            chi_b,
            fold: b,
        });
    }

    let c = chi_b as f64 / b as f64;
    let mut log_rhs = 0.0f64;
    let mut zero_rhs = false;
    for v in 0..d.dim() {
        let moment: f64 = d
            .support()
            .iter()
            .map(|(vals, p)| to_f64(p) * to_f64(&vals[v]).powf(c))
            .sum();
        if moment <= 0.0 {
            zero_rhs = true;
            break;
        }
        log_rhs += moment.ln() / c;
    }
    let rhs = if zero_rhs { 0.0 } else { log_rhs.exp() };
    Ok(ProductInequalityCheck {
        lhs: lhs_f,
        rhs,
        holds: lhs_f <= rhs + PROBABILITY_TOLERANCE,
        exact: false,
        chi_b,
        fold: b,
    })
}

/// Verification of Finner's inequality in its weighted-corollary form:
/// lhs = E[Π_e Y_e^{φ(e)}] by exact enumeration over all seed assignments,
/// rhs = Π_e E[Y_e]^{φ(e)}, for the edge indicators Y_e = Π_{v∈e} X_v.
pub fn verify_finner(
    h: &Hypergraph,
    p: &VertexProbabilities,
    phi: &FractionalWeighting,
) -> Result<InequalityCheck> {
    check_oracle_input(h, p)?;
    phi.check_matching(h)?;

    // vertices covered by support edges: excluding any of them zeroes the
    // integrand, so those branches contribute nothing to the sum
    let n = h.vertex_count();
    let mut in_support = vec![false; n];
    for (e, edge) in h.edges().iter().enumerate() {
        if !phi.get(e).is_zero() {
            for &v in edge {
                in_support[v] = true;
            }
        }
    }
    fn rec(
        v: usize,
        n: usize,
        acc: &BigRational,
        in_support: &[bool],
        p: &VertexProbabilities,
        total: &mut BigRational,
    ) {
        if v == n {
            *total += acc;
            return;
        }
        if !in_support[v] {
            let acc_out = acc * &(BigRational::one() - p.get(v));
            rec(v + 1, n, &acc_out, in_support, p, total);
        }
        let acc_in = acc * p.get(v);
        rec(v + 1, n, &acc_in, in_support, p, total);
    }
    let mut lhs = BigRational::zero();
    rec(0, n, &BigRational::one(), &in_support, p, &mut lhs);

    // rhs = Π_e (Π_{v∈e} p_v)^{φ_e}
    let log_rhs: f64 = h
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            let w = to_f64(phi.get(e));
            if w == 0.0 {
                0.0
            } else {
                w * edge.iter().map(|&v| to_f64(p.get(v)).ln()).sum::<f64>()
            }
        })
        .sum();
    let rhs = log_rhs.exp();
    let lhs_f = to_f64(&lhs);

    // exact comparison when the weight denominators stay small:
    // lhs^D ≤ Π base_e^{φ_e·D} with D = lcm of the denominators
    let mut lcm = num_bigint::BigInt::one();
    for e in 0..h.edge_count() {
        lcm = lcm.lcm(phi.get(e).denom());
    }
    if let Some(d) = lcm.to_u32().filter(|&d| d <= 64) {
        let mut rhs_pow = BigRational::one();
        for (e, edge) in h.edges().iter().enumerate() {
            let a = (phi.get(e) * BigRational::from_integer(d.into()))
                .to_integer()
                .to_u32()
                .expect("weight in [0,1] times small lcm fits u32");
            if a == 0 {
                continue;
            }
            let base: BigRational = edge.iter().map(|&v| p.get(v).clone()).product();
            rhs_pow *= pow_u32(&base, a);
        }
        let holds = pow_u32(&lhs, d) <= rhs_pow;
        return Ok(InequalityCheck {
            lhs: lhs_f,
            rhs,
            holds,
            exact: true,
            tolerance: 0.0,
        });
    }

    Ok(InequalityCheck {
        lhs: lhs_f,
        rhs,
        holds: lhs_f <= rhs + PROBABILITY_TOLERANCE,
        exact: false,
        tolerance: PROBABILITY_TOLERANCE,
    })
}
