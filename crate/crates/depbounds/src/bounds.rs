//! Closed-form tail and correlation bounds with a uniform report format.
//!
//! Every bound is evaluated in log-space and reported as both a clamped
//! probability and its log, so exponents like (1−p^k)^{ν*} survive far past
//! f64 underflow. Values that exceed 1 (a vacuous probability bound) clamp
//! to 1 and keep the raw exponent in the parameter echo.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use thiserror::Error;

use crate::hypergraph::Hypergraph;
use crate::invariants::{FractionalWeighting, MatchingViolation};
use crate::probability::VertexProbabilities;
use crate::rational::{binomial, format_rational, to_f64};

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("parameter {param} = {value} violates: {constraint}")]
    ParameterRange {
        param: &'static str,
        value: f64,
        constraint: &'static str,
    },
    #[error("invalid fractional matching: {0}")]
    InvalidMatching(#[from] MatchingViolation),
    #[error("{0}")]
    Combinatorics(String),
}

type Result<T> = std::result::Result<T, BoundsError>;

fn require(ok: bool, param: &'static str, value: f64, constraint: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(BoundsError::ParameterRange {
            param,
            value,
            constraint,
        })
    }
}

/// Named bound value with parameter echo. `value` is clamped to [0,1] and
/// `log_value = ln(value)`; when clamping fired, the raw exponent is kept
/// under the `raw_log` key.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub name: String,
    pub value: f64,
    pub log_value: f64,
    pub params: BTreeMap<String, String>,
    pub certificate: Option<String>,
}

impl BoundReport {
    fn from_log(name: &str, log: f64, params: BTreeMap<String, String>) -> Self {
        let mut params = params;
        let (value, log_value) = if log > 0.0 {
            params.insert("raw_log".into(), format!("{log}"));
            (1.0, 0.0)
        } else {
            (log.exp(), log)
        };
        BoundReport {
            name: name.to_owned(),
            value,
            log_value,
            params,
            certificate: None,
        }
    }

    pub fn with_certificate(mut self, id: impl Into<String>) -> Self {
        self.certificate = Some(id.into());
        self
    }
}

fn echo(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

/// Shared tail-bound parameter bundle: mean rate q, excess ε, threshold
/// t = |V|(q+ε), variance sum S, and the Janson quantities μ, Δ, whichever
/// a given bound consumes. The constructors enforce the per-bound
/// invariants (q+ε ≤ 1 for the KL form, S > 0 for the Bennett form).
#[derive(Debug, Clone, Default)]
pub struct TailParameters {
    pub n: Option<u64>,
    pub q: Option<f64>,
    pub eps: Option<f64>,
    pub t: Option<f64>,
    pub s: Option<f64>,
    pub mu: Option<f64>,
    pub delta: Option<f64>,
}

impl TailParameters {
    pub fn for_kl(nv: u64, q: f64, eps: f64) -> Result<Self> {
        require(q > 0.0 && q < 1.0, "q", q, "q must lie strictly in (0,1)")?;
        require(eps > 0.0, "eps", eps, "eps must be positive")?;
        require(q + eps <= 1.0, "q+eps", q + eps, "q+eps must not exceed 1")?;
        Ok(TailParameters {
            n: Some(nv),
            q: Some(q),
            eps: Some(eps),
            t: Some(nv as f64 * (q + eps)),
            ..Default::default()
        })
    }

    pub fn for_bennett(s: f64, t: f64) -> Result<Self> {
        require(s > 0.0, "S", s, "S must be positive")?;
        require(t > 0.0, "t", t, "t must be positive")?;
        Ok(TailParameters {
            s: Some(s),
            t: Some(t),
            ..Default::default()
        })
    }

    fn echo(&self) -> BTreeMap<String, String> {
        let mut map = BTreeMap::new();
        let mut put_f = |k: &str, v: Option<f64>| {
            if let Some(x) = v {
                map.insert(k.to_string(), x.to_string());
            }
        };
        put_f("q", self.q);
        put_f("eps", self.eps);
        put_f("t", self.t);
        put_f("S", self.s);
        put_f("mu", self.mu);
        put_f("delta", self.delta);
        if let Some(n) = self.n {
            map.insert("n".into(), n.to_string());
        }
        map
    }
}

/// Kullback–Leibler divergence D(a‖q) between Bernoulli(a) and Bernoulli(q).
/// Boundary cases a ∈ {0,1} take their limit values; q must lie strictly
/// inside (0,1).
pub fn kl_divergence(a: f64, q: f64) -> Result<f64> {
    require(q > 0.0 && q < 1.0, "q", q, "q must lie strictly in (0,1)")?;
    require((0.0..=1.0).contains(&a), "a", a, "a must lie in [0,1]")?;
    if a == 0.0 {
        return Ok(-(-q).ln_1p()); // ln(1/(1−q))
    }
    if a == 1.0 {
        return Ok(-q.ln());
    }
    Ok(a * (a / q).ln() + (1.0 - a) * ((1.0 - a) / (1.0 - q)).ln())
}

/// Both forms of the Chernoff-type bound on P[Σ Y_v ≥ |V|(q+ε)] for
/// G-dependent [0,1] variables: the sharp exp(−|V|·D(q+ε‖q)/χ*) and the
/// Hoeffding-style exp(−2ε²|V|/χ*). The sharp form is never larger since
/// D(q+ε‖q) ≥ 2ε².
#[derive(Debug, Clone)]
pub struct ChernoffKlBounds {
    pub sharp: BoundReport,
    pub hoeffding: BoundReport,
}

pub fn chernoff_kl_bound(
    nv: u64,
    q: f64,
    eps: f64,
    chi_star: &BigRational,
) -> Result<ChernoffKlBounds> {
    let params = TailParameters::for_kl(nv, q, eps)?;
    let chi = to_f64(chi_star);
    require(
        chi_star >= &BigRational::one(),
        "chi_star",
        chi,
        "chi* must be at least 1",
    )?;
    let n = nv as f64;
    let mut base = params.echo();
    base.insert("chi_star".into(), format_rational(chi_star));
    let divergence = kl_divergence(q + eps, q)?;
    let sharp = BoundReport::from_log("chernoff_kl_sharp", -n * divergence / chi, base.clone());
    let hoeffding = BoundReport::from_log("chernoff_kl", -2.0 * eps * eps * n / chi, base);
    Ok(ChernoffKlBounds { sharp, hoeffding })
}

/// Bennett rate function ψ(x) = (1+x)ln(1+x) − x.
pub fn bennett_psi(x: f64) -> f64 {
    (1.0 + x) * x.ln_1p() - x
}

/// Auxiliary g(a) = e^a − 1 − a from the exponential-moment step.
pub fn bennett_g(a: f64) -> f64 {
    a.exp_m1() - a
}

/// Bennett-type bound exp(−(S/χ*)·ψ(t/S)) plus the weaker classical
/// comparison value exp(−(S/χ*)·ψ(4t/(5S))); ours is never larger since ψ
/// is increasing.
#[derive(Debug, Clone)]
pub struct BennettBounds {
    pub bound: BoundReport,
    pub janson_comparison: BoundReport,
}

pub fn bennett_bound(s: f64, t: f64, chi_star: &BigRational) -> Result<BennettBounds> {
    let params = TailParameters::for_bennett(s, t)?;
    let chi = to_f64(chi_star);
    require(
        chi_star >= &BigRational::one(),
        "chi_star",
        chi,
        "chi* must be at least 1",
    )?;
    let mut base = params.echo();
    base.insert("chi_star".into(), format_rational(chi_star));
    let bound = BoundReport::from_log("bennett", -(s / chi) * bennett_psi(t / s), base.clone());
    let janson_comparison = BoundReport::from_log(
        "bennett_janson23",
        -(s / chi) * bennett_psi(4.0 * t / (5.0 * s)),
        base,
    );
    Ok(BennettBounds {
        bound,
        janson_comparison,
    })
}

/// Log of Π_{v∈e} p_v for one edge.
fn edge_log_mean(edge: &[usize], p: &[f64]) -> f64 {
    edge.iter().map(|&v| p[v].ln()).sum()
}

/// Finner's independence bound Π_e (1 − Π_{v∈e} p_v)^{φ(e)} on the
/// probability that a random vertex subset is independent. φ must be a
/// valid fractional matching; violations name the overloaded vertex.
pub fn finner_independence_bound(
    h: &Hypergraph,
    p: &VertexProbabilities,
    phi: &FractionalWeighting,
) -> Result<BoundReport> {
    phi.check_matching(h)?;
    let pf = p.as_f64();
    let w = phi.as_f64();
    let log: f64 = h
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| w[e] * (-edge_log_mean(edge, &pf).exp()).ln_1p())
        .sum();
    let mut params = echo(&[
        ("n", h.vertex_count().to_string()),
        ("edges", h.edge_count().to_string()),
        ("phi_total", format_rational(&phi.total())),
    ]);
    if let Some(u) = p.uniform_value() {
        params.insert("p".into(), format_rational(u));
    }
    Ok(BoundReport::from_log("finner", log, params)
        .with_certificate(format!("phi(total={})", format_rational(&phi.total()))))
}

/// Uniform k-uniform shortcut (1 − p^k)^{ν*}: equals the general bound for
/// any optimal φ when every edge has size k and p is uniform.
pub fn finner_uniform_bound(k: usize, p: f64, nu_star: &BigRational) -> Result<BoundReport> {
    require(p > 0.0 && p < 1.0, "p", p, "p must lie strictly in (0,1)")?;
    require(k >= 1, "k", k as f64, "k must be at least 1")?;
    let nu = to_f64(nu_star);
    let log = nu * (-(k as f64 * p.ln()).exp()).ln_1p();
    let params = echo(&[
        ("k", k.to_string()),
        ("p", p.to_string()),
        ("nu_star", format_rational(nu_star)),
    ]);
    Ok(BoundReport::from_log("finner_uniform", log, params)
        .with_certificate(format!("nu_star={}", format_rational(nu_star))))
}

/// Generic Janson bound min{ exp(−μ+Δ), exp(Δ/(1−max q))·Π(1−q_v) } on
/// P[Σ B_v = 0]. When some q_v = 1 the second branch is skipped.
pub fn janson_bound(qv: &[f64], delta: f64) -> Result<BoundReport> {
    for &q in qv {
        require((0.0..=1.0).contains(&q), "q", q, "means must lie in [0,1]")?;
    }
    require(delta >= 0.0, "delta", delta, "delta must be nonnegative")?;
    let mu: f64 = qv.iter().sum();
    let branch_em = -mu + delta;
    let max_q = qv.iter().copied().fold(0.0f64, f64::max);
    let branch_prod = if max_q < 1.0 {
        Some(delta / (1.0 - max_q) + qv.iter().map(|&q| (-q).ln_1p()).sum::<f64>())
    } else {
        None
    };
    let log = match branch_prod {
        Some(b) => branch_em.min(b),
        None => branch_em,
    };
    let mut params = echo(&[
        ("mu", mu.to_string()),
        ("delta", delta.to_string()),
        ("m", qv.len().to_string()),
        ("branch_exp_mu", branch_em.to_string()),
    ]);
    if let Some(b) = branch_prod {
        params.insert("branch_product".into(), b.to_string());
    }
    Ok(BoundReport::from_log("janson", log, params))
}

/// Janson's triangle-free bound for G(n,p):
/// (1−p³)^{C(n,3)}·exp(Δ/(2(1−p³))) with Δ = 6·C(n,4)·p⁵.
pub fn janson_triangle_bound(n: u64, p: f64) -> Result<BoundReport> {
    require(n >= 3, "n", n as f64, "n must be at least 3")?;
    require(p > 0.0 && p < 1.0, "p", p, "p must lie strictly in (0,1)")?;
    let c3 = binomial(n, 3).map_err(BoundsError::Combinatorics)? as f64;
    let c4 = binomial(n, 4).map_err(BoundsError::Combinatorics)? as f64;
    let p3 = p * p * p;
    let delta = 6.0 * c4 * p.powi(5);
    let log = c3 * (-p3).ln_1p() + delta / (2.0 * (1.0 - p3));
    let params = echo(&[
        ("n", n.to_string()),
        ("p", p.to_string()),
        ("delta", delta.to_string()),
    ]);
    Ok(BoundReport::from_log("janson_triangle", log, params))
}

/// Finner's triangle-free bound (1−p³)^{C(n,3)/(n−2)}, the uniform-witness
/// specialisation with φ ≡ 1/(n−2).
pub fn finner_triangle_bound(n: u64, p: f64) -> Result<BoundReport> {
    require(n >= 3, "n", n as f64, "n must be at least 3")?;
    require(p > 0.0 && p < 1.0, "p", p, "p must lie strictly in (0,1)")?;
    let c3 = binomial(n, 3).map_err(BoundsError::Combinatorics)? as f64;
    let exponent = c3 / (n as f64 - 2.0);
    let p3 = p * p * p;
    let log = exponent * (-p3).ln_1p();
    let params = echo(&[
        ("n", n.to_string()),
        ("p", p.to_string()),
        ("nu_star", format!("{exponent}")),
    ]);
    Ok(BoundReport::from_log("finner_triangle", log, params))
}

/// Concentration bound exp(−2Φε²) on P[Σ_e φ(e)Y_e ≥ Φ(p+ε)] for
/// hypergraph-correlated [0,1] variables.
pub fn ramon_concentration_bound(phi_total: f64, p: f64, eps: f64) -> Result<BoundReport> {
    require(
        phi_total > 0.0,
        "phi",
        phi_total,
        "total weight must be positive",
    )?;
    require(
        p > 0.0 && p < 1.0,
        "p",
        p,
        "mean must lie strictly in (0,1)",
    )?;
    require(eps > 0.0, "eps", eps, "eps must be positive")?;
    // t = Φ(p+ε) must fall strictly inside (Φp, Φ)
    require(
        p + eps < 1.0,
        "t",
        phi_total * (p + eps),
        "t must be below the total weight",
    )?;
    let log = -2.0 * phi_total * eps * eps;
    let params = echo(&[
        ("phi", phi_total.to_string()),
        ("p", p.to_string()),
        ("eps", eps.to_string()),
        ("t", (phi_total * (p + eps)).to_string()),
    ]);
    Ok(BoundReport::from_log("ramon", log, params))
}

/// Degree-regular corollary exp(−2(|E|/d)ε²), the uniform φ ≡ 1/d case.
pub fn ramon_degree_regular_bound(edges: u64, d: u64, p: f64, eps: f64) -> Result<BoundReport> {
    require(d >= 1, "d", d as f64, "degree must be positive")?;
    let mut report = ramon_concentration_bound(edges as f64 / d as f64, p, eps)?;
    report.name = "ramon_degree_regular".into();
    report.params.insert("edges".into(), edges.to_string());
    report.params.insert("d".into(), d.to_string());
    Ok(report)
}

/// Bound on the probability that G(n,p) has no u–v path of length k:
/// (1−p^k)^{n−2} when k ≤ (n−1)/2, else (1−p^k)^{(n−2)(n−3)/(2(k−2))}.
pub fn path_absence_bound(n: u64, k: u64, p: f64) -> Result<BoundReport> {
    require(k >= 3, "k", k as f64, "k must be at least 3")?;
    require(
        k <= n.saturating_sub(1),
        "k",
        k as f64,
        "k must be at most n-1",
    )?;
    require(p > 0.0 && p < 1.0, "p", p, "p must lie strictly in (0,1)")?;
    let nf = n as f64;
    let short = 2 * k < n;
    let exponent = if short {
        nf - 2.0
    } else {
        (nf - 2.0) * (nf - 3.0) / (2.0 * (k as f64 - 2.0))
    };
    let log = exponent * (-(k as f64 * p.ln()).exp()).ln_1p();
    let params = echo(&[
        ("n", n.to_string()),
        ("k", k.to_string()),
        ("p", p.to_string()),
        ("exponent", exponent.to_string()),
        (
            "regime",
            if short {
                "k<=(n-1)/2".into()
            } else {
                "k>(n-1)/2".to_string()
            },
        ),
    ]);
    Ok(BoundReport::from_log("path_absence", log, params))
}

/// Bound on the probability that G(n,p) has no vertex of degree d:
/// (1 − C(n−1,d)·p^d·(1−p)^{n−1−d})^{n/2}.
pub fn degree_absence_bound(n: u64, d: u64, p: f64) -> Result<BoundReport> {
    require(n >= 1, "n", n as f64, "n must be at least 1")?;
    require(d < n, "d", d as f64, "d must lie in 0..=n-1")?;
    require(p > 0.0 && p < 1.0, "p", p, "p must lie strictly in (0,1)")?;
    let c = binomial(n - 1, d).map_err(BoundsError::Combinatorics)? as f64;
    // log of the Binomial(n−1, p) mass at d, then ln(1 − mass)
    let log_mass = c.ln() + d as f64 * p.ln() + (n - 1 - d) as f64 * (-p).ln_1p();
    let log = (n as f64 / 2.0) * (-log_mass.exp()).ln_1p();
    let params = echo(&[
        ("n", n.to_string()),
        ("d", d.to_string()),
        ("p", p.to_string()),
    ]);
    Ok(BoundReport::from_log("degree_absence", log, params))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    Finner,
    Janson,
    Tie,
}

impl std::fmt::Display for Winner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Winner::Finner => write!(f, "finner"),
            Winner::Janson => write!(f, "janson"),
            Winner::Tie => write!(f, "tie"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CompareRow {
    pub p: f64,
    pub finner: f64,
    pub janson: f64,
    pub finner_log: f64,
    pub janson_log: f64,
    pub winner: Winner,
}

#[derive(Debug, Clone)]
pub struct TriangleComparison {
    pub n: u64,
    pub rows: Vec<CompareRow>,
    /// Grid points after which the winner changes.
    pub crossovers: Vec<f64>,
}

/// Default comparison grid: p ∈ {0.01, 0.02, …, 0.99}.
pub fn default_p_grid() -> Vec<f64> {
    (1..=99).map(|i| i as f64 / 100.0).collect()
}

/// Evaluates the Finner and Janson triangle-free bounds across a p-grid and
/// annotates where the winner flips. Winners are decided on raw logs, so
/// clamping at 1 cannot mask a crossing.
pub fn compare_triangle_bounds(n: u64, grid: &[f64]) -> Result<TriangleComparison> {
    require(n >= 4, "n", n as f64, "comparison needs n >= 4")?;
    let rows: Vec<CompareRow> = grid
        .par_iter()
        .map(|&p| -> Result<CompareRow> {
            let f = finner_triangle_bound(n, p)?;
            let j = janson_triangle_bound(n, p)?;
            let f_raw = raw_log(&f);
            let j_raw = raw_log(&j);
            let winner = if f_raw < j_raw {
                Winner::Finner
            } else if j_raw < f_raw {
                Winner::Janson
            } else {
                Winner::Tie
            };
            Ok(CompareRow {
                p,
                finner: f.value,
                janson: j.value,
                finner_log: f_raw,
                janson_log: j_raw,
                winner,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut crossovers = Vec::new();
    for w in rows.windows(2) {
        if w[0].winner != w[1].winner && w[0].winner != Winner::Tie {
            crossovers.push(w[1].p);
        }
    }
    Ok(TriangleComparison {
        n,
        rows,
        crossovers,
    })
}

fn raw_log(r: &BoundReport) -> f64 {
    r.params
        .get("raw_log")
        .and_then(|s| s.parse().ok())
        .unwrap_or(r.log_value)
}
