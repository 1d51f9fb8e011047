//! Seeded Monte Carlo estimation with counter-based per-sample streams.
//!
//! Each sample draws from its own stream keyed by (seed, stream tag, sample
//! index), so estimates are bit-identical across runs and across worker
//! counts: parallelism only changes who computes which sample, never what
//! the sample is.

use rayon::prelude::*;
use thiserror::Error;

use crate::hypergraph::Hypergraph;
use crate::invariants::FractionalWeighting;
use crate::probability::VertexProbabilities;

#[derive(Debug, Error)]
pub enum McError {
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("{0}")]
    Input(String),
}

pub const STREAM_INDEPENDENCE: u64 = 1;
pub const STREAM_TAIL: u64 = 2;

/// SplitMix64-style generator whose state is derived from (seed, stream,
/// counter), giving an independent short stream per sample.
#[derive(Debug, Clone)]
pub struct CounterRng {
    state: u64,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl CounterRng {
    pub fn for_sample(seed: u64, stream: u64, index: u64) -> Self {
        let mut s = mix(seed ^ GOLDEN.wrapping_mul(stream.wrapping_add(1)));
        s = mix(s ^ GOLDEN.wrapping_mul(index.wrapping_add(1)));
        CounterRng { state: s }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform in [0, 1) with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Monte Carlo estimate of a probability, with a normal-approximation 95%
/// confidence half-width.
#[derive(Debug, Clone)]
pub struct McEstimate {
    pub estimate: f64,
    pub successes: u64,
    pub samples: u64,
    pub seed: u64,
    pub stream: u64,
    pub half_width: f64,
}

impl McEstimate {
    fn from_counts(successes: u64, samples: u64, seed: u64, stream: u64) -> Self {
        let estimate = successes as f64 / samples as f64;
        let half_width = 1.96 * (estimate * (1.0 - estimate) / samples as f64).sqrt();
        McEstimate {
            estimate,
            successes,
            samples,
            seed,
            stream,
            half_width,
        }
    }
}

fn check_inputs(h: &Hypergraph, p: &VertexProbabilities, samples: u64) -> Result<(), McError> {
    if samples == 0 {
        return Err(McError::NoSamples);
    }
    if !h.is_valid() {
        return Err(McError::Input("hypergraph is invalid".into()));
    }
    if p.len() != h.vertex_count() {
        return Err(McError::Input(format!(
            "{} probabilities for {} vertices",
            p.len(),
            h.vertex_count()
        )));
    }
    Ok(())
}

fn draw_subset(rng: &mut CounterRng, probs: &[f64], included: &mut [bool]) {
    for (v, &pv) in probs.iter().enumerate() {
        included[v] = rng.next_f64() < pv;
    }
}

/// Empirical probability that a random vertex subset is independent in H.
pub fn mc_independence(
    h: &Hypergraph,
    p: &VertexProbabilities,
    samples: u64,
    seed: u64,
) -> Result<McEstimate, McError> {
    check_inputs(h, p, samples)?;
    let probs = p.as_f64();
    let edges = h.edges();
    let successes: u64 = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = CounterRng::for_sample(seed, STREAM_INDEPENDENCE, i);
            let mut included = vec![false; probs.len()];
            draw_subset(&mut rng, &probs, &mut included);
            let independent = !edges.iter().any(|e| e.iter().all(|&v| included[v]));
            u64::from(independent)
        })
        .sum();
    Ok(McEstimate::from_counts(
        successes,
        samples,
        seed,
        STREAM_INDEPENDENCE,
    ))
}

/// Empirical tail probability P[Σ_e φ(e)·Y_e ≥ t] for the edge indicators
/// Y_e = Π_{v∈e} X_v.
pub fn mc_tail(
    h: &Hypergraph,
    p: &VertexProbabilities,
    phi: &FractionalWeighting,
    t: f64,
    samples: u64,
    seed: u64,
) -> Result<McEstimate, McError> {
    check_inputs(h, p, samples)?;
    if phi.len() != h.edge_count() {
        return Err(McError::Input(format!(
            "{} weights for {} edges",
            phi.len(),
            h.edge_count()
        )));
    }
    let probs = p.as_f64();
    let weights = phi.as_f64();
    let edges = h.edges();
    let successes: u64 = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = CounterRng::for_sample(seed, STREAM_TAIL, i);
            let mut included = vec![false; probs.len()];
            draw_subset(&mut rng, &probs, &mut included);
            let total: f64 = edges
                .iter()
                .zip(&weights)
                .filter(|(e, _)| e.iter().all(|&v| included[v]))
                .map(|(_, w)| w)
                .sum();
            u64::from(total >= t)
        })
        .sum();
    Ok(McEstimate::from_counts(
        successes,
        samples,
        seed,
        STREAM_TAIL,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cycle_graph;
    use crate::rational::parse_rational;
    use num_rational::BigRational;

    fn r(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn counter_rng_streams_are_stable() {
        let mut a = CounterRng::for_sample(42, 1, 7);
        let mut b = CounterRng::for_sample(42, 1, 7);
        assert_eq!(a.next_u64(), b.next_u64());
        let mut c = CounterRng::for_sample(42, 1, 8);
        assert_ne!(a.next_u64(), c.next_u64());
        let mut d = CounterRng::for_sample(42, 2, 7);
        let mut e = CounterRng::for_sample(42, 1, 7);
        assert_ne!(d.next_u64(), e.next_u64());
    }

    #[test]
    fn rng_is_roughly_uniform() {
        let mut rng = CounterRng::for_sample(1, 1, 0);
        let n = 100_000;
        let mean: f64 = (0..n).map(|_| rng.next_f64()).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn near_zero_p_gives_estimate_one() {
        let h = cycle_graph(5).unwrap().to_hypergraph();
        let p = VertexProbabilities::uniform(&h, &r("1/1000000000")).unwrap();
        let est = mc_independence(&h, &p, 10_000, 7).unwrap();
        assert_eq!(est.estimate, 1.0);
    }

    #[test]
    fn c5_estimate_brackets_exact_value() {
        let h = cycle_graph(5).unwrap().to_hypergraph();
        let p = VertexProbabilities::uniform(&h, &r("1/2")).unwrap();
        let est = mc_independence(&h, &p, 200_000, 20260810).unwrap();
        assert!(
            (est.estimate - 11.0 / 32.0).abs() <= 3.0 * est.half_width,
            "estimate {} half-width {}",
            est.estimate,
            est.half_width
        );
    }

    #[test]
    fn fixed_seed_is_bit_identical_across_worker_counts() {
        let h = cycle_graph(5).unwrap().to_hypergraph();
        let p = VertexProbabilities::uniform(&h, &r("1/2")).unwrap();
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let quad = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a = single.install(|| mc_independence(&h, &p, 50_000, 99).unwrap());
        let b = quad.install(|| mc_independence(&h, &p, 50_000, 99).unwrap());
        assert_eq!(a.successes, b.successes);
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
    }

    #[test]
    fn doubling_samples_shrinks_confidence_width() {
        let h = cycle_graph(5).unwrap().to_hypergraph();
        let p = VertexProbabilities::uniform(&h, &r("1/2")).unwrap();
        let small = mc_independence(&h, &p, 40_000, 3).unwrap();
        let large = mc_independence(&h, &p, 80_000, 3).unwrap();
        let ratio = large.half_width / small.half_width;
        assert!((0.6..0.82).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn tail_boundaries() {
        let h = cycle_graph(5).unwrap().to_hypergraph();
        let p = VertexProbabilities::uniform(&h, &r("1/2")).unwrap();
        let phi = FractionalWeighting::uniform(5, r("1/2"));
        // t = 0: the event is certain
        let zero = mc_tail(&h, &p, &phi, 0.0, 1_000, 5).unwrap();
        assert_eq!(zero.estimate, 1.0);
        // t above the total weight: impossible
        let over = mc_tail(&h, &p, &phi, 2.6, 1_000, 5).unwrap();
        assert_eq!(over.estimate, 0.0);
    }

    #[test]
    fn input_validation() {
        let h = cycle_graph(5).unwrap().to_hypergraph();
        let p = VertexProbabilities::uniform(&h, &r("1/2")).unwrap();
        assert!(matches!(
            mc_independence(&h, &p, 0, 1),
            Err(McError::NoSamples)
        ));
        let phi = FractionalWeighting::uniform(3, r("1/2"));
        assert!(mc_tail(&h, &p, &phi, 0.5, 10, 1).is_err());
    }
}
