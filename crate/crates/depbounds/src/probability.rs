//! Per-vertex inclusion probabilities, kept as exact rationals so the
//! enumeration oracles stay exact.

use num_rational::BigRational;
use thiserror::Error;

use crate::hypergraph::Hypergraph;
use crate::rational::{format_rational, is_strictly_between_zero_and_one, to_f64};

#[derive(Debug, Error)]
pub enum ProbabilityError {
    #[error("probability for vertex `{vertex}` is {value}, must lie strictly in (0,1)")]
    OutOfRange { vertex: String, value: String },
    #[error("expected {expected} probabilities, got {got}")]
    Arity { expected: usize, got: usize },
}

/// Map vertex → inclusion probability in the open interval (0,1), aligned
/// with a hypergraph's vertex order.
#[derive(Debug, Clone)]
pub struct VertexProbabilities {
    values: Vec<BigRational>,
}

impl VertexProbabilities {
    /// Uniform probability p for every vertex of `h`.
    pub fn uniform(h: &Hypergraph, p: &BigRational) -> Result<Self, ProbabilityError> {
        Self::uniform_n(h.vertex_count(), p)
    }

    pub fn uniform_n(n: usize, p: &BigRational) -> Result<Self, ProbabilityError> {
        if !is_strictly_between_zero_and_one(p) {
            return Err(ProbabilityError::OutOfRange {
                vertex: "*".into(),
                value: format_rational(p),
            });
        }
        Ok(VertexProbabilities {
            values: vec![p.clone(); n],
        })
    }

    /// One probability per vertex, in vertex order.
    pub fn per_vertex(h: &Hypergraph, values: Vec<BigRational>) -> Result<Self, ProbabilityError> {
        if values.len() != h.vertex_count() {
            return Err(ProbabilityError::Arity {
                expected: h.vertex_count(),
                got: values.len(),
            });
        }
        for (i, p) in values.iter().enumerate() {
            if !is_strictly_between_zero_and_one(p) {
                return Err(ProbabilityError::OutOfRange {
                    vertex: h.vertex_label(i).to_owned(),
                    value: format_rational(p),
                });
            }
        }
        Ok(VertexProbabilities { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, v: usize) -> &BigRational {
        &self.values[v]
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.values.iter().map(to_f64).collect()
    }

    /// True when every vertex has the same probability.
    pub fn uniform_value(&self) -> Option<&BigRational> {
        let first = self.values.first()?;
        self.values.iter().all(|p| p == first).then_some(first)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::triangle_hypergraph;
    use crate::rational::parse_rational;

    #[test]
    fn uniform_and_bounds() {
        let h = triangle_hypergraph(4).unwrap();
        let p = parse_rational("1/2").unwrap();
        let vp = VertexProbabilities::uniform(&h, &p).unwrap();
        assert_eq!(vp.len(), 6);
        assert_eq!(vp.uniform_value(), Some(&p));

        assert!(VertexProbabilities::uniform(&h, &parse_rational("0").unwrap()).is_err());
        assert!(VertexProbabilities::uniform(&h, &parse_rational("1").unwrap()).is_err());
    }

    #[test]
    fn per_vertex_arity_checked() {
        let h = triangle_hypergraph(4).unwrap();
        let p = parse_rational("1/2").unwrap();
        assert!(VertexProbabilities::per_vertex(&h, vec![p; 3]).is_err());
    }
}
