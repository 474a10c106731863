use num_bigint::BigUint;

use super::DenseError;
use crate::graph::{complement_max_degree, log_inverse, to_f64, Graph, Rational};

/// Largest sample size tried when searching for the least admissible one.
const MAX_SAMPLE: usize = 64;

/// How many vertices a hitting-set sample draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleSize {
    /// `ceil(20 sqrt(ln(1/eps)))`.
    Formula,
    Fixed(usize),
    /// The least `r` for which the sampling degree condition holds
    /// on the graph being sampled (never decreasing across rounds).
    Auto,
}

/// Parameters of the average-degree construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityParams {
    pub eps: Rational,
    pub t: usize,
    pub r: usize,
    /// `eps^(1/r) / 12`, in double precision.
    pub gamma: f64,
    pub d: usize,
}

impl DensityParams {
    /// `d = ceil(c_scale t sqrt(ln(1/eps)))`, `r = ceil(20 sqrt(ln(1/eps)))`.
    pub fn new(eps: Rational, t: usize, c_scale: Rational) -> Result<Self, DenseError> {
        if t < 2 {
            return Err(DenseError::Precondition(format!("t = {t} is below 2")));
        }
        if eps <= Rational::from_integer(0) || eps >= Rational::new(1, 3) {
            return Err(DenseError::Precondition(format!("eps = {eps} is outside (0, 1/3)")));
        }
        if c_scale <= Rational::from_integer(0) {
            return Err(DenseError::Precondition("c_scale must be positive".into()));
        }
        let root = log_inverse(eps).sqrt();
        let d = (to_f64(c_scale) * t as f64 * root).ceil() as usize;
        let r = (20.0 * root).ceil().max(1.0) as usize;
        Ok(DensityParams {
            eps,
            t,
            r,
            gamma: gamma(eps, r),
            d: d.max(2),
        })
    }

    pub fn with_r(mut self, r: usize) -> Self {
        self.r = r.max(1);
        self.gamma = gamma(self.eps, self.r);
        self
    }
}

pub(crate) fn gamma(eps: Rational, r: usize) -> f64 {
    to_f64(eps).powf(1.0 / r as f64) / 12.0
}

/// Exact test of `24^r (max_nonneighbours / (order - 1))^(r^2) <= eps`.
pub fn sample_size_hypothesis(g: &Graph, r: usize, eps: Rational) -> bool {
    if g.n() < 2 {
        return false;
    }
    let exp = (r * r) as u32;
    let lhs = BigUint::from(24u32).pow(r as u32)
        * BigUint::from(complement_max_degree(g)).pow(exp)
        * BigUint::from(*eps.denom() as u64);
    let rhs = BigUint::from(*eps.numer() as u64) * BigUint::from(g.n() - 1).pow(exp);
    lhs <= rhs
}

/// Least `r` in `1..=64` satisfying [`sample_size_hypothesis`].
pub fn smallest_sample_size(g: &Graph, eps: Rational) -> Option<usize> {
    (1..=MAX_SAMPLE).find(|&r| sample_size_hypothesis(g, r, eps))
}
