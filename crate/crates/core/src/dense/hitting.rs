use num_bigint::BigUint;

use super::params::{gamma, sample_size_hypothesis};
use super::DenseError;
use crate::graph::{Graph, Rational, Rng, Vertex, VertexSet};

/// The two quantities the sampling step bounds, for one candidate set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bullets {
    /// Number of `i` with `s ⊆ a_list[i]`.
    pub covered_failures: usize,
    /// Vertices outside `s` with no neighbour in `s`.
    pub undominated: usize,
    /// Both counts are within their bounds.
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingSetResult {
    pub s: VertexSet,
    pub covered_failures: usize,
    pub undominated: usize,
    pub attempts: usize,
    /// Whether the sampling hypotheses held on the input. When they do,
    /// every attempt succeeds with positive probability, so exhaustion
    /// points at an unlucky stream rather than a bad instance.
    pub hypotheses_hold: bool,
}

/// `floor(eps^(1/r) n / 12)`, capped at `n`. The float estimate is
/// corrected with the exact test `(12 l)^r <= eps n^r`.
pub fn undominated_limit(eps: Rational, r: usize, n: usize) -> usize {
    let fits = |l: usize| {
        BigUint::from(12 * l).pow(r as u32) * BigUint::from(*eps.denom() as u64)
            <= BigUint::from(*eps.numer() as u64) * BigUint::from(n).pow(r as u32)
    };
    let mut l = ((gamma(eps, r) * n as f64).floor().max(0.0) as usize).min(n);
    while l > 0 && !fits(l) {
        l -= 1;
    }
    while l < n && fits(l + 1) {
        l += 1;
    }
    l
}

/// Evaluates both bullets for `s`: at most `eps k` of the `k` sets
/// contain `s`, and at most `eps^(1/r) n / 12` vertices outside `s` have
/// no neighbour in `s`.
pub fn hitting_set_bullets(
    g: &Graph,
    a_list: &[VertexSet],
    s: &VertexSet,
    eps: Rational,
    r: usize,
    n: usize,
) -> Bullets {
    let covered_failures = a_list.iter().filter(|a| s.is_subset(a)).count();
    let undominated = g
        .vertices()
        .filter(|v| !s.contains(v) && !g.neighbors(*v).iter().any(|u| s.contains(u)))
        .count();
    let k = a_list.len() as i64;
    let first = covered_failures as i64 * eps.denom() <= eps.numer() * k;
    let second = undominated <= undominated_limit(eps, r, n);
    Bullets {
        covered_failures,
        undominated,
        accepted: first && second,
    }
}

/// Whether `n/6 <= |g| <= n`, every `|a_i| <= eps^(1/r) n / 12`, and the
/// degree condition [`sample_size_hypothesis`] hold.
pub fn hitting_hypothesis_holds(g: &Graph, a_list: &[VertexSet], r: usize, eps: Rational, n: usize) -> bool {
    let limit = undominated_limit(eps, r, n);
    6 * g.n() >= n && g.n() <= n && a_list.iter().all(|a| a.len() <= limit) && sample_size_hypothesis(g, r, eps)
}

/// Draws `r` vertices uniformly with repetition until the sample passes
/// [`hitting_set_bullets`], at most `max_attempts` times.
pub fn sample_hitting_set(
    g: &Graph,
    a_list: &[VertexSet],
    r: usize,
    eps: Rational,
    n: usize,
    rng: &mut Rng,
    max_attempts: usize,
) -> Result<HittingSetResult, DenseError> {
    if r == 0 {
        return Err(DenseError::Precondition("sample size must be positive".into()));
    }
    if g.n() == 0 {
        return Err(DenseError::OutOfRoom { placed: 0 });
    }
    let hypotheses_hold = hitting_hypothesis_holds(g, a_list, r, eps, n);
    for attempt in 1..=max_attempts {
        let s: VertexSet = (0..r).map(|_| rng.below(g.n()) as Vertex).collect();
        let b = hitting_set_bullets(g, a_list, &s, eps, r, n);
        if b.accepted {
            return Ok(HittingSetResult {
                s,
                covered_failures: b.covered_failures,
                undominated: b.undominated,
                attempts: attempt,
                hypotheses_hold,
            });
        }
    }
    Err(DenseError::AttemptsExhausted {
        attempts: max_attempts,
        hypotheses_hold,
    })
}
