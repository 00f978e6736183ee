//! Discrete probability mass functions and the entropy/divergence routines
//! everything else reduces to. Natural log throughout; `0 ln 0 = 0`.

use crate::error::{Error, Result};
use crate::num::{check_probabilities, NeumaierSum};

/// A finite pmf over ordered, deduplicated outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf<T: Ord> {
    outcomes: Vec<T>,
    probs: Vec<f64>,
}

impl<T: Ord> Pmf<T> {
    /// Builds a pmf, merging duplicate outcomes and sorting for a canonical
    /// representation. Probabilities must be nonnegative and sum to one.
    pub fn new(pairs: Vec<(T, f64)>) -> Result<Self> {
        let mut pairs = pairs;
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut outcomes: Vec<T> = Vec::with_capacity(pairs.len());
        let mut probs: Vec<f64> = Vec::with_capacity(pairs.len());
        for (t, p) in pairs {
            if let Some(last) = outcomes.last() {
                if *last == t {
                    *probs.last_mut().unwrap() += p;
                    continue;
                }
            }
            outcomes.push(t);
            probs.push(p);
        }
        check_probabilities(&probs)?;
        Ok(Self { outcomes, probs })
    }

    pub fn point_mass(outcome: T) -> Self {
        Self {
            outcomes: vec![outcome],
            probs: vec![1.0],
        }
    }

    pub fn outcomes(&self) -> &[T] {
        &self.outcomes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn prob_of(&self, outcome: &T) -> f64 {
        match self.outcomes.binary_search(outcome) {
            Ok(i) => self.probs[i],
            Err(_) => 0.0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, f64)> {
        self.outcomes.iter().zip(self.probs.iter().copied())
    }

    pub fn entropy(&self) -> f64 {
        entropy_of_probs(&self.probs)
    }
}

/// Shannon entropy in nats of a nonnegative weight vector.
pub fn entropy_of_probs(probs: &[f64]) -> f64 {
    let mut sum = NeumaierSum::new();
    for &p in probs {
        if p > 0.0 {
            sum.add(-p * p.ln());
        }
    }
    // Entropy is nonnegative; tiny negative residue is rounding noise.
    sum.value().max(0.0)
}

pub fn entropy<T: Ord>(pmf: &Pmf<T>) -> f64 {
    pmf.entropy()
}

/// Binary entropy in nats, zero at both endpoints.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Input(format!("binary entropy needs p in [0,1], got {p}")));
    }
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    Ok(-p * p.ln() - (1.0 - p) * (1.0 - p).ln())
}

/// KL divergence `KL(q || p)` in nats; `+inf` when `q` is not absolutely
/// continuous with respect to `p`. Outcome lists must match exactly.
pub fn kl_divergence<T: Ord + std::fmt::Debug>(q: &Pmf<T>, p: &Pmf<T>) -> Result<f64> {
    if q.outcomes() != p.outcomes() {
        return Err(Error::Input(
            "KL divergence requires aligned outcome sets".into(),
        ));
    }
    let mut sum = NeumaierSum::new();
    for ((&qi, &pi), _) in q.probs().iter().zip(p.probs()).zip(q.outcomes()) {
        if qi == 0.0 {
            continue;
        }
        if pi == 0.0 {
            return Ok(f64::INFINITY);
        }
        sum.add(qi * (qi / pi).ln());
    }
    Ok(sum.value().max(0.0))
}
