//! Finite data distributions: probability mass over labeled examples,
//! population risk, and realizability checks.

use crate::domain::{FiniteDomain, LabeledExample, PointIdx};
use crate::error::{Error, Result};
use crate::hypothesis::FiniteHypothesisClass;
use crate::loss::LossFunction;
use crate::num::{check_probabilities, rat_is_zero, rat_to_f64, NeumaierSum, Rat};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A probability mass function over labeled examples of one domain.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiniteDistribution {
    domain: Arc<FiniteDomain>,
    support: Vec<LabeledExample>,
    mass: Vec<f64>,
}

impl FiniteDistribution {
    pub fn new(
        domain: Arc<FiniteDomain>,
        support: Vec<LabeledExample>,
        mass: Vec<f64>,
    ) -> Result<Self> {
        if support.len() != mass.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} support entries but {} masses",
                support.len(),
                mass.len()
            )));
        }
        if support.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        for ex in &support {
            if !domain.contains(ex.point) {
                return Err(Error::DomainMismatch(format!(
                    "support point index {} outside domain of size {}",
                    ex.point.0,
                    domain.len()
                )));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for ex in &support {
            if !seen.insert(*ex) {
                return Err(Error::InvalidDistribution(
                    "duplicate support entry".into(),
                ));
            }
        }
        check_probabilities(&mass)?;
        Ok(Self {
            domain,
            support,
            mass,
        })
    }

    /// Uniform distribution over the given labeled examples.
    pub fn uniform(domain: Arc<FiniteDomain>, support: Vec<LabeledExample>) -> Result<Self> {
        let k = support.len();
        let mass = vec![1.0 / k as f64; k];
        Self::new(domain, support, mass)
    }

    pub fn domain(&self) -> &Arc<FiniteDomain> {
        &self.domain
    }

    pub fn support(&self) -> &[LabeledExample] {
        &self.support
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// The labeling function of the support, if the distribution is
    /// function-labeled (no input carries two labels with positive mass).
    pub fn truth_table(&self) -> Option<BTreeMap<PointIdx, Rat>> {
        let mut truth = BTreeMap::new();
        for (ex, &m) in self.support.iter().zip(&self.mass) {
            if m == 0.0 {
                continue;
            }
            if let Some(prev) = truth.insert(ex.point, ex.label) {
                if prev != ex.label {
                    return None;
                }
            }
        }
        Some(truth)
    }
}

/// Mean loss of a pointwise predictor over a training sequence.
pub fn empirical_risk<F>(predict: F, examples: &[LabeledExample], loss: &LossFunction) -> f64
where
    F: Fn(PointIdx) -> Rat,
{
    if examples.is_empty() {
        return 0.0;
    }
    let mut sum = NeumaierSum::new();
    for ex in examples {
        sum.add(rat_to_f64(loss.eval(predict(ex.point), ex)));
    }
    sum.value() / examples.len() as f64
}

/// Exact weighted loss of a pointwise predictor under the distribution.
pub fn population_risk<F>(predict: F, dist: &FiniteDistribution, loss: &LossFunction) -> f64
where
    F: Fn(PointIdx) -> Rat,
{
    let mut sum = NeumaierSum::new();
    for (ex, &m) in dist.support().iter().zip(dist.mass()) {
        sum.add(m * rat_to_f64(loss.eval(predict(ex.point), ex)));
    }
    sum.value()
}

/// True iff some table row labels the whole (positive-mass) support exactly.
pub fn is_realizable(class: &FiniteHypothesisClass, dist: &FiniteDistribution) -> Result<bool> {
    if !Arc::ptr_eq(class.domain(), dist.domain()) && class.domain().coords() != dist.domain().coords()
    {
        return Err(Error::DomainMismatch(
            "class and distribution live on different domains".into(),
        ));
    }
    for row in 0..class.len() {
        let fits = dist
            .support()
            .iter()
            .zip(dist.mass())
            .filter(|(_, &m)| m > 0.0)
            .all(|(ex, _)| rat_is_zero(class.predict(row, ex.point) - ex.label));
        if fits {
            return Ok(true);
        }
    }
    Ok(false)
}
