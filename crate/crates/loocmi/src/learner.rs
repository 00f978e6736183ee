//! Learner abstraction: every learner exposes the exact law of its output
//! given a training sequence (and, for transductive rules, the full
//! supersample context), never just a sampler. That is what makes the
//! downstream information measures exact.

use crate::domain::{FiniteDomain, PointIdx};
use crate::error::{Error, Result};
use crate::hypothesis::FiniteHypothesisClass;
use crate::loss::LossFunction;
use crate::num::{rat_int, ExtRat, Rat};
use crate::sample::{Supersample, SupersampleLaw, TrainingSequence};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdConvention {
    /// `h(x) = 1[x > theta]`: label 1 above the cut.
    Above,
    /// `h(x) = 1[x <= theta]`: label 1 below the cut.
    Below,
}

impl ThresholdConvention {
    pub fn predict(self, x: Rat, theta: ExtRat) -> Rat {
        let hit = match (self, theta) {
            (ThresholdConvention::Above, ExtRat::NegInf) => true,
            (ThresholdConvention::Above, ExtRat::PosInf) => false,
            (ThresholdConvention::Above, ExtRat::Finite(t)) => x > t,
            (ThresholdConvention::Below, ExtRat::NegInf) => false,
            (ThresholdConvention::Below, ExtRat::PosInf) => true,
            (ThresholdConvention::Below, ExtRat::Finite(t)) => x <= t,
        };
        rat_int(hit as i64)
    }
}

/// Identity of a learned predictor, as the learner represents it. Two
/// outputs with the same identity are the same outcome for every mutual
/// information over the hypothesis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum HypothesisId {
    /// Row index into an explicit class table.
    Row(usize),
    /// Threshold parameter; carries more than the induced labeling when the
    /// parameter grid is finer than the domain.
    Threshold(ThresholdConvention, ExtRat),
    /// Margin-encoded threshold; the parameter stores the training multiset.
    Encoded(Rat),
    /// Constant predictor.
    Const(Rat),
    /// Memorizer identified by the set of inputs it has seen.
    SeenInputs(Vec<Rat>),
}

/// How a learned predictor evaluates, pointwise where possible.
#[derive(Debug, Clone)]
pub enum Predictor {
    /// A row of an explicit hypothesis table.
    Row(Arc<FiniteHypothesisClass>, usize),
    /// A threshold rule over coordinates.
    Threshold(ThresholdConvention, ExtRat),
    /// Constant label.
    Constant(Rat),
    /// Memorized training pairs plus a fallback rule off the training set.
    Memorize {
        known: BTreeMap<PointIdx, Rat>,
        fallback: Fallback,
    },
    /// Transductive output: labels fixed only on the supersample
    /// coordinates (original order).
    OnPoints(Vec<Rat>),
}

#[derive(Debug, Clone)]
pub enum Fallback {
    /// Predict the input coordinate itself.
    Identity,
    /// Predict the flipped true label (binary truth table).
    FlipTruth(Arc<BTreeMap<PointIdx, Rat>>),
    Constant(Rat),
}

impl Predictor {
    /// Prediction at supersample coordinate `i`.
    pub fn predict_at(&self, domain: &FiniteDomain, sample: &Supersample, i: usize) -> Rat {
        match self {
            Predictor::OnPoints(labels) => labels[i],
            _ => self
                .predict_point(domain, sample.entry(i).point)
                .expect("pointwise predictors evaluate everywhere"),
        }
    }

    /// Prediction at an arbitrary domain point; `None` for transductive
    /// outputs that only exist on their supersample.
    pub fn predict_point(&self, domain: &FiniteDomain, point: PointIdx) -> Option<Rat> {
        match self {
            Predictor::Row(class, row) => Some(class.predict(*row, point)),
            Predictor::Threshold(conv, theta) => Some(conv.predict(domain.coord(point), *theta)),
            Predictor::Constant(label) => Some(*label),
            Predictor::Memorize { known, fallback } => Some(match known.get(&point) {
                Some(label) => *label,
                None => match fallback {
                    Fallback::Identity => domain.coord(point),
                    Fallback::FlipTruth(truth) => {
                        let y = truth.get(&point).copied().unwrap_or_else(|| rat_int(0));
                        rat_int(1) - y
                    }
                    Fallback::Constant(label) => *label,
                },
            }),
            Predictor::OnPoints(_) => None,
        }
    }

    pub fn is_pointwise(&self) -> bool {
        !matches!(self, Predictor::OnPoints(_))
    }
}

/// One atom of a learner's exact output law.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub prob: f64,
    pub predictor: Predictor,
    pub hypothesis: Option<HypothesisId>,
}

/// The exact conditional law of the learner's output given `(z̃, u)`,
/// averaging internal randomness. Deterministic learners yield one atom.
#[derive(Debug, Clone)]
pub struct OutcomeLaw {
    pub outcomes: Vec<Outcome>,
}

impl OutcomeLaw {
    pub fn deterministic(predictor: Predictor, hypothesis: Option<HypothesisId>) -> Self {
        Self {
            outcomes: vec![Outcome {
                prob: 1.0,
                predictor,
                hypothesis,
            }],
        }
    }
}

/// What kind of output law a learner exposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LearnerKind {
    /// Pure function of the training sequence into an identified hypothesis.
    DeterministicProper,
    /// Exact per-input label distribution given training set and test input.
    RandomizedTransductive,
    /// Deterministic rule whose predictions are not drawn from an
    /// identified hypothesis class.
    DeterministicTransductive,
}

/// Interface every concrete learner implements. `law` must return the exact
/// conditional law; learners that cannot do so for an operation surface a
/// capability error instead.
pub trait LearnerRule {
    fn name(&self) -> &'static str;

    fn kind(&self) -> LearnerKind;

    /// Exact output law given the supersample and held-out index.
    fn law(
        &self,
        domain: &FiniteDomain,
        loss: &LossFunction,
        sample: &Supersample,
        holdout: usize,
    ) -> Result<OutcomeLaw>;

    /// Exact output law given a bare training sequence; only proper rules
    /// (functions of the training sequence alone) can provide it.
    fn law_for_training(
        &self,
        _domain: &FiniteDomain,
        _loss: &LossFunction,
        _s: &TrainingSequence,
    ) -> Result<OutcomeLaw> {
        Err(Error::Capability(format!(
            "{} is transductive: its output law needs the test input",
            self.name()
        )))
    }
}

/// Checks the learner interpolates: on every positive-probability
/// `(z̃, u)`, the losses at the training coordinates are zero with
/// probability one.
pub fn check_interpolating(
    domain: &FiniteDomain,
    learner: &dyn LearnerRule,
    law: &SupersampleLaw,
    loss: &LossFunction,
    budget: u64,
) -> Result<bool> {
    let required = law
        .term_count()
        .saturating_mul(law.tuple_len() as u128);
    if required > budget as u128 {
        return Err(Error::Budget { required, budget });
    }
    let mut ok = true;
    let mut failure: Option<Error> = None;
    law.for_each(|sample, _| {
        if !ok || failure.is_some() {
            return;
        }
        for u in 0..sample.len() {
            match learner.law(domain, loss, sample, u) {
                Ok(out_law) => {
                    for outcome in &out_law.outcomes {
                        if outcome.prob == 0.0 {
                            continue;
                        }
                        for i in 0..sample.len() {
                            if i == u {
                                continue;
                            }
                            let pred = outcome.predictor.predict_at(domain, sample, i);
                            if loss.eval(pred, sample.entry(i)) != rat_int(0) {
                                ok = false;
                                return;
                            }
                        }
                    }
                }
                Err(e) => {
                    failure = Some(e);
                    return;
                }
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(ok),
    }
}
