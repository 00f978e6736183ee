//! The concrete learning rules the measures are evaluated on: the
//! max-positive-point threshold rule, lexicographic ERM, a one-dimensional
//! max-margin rule with support-vector counts, a margin-encoding rule whose
//! parameter stores the whole training multiset, the copy-input rule, and
//! the diagnostic constant / always-err rules.

use crate::domain::{FiniteDomain, LabeledExample, PointIdx};
use crate::error::{Error, Result};
use crate::hypothesis::FiniteHypothesisClass;
use crate::learner::{
    Fallback, HypothesisId, LearnerKind, LearnerRule, OutcomeLaw, Predictor,
    ThresholdConvention,
};
use crate::loss::LossFunction;
use crate::num::{binomial, rat_int, ExtRat, Rat};
use crate::sample::{Supersample, TrainingSequence};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

fn require_binary(examples: &[LabeledExample]) -> Result<()> {
    for ex in examples {
        if ex.label != rat_int(0) && ex.label != rat_int(1) {
            return Err(Error::Input(format!(
                "expected binary labels, found {}",
                ex.label
            )));
        }
    }
    Ok(())
}

/// The threshold rule from the counterexample construction: let `x*` be the
/// largest 1-labeled training input (or -inf when none) and predict
/// `1[x <= x*]`.
#[derive(Debug, Clone, Default)]
pub struct MaxPosThreshold;

impl MaxPosThreshold {
    pub fn fit(domain: &FiniteDomain, s: &TrainingSequence) -> Result<ExtRat> {
        require_binary(s.examples())?;
        let x_star = s
            .examples()
            .iter()
            .filter(|ex| ex.label == rat_int(1))
            .map(|ex| domain.coord(ex.point))
            .max();
        Ok(match x_star {
            Some(c) => ExtRat::Finite(c),
            None => ExtRat::NegInf,
        })
    }
}

impl LearnerRule for MaxPosThreshold {
    fn name(&self) -> &'static str {
        "maxpos"
    }

    fn kind(&self) -> LearnerKind {
        LearnerKind::DeterministicProper
    }

    fn law(
        &self,
        domain: &FiniteDomain,
        loss: &LossFunction,
        sample: &Supersample,
        holdout: usize,
    ) -> Result<OutcomeLaw> {
        self.law_for_training(domain, loss, &sample.training_sequence(holdout))
    }

    fn law_for_training(
        &self,
        domain: &FiniteDomain,
        _loss: &LossFunction,
        s: &TrainingSequence,
    ) -> Result<OutcomeLaw> {
        let theta = Self::fit(domain, s)?;
        Ok(OutcomeLaw::deterministic(
            Predictor::Threshold(ThresholdConvention::Below, theta),
            Some(HypothesisId::Threshold(ThresholdConvention::Below, theta)),
        ))
    }
}

/// Empirical risk minimization over an explicit table, ties broken by the
/// lowest row index.
#[derive(Debug, Clone)]
pub struct ErmLex {
    class: Arc<FiniteHypothesisClass>,
}

impl ErmLex {
    pub fn new(class: Arc<FiniteHypothesisClass>) -> Self {
        Self { class }
    }

    pub fn fit(&self, loss: &LossFunction, s: &TrainingSequence) -> usize {
        let mut best_row = 0usize;
        let mut best = None::<Rat>;
        for row in 0..self.class.len() {
            let mut total = Rat::zero();
            for ex in s.examples() {
                total += loss.eval(self.class.predict(row, ex.point), ex);
            }
            if best.is_none_or(|b| total < b) {
                best = Some(total);
                best_row = row;
            }
        }
        best_row
    }
}

impl LearnerRule for ErmLex {
    fn name(&self) -> &'static str {
        "erm"
    }

    fn kind(&self) -> LearnerKind {
        LearnerKind::DeterministicProper
    }

    fn law(
        &self,
        domain: &FiniteDomain,
        loss: &LossFunction,
        sample: &Supersample,
        holdout: usize,
    ) -> Result<OutcomeLaw> {
        self.law_for_training(domain, loss, &sample.training_sequence(holdout))
    }

    fn law_for_training(
        &self,
        _domain: &FiniteDomain,
        loss: &LossFunction,
        s: &TrainingSequence,
    ) -> Result<OutcomeLaw> {
        let row = self.fit(loss, s);
        Ok(OutcomeLaw::deterministic(
            Predictor::Row(self.class.clone(), row),
            Some(HypothesisId::Row(row)),
        ))
    }
}

/// One-dimensional max-margin rule: the threshold sits at the midpoint of
/// the margin between the two label blocks; one-label samples get the
/// appropriate infinite sentinel (all predictions on the occupied side).
#[derive(Debug, Clone)]
pub struct MaxMargin {
    pub convention: ThresholdConvention,
}

/// Fitted max-margin threshold plus its support-vector count (at most 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MarginFit {
    pub theta: ExtRat,
    pub n_sv: usize,
}

impl MaxMargin {
    pub fn new(convention: ThresholdConvention) -> Self {
        Self { convention }
    }

    pub fn fit(&self, domain: &FiniteDomain, examples: &[LabeledExample]) -> Result<MarginFit> {
        require_binary(examples)?;
        let ones = examples
            .iter()
            .filter(|e| e.label == rat_int(1))
            .map(|e| domain.coord(e.point));
        let zeros = examples
            .iter()
            .filter(|e| e.label == rat_int(0))
            .map(|e| domain.coord(e.point));
        let (lo_side, hi_side) = match self.convention {
            // ones below the cut, zeros above
            ThresholdConvention::Below => (ones.max(), zeros.min()),
            // zeros below the cut, ones above
            ThresholdConvention::Above => (zeros.max(), ones.min()),
        };
        match (lo_side, hi_side) {
            (Some(a), Some(b)) => {
                if a >= b {
                    return Err(Error::Infeasible(format!(
                        "training sequence not separable under the {:?} convention",
                        self.convention
                    )));
                }
                Ok(MarginFit {
                    theta: ExtRat::Finite((a + b) / rat_int(2)),
                    n_sv: 2,
                })
            }
            // only the low-side label present: cut above everything
            (Some(_), None) => Ok(MarginFit {
                theta: ExtRat::PosInf,
                n_sv: 1,
            }),
            // only the high-side label present: cut below everything
            (None, Some(_)) => Ok(MarginFit {
                theta: ExtRat::NegInf,
                n_sv: 1,
            }),
            (None, None) => Err(Error::Input("empty training sequence".into())),
        }
    }

    /// Support-vector count of the rule trained on the whole supersample;
    /// the leave-one-out error over that supersample never exceeds
    /// `n_sv / (n+1)`.
    pub fn support_vectors(&self, domain: &FiniteDomain, sample: &Supersample) -> Result<usize> {
        Ok(self.fit(domain, sample.entries())?.n_sv)
    }
}

impl LearnerRule for MaxMargin {
    fn name(&self) -> &'static str {
        "max-margin"
    }

    fn kind(&self) -> LearnerKind {
        LearnerKind::DeterministicProper
    }

    fn law(
        &self,
        domain: &FiniteDomain,
        loss: &LossFunction,
        sample: &Supersample,
        holdout: usize,
    ) -> Result<OutcomeLaw> {
        self.law_for_training(domain, loss, &sample.training_sequence(holdout))
    }

    fn law_for_training(
        &self,
        domain: &FiniteDomain,
        _loss: &LossFunction,
        s: &TrainingSequence,
    ) -> Result<OutcomeLaw> {
        let fit = self.fit(domain, s.examples())?;
        Ok(OutcomeLaw::deterministic(
            Predictor::Threshold(self.convention, fit.theta),
            Some(HypothesisId::Threshold(self.convention, fit.theta)),
        ))
    }
}

/// A threshold rule that hides the whole training multiset inside its
/// parameter: the emitted threshold is the margin midpoint plus the
/// multiset's rank times a step small enough to stay inside the margin.
#[derive(Debug, Clone)]
pub struct MarginEncoder {
    support: Vec<LabeledExample>,
    index: BTreeMap<LabeledExample, usize>,
    n: usize,
    base: Rat,
    margin_hi: Rat,
    step: Rat,
    capacity: u128,
}

impl MarginEncoder {
    /// Builds the encoder for the `1[x > theta]` convention: zeros below the
    /// margin, ones above. `step` is the payload resolution; capacity is the
    /// number of sorted training multisets, `C(G+n-1, n)`.
    pub fn new(
        domain: &FiniteDomain,
        support: Vec<LabeledExample>,
        n: usize,
        step: Rat,
    ) -> Result<Self> {
        require_binary(&support)?;
        if step <= Rat::zero() {
            return Err(Error::Input("encoder step must be positive".into()));
        }
        let zero_max = support
            .iter()
            .filter(|e| e.label == rat_int(0))
            .map(|e| domain.coord(e.point))
            .max();
        let one_min = support
            .iter()
            .filter(|e| e.label == rat_int(1))
            .map(|e| domain.coord(e.point))
            .min();
        let (a, b) = match (zero_max, one_min) {
            (Some(a), Some(b)) if a < b => (a, b),
            _ => {
                return Err(Error::Input(
                    "encoder needs a margin: zero-labeled support strictly below one-labeled support"
                        .into(),
                ))
            }
        };
        let g = support.len() as u64;
        let capacity = binomial(g + n as u64 - 1, n as u64)?;
        if capacity > i64::MAX as u128 {
            return Err(Error::Capacity(format!(
                "payload of {capacity} multisets exceeds the encoder lattice"
            )));
        }
        let base = (a + b) / rat_int(2);
        // the largest encoded threshold must stay strictly inside the margin
        let top = base + step * rat_int((capacity - 1) as i64);
        if top >= b {
            let needed = step * rat_int(capacity as i64) * rat_int(2);
            return Err(Error::Capacity(format!(
                "margin width {} cannot carry {} multisets at step {}; need width > {}",
                b - a,
                capacity,
                step,
                needed
            )));
        }
        let index = support
            .iter()
            .enumerate()
            .map(|(i, e)| (*e, i))
            .collect();
        Ok(Self {
            support,
            index,
            n,
            base,
            margin_hi: b,
            step,
            capacity,
        })
    }

    pub fn capacity(&self) -> u128 {
        self.capacity
    }

    fn sorted_indices(&self, s: &TrainingSequence) -> Result<Vec<usize>> {
        let mut idx = Vec::with_capacity(s.len());
        for ex in s.examples() {
            match self.index.get(ex) {
                Some(&i) => idx.push(i),
                None => {
                    return Err(Error::Input(
                        "training example outside the declared support".into(),
                    ))
                }
            }
        }
        idx.sort_unstable();
        Ok(idx)
    }

    /// Lexicographic rank of a sorted multiset over `G` symbols.
    fn rank(&self, sorted: &[usize]) -> u128 {
        let g = self.support.len() as u64;
        let n = sorted.len() as u64;
        let mut rank: u128 = 0;
        let mut prev = 0usize;
        for (j, &c) in sorted.iter().enumerate() {
            for s in prev..c {
                let remaining = n - j as u64 - 1;
                let symbols = g - s as u64;
                rank += binomial(symbols + remaining - 1, remaining).unwrap_or(0);
            }
            prev = c;
        }
        rank
    }

    /// Inverse of [`Self::rank`].
    pub fn unrank(&self, mut rank: u128) -> Vec<usize> {
        let g = self.support.len() as u64;
        let n = self.n as u64;
        let mut out = Vec::with_capacity(self.n);
        let mut prev = 0usize;
        for j in 0..n {
            let remaining = n - j - 1;
            let mut c = prev;
            loop {
                let symbols = g - c as u64;
                let count = binomial(symbols + remaining - 1, remaining).unwrap_or(0);
                if rank < count {
                    break;
                }
                rank -= count;
                c += 1;
            }
            out.push(c);
            prev = c;
        }
        out
    }

    pub fn encode(&self, s: &TrainingSequence) -> Result<Rat> {
        let sorted = self.sorted_indices(s)?;
        let payload = self.rank(&sorted);
        Ok(self.base + self.step * rat_int(payload as i64))
    }

    /// Recover the training multiset (sorted support indices) from an
    /// encoded threshold.
    pub fn decode(&self, theta: Rat) -> Result<Vec<usize>> {
        let offset = theta - self.base;
        if offset < Rat::zero() || theta >= self.margin_hi {
            return Err(Error::Input("threshold outside the encoder range".into()));
        }
        let payload = offset / self.step;
        if !payload.denom().is_one() || *payload.numer() < 0 {
            return Err(Error::Input("threshold is not on the encoder lattice".into()));
        }
        let payload = *payload.numer() as u128;
        if payload >= self.capacity {
            return Err(Error::Input("payload beyond encoder capacity".into()));
        }
        Ok(self.unrank(payload))
    }

    /// Recover the held-out position from the encoded threshold and the
    /// supersample; unique whenever the supersample entries are distinct.
    pub fn decode_holdout(&self, theta: Rat, sample: &Supersample) -> Result<usize> {
        let multiset = self.decode(theta)?;
        for u in 0..sample.len() {
            let mut idx = Vec::with_capacity(sample.n());
            let mut ok = true;
            for (i, ex) in sample.entries().iter().enumerate() {
                if i == u {
                    continue;
                }
                match self.index.get(ex) {
                    Some(&k) => idx.push(k),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            idx.sort_unstable();
            if idx == multiset {
                return Ok(u);
            }
        }
        Err(Error::Input(
            "no deletion of the supersample matches the decoded multiset".into(),
        ))
    }
}

impl LearnerRule for MarginEncoder {
    fn name(&self) -> &'static str {
        "encoder"
    }

    fn kind(&self) -> LearnerKind {
        LearnerKind::DeterministicProper
    }

    fn law(
        &self,
        domain: &FiniteDomain,
        loss: &LossFunction,
        sample: &Supersample,
        holdout: usize,
    ) -> Result<OutcomeLaw> {
        self.law_for_training(domain, loss, &sample.training_sequence(holdout))
    }

    fn law_for_training(
        &self,
        _domain: &FiniteDomain,
        _loss: &LossFunction,
        s: &TrainingSequence,
    ) -> Result<OutcomeLaw> {
        let theta = self.encode(s)?;
        Ok(OutcomeLaw::deterministic(
            Predictor::Threshold(ThresholdConvention::Above, ExtRat::Finite(theta)),
            Some(HypothesisId::Encoded(theta)),
        ))
    }
}

/// Copy-input rule: stored label on training inputs, the input coordinate
/// itself elsewhere. Consistent by construction under the sign-agreement
/// loss with truth `1[x > 0]`.
#[derive(Debug, Clone, Default)]
pub struct CopyInput;

impl LearnerRule for CopyInput {
    fn name(&self) -> &'static str {
        "copy-input"
    }

    fn kind(&self) -> LearnerKind {
        LearnerKind::DeterministicTransductive
    }

    fn law(
        &self,
        domain: &FiniteDomain,
        loss: &LossFunction,
        sample: &Supersample,
        holdout: usize,
    ) -> Result<OutcomeLaw> {
        self.law_for_training(domain, loss, &sample.training_sequence(holdout))
    }

    fn law_for_training(
        &self,
        _domain: &FiniteDomain,
        _loss: &LossFunction,
        s: &TrainingSequence,
    ) -> Result<OutcomeLaw> {
        let mut known = BTreeMap::new();
        for ex in s.examples() {
            known.insert(ex.point, ex.label);
        }
        Ok(OutcomeLaw::deterministic(
            Predictor::Memorize {
                known,
                fallback: Fallback::Identity,
            },
            None,
        ))
    }
}

/// Diagnostic rule that memorizes its training points and predicts the
/// flipped true label everywhere else. Interpolating, with the worst
/// possible held-out behavior.
#[derive(Debug, Clone)]
pub struct AlwaysErr {
    truth: Arc<BTreeMap<PointIdx, Rat>>,
}

impl AlwaysErr {
    /// Needs the distribution's labeling function; only function-labeled
    /// (realizable) distributions admit it.
    pub fn new(truth: BTreeMap<PointIdx, Rat>) -> Result<Self> {
        for label in truth.values() {
            if *label != rat_int(0) && *label != rat_int(1) {
                return Err(Error::Input(
                    "always-err needs a binary labeling oracle".into(),
                ));
            }
        }
        Ok(Self {
            truth: Arc::new(truth),
        })
    }
}

impl LearnerRule for AlwaysErr {
    fn name(&self) -> &'static str {
        "always-err"
    }

    fn kind(&self) -> LearnerKind {
        LearnerKind::DeterministicProper
    }

    fn law(
        &self,
        domain: &FiniteDomain,
        loss: &LossFunction,
        sample: &Supersample,
        holdout: usize,
    ) -> Result<OutcomeLaw> {
        self.law_for_training(domain, loss, &sample.training_sequence(holdout))
    }

    fn law_for_training(
        &self,
        domain: &FiniteDomain,
        _loss: &LossFunction,
        s: &TrainingSequence,
    ) -> Result<OutcomeLaw> {
        let mut known = BTreeMap::new();
        for ex in s.examples() {
            if let Some(prev) = known.insert(ex.point, ex.label) {
                if prev != ex.label {
                    return Err(Error::NonRealizable(
                        "always-err saw two labels for one input".into(),
                    ));
                }
            }
        }
        let seen: Vec<Rat> = known.keys().map(|p| domain.coord(*p)).collect();
        Ok(OutcomeLaw::deterministic(
            Predictor::Memorize {
                known,
                fallback: Fallback::FlipTruth(self.truth.clone()),
            },
            Some(HypothesisId::SeenInputs(seen)),
        ))
    }
}

/// Constant-label rule; ignores the data entirely.
#[derive(Debug, Clone)]
pub struct ConstantLabel {
    pub label: Rat,
}

impl LearnerRule for ConstantLabel {
    fn name(&self) -> &'static str {
        "constant"
    }

    fn kind(&self) -> LearnerKind {
        LearnerKind::DeterministicProper
    }

    fn law(
        &self,
        domain: &FiniteDomain,
        loss: &LossFunction,
        sample: &Supersample,
        holdout: usize,
    ) -> Result<OutcomeLaw> {
        self.law_for_training(domain, loss, &sample.training_sequence(holdout))
    }

    fn law_for_training(
        &self,
        _domain: &FiniteDomain,
        _loss: &LossFunction,
        _s: &TrainingSequence,
    ) -> Result<OutcomeLaw> {
        Ok(OutcomeLaw::deterministic(
            Predictor::Constant(self.label),
            Some(HypothesisId::Const(self.label)),
        ))
    }
}
