//! Supersamples, training sequences, and the exact law of the supersample.
//!
//! A supersample is an `(n+1)`-tuple of labeled examples; deleting one
//! coordinate yields the training sequence. The law of the tuple is either
//! the plain product of the data distribution or, as the finite surrogate
//! for continuous distributions, the product conditioned on pairwise
//! distinct inputs. Both are exchangeable, which is all the identities
//! downstream rely on.

use crate::distribution::FiniteDistribution;
use crate::domain::LabeledExample;
use crate::error::{Error, Result};
use crate::num::NeumaierSum;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Default cap on the number of weighted enumeration terms.
pub const DEFAULT_TERM_BUDGET: u64 = 100_000_000;

/// An `(n+1)`-tuple of labeled examples; duplicates permitted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Supersample {
    entries: Vec<LabeledExample>,
}

impl Supersample {
    pub fn new(entries: Vec<LabeledExample>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::Input(
                "supersample needs at least two entries (n >= 1)".into(),
            ));
        }
        Ok(Self { entries })
    }

    /// Training-set size `n`; the tuple has `n + 1` entries.
    pub fn n(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[LabeledExample] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &LabeledExample {
        &self.entries[i]
    }

    /// The training sequence with coordinate `holdout` removed, original
    /// order preserved.
    pub fn training_sequence(&self, holdout: usize) -> TrainingSequence {
        assert!(holdout < self.entries.len());
        let examples = self
            .entries
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != holdout)
            .map(|(_, e)| *e)
            .collect();
        TrainingSequence { examples, holdout }
    }

    /// Iterate the training entries without allocating.
    pub fn training_iter(&self, holdout: usize) -> impl Iterator<Item = &LabeledExample> {
        self.entries
            .iter()
            .enumerate()
            .filter(move |(i, _)| *i != holdout)
            .map(|(_, e)| e)
    }
}

/// An ordered training sequence obtained by one deletion from a supersample.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TrainingSequence {
    examples: Vec<LabeledExample>,
    holdout: usize,
}

impl TrainingSequence {
    pub fn from_examples(examples: Vec<LabeledExample>) -> Self {
        Self {
            examples,
            holdout: usize::MAX,
        }
    }

    pub fn examples(&self) -> &[LabeledExample] {
        &self.examples
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    /// Index that was deleted from the originating supersample, when known.
    pub fn holdout(&self) -> Option<usize> {
        (self.holdout != usize::MAX).then_some(self.holdout)
    }
}

/// Which joint law the `(n+1)` entries follow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawKind {
    /// Plain i.i.d. product `D^(n+1)`.
    Product,
    /// `D^(n+1)` conditioned on pairwise-distinct inputs; the finite-grid
    /// stand-in for an atomless distribution.
    DistinctInputs,
}

/// The exact joint law of the supersample.
#[derive(Debug, Clone)]
pub struct SupersampleLaw {
    dist: FiniteDistribution,
    n: usize,
    kind: LawKind,
    normalizer: f64,
}

impl SupersampleLaw {
    pub fn new(dist: FiniteDistribution, n: usize, kind: LawKind) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("training size n must be at least 1".into()));
        }
        let mut law = Self {
            dist,
            n,
            kind,
            normalizer: 1.0,
        };
        if kind == LawKind::DistinctInputs {
            let tuple_len = n + 1;
            let distinct_points: std::collections::HashSet<_> = law
                .dist
                .support()
                .iter()
                .map(|e| e.point)
                .collect();
            if distinct_points.len() < tuple_len {
                return Err(Error::InvalidDistribution(format!(
                    "distinct-inputs law needs at least {tuple_len} distinct support inputs, found {}",
                    distinct_points.len()
                )));
            }
            let mut z = NeumaierSum::new();
            law.for_each_raw(|_, w| z.add(w));
            law.normalizer = z.value();
            if law.normalizer <= 0.0 {
                return Err(Error::InvalidDistribution(
                    "distinct-inputs law has zero mass".into(),
                ));
            }
        }
        Ok(law)
    }

    pub fn product(dist: FiniteDistribution, n: usize) -> Result<Self> {
        Self::new(dist, n, LawKind::Product)
    }

    pub fn dist(&self) -> &FiniteDistribution {
        &self.dist
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tuple_len(&self) -> usize {
        self.n + 1
    }

    pub fn kind(&self) -> LawKind {
        self.kind
    }

    /// Number of weighted terms a full enumeration visits.
    pub fn term_count(&self) -> u128 {
        (self.dist.len() as u128).pow(self.tuple_len() as u32)
    }

    pub fn check_budget(&self, budget: u64) -> Result<()> {
        let required = self.term_count();
        if required > budget as u128 {
            return Err(Error::Budget { required, budget });
        }
        Ok(())
    }

    fn tuple_weight(&self, idx: &[usize]) -> f64 {
        let mass = self.dist.mass();
        idx.iter().map(|&i| mass[i]).product()
    }

    fn tuple_admissible(&self, idx: &[usize]) -> bool {
        match self.kind {
            LawKind::Product => true,
            LawKind::DistinctInputs => {
                let support = self.dist.support();
                for a in 0..idx.len() {
                    for b in a + 1..idx.len() {
                        if support[idx[a]].point == support[idx[b]].point {
                            return false;
                        }
                    }
                }
                true
            }
        }
    }

    /// Enumerate admissible index tuples lexicographically with their
    /// unnormalized product weights.
    fn for_each_raw<F: FnMut(&[usize], f64)>(&self, mut f: F) {
        let k = self.dist.len();
        let len = self.tuple_len();
        let mut idx = vec![0usize; len];
        loop {
            if self.tuple_admissible(&idx) {
                let w = self.tuple_weight(&idx);
                if w > 0.0 {
                    f(&idx, w);
                }
            }
            let mut pos = len;
            loop {
                if pos == 0 {
                    return;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < k {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }

    /// Enumerate supersamples in lexicographic index order with their
    /// normalized probabilities. The scratch `Supersample` passed to the
    /// callback is rebuilt per tuple.
    pub fn for_each<F: FnMut(&Supersample, f64)>(&self, mut f: F) {
        let support = self.dist.support();
        let mut entries = vec![support[0]; self.tuple_len()];
        let norm = self.normalizer;
        self.for_each_raw(|idx, w| {
            for (slot, &i) in entries.iter_mut().zip(idx) {
                *slot = support[i];
            }
            let ss = Supersample {
                entries: entries.clone(),
            };
            f(&ss, w / norm);
        });
    }

    /// Draw one supersample; rejection sampling under the distinct-inputs
    /// law. Deterministic given the RNG state.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Result<Supersample> {
        let support = self.dist.support();
        let mass = self.dist.mass();
        let cdf: Vec<f64> = {
            let mut acc = 0.0;
            mass.iter()
                .map(|m| {
                    acc += m;
                    acc
                })
                .collect()
        };
        let draw_one = |rng: &mut R| -> usize {
            let x: f64 = rng.random();
            match cdf.iter().position(|&c| x < c) {
                Some(i) => i,
                None => mass.len() - 1,
            }
        };
        const MAX_REJECTIONS: usize = 1_000_000;
        for _ in 0..MAX_REJECTIONS {
            let idx: Vec<usize> = (0..self.tuple_len()).map(|_| draw_one(rng)).collect();
            if self.tuple_admissible(&idx) {
                let entries = idx.iter().map(|&i| support[i]).collect();
                return Ok(Supersample { entries });
            }
        }
        Err(Error::InvalidDistribution(
            "rejection sampling failed to draw a distinct-inputs supersample".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{FiniteDomain, PointIdx};
    use crate::num::rat_int;
    use std::sync::Arc;

    fn ex(p: usize, y: i64) -> LabeledExample {
        LabeledExample::new(PointIdx(p), rat_int(y))
    }

    fn uniform3() -> FiniteDistribution {
        FiniteDistribution::uniform(
            Arc::new(FiniteDomain::grid(3)),
            vec![ex(0, 1), ex(1, 1), ex(2, 0)],
        )
        .unwrap()
    }

    #[test]
    fn training_sequence_deletes_in_order() {
        let ss = Supersample::new(vec![ex(0, 1), ex(1, 1), ex(2, 0)]).unwrap();
        assert_eq!(ss.n(), 2);
        let s = ss.training_sequence(1);
        assert_eq!(s.examples(), &[ex(0, 1), ex(2, 0)]);
        assert_eq!(s.holdout(), Some(1));
    }

    #[test]
    fn product_law_masses_sum_to_one() {
        let law = SupersampleLaw::product(uniform3(), 2).unwrap();
        assert_eq!(law.term_count(), 27);
        let mut total = 0.0;
        let mut count = 0;
        law.for_each(|ss, w| {
            total += w;
            count += 1;
            assert_eq!(ss.len(), 3);
        });
        assert_eq!(count, 27);
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distinct_law_excludes_duplicates_and_renormalizes() {
        let law = SupersampleLaw::new(uniform3(), 2, LawKind::DistinctInputs).unwrap();
        let mut total = 0.0;
        let mut count = 0;
        law.for_each(|ss, w| {
            total += w;
            count += 1;
            let pts: Vec<_> = ss.entries().iter().map(|e| e.point).collect();
            for a in 0..pts.len() {
                for b in a + 1..pts.len() {
                    assert_ne!(pts[a], pts[b]);
                }
            }
        });
        assert_eq!(count, 6); // 3! orderings of three distinct points
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distinct_law_needs_enough_points() {
        let d = FiniteDistribution::uniform(
            Arc::new(FiniteDomain::grid(2)),
            vec![ex(0, 1), ex(1, 0)],
        )
        .unwrap();
        assert!(SupersampleLaw::new(d, 2, LawKind::DistinctInputs).is_err());
    }

    #[test]
    fn budget_guard_reports_term_count() {
        let law = SupersampleLaw::product(uniform3(), 2).unwrap();
        match law.check_budget(10) {
            Err(Error::Budget { required, budget }) => {
                assert_eq!(required, 27);
                assert_eq!(budget, 10);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        use rand::SeedableRng;
        let law = SupersampleLaw::new(uniform3(), 2, LawKind::DistinctInputs).unwrap();
        let mut a = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut b = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..32 {
            assert_eq!(law.sample(&mut a).unwrap(), law.sample(&mut b).unwrap());
        }
    }
}
