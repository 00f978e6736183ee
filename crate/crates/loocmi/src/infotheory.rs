//! The measure engine: exact enumeration of the supersample law against a
//! learner's exact output law, yielding the leave-one-out conditional
//! mutual information and the rest of the dependence-measure chain
//!
//!   I(L;U)  <=  I(L;U|Z)  <=  I(Yhat;U|Z)  <=  I(A;U|Z)  <=  I(A;S),
//!
//! with `L` the loss profile on the supersample, `Yhat` the prediction
//! profile, `A` the hypothesis, `S` the training sequence, and `U` the
//! held-out coordinate, uniform and independent of the supersample.
//!
//! Enumeration order is lexicographic in the supersample index vectors and
//! accumulation is compensated, so exact-mode outputs are reproducible
//! bit for bit.

use crate::domain::{FiniteDomain, LabeledExample};
use crate::error::{Error, Result};
use crate::learner::{HypothesisId, LearnerKind, LearnerRule};
use crate::loss::LossFunction;
use crate::num::{rat_int, rat_to_f64, NeumaierSum, Rat};
use crate::pmf::entropy_of_probs;
use crate::sample::{LawKind, Supersample, SupersampleLaw};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;

/// Compact key for loss profiles: a bitmask when every loss is 0/1 (the
/// common case), the exact vector otherwise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProfileKey {
    Bits(u64),
    General(Vec<Rat>),
}

fn encode_losses(losses: &[Rat]) -> ProfileKey {
    if losses.len() <= 64 {
        let mut bits = 0u64;
        for (i, l) in losses.iter().enumerate() {
            if *l == rat_int(1) {
                bits |= 1 << i;
            } else if *l != rat_int(0) {
                return ProfileKey::General(losses.to_vec());
            }
        }
        ProfileKey::Bits(bits)
    } else {
        ProfileKey::General(losses.to_vec())
    }
}

/// Per-supersample disintegrated quantities for one learner.
#[derive(Debug, Clone, Serialize)]
pub struct DisintegratedReport {
    /// `I_z(L; U)` in nats; at most `ln(n+1)`.
    pub mi_nats: f64,
    /// `H_z(L)` in nats.
    pub entropy_loss_nats: f64,
    /// Leave-one-out error estimate: mean expected held-out loss.
    pub rloo: f64,
    /// Expected held-out loss per coordinate.
    pub kappa: Vec<f64>,
}

/// One atom of a learner's output: its probability, the prediction profile
/// over the supersample, the loss profile, and the hypothesis identity when
/// the learner has one.
struct Atom {
    prob: f64,
    predictions: Vec<Rat>,
    losses: Vec<Rat>,
    hypothesis: Option<HypothesisId>,
}

/// Everything a measure computation needs, borrowed.
pub struct Engine<'a> {
    pub domain: &'a FiniteDomain,
    pub law: &'a SupersampleLaw,
    pub learner: &'a dyn LearnerRule,
    pub loss: &'a LossFunction,
    pub budget: u64,
}

impl<'a> Engine<'a> {
    pub fn new(
        domain: &'a FiniteDomain,
        law: &'a SupersampleLaw,
        learner: &'a dyn LearnerRule,
        loss: &'a LossFunction,
        budget: u64,
    ) -> Self {
        Self {
            domain,
            law,
            learner,
            loss,
            budget,
        }
    }

    fn tuple_len(&self) -> usize {
        self.law.tuple_len()
    }

    fn atoms(&self, sample: &Supersample, holdout: usize) -> Result<Vec<Atom>> {
        let out_law = self.learner.law(self.domain, self.loss, sample, holdout)?;
        let len = sample.len();
        let mut atoms = Vec::with_capacity(out_law.outcomes.len());
        for outcome in out_law.outcomes {
            let predictions: Vec<Rat> = (0..len)
                .map(|i| outcome.predictor.predict_at(self.domain, sample, i))
                .collect();
            let losses: Vec<Rat> = predictions
                .iter()
                .zip(sample.entries())
                .map(|(p, e)| self.loss.eval(*p, e))
                .collect();
            atoms.push(Atom {
                prob: outcome.prob,
                predictions,
                losses,
                hypothesis: outcome.hypothesis,
            });
        }
        Ok(atoms)
    }

    /// Exact law of the loss profile given `(z, u)`, averaging the
    /// learner's internal randomness; a point mass for deterministic
    /// learners.
    pub fn conditional_loss_law(
        &self,
        sample: &Supersample,
        holdout: usize,
    ) -> Result<crate::pmf::Pmf<Vec<Rat>>> {
        let atoms = self.atoms(sample, holdout)?;
        crate::pmf::Pmf::new(atoms.into_iter().map(|a| (a.losses, a.prob)).collect())
    }

    /// Disintegrated MI between the loss profile and the held-out index for
    /// one fixed supersample.
    pub fn disintegrated(&self, sample: &Supersample) -> Result<DisintegratedReport> {
        let len = sample.len();
        let unif = 1.0 / len as f64;
        let mut mixture: BTreeMap<ProfileKey, f64> = BTreeMap::new();
        let mut per_u_entropy = NeumaierSum::new();
        let mut kappa = Vec::with_capacity(len);
        for u in 0..len {
            let atoms = self.atoms(sample, u)?;
            let mut cond: BTreeMap<ProfileKey, f64> = BTreeMap::new();
            let mut held = NeumaierSum::new();
            for atom in &atoms {
                *cond.entry(encode_losses(&atom.losses)).or_insert(0.0) += atom.prob;
                held.add(atom.prob * rat_to_f64(atom.losses[u]));
            }
            kappa.push(held.value());
            let probs: Vec<f64> = cond.values().copied().collect();
            per_u_entropy.add(entropy_of_probs(&probs));
            for (key, p) in cond {
                *mixture.entry(key).or_insert(0.0) += unif * p;
            }
        }
        let mix_probs: Vec<f64> = mixture.values().copied().collect();
        let entropy_loss = entropy_of_probs(&mix_probs);
        let mi = (entropy_loss - per_u_entropy.value() * unif).max(0.0);
        let mut rloo = NeumaierSum::new();
        for &k in &kappa {
            rloo.add(k);
        }
        Ok(DisintegratedReport {
            mi_nats: mi,
            entropy_loss_nats: entropy_loss,
            rloo: rloo.value() * unif,
            kappa,
        })
    }

    /// Runs `f` on every positive-probability supersample with its law
    /// weight and disintegrated report. Budget-guarded.
    pub fn for_each_disintegrated<F>(&self, mut f: F) -> Result<()>
    where
        F: FnMut(&Supersample, f64, &DisintegratedReport),
    {
        self.law.check_budget(self.budget)?;
        let mut failure: Option<Error> = None;
        self.law.for_each(|sample, w| {
            if failure.is_some() {
                return;
            }
            match self.disintegrated(sample) {
                Ok(report) => f(sample, w, &report),
                Err(e) => failure = Some(e),
            }
        });
        match failure {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    /// `I(L; U | Z)` by exact enumeration.
    pub fn loo_ecmi_exact(&self) -> Result<f64> {
        let mut total = NeumaierSum::new();
        self.for_each_disintegrated(|_, w, rep| total.add(w * rep.mi_nats))?;
        Ok(total.value().max(0.0))
    }

    /// Monte-Carlo estimate of `I(L; U | Z)`: the outer expectation over
    /// supersamples is sampled, the inner disintegrated MI stays exact.
    /// Returns `(estimate, standard error)`; reproducible per seed.
    pub fn loo_ecmi_mc(&self, samples: u64, seed: u64) -> Result<(f64, f64)> {
        if samples < 2 {
            return Err(Error::Input("monte-carlo needs at least 2 samples".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values = Vec::with_capacity(samples as usize);
        for _ in 0..samples {
            let sample = self.law.sample(&mut rng)?;
            values.push(self.disintegrated(&sample)?.mi_nats);
        }
        let mut sum = NeumaierSum::new();
        for &v in &values {
            sum.add(v);
        }
        let mean = sum.value() / samples as f64;
        let mut sq = NeumaierSum::new();
        for &v in &values {
            sq.add((v - mean) * (v - mean));
        }
        let variance = sq.value() / (samples - 1) as f64;
        let stderr = (variance / samples as f64).sqrt();
        Ok((mean, stderr))
    }

    /// The unconditional `I(L; U)`: joint law of (loss profile, held-out
    /// index) against the product of its marginals.
    pub fn mi_l_u(&self) -> Result<f64> {
        self.law.check_budget(self.budget)?;
        let len = self.tuple_len();
        let unif = 1.0 / len as f64;
        let mut joint: BTreeMap<(usize, ProfileKey), f64> = BTreeMap::new();
        let mut failure: Option<Error> = None;
        self.law.for_each(|sample, w| {
            if failure.is_some() {
                return;
            }
            for u in 0..len {
                match self.atoms(sample, u) {
                    Ok(atoms) => {
                        for atom in atoms {
                            *joint
                                .entry((u, encode_losses(&atom.losses)))
                                .or_insert(0.0) += w * unif * atom.prob;
                        }
                    }
                    Err(e) => {
                        failure = Some(e);
                        return;
                    }
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        let mut marginal: BTreeMap<ProfileKey, f64> = BTreeMap::new();
        for ((_, key), p) in &joint {
            *marginal.entry(key.clone()).or_insert(0.0) += p;
        }
        let mut kl = NeumaierSum::new();
        for ((_, key), p) in &joint {
            if *p > 0.0 {
                kl.add(p * (p / (marginal[key] * unif)).ln());
            }
        }
        Ok(kl.value().max(0.0))
    }

    /// `I(Yhat; U | Z)` over prediction profiles.
    pub fn mi_yhat_u_given_z(&self) -> Result<f64> {
        self.conditional_mi(|atom| Ok(atom.predictions.clone()))
    }

    /// `I(A; U | Z)` over hypothesis identities; capability error for
    /// learners that do not output an identified hypothesis.
    pub fn mi_hyp_u_given_z(&self) -> Result<f64> {
        self.require_proper()?;
        self.conditional_mi(|atom| {
            atom.hypothesis.clone().ok_or_else(|| {
                Error::Capability("learner outcome carries no hypothesis identity".into())
            })
        })
    }

    fn require_proper(&self) -> Result<()> {
        if self.learner.kind() == LearnerKind::DeterministicProper {
            Ok(())
        } else {
            Err(Error::Capability(format!(
                "{} does not output an identified hypothesis",
                self.learner.name()
            )))
        }
    }

    /// Generic conditional MI `I(f(outcome); U | Z)` for a per-atom
    /// statistic `f`.
    fn conditional_mi<K, F>(&self, mut stat: F) -> Result<f64>
    where
        K: Ord + Clone,
        F: FnMut(&Atom) -> Result<K>,
    {
        self.law.check_budget(self.budget)?;
        let len = self.tuple_len();
        let unif = 1.0 / len as f64;
        let mut total = NeumaierSum::new();
        let mut failure: Option<Error> = None;
        self.law.for_each(|sample, w| {
            if failure.is_some() {
                return;
            }
            let mut mixture: BTreeMap<K, f64> = BTreeMap::new();
            let mut per_u_entropy = NeumaierSum::new();
            for u in 0..len {
                let atoms = match self.atoms(sample, u) {
                    Ok(a) => a,
                    Err(e) => {
                        failure = Some(e);
                        return;
                    }
                };
                let mut cond: BTreeMap<K, f64> = BTreeMap::new();
                for atom in &atoms {
                    let key = match stat(atom) {
                        Ok(k) => k,
                        Err(e) => {
                            failure = Some(e);
                            return;
                        }
                    };
                    *cond.entry(key).or_insert(0.0) += atom.prob;
                }
                let probs: Vec<f64> = cond.values().copied().collect();
                per_u_entropy.add(entropy_of_probs(&probs));
                for (k, p) in cond {
                    *mixture.entry(k).or_insert(0.0) += unif * p;
                }
            }
            let probs: Vec<f64> = mixture.values().copied().collect();
            let mi = (entropy_of_probs(&probs) - per_u_entropy.value() * unif).max(0.0);
            total.add(w * mi);
        });
        match failure {
            Some(e) => Err(e),
            None => Ok(total.value().max(0.0)),
        }
    }

    /// `I(A; S)`: mutual information between the hypothesis and the
    /// training sequence under the law of `S = Z_{-U}`.
    pub fn mi_hyp_s(&self) -> Result<f64> {
        self.require_proper()?;
        let mut joint: BTreeMap<(Vec<LabeledExample>, HypothesisId), f64> = BTreeMap::new();
        match self.law.kind() {
            LawKind::Product => {
                // S ~ D^n directly
                let dist = self.law.dist();
                let n = self.law.n();
                let required = (dist.len() as u128).pow(n as u32);
                if required > self.budget as u128 {
                    return Err(Error::Budget {
                        required,
                        budget: self.budget,
                    });
                }
                let support = dist.support();
                let mass = dist.mass();
                let mut idx = vec![0usize; n];
                loop {
                    let w: f64 = idx.iter().map(|&i| mass[i]).product();
                    if w > 0.0 {
                        let examples: Vec<LabeledExample> =
                            idx.iter().map(|&i| support[i]).collect();
                        let s = crate::sample::TrainingSequence::from_examples(examples.clone());
                        let out_law = self.learner.law_for_training(self.domain, self.loss, &s)?;
                        for outcome in out_law.outcomes {
                            let hyp = outcome.hypothesis.ok_or_else(|| {
                                Error::Capability("hypothesis identity missing".into())
                            })?;
                            *joint.entry((examples.clone(), hyp)).or_insert(0.0) +=
                                w * outcome.prob;
                        }
                    }
                    let mut pos = n;
                    let mut done = false;
                    loop {
                        if pos == 0 {
                            done = true;
                            break;
                        }
                        pos -= 1;
                        idx[pos] += 1;
                        if idx[pos] < dist.len() {
                            break;
                        }
                        idx[pos] = 0;
                    }
                    if done {
                        break;
                    }
                }
            }
            LawKind::DistinctInputs => {
                // derive the law of S from deletions of the conditioned law
                self.law.check_budget(self.budget)?;
                let len = self.tuple_len();
                let unif = 1.0 / len as f64;
                let mut failure: Option<Error> = None;
                self.law.for_each(|sample, w| {
                    if failure.is_some() {
                        return;
                    }
                    for u in 0..len {
                        let s = sample.training_sequence(u);
                        let examples = s.examples().to_vec();
                        match self.learner.law_for_training(self.domain, self.loss, &s) {
                            Ok(out_law) => {
                                for outcome in out_law.outcomes {
                                    match outcome.hypothesis {
                                        Some(hyp) => {
                                            *joint
                                                .entry((examples.clone(), hyp))
                                                .or_insert(0.0) += w * unif * outcome.prob;
                                        }
                                        None => {
                                            failure = Some(Error::Capability(
                                                "hypothesis identity missing".into(),
                                            ));
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
                if let Some(e) = failure {
                    return Err(e);
                }
            }
        }
        let mut marg_s: BTreeMap<&Vec<LabeledExample>, f64> = BTreeMap::new();
        let mut marg_a: BTreeMap<&HypothesisId, f64> = BTreeMap::new();
        for ((s, a), p) in &joint {
            *marg_s.entry(s).or_insert(0.0) += p;
            *marg_a.entry(a).or_insert(0.0) += p;
        }
        let mut kl = NeumaierSum::new();
        for ((s, a), p) in &joint {
            if *p > 0.0 {
                kl.add(p * (p / (marg_s[s] * marg_a[a])).ln());
            }
        }
        Ok(kl.value().max(0.0))
    }

    /// Held-out risk `E[L_U]`, expected empirical risk, and their gap (the
    /// expected generalization error), in one enumeration.
    pub fn generalization_stats(&self) -> Result<GeneralizationStats> {
        self.law.check_budget(self.budget)?;
        let len = self.tuple_len();
        let unif = 1.0 / len as f64;
        let mut risk = NeumaierSum::new();
        let mut emp = NeumaierSum::new();
        let mut failure: Option<Error> = None;
        self.law.for_each(|sample, w| {
            if failure.is_some() {
                return;
            }
            for u in 0..len {
                match self.atoms(sample, u) {
                    Ok(atoms) => {
                        for atom in &atoms {
                            let held = rat_to_f64(atom.losses[u]);
                            let mut train = NeumaierSum::new();
                            for (i, l) in atom.losses.iter().enumerate() {
                                if i != u {
                                    train.add(rat_to_f64(*l));
                                }
                            }
                            risk.add(w * unif * atom.prob * held);
                            emp.add(w * unif * atom.prob * train.value() / (len - 1) as f64);
                        }
                    }
                    Err(e) => {
                        failure = Some(e);
                        return;
                    }
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        let risk = risk.value();
        let emp = emp.value();
        Ok(GeneralizationStats {
            risk_heldout: risk,
            expected_empirical: emp,
            ege: risk - emp,
        })
    }

    /// Risk by a route independent of the profile-law machinery: under the
    /// product law, proper learners get the population path (enumerate
    /// training sequences, then weight losses by the data distribution);
    /// otherwise the held-out loss is accumulated from raw predictions.
    pub fn risk_independent(&self) -> Result<f64> {
        if self.law.kind() == LawKind::Product {
            if let Ok(r) = self.risk_population() {
                return Ok(r);
            }
        }
        Ok(self.generalization_stats()?.risk_heldout)
    }

    fn risk_population(&self) -> Result<f64> {
        let dist = self.law.dist();
        let n = self.law.n();
        let required = (dist.len() as u128).pow(n as u32);
        if required > self.budget as u128 {
            return Err(Error::Budget {
                required,
                budget: self.budget,
            });
        }
        let support = dist.support();
        let mass = dist.mass();
        let mut idx = vec![0usize; n];
        let mut total = NeumaierSum::new();
        loop {
            let w: f64 = idx.iter().map(|&i| mass[i]).product();
            if w > 0.0 {
                let s = crate::sample::TrainingSequence::from_examples(
                    idx.iter().map(|&i| support[i]).collect(),
                );
                let out_law = self.learner.law_for_training(self.domain, self.loss, &s)?;
                for outcome in out_law.outcomes {
                    let mut pop = NeumaierSum::new();
                    for (ex, &m) in support.iter().zip(mass) {
                        let pred = outcome
                            .predictor
                            .predict_point(self.domain, ex.point)
                            .ok_or_else(|| {
                                Error::Capability(
                                    "predictor not evaluable off its supersample".into(),
                                )
                            })?;
                        pop.add(m * rat_to_f64(self.loss.eval(pred, ex)));
                    }
                    total.add(w * outcome.prob * pop.value());
                }
            }
            let mut pos = n;
            let mut done = false;
            loop {
                if pos == 0 {
                    done = true;
                    break;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < dist.len() {
                    break;
                }
                idx[pos] = 0;
            }
            if done {
                break;
            }
        }
        Ok(total.value())
    }

    /// Is the learner interpolating on every positive-probability
    /// training sequence?
    pub fn check_interpolating(&self) -> Result<bool> {
        crate::learner::check_interpolating(
            self.domain,
            self.learner,
            self.law,
            self.loss,
            self.budget,
        )
    }

    /// The full chain of dependence measures with per-pair ordering checks.
    pub fn chain_report(&self, tolerance: f64) -> Result<ChainReport> {
        let n1 = self.tuple_len() as f64;
        let mut entries = Vec::new();
        let push = |name: &str, value: Result<f64>, entries: &mut Vec<ChainEntry>| {
            match value {
                Ok(v) => entries.push(ChainEntry {
                    name: name.to_string(),
                    nats: Some(v),
                    note: None,
                }),
                Err(Error::Capability(msg)) => entries.push(ChainEntry {
                    name: name.to_string(),
                    nats: None,
                    note: Some(msg),
                }),
                Err(e) => entries.push(ChainEntry {
                    name: name.to_string(),
                    nats: None,
                    note: Some(e.to_string()),
                }),
            }
        };
        push("mi_l_u", self.mi_l_u(), &mut entries);
        push("loo_ecmi", self.loo_ecmi_exact(), &mut entries);
        push("mi_yhat_u_given_z", self.mi_yhat_u_given_z(), &mut entries);
        push("mi_hyp_u_given_z", self.mi_hyp_u_given_z(), &mut entries);
        push("mi_hyp_s", self.mi_hyp_s(), &mut entries);
        let mut checks = Vec::new();
        let computed: Vec<(usize, f64)> = entries
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.nats.map(|v| (i, v)))
            .collect();
        for pair in computed.windows(2) {
            let (i, lhs) = pair[0];
            let (j, rhs) = pair[1];
            checks.push(ChainCheck {
                lhs: entries[i].name.clone(),
                rhs: entries[j].name.clone(),
                lhs_nats: lhs,
                rhs_nats: rhs,
                slack: rhs - lhs,
                pass: lhs <= rhs + tolerance,
            });
        }
        Ok(ChainReport {
            entries,
            checks,
            max_entropy_nats: n1.ln(),
        })
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GeneralizationStats {
    pub risk_heldout: f64,
    pub expected_empirical: f64,
    pub ege: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainEntry {
    pub name: String,
    pub nats: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainCheck {
    pub lhs: String,
    pub rhs: String,
    pub lhs_nats: f64,
    pub rhs_nats: f64,
    pub slack: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainReport {
    pub entries: Vec<ChainEntry>,
    pub checks: Vec<ChainCheck>,
    pub max_entropy_nats: f64,
}

impl ChainReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn entry(&self, name: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .and_then(|e| e.nats)
    }
}
