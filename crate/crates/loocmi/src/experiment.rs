//! Orchestration: dispatch a validated config to the measure engine and the
//! verifiers, producing deterministic machine-readable reports; grid sweeps
//! to plot-ready CSV; the full verification run over the bundled corpus.

use crate::bounds::{
    counterexample_censored_posterior, verify_chain, verify_ege_bound,
    verify_loo_entropy_pointwise, verify_oig, verify_risk_bound, verify_risk_identity,
    verify_risk_sandwich, verify_theta_cmi, BoundReport, CounterexampleReport,
};
use crate::config::{ExperimentConfig, LearnerSpec, Mode};
use crate::corpus;
use crate::error::{Error, Result};
use crate::infotheory::{ChainReport, Engine};
use crate::learners::MaxMargin;
use crate::sample::Supersample;
use serde::Serialize;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Format a numeric with 12 significant digits.
pub fn format_sig(v: f64) -> String {
    format!("{v:.11e}")
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureValue {
    pub name: String,
    pub nats: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr_nats: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub name: String,
    pub fingerprint: String,
    pub version: String,
    pub n: usize,
    pub loss: String,
    pub law: String,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    pub budget: u64,
    pub terms: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interpolating: Option<bool>,
    pub measures: Vec<MeasureValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainReport>,
    pub checks: Vec<BoundReport>,
    /// Never serialized by default runs; timing goes to stderr so that
    /// reports stay byte-identical across reruns.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<f64>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn measure(&self, name: &str) -> Option<f64> {
        self.measures
            .iter()
            .find(|m| m.name == name)
            .and_then(|m| m.nats)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }
}

fn law_name(kind: crate::sample::LawKind) -> &'static str {
    match kind {
        crate::sample::LawKind::Product => "product",
        crate::sample::LawKind::DistinctInputs => "distinct-inputs",
    }
}

/// Run one experiment config end to end.
pub fn run(config: &ExperimentConfig) -> Result<RunReport> {
    let learner = config.build_learner()?;
    let law = config.build_law(config.n)?;
    let engine = Engine::new(
        &config.domain,
        &law,
        learner.as_ref(),
        &config.loss,
        config.budget,
    );

    let mut measures = Vec::new();
    let mut checks: Vec<BoundReport> = Vec::new();
    let mut chain: Option<ChainReport> = None;
    let mut interpolating_flag = None;

    match config.mode {
        Mode::MonteCarlo { samples, seed } => {
            let (estimate, stderr) = engine.loo_ecmi_mc(samples, seed)?;
            measures.push(MeasureValue {
                name: "loo_ecmi".into(),
                nats: Some(estimate),
                stderr_nats: Some(stderr),
                note: Some("monte-carlo outer expectation; inner law exact".into()),
            });
        }
        Mode::Exact => {
            law.check_budget(config.budget)?;
            let interpolating = engine.check_interpolating()?;
            interpolating_flag = Some(interpolating);

            let stats = engine.generalization_stats()?;
            let push_ok = |name: &str, v: f64, measures: &mut Vec<MeasureValue>| {
                measures.push(MeasureValue {
                    name: name.into(),
                    nats: Some(v),
                    stderr_nats: None,
                    note: None,
                });
            };
            push_ok("risk", stats.risk_heldout, &mut measures);
            push_ok("empirical_risk", stats.expected_empirical, &mut measures);
            push_ok("ege", stats.ege, &mut measures);
            push_ok("loo_ecmi", engine.loo_ecmi_exact()?, &mut measures);
            push_ok("mi_l_u", engine.mi_l_u()?, &mut measures);
            push_ok("mi_yhat_u_given_z", engine.mi_yhat_u_given_z()?, &mut measures);
            for (name, result) in [
                ("mi_hyp_u_given_z", engine.mi_hyp_u_given_z()),
                ("mi_hyp_s", engine.mi_hyp_s()),
            ] {
                match result {
                    Ok(v) => push_ok(name, v, &mut measures),
                    Err(Error::Capability(msg)) => measures.push(MeasureValue {
                        name: name.into(),
                        nats: None,
                        stderr_nats: None,
                        note: Some(msg),
                    }),
                    Err(e) => return Err(e),
                }
            }

            let fp = config.fingerprint.as_str();
            let zero_one = config.loss.is_zero_one_valued();
            if interpolating && zero_one {
                if config.checks.wants("risk-identity") {
                    checks.push(verify_risk_identity(&engine, interpolating, fp)?);
                }
                if config.checks.wants("risk-bound") {
                    checks.extend(verify_risk_bound(&engine, interpolating, fp)?);
                }
                if config.checks.wants("loo-entropy-bound") {
                    checks.push(verify_loo_entropy_pointwise(&engine, interpolating, fp)?);
                }
                if config.checks.wants("risk-sandwich") {
                    checks.extend(verify_risk_sandwich(&engine, interpolating, fp)?);
                }
            }
            if config.checks.wants("ege-bound") {
                checks.push(verify_ege_bound(&engine, fp)?);
            }
            if let Some(d) = config.oig_degree()? {
                if config.checks.wants("oig") {
                    checks.extend(verify_oig(&engine, d, fp)?);
                }
                if config.checks.wants("theta-cmi-bound") {
                    checks.push(verify_theta_cmi(
                        &engine,
                        |_| Ok(d as f64),
                        "degree",
                        fp,
                    )?);
                }
            }
            if let LearnerSpec::MaxMargin(conv) = &config.learner {
                if config.checks.wants("theta-cmi-bound") {
                    let mm = MaxMargin::new(*conv);
                    let domain = config.domain.clone();
                    checks.push(verify_theta_cmi(
                        &engine,
                        move |sample: &Supersample| {
                            Ok(mm.support_vectors(&domain, sample)? as f64)
                        },
                        "support-vectors",
                        fp,
                    )?);
                }
            }
            if config.checks.chain {
                let (chain_report, chain_checks) = verify_chain(&engine, fp)?;
                checks.extend(chain_checks);
                chain = Some(chain_report);
            }
        }
    }

    let (seed, samples) = match config.mode {
        Mode::MonteCarlo { samples, seed } => (Some(seed), Some(samples)),
        Mode::Exact => (None, None),
    };
    Ok(RunReport {
        name: config.name.clone(),
        fingerprint: config.fingerprint.clone(),
        version: VERSION.to_string(),
        n: config.n,
        loss: config.loss.name().to_string(),
        law: law_name(config.law_kind).to_string(),
        mode: match config.mode {
            Mode::Exact => "exact".into(),
            Mode::MonteCarlo { .. } => "monte-carlo".into(),
        },
        seed,
        samples,
        budget: config.budget,
        terms: match config.mode {
            Mode::Exact => law.term_count().to_string(),
            Mode::MonteCarlo { samples, .. } => samples.to_string(),
        },
        interpolating: interpolating_flag,
        measures,
        chain,
        checks,
        wall_clock_ms: None,
    })
}

/// Fixed sweep column set; the header row is always present.
pub const SWEEP_COLUMNS: [&str; 20] = [
    "name",
    "n",
    "mode",
    "seed",
    "samples",
    "interpolating",
    "risk",
    "ege",
    "loo_ecmi",
    "loo_ecmi_stderr",
    "mi_l_u",
    "mi_yhat_u_given_z",
    "mi_hyp_u_given_z",
    "mi_hyp_s",
    "risk_bound",
    "ege_bound",
    "oig_bound",
    "checks_passed",
    "checks_total",
    "error",
];

/// Run the config's sweep grid; one CSV row per cell in grid declaration
/// order, failures recorded in the error column.
pub fn sweep(config: &ExperimentConfig) -> Result<(String, usize)> {
    let grid = config
        .sweep
        .clone()
        .ok_or_else(|| Error::Input("config declares no sweep grid".into()))?;
    // an absent dimension defaults to the config's value; an explicitly
    // empty one leaves the grid with zero cells
    let ns = grid.n.unwrap_or_else(|| vec![config.n]);
    let (base_seed, base_samples) = match config.mode {
        Mode::MonteCarlo { samples, seed } => (Some(seed), Some(samples)),
        Mode::Exact => (None, None),
    };
    let seeds: Vec<Option<u64>> = match grid.seed {
        None => vec![base_seed],
        Some(list) => list.into_iter().map(Some).collect(),
    };
    let samples_list: Vec<Option<u64>> = match grid.samples {
        None => vec![base_samples],
        Some(list) => list.into_iter().map(Some).collect(),
    };

    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
    writer
        .write_record(SWEEP_COLUMNS)
        .map_err(|e| Error::Input(format!("csv: {e}")))?;
    let mut cell_errors = 0usize;
    for &n in &ns {
        for &seed in &seeds {
            for &samples in &samples_list {
                let mut cell = config.clone();
                cell.n = n;
                cell.sweep = None;
                cell.mode = match (config.mode, seed, samples) {
                    (Mode::MonteCarlo { .. }, Some(seed), Some(samples)) => {
                        Mode::MonteCarlo { samples, seed }
                    }
                    (Mode::MonteCarlo { samples: s0, seed: d0 }, seed, samples) => {
                        Mode::MonteCarlo {
                            samples: samples.unwrap_or(s0),
                            seed: seed.unwrap_or(d0),
                        }
                    }
                    (Mode::Exact, _, _) => Mode::Exact,
                };
                let row = match run(&cell) {
                    Ok(report) => report_row(&cell, &report),
                    Err(e) => {
                        cell_errors += 1;
                        error_row(&cell, &e)
                    }
                };
                writer
                    .write_record(&row)
                    .map_err(|e| Error::Input(format!("csv: {e}")))?;
            }
        }
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Input(format!("csv: {e}")))?;
    Ok((
        String::from_utf8(bytes).expect("csv output is utf-8"),
        cell_errors,
    ))
}

fn opt_sig(v: Option<f64>) -> String {
    v.map(format_sig).unwrap_or_default()
}

fn report_row(config: &ExperimentConfig, report: &RunReport) -> Vec<String> {
    let stderr = report
        .measures
        .iter()
        .find(|m| m.name == "loo_ecmi")
        .and_then(|m| m.stderr_nats);
    let loocmi = report.measure("loo_ecmi");
    let n = report.n;
    let risk_bound = loocmi.map(|v| v / ((n + 1) as f64).ln());
    let ege_bound = loocmi.map(|v| (2.0 * v).sqrt());
    let oig_bound = match config.oig_degree().ok().flatten() {
        Some(d) if d >= 1 && d <= n => crate::bounds::oig_loocmi_bound(d, n).ok(),
        _ => None,
    };
    vec![
        report.name.clone(),
        report.n.to_string(),
        report.mode.clone(),
        report.seed.map(|s| s.to_string()).unwrap_or_default(),
        report.samples.map(|s| s.to_string()).unwrap_or_default(),
        report
            .interpolating
            .map(|b| b.to_string())
            .unwrap_or_default(),
        opt_sig(report.measure("risk")),
        opt_sig(report.measure("ege")),
        opt_sig(loocmi),
        opt_sig(stderr),
        opt_sig(report.measure("mi_l_u")),
        opt_sig(report.measure("mi_yhat_u_given_z")),
        opt_sig(report.measure("mi_hyp_u_given_z")),
        opt_sig(report.measure("mi_hyp_s")),
        opt_sig(risk_bound),
        opt_sig(ege_bound),
        opt_sig(oig_bound),
        report
            .checks
            .iter()
            .filter(|c| c.pass)
            .count()
            .to_string(),
        report.checks.len().to_string(),
        String::new(),
    ]
}

fn error_row(config: &ExperimentConfig, error: &Error) -> Vec<String> {
    let mut row = vec![String::new(); SWEEP_COLUMNS.len()];
    row[0] = config.name.clone();
    row[1] = config.n.to_string();
    row[2] = match config.mode {
        Mode::Exact => "exact".into(),
        Mode::MonteCarlo { .. } => "monte-carlo".into(),
    };
    row[SWEEP_COLUMNS.len() - 1] = error.to_string();
    row
}

/// One-inclusion-graph dump for a point tuple: vertices, edges with their
/// orientation, the out-degree histogram, the exact maximum subgraph
/// density, and the true vertex's leave-one-out error when the
/// distribution labels every point.
pub fn oig_dump(
    config: &ExperimentConfig,
    coords: &[crate::num::Rat],
    degree: Option<usize>,
) -> Result<serde_json::Value> {
    let class = config
        .class
        .clone()
        .ok_or_else(|| Error::Input("one-inclusion graphs need a hypothesis class".into()))?;
    let mut points = Vec::new();
    for c in coords {
        let p = config.domain.index_of(*c).ok_or_else(|| {
            Error::Input(format!("{} is not a domain point", crate::num::format_rat(*c)))
        })?;
        points.push(p);
    }
    let d = match degree {
        Some(d) => d,
        None => match config.oig_degree()? {
            Some(d) => d,
            None => class.vc_dimension()?.max(1),
        },
    };
    let learner = crate::oig::OigLearner::new(class, d)?;
    let mut canonical = points;
    canonical.sort();
    let oriented = learner.oriented(&canonical)?;
    let graph = &oriented.graph;
    let assignment = &oriented.assignment;

    let truth = config.dist.truth_table();
    let truth_vertex = truth.as_ref().and_then(|t| {
        let labeling: Option<Vec<_>> = canonical.iter().map(|p| t.get(p).copied()).collect();
        labeling.and_then(|l| graph.vertex_index(&l))
    });
    let rloo =
        truth_vertex.map(|v| assignment.out_degree(graph, v) as f64 / canonical.len() as f64);

    let mut histogram: std::collections::BTreeMap<u64, usize> = Default::default();
    for v in 0..graph.vertex_count() {
        *histogram
            .entry(assignment.out_degree(graph, v))
            .or_insert(0) += 1;
    }
    let density = crate::oig::max_subgraph_density(graph, 20)?;

    let vertices: Vec<serde_json::Value> = graph
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, labels)| {
            serde_json::json!({
                "index": i,
                "labels": labels
                    .iter()
                    .map(|l| *l.numer() / *l.denom())
                    .collect::<Vec<_>>(),
                "out_degree": assignment.out_degree(graph, i),
            })
        })
        .collect();
    let edges: Vec<serde_json::Value> = graph
        .edges()
        .iter()
        .map(|e| {
            let toward_b = assignment.weight(graph, e.a, e.b);
            serde_json::json!({
                "a": e.a,
                "b": e.b,
                "coord": e.coord,
                // the tail carries the out-degree unit; the prediction at
                // this edge follows the head
                "tail": if toward_b == 1.0 { e.a } else { e.b },
            })
        })
        .collect();
    Ok(serde_json::json!({
        "points": canonical
            .iter()
            .map(|p| crate::num::format_rat(config.domain.coord(*p)))
            .collect::<Vec<_>>(),
        "degree_cap": d,
        "vertex_count": graph.vertex_count(),
        "edge_count": graph.edges().len(),
        "vertices": vertices,
        "edges": edges,
        "out_degree_histogram": histogram,
        "max_subgraph_density": format!("{}/{}", density.numer(), density.denom()),
        "truth_vertex": truth_vertex,
        "rloo": rloo,
    }))
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigVerification {
    pub name: String,
    pub fingerprint: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interpolating: Option<bool>,
    pub checks: Vec<BoundReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub version: String,
    pub configs: Vec<ConfigVerification>,
    pub counterexample: CounterexampleReport,
    pub total_checks: usize,
    pub failures: usize,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Monte-Carlo consistency check: the estimate must lie within four
/// reported standard errors of the exact value.
fn mc_consistency(config: &ExperimentConfig) -> Result<Vec<BoundReport>> {
    let (samples, seed) = match config.mode {
        Mode::MonteCarlo { samples, seed } => (samples, seed),
        Mode::Exact => return Ok(Vec::new()),
    };
    let learner = config.build_learner()?;
    let law = config.build_law(config.n)?;
    let engine = Engine::new(
        &config.domain,
        &law,
        learner.as_ref(),
        &config.loss,
        config.budget,
    );
    let exact = engine.loo_ecmi_exact()?;
    let (estimate, stderr) = engine.loo_ecmi_mc(samples, seed)?;
    let (estimate2, stderr2) = engine.loo_ecmi_mc(samples, seed)?;
    let fp = config.fingerprint.as_str();
    Ok(vec![
        BoundReport {
            check: "mc-consistency".into(),
            kind: crate::bounds::CheckKind::UpperBound,
            lhs: (estimate - exact).abs(),
            rhs: 4.0 * stderr,
            slack: 4.0 * stderr - (estimate - exact).abs(),
            tolerance: 0.0,
            pass: (estimate - exact).abs() <= 4.0 * stderr,
            detail: format!(
                "exact={}, estimate={}, stderr={}, samples={samples}, seed={seed}",
                format_sig(exact),
                format_sig(estimate),
                format_sig(stderr)
            ),
            fingerprint: fp.to_string(),
        },
        BoundReport {
            check: "mc-reproducibility".into(),
            kind: crate::bounds::CheckKind::Identity,
            lhs: estimate,
            rhs: estimate2,
            slack: estimate2 - estimate,
            tolerance: 0.0,
            pass: estimate.to_bits() == estimate2.to_bits()
                && stderr.to_bits() == stderr2.to_bits(),
            detail: "same seed reproduces the estimate bit-exactly".into(),
            fingerprint: fp.to_string(),
        },
    ])
}

/// Run the whole bundled corpus through the theorem suite plus the
/// counterexample preset. Deterministic: identical output for identical
/// inputs, no timestamps.
pub fn verify_corpus() -> Result<VerifyReport> {
    let mut configs = Vec::new();
    let mut total = 0usize;
    let mut failures = 0usize;
    for entry in corpus::bundled() {
        let parsed = crate::config::parse_config_named(entry.text, entry.name);
        let verification = match parsed {
            Ok(config) => match config.mode {
                Mode::Exact => match run(&config) {
                    Ok(report) => ConfigVerification {
                        name: report.name.clone(),
                        fingerprint: report.fingerprint.clone(),
                        interpolating: report.interpolating,
                        chain: report.chain.clone(),
                        checks: report.checks,
                        error: None,
                    },
                    Err(e) => ConfigVerification {
                        name: config.name.clone(),
                        fingerprint: config.fingerprint.clone(),
                        interpolating: None,
                        checks: Vec::new(),
                        chain: None,
                        error: Some(e.to_string()),
                    },
                },
                Mode::MonteCarlo { .. } => match mc_consistency(&config) {
                    Ok(checks) => ConfigVerification {
                        name: config.name.clone(),
                        fingerprint: config.fingerprint.clone(),
                        interpolating: None,
                        checks,
                        chain: None,
                        error: None,
                    },
                    Err(e) => ConfigVerification {
                        name: config.name.clone(),
                        fingerprint: config.fingerprint.clone(),
                        interpolating: None,
                        checks: Vec::new(),
                        chain: None,
                        error: Some(e.to_string()),
                    },
                },
            },
            Err(e) => ConfigVerification {
                name: entry.name.to_string(),
                fingerprint: String::new(),
                interpolating: None,
                checks: Vec::new(),
                chain: None,
                error: Some(e.to_string()),
            },
        };
        total += verification.checks.len();
        failures += verification.checks.iter().filter(|c| !c.pass).count();
        if verification.error.is_some() {
            failures += 1;
        }
        configs.push(verification);
    }

    let (domain, sample) = corpus::counterexample_preset()?;
    let counterexample = counterexample_censored_posterior(&domain, &sample, "preset")?;
    total += 1;
    if !counterexample.pass {
        failures += 1;
    }

    Ok(VerifyReport {
        version: VERSION.to_string(),
        configs,
        counterexample,
        total_checks: total,
        failures,
    })
}

