//! Experiment orchestration.
//!
//! Resolves a loaded config into concrete simulations, fans training out
//! over seeds, and persists results: one CSV per trained seed (deterministic
//! bytes — rerunning the same config and seed reproduces the file exactly),
//! one JSON summary per subcommand (the only place timestamps appear), and
//! one JSON report per bound-check claim.
//!
//! Every artifact embeds the config hash. An output directory remembers the
//! hash it was created for (`config-hash.txt`); pointing a different config
//! at the same directory is refused rather than silently mixing results.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime};

use serde::Serialize;

use crate::ansatz::AnsatzSpec;
use crate::checks::{self, BoundReport};
use crate::config::LoadedConfig;
use crate::cost::CostKind;
use crate::density::NoiseModel;
use crate::error::{Error, Result};
use crate::problems::ProblemInstance;
use crate::train::{self, SurveyReport, TrainConfig, TrainRecord};

/// Grid resolution for the singular-profile claim.
pub const PROFILE_GRID_POINTS: usize = 50;

/// Marker file holding the config hash an output directory belongs to.
pub const HASH_MARKER: &str = "config-hash.txt";

/// CSV column header shared by all training artifacts.
pub const CSV_HEADER: &str = "iter,c1,c2,grad_l2,grad_linf,subspace_weight,metric";

/// Command-line overrides applied on top of the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seeds: Option<Vec<u64>>,
    pub parallel: Option<usize>,
}

/// A config resolved into everything a subcommand needs.
struct Plan {
    instance: ProblemInstance,
    spec: AnsatzSpec,
    /// Deep variant used by the amplification claim.
    amplification_spec: AnsatzSpec,
    noise: NoiseModel,
    step: CostKind,
    baseline: CostKind,
    seeds: Vec<u64>,
    parallel: usize,
    out: Option<PathBuf>,
    hash: String,
}

fn resolve(loaded: &LoadedConfig, ov: &Overrides) -> Result<Plan> {
    let cfg = &loaded.config;
    let instance = cfg.instance(&loaded.base_dir)?;
    let spec = cfg.ansatz_spec(&instance)?;
    let amplification_spec = AnsatzSpec::new(
        instance.n(),
        cfg.bounds.amplification_blocks,
        cfg.ansatz.schedule()?,
        cfg.ansatz.entangler,
        instance.initial_bits(),
    )?;
    let seeds = match &ov.seeds {
        Some(list) => {
            if list.is_empty() {
                return Err(Error::Config("--seed list must not be empty".into()));
            }
            let mut seen = std::collections::BTreeSet::new();
            for &s in list {
                if !seen.insert(s) {
                    return Err(Error::Config(format!("--seed lists seed {s} twice")));
                }
            }
            list.clone()
        }
        None => cfg.output.seeds.clone(),
    };
    let parallel = match ov.parallel {
        Some(0) => return Err(Error::Config("--parallel must be at least 1".into())),
        Some(k) => k,
        None => cfg.output.parallel,
    };
    let out = ov.out.clone().or_else(|| {
        cfg.output.dir.as_ref().map(|d| {
            if d.is_absolute() {
                d.clone()
            } else {
                loaded.base_dir.join(d)
            }
        })
    });
    Ok(Plan {
        instance,
        spec,
        amplification_spec,
        noise: cfg.noise.model()?,
        step: cfg.cost.step_kind()?,
        baseline: cfg.cost.baseline_kind()?,
        seeds,
        parallel,
        out,
        hash: loaded.hash.clone(),
    })
}

/// Validate the config end to end (including referenced files) and render
/// the resolved plan, without simulating or writing anything.
pub fn plan_description(loaded: &LoadedConfig, ov: &Overrides) -> Result<String> {
    let plan = resolve(loaded, ov)?;
    let cfg = &loaded.config;
    let noise = &cfg.noise;
    let out = plan
        .out
        .as_ref()
        .map(|p| p.display().to_string())
        .unwrap_or_else(|| "(not persisted)".to_string());
    Ok(format!(
        "plan for config {} ({})\n\
         benchmark   {} ({}, {} qubits, subspace {})\n\
         ansatz      {}\n\
         noise       q_x={} q_y={} q_z={} (strength q={:.4})\n\
         step cost   {}\n\
         baseline    {}\n\
         train       {} iterations, lr0 {}, clip {}, fd_eps {}\n\
         seeds       {:?} (parallel {})\n\
         survey      {} samples at fd_eps {}\n\
         bounds      {} samples, epsilon {}, amplification depth {}\n\
         output      {}",
        loaded.name,
        &plan.hash[..16],
        plan.instance.name(),
        plan.instance.kind(),
        plan.instance.n(),
        plan.instance.subspace().describe(),
        plan.spec,
        noise.q_x,
        noise.q_y,
        noise.q_z,
        plan.noise.strength(),
        plan.step,
        plan.baseline,
        cfg.train.iterations,
        cfg.train.lr0,
        cfg.train.clip,
        cfg.train.fd_eps,
        plan.seeds,
        plan.parallel,
        cfg.survey.samples,
        cfg.survey.fd_eps,
        cfg.bounds.samples,
        cfg.bounds.epsilon,
        cfg.bounds.amplification_blocks,
        out,
    ))
}

/// Provenance block attached to every JSON summary. Timestamps live only
/// here, never in CSV bodies.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub config_hash: String,
    pub code_version: &'static str,
    pub wall_time_seconds: f64,
    pub generated_unix: u64,
}

fn provenance(hash: &str, started: Instant) -> Provenance {
    Provenance {
        config_hash: hash.to_string(),
        code_version: env!("CARGO_PKG_VERSION"),
        wall_time_seconds: started.elapsed().as_secs_f64(),
        generated_unix: SystemTime::now()
            .duration_since(SystemTime::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    }
}

/// Create the output directory (if any) and enforce the one-config-per-
/// directory rule via the hash marker.
fn ensure_out(plan: &Plan) -> Result<Option<PathBuf>> {
    let Some(dir) = &plan.out else { return Ok(None) };
    fs::create_dir_all(dir).map_err(|e| {
        Error::Config(format!("cannot create output directory {}: {e}", dir.display()))
    })?;
    let marker = dir.join(HASH_MARKER);
    if marker.exists() {
        let saved = fs::read_to_string(&marker)?.trim().to_string();
        if saved != plan.hash {
            return Err(Error::ResumeMismatch { saved, current: plan.hash.clone() });
        }
    } else {
        fs::write(&marker, format!("{}\n", plan.hash))?;
    }
    Ok(Some(dir.clone()))
}

/// Fan `f` out over `items` on up to `parallel` worker threads, preserving
/// item order in the result. Inner simulations keep using the global rayon
/// pool; this only bounds the per-seed/per-claim fan-out.
fn fan_out<I, T, F>(parallel: usize, items: &[I], f: F) -> Result<Vec<(I, T)>>
where
    I: Sync + Send + Copy,
    T: Send,
    F: Fn(I) -> Result<T> + Sync,
{
    if parallel <= 1 || items.len() <= 1 {
        return items.iter().map(|&i| f(i).map(|t| (i, t))).collect();
    }
    let chunk = items.len().div_ceil(parallel);
    let collected: Vec<Result<(I, T)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| {
                let f = &f;
                scope.spawn(move || {
                    part.iter().map(|&i| f(i).map(|t| (i, t))).collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker thread panicked")).collect()
    });
    collected.into_iter().collect()
}

fn fmt_f64(x: f64) -> String {
    // Shortest round-trip formatting; NaN prints as `NaN`, infinities as
    // `inf`/`-inf`. Deterministic across runs and platforms.
    format!("{x}")
}

/// Render a training record as the canonical CSV body.
fn csv_body(hash: &str, record: &TrainRecord) -> String {
    let mut body = String::with_capacity(64 * (record.rows.len() + 2));
    body.push_str(&format!("# config_hash={hash}\n"));
    body.push_str(CSV_HEADER);
    body.push('\n');
    for row in &record.rows {
        body.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.iter,
            fmt_f64(row.c1),
            fmt_f64(row.c2),
            fmt_f64(row.grad_l2),
            fmt_f64(row.grad_linf),
            fmt_f64(row.subspace_weight),
            fmt_f64(row.metric),
        ));
    }
    body
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::from(e).at_stage(&format!("writing {name}")))?;
    Ok(path)
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Config(format!("cannot serialize {name}: {e}")))?;
    write_file(dir, name, &format!("{text}\n"))
}

/// Per-seed outcome of one training run.
#[derive(Debug, Clone, Serialize)]
pub struct SeedOutcome {
    pub seed: u64,
    pub iterations_completed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_c1: Option<f64>,
    pub final_metric: f64,
    pub parameter_quality: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aborted: Option<String>,
    /// CSV file name, when an output directory is set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
}

fn seed_outcome(seed: u64, record: &TrainRecord, csv: Option<String>) -> SeedOutcome {
    SeedOutcome {
        seed,
        iterations_completed: record.rows.len(),
        final_c1: record.final_c1(),
        final_metric: record.final_metric,
        parameter_quality: record.parameter_quality,
        aborted: record.aborted.clone(),
        csv,
    }
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let collected: Vec<f64> = values.collect();
    if collected.is_empty() {
        None
    } else {
        Some(collected.iter().sum::<f64>() / collected.len() as f64)
    }
}

/// Sample standard deviation; `None` below two values.
fn std_dev(values: &[f64]) -> Option<f64> {
    if values.len() < 2 {
        return None;
    }
    let m = values.iter().sum::<f64>() / values.len() as f64;
    let var = values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() - 1) as f64;
    Some(var.sqrt())
}

/// Cross-seed mean block for one stepping cost.
#[derive(Debug, Clone, Serialize)]
pub struct CostAggregate {
    pub cost: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_final_c1: Option<f64>,
    pub mean_final_metric: f64,
    pub mean_parameter_quality: f64,
    /// Sample standard deviations; absent for single-seed runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_final_metric: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_parameter_quality: Option<f64>,
}

fn aggregate(cost: &CostKind, outcomes: &[SeedOutcome]) -> CostAggregate {
    let metrics: Vec<f64> = outcomes.iter().map(|o| o.final_metric).collect();
    let qualities: Vec<f64> = outcomes.iter().map(|o| o.parameter_quality).collect();
    CostAggregate {
        cost: cost.to_string(),
        mean_final_c1: mean(outcomes.iter().filter_map(|o| o.final_c1)),
        mean_final_metric: metrics.iter().sum::<f64>() / metrics.len() as f64,
        mean_parameter_quality: qualities.iter().sum::<f64>() / qualities.len() as f64,
        std_final_metric: std_dev(&metrics),
        std_parameter_quality: std_dev(&qualities),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub benchmark: String,
    pub benchmark_kind: String,
    pub metric_name: &'static str,
    pub cost: String,
    pub seeds: Vec<SeedOutcome>,
    pub mean: CostAggregate,
    pub provenance: Provenance,
}

/// Artifacts of one subcommand: the in-memory summary plus every file
/// written (empty without an output directory).
#[derive(Debug)]
pub struct Artifacts<S> {
    pub summary: S,
    pub files: Vec<PathBuf>,
}

fn train_config(loaded: &LoadedConfig, step: CostKind, seed: u64) -> TrainConfig {
    loaded.config.train.to_train_config(step, seed)
}

/// `run`: train the configured stepping cost on every seed, persist one CSV
/// per seed and a cross-seed summary.
pub fn run(loaded: &LoadedConfig, ov: &Overrides) -> Result<Artifacts<RunSummary>> {
    let started = Instant::now();
    let plan = resolve(loaded, ov)?;
    let out = ensure_out(&plan)?;
    let label = plan.step.label();
    let records = fan_out(plan.parallel, &plan.seeds, |seed| {
        train::train(&plan.instance, &plan.spec, &plan.noise, &train_config(loaded, plan.step, seed))
            .map_err(|e| e.at_stage(&format!("training seed {seed} on {label}")))
    })?;
    let mut files = Vec::new();
    let mut outcomes = Vec::new();
    for (seed, record) in &records {
        let csv_name = format!("run-{label}-seed{seed}.csv");
        if let Some(dir) = &out {
            files.push(write_file(dir, &csv_name, &csv_body(&plan.hash, record))?);
            outcomes.push(seed_outcome(*seed, record, Some(csv_name)));
        } else {
            outcomes.push(seed_outcome(*seed, record, None));
        }
    }
    let summary = RunSummary {
        benchmark: plan.instance.name().to_string(),
        benchmark_kind: plan.instance.kind().to_string(),
        metric_name: plan.instance.metric_name(),
        cost: plan.step.to_string(),
        mean: aggregate(&plan.step, &outcomes),
        seeds: outcomes,
        provenance: provenance(&plan.hash, started),
    };
    if let Some(dir) = &out {
        files.push(write_json(dir, "run-summary.json", &summary)?);
    }
    Ok(Artifacts { summary, files })
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareRow {
    pub seed: u64,
    pub primary: SeedOutcome,
    pub baseline: SeedOutcome,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareSummary {
    pub benchmark: String,
    pub benchmark_kind: String,
    pub metric_name: &'static str,
    pub rows: Vec<CompareRow>,
    pub primary: CostAggregate,
    pub baseline: CostAggregate,
    /// Mean primary metric over mean baseline metric; absent when the
    /// baseline mean is not positive.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub improvement_ratio: Option<f64>,
    pub provenance: Provenance,
}

/// `compare`: paired runs per seed — identical initialization and budget,
/// stepping cost the only difference — summarized per seed and averaged.
pub fn compare(loaded: &LoadedConfig, ov: &Overrides) -> Result<Artifacts<CompareSummary>> {
    let started = Instant::now();
    let plan = resolve(loaded, ov)?;
    if plan.step.label() == plan.baseline.label() {
        return Err(Error::Config(format!(
            "compare needs two distinct stepping costs, both are `{}`",
            plan.step.label()
        )));
    }
    let out = ensure_out(&plan)?;
    let primary_label = plan.step.label();
    let baseline_label = plan.baseline.label();
    let pairs = fan_out(plan.parallel, &plan.seeds, |seed| {
        train::paired_runs(
            &plan.instance,
            &plan.spec,
            &plan.noise,
            &train_config(loaded, plan.step, seed),
            plan.baseline,
        )
        .map_err(|e| {
            e.at_stage(&format!("paired training seed {seed} ({primary_label} vs {baseline_label})"))
        })
    })?;
    let mut files = Vec::new();
    let mut rows = Vec::new();
    for (seed, (primary, baseline)) in &pairs {
        let mut cell = |record: &TrainRecord, label: &str| -> Result<SeedOutcome> {
            let csv_name = format!("compare-{label}-seed{seed}.csv");
            if let Some(dir) = &out {
                files.push(write_file(dir, &csv_name, &csv_body(&plan.hash, record))?);
                Ok(seed_outcome(*seed, record, Some(csv_name)))
            } else {
                Ok(seed_outcome(*seed, record, None))
            }
        };
        let primary_cell = cell(primary, primary_label)?;
        let baseline_cell = cell(baseline, baseline_label)?;
        rows.push(CompareRow { seed: *seed, primary: primary_cell, baseline: baseline_cell });
    }
    let primary_outcomes: Vec<SeedOutcome> = rows.iter().map(|r| r.primary.clone()).collect();
    let baseline_outcomes: Vec<SeedOutcome> = rows.iter().map(|r| r.baseline.clone()).collect();
    let primary_agg = aggregate(&plan.step, &primary_outcomes);
    let baseline_agg = aggregate(&plan.baseline, &baseline_outcomes);
    let improvement_ratio = (baseline_agg.mean_final_metric > 0.0)
        .then(|| primary_agg.mean_final_metric / baseline_agg.mean_final_metric);
    let summary = CompareSummary {
        benchmark: plan.instance.name().to_string(),
        benchmark_kind: plan.instance.kind().to_string(),
        metric_name: plan.instance.metric_name(),
        rows,
        primary: primary_agg,
        baseline: baseline_agg,
        improvement_ratio,
        provenance: provenance(&plan.hash, started),
    };
    if let Some(dir) = &out {
        files.push(write_json(dir, "compare-summary.json", &summary)?);
    }
    Ok(Artifacts { summary, files })
}

#[derive(Debug, Clone, Serialize)]
pub struct SurveySummary {
    pub benchmark: String,
    pub samples_requested: usize,
    pub seed: u64,
    pub report: SurveyReport,
    pub provenance: Provenance,
}

/// `survey`: gradient magnitudes of the two quotients at random parameters;
/// one CSV row per kept draw plus a mean-ratio summary.
pub fn survey(
    loaded: &LoadedConfig,
    ov: &Overrides,
    samples: Option<usize>,
) -> Result<Artifacts<SurveySummary>> {
    let started = Instant::now();
    let plan = resolve(loaded, ov)?;
    let out = ensure_out(&plan)?;
    let samples = match samples {
        Some(0) => return Err(Error::Config("--samples must be at least 1".into())),
        Some(k) => k,
        None => loaded.config.survey.samples,
    };
    let seed = plan.seeds[0];
    let report = train::gradient_norm_survey(
        &plan.instance,
        &plan.spec,
        &plan.noise,
        samples,
        seed,
        loaded.config.survey.fd_eps,
    )
    .map_err(|e| e.at_stage("gradient survey"))?;
    let mut files = Vec::new();
    if let Some(dir) = &out {
        let mut body = String::new();
        body.push_str(&format!("# config_hash={}\n", plan.hash));
        body.push_str("sample,grad_c1_l2,grad_c2_l2,ratio\n");
        for (i, s) in report.samples.iter().enumerate() {
            body.push_str(&format!(
                "{},{},{},{}\n",
                i,
                fmt_f64(s.grad_c1_l2),
                fmt_f64(s.grad_c2_l2),
                fmt_f64(s.ratio)
            ));
        }
        files.push(write_file(dir, "survey.csv", &body)?);
    }
    let summary = SurveySummary {
        benchmark: plan.instance.name().to_string(),
        samples_requested: samples,
        seed,
        report,
        provenance: provenance(&plan.hash, started),
    };
    if let Some(dir) = &out {
        files.push(write_json(dir, "survey-summary.json", &summary)?);
    }
    Ok(Artifacts { summary, files })
}

/// One claim's full bound-check output.
#[derive(Debug, Clone, Serialize)]
pub struct ClaimOutput {
    pub claim: &'static str,
    /// True when the main report has zero violations.
    pub passing: bool,
    pub report: BoundReport,
    /// Same check at the secondary trend rates (decay claims only): slack
    /// magnitudes are for inspection, only non-negativity is a claim.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trend: Option<BoundReport>,
    /// Full ε sweep (amplification only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_sweep: Option<Vec<BoundReport>>,
    pub provenance: Provenance,
}

fn run_claim(
    loaded: &LoadedConfig,
    plan: &Plan,
    id: &'static str,
) -> Result<(BoundReport, Option<BoundReport>, Option<Vec<BoundReport>>)> {
    let bounds = &loaded.config.bounds;
    let samples = bounds.samples;
    let seed = plan.seeds[0];
    let trend_noise = bounds.trend_noise.model()?;
    let trunc = plan.instance.truncated();
    match id {
        checks::CLAIM_STATE_DECAY => {
            let main = checks::check_state_decay(&plan.spec, &plan.noise, samples, seed)?;
            let trend = checks::check_state_decay(&plan.spec, &trend_noise, samples, seed)?;
            Ok((main, Some(trend), None))
        }
        checks::CLAIM_PAULI_GRADIENT_DECAY => {
            let obs = plan.instance.observable();
            let main =
                checks::check_gradient_bound_c0(&plan.spec, &plan.noise, obs, samples, seed)?;
            let trend =
                checks::check_gradient_bound_c0(&plan.spec, &trend_noise, obs, samples, seed)?;
            Ok((main, Some(trend), None))
        }
        checks::CLAIM_COST_GRADIENT_DECAY => {
            let main =
                checks::check_gradient_bound_c1(&plan.spec, &plan.noise, trunc, samples, seed)?;
            let trend =
                checks::check_gradient_bound_c1(&plan.spec, &trend_noise, trunc, samples, seed)?;
            Ok((main, Some(trend), None))
        }
        checks::CLAIM_GRADIENT_AMPLIFICATION => {
            let spec = &plan.amplification_spec;
            let main = checks::check_amplification(
                spec,
                &plan.noise,
                trunc,
                samples,
                seed,
                bounds.epsilon,
            )?;
            let sweep = checks::EPSILON_SWEEP
                .iter()
                .map(|&eps| {
                    checks::check_amplification(spec, &plan.noise, trunc, samples, seed, eps)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((main, None, Some(sweep)))
        }
        checks::CLAIM_SINGULAR_PROFILE => {
            let grid = checks::singular_grid(trunc.k2(), PROFILE_GRID_POINTS)?;
            Ok((checks::check_singularity_profile(trunc, &grid)?, None, None))
        }
        checks::CLAIM_SOLUTION_SPACE => {
            Ok((checks::check_solution_space(trunc, samples, seed)?, None, None))
        }
        checks::CLAIM_TRACELESS_DERIVATIVE => {
            Ok((checks::check_traceless_derivative(&plan.spec, &plan.noise, samples, seed)?, None, None))
        }
        other => Err(Error::UnknownClaim {
            given: other.to_string(),
            valid: checks::CLAIM_IDS.join(", "),
        }),
    }
}

/// `bounds-check`: run one claim (or all of them), emit one JSON report per
/// claim id. Violations are reported in the artifacts, never converted into
/// a process failure — a violated bound is a finding, not a crash.
pub fn bounds_check(
    loaded: &LoadedConfig,
    ov: &Overrides,
    claim: Option<&str>,
) -> Result<Artifacts<Vec<ClaimOutput>>> {
    let started = Instant::now();
    let plan = resolve(loaded, ov)?;
    let out = ensure_out(&plan)?;
    let ids: Vec<&'static str> = match claim {
        Some(id) => vec![checks::validate_claim(id)?],
        None => checks::CLAIM_IDS.to_vec(),
    };
    let results = fan_out(plan.parallel, &ids, |id| {
        run_claim(loaded, &plan, id).map_err(|e| e.at_stage(&format!("bound check {id}")))
    })?;
    let mut files = Vec::new();
    let mut outputs = Vec::new();
    for (id, (report, trend, epsilon_sweep)) in results {
        let output = ClaimOutput {
            claim: id,
            passing: report.passing(),
            report,
            trend,
            epsilon_sweep,
            provenance: provenance(&plan.hash, started),
        };
        if let Some(dir) = &out {
            files.push(write_json(dir, &format!("bounds-{id}.json"), &output)?);
        }
        outputs.push(output);
    }
    Ok(Artifacts { summary: outputs, files })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config;
    use std::fs;

    fn loaded(dir: &Path, text: &str) -> LoadedConfig {
        let path = dir.join("exp.toml");
        fs::write(&path, text).unwrap();
        config::load(&path).unwrap()
    }

    fn quick_config(extra: &str) -> String {
        format!(
            "benchmark = \"maxcut-cycle4\"\n\
             [train]\niterations = 4\n\
             [output]\nseeds = [1, 2]\ndir = \"results\"\n\
             {extra}"
        )
    }

    #[test]
    fn run_writes_deterministic_csv_bodies() {
        let dir = tempfile::tempdir().unwrap();
        let loaded = loaded(dir.path(), &quick_config(""));
        let first = run(&loaded, &Overrides::default()).unwrap();
        assert_eq!(first.summary.seeds.len(), 2);
        assert_eq!(first.files.len(), 3);
        let csv_path = dir.path().join("results/run-c2reg-seed1.csv");
        let body_a = fs::read(&csv_path).unwrap();
        let text = String::from_utf8(body_a.clone()).unwrap();
        assert!(text.starts_with(&format!("# config_hash={}\n{CSV_HEADER}\n", loaded.hash)));
        assert_eq!(text.lines().count(), 2 + 4, "comment + header + one row per iteration");
        // Rerun into the same directory: same hash, byte-identical CSV.
        let second = run(&loaded, &Overrides::default()).unwrap();
        let body_b = fs::read(&csv_path).unwrap();
        assert_eq!(body_a, body_b);
        assert_eq!(second.summary.seeds[0].final_metric, first.summary.seeds[0].final_metric);
    }

    #[test]
    fn run_without_output_dir_returns_summary_only() {
        let dir = tempfile::tempdir().unwrap();
        let loaded = loaded(
            dir.path(),
            "benchmark = \"maxcut-cycle4\"\n[train]\niterations = 2\n[output]\nseeds = [3]\n",
        );
        let artifacts = run(&loaded, &Overrides::default()).unwrap();
        assert!(artifacts.files.is_empty());
        assert_eq!(artifacts.summary.seeds[0].seed, 3);
        assert_eq!(artifacts.summary.seeds[0].iterations_completed, 2);
        assert!(artifacts.summary.seeds[0].csv.is_none());
    }

    #[test]
    fn seed_and_parallel_overrides_take_effect_and_keep_results_identical() {
        let dir = tempfile::tempdir().unwrap();
        let loaded = loaded(dir.path(), &quick_config(""));
        let serial = run(
            &loaded,
            &Overrides { seeds: Some(vec![7, 8, 9]), parallel: Some(1), out: None },
        )
        .unwrap();
        let parallel = run(
            &loaded,
            &Overrides { seeds: Some(vec![7, 8, 9]), parallel: Some(3), out: None },
        )
        .unwrap();
        assert_eq!(serial.summary.seeds.len(), 3);
        for (a, b) in serial.summary.seeds.iter().zip(&parallel.summary.seeds) {
            assert_eq!(a.seed, b.seed);
            assert_eq!(a.final_metric.to_bits(), b.final_metric.to_bits());
            assert_eq!(a.parameter_quality.to_bits(), b.parameter_quality.to_bits());
        }
        assert!(matches!(
            run(&loaded, &Overrides { seeds: Some(vec![]), ..Default::default() }),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            run(&loaded, &Overrides { seeds: Some(vec![1, 1]), ..Default::default() }),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn mixed_configs_in_one_directory_are_refused() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("shared");
        let first = loaded(dir.path(), &quick_config(""));
        run(&first, &Overrides { out: Some(out.clone()), ..Default::default() }).unwrap();
        // Different bytes → different hash → resume refusal.
        let path = dir.path().join("other.toml");
        fs::write(&path, quick_config("# variant\n")).unwrap();
        let second = config::load(&path).unwrap();
        let err = run(&second, &Overrides { out: Some(out), ..Default::default() }).unwrap_err();
        assert!(matches!(err, Error::ResumeMismatch { .. }));
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn compare_pairs_costs_and_reports_both_aggregates() {
        let dir = tempfile::tempdir().unwrap();
        let loaded = loaded(dir.path(), &quick_config(""));
        let artifacts = compare(&loaded, &Overrides::default()).unwrap();
        let summary = &artifacts.summary;
        assert_eq!(summary.rows.len(), 2);
        assert_eq!(summary.primary.cost, "c2reg(alpha=0.1, beta=0.1)");
        assert_eq!(summary.baseline.cost, "c1");
        assert_eq!(summary.metric_name, "success_rate");
        // Two seeds → variance columns present.
        assert!(summary.primary.std_final_metric.is_some());
        // 2 CSVs per seed + summary.
        assert_eq!(artifacts.files.len(), 5);
        let names: Vec<String> = artifacts
            .files
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect();
        assert!(names.contains(&"compare-c2reg-seed1.csv".to_string()));
        assert!(names.contains(&"compare-c1-seed2.csv".to_string()));
        assert!(names.contains(&"compare-summary.json".to_string()));
    }

    #[test]
    fn compare_single_seed_omits_variance_columns() {
        let dir = tempfile::tempdir().unwrap();
        let loaded = loaded(
            dir.path(),
            "benchmark = \"maxcut-cycle4\"\n[train]\niterations = 2\n[output]\nseeds = [1]\n",
        );
        let artifacts = compare(&loaded, &Overrides::default()).unwrap();
        assert!(artifacts.summary.primary.std_final_metric.is_none());
        let json = serde_json::to_string(&artifacts.summary).unwrap();
        assert!(!json.contains("std_final_metric"));
    }

    #[test]
    fn compare_rejects_identical_costs() {
        let dir = tempfile::tempdir().unwrap();
        let loaded = loaded(dir.path(), &quick_config("[cost]\nstep = \"c1\"\nbaseline = \"c1\"\n"));
        let err = compare(&loaded, &Overrides::default()).unwrap_err();
        assert!(err.to_string().contains("distinct"), "{err}");
    }

    #[test]
    fn survey_writes_one_row_per_sample() {
        let dir = tempfile::tempdir().unwrap();
        let loaded = loaded(dir.path(), &quick_config("[survey]\nsamples = 6\n"));
        let artifacts = survey(&loaded, &Overrides::default(), None).unwrap();
        assert_eq!(artifacts.summary.report.samples.len(), 6);
        let csv = fs::read_to_string(dir.path().join("results/survey.csv")).unwrap();
        assert_eq!(csv.lines().count(), 2 + 6);
        assert!(csv.lines().nth(1).unwrap().starts_with("sample,grad_c1_l2"));
        // CLI override narrows the sample count.
        let small = survey(&loaded, &Overrides { out: None, ..Default::default() }, Some(2)).unwrap();
        assert_eq!(small.summary.report.samples.len(), 2);
        assert_eq!(small.summary.samples_requested, 2);
    }

    #[test]
    fn bounds_check_emits_one_report_per_claim() {
        let dir = tempfile::tempdir().unwrap();
        // Small sample counts keep this test fast; shipped defaults are
        // exercised by the acceptance suite.
        let loaded = loaded(
            dir.path(),
            &quick_config("[bounds]\nsamples = 2\namplification_blocks = 26\n"),
        );
        let artifacts = bounds_check(&loaded, &Overrides::default(), None).unwrap();
        assert_eq!(artifacts.summary.len(), checks::CLAIM_IDS.len());
        for output in &artifacts.summary {
            assert!(output.passing, "claim {} violated", output.claim);
        }
        let state = artifacts.summary.iter().find(|o| o.claim == "state-decay").unwrap();
        assert!(state.trend.is_some());
        let amp =
            artifacts.summary.iter().find(|o| o.claim == "gradient-amplification").unwrap();
        assert_eq!(amp.epsilon_sweep.as_ref().unwrap().len(), 3);
        for id in checks::CLAIM_IDS {
            assert!(dir.path().join(format!("results/bounds-{id}.json")).exists());
        }
        let text =
            fs::read_to_string(dir.path().join("results/bounds-state-decay.json")).unwrap();
        assert!(text.contains(&loaded.hash));
    }

    #[test]
    fn bounds_check_single_claim_and_unknown_claim() {
        let dir = tempfile::tempdir().unwrap();
        let loaded = loaded(dir.path(), &quick_config("[bounds]\nsamples = 2\n"));
        let one =
            bounds_check(&loaded, &Overrides::default(), Some("solution-space")).unwrap();
        assert_eq!(one.summary.len(), 1);
        assert_eq!(one.summary[0].claim, "solution-space");
        let err = bounds_check(&loaded, &Overrides::default(), Some("prop-3.2")).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("gradient-amplification"), "{err}");
    }

    #[test]
    fn dry_run_description_resolves_without_writing() {
        let dir = tempfile::tempdir().unwrap();
        let loaded = loaded(dir.path(), &quick_config(""));
        let text = plan_description(&loaded, &Overrides::default()).unwrap();
        assert!(text.contains("maxcut-cycle4"));
        assert!(text.contains("q_x=0.03"));
        assert!(text.contains("c2reg"));
        assert!(text.contains("seeds       [1, 2]"));
        assert!(!dir.path().join("results").exists(), "dry run must not create outputs");
    }
}
