//! Gradient-descent training with a surrogate stepping cost.
//!
//! The loop steps along the gradient of a configurable cost (by default the
//! regularized traceless quotient) while always evaluating and logging the
//! truncated quotient `C1` — the quantity whose minimum certifies the answer.
//! Each iteration records the cost values, gradient norms, subspace weight,
//! and the benchmark's quality metric, so a finished run is a complete
//! optimization trace. Paired runs that differ only in the stepping cost are
//! the unit of comparison between the surrogate scheme and the baseline.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::ansatz::AnsatzSpec;
use crate::cost::{
    c0_gradient_from, c1_gradient_from, c2_gradient_from, c2_reg_gradient_from,
    state_pauli_jacobian, CostKind, TruncatedObservables, DEFAULT_ALPHA, DEFAULT_BETA,
};
use crate::density::NoiseModel;
use crate::error::{Error, Result};
use crate::problems::ProblemInstance;

/// Default iteration budget.
pub const DEFAULT_ITERATIONS: usize = 300;

/// Default initial learning rate for the linear-decay schedule.
pub const DEFAULT_LR0: f64 = 0.1;

/// Default ∞-norm gradient clip threshold.
pub const DEFAULT_CLIP: f64 = 1.0;

/// Default central-difference step for training gradients. Verification-grade
/// comparisons use a finer step (see the theory checks).
pub const DEFAULT_TRAIN_FD_EPS: f64 = 1e-2;

/// Minimum initial subspace weight; initializations below it are redrawn.
pub const INIT_WEIGHT_FLOOR: f64 = 1e-9;

/// How many fresh initializations to try before giving up.
pub const MAX_INIT_RESAMPLES: usize = 32;

/// Knobs for one training run. The ansatz, noise model, and benchmark are
/// passed to [`train`] separately so one config can drive paired runs.
#[derive(Debug, Clone, Serialize)]
pub struct TrainConfig {
    /// Iteration budget `T`; the learning rate decays linearly to zero over
    /// it: `lr_t = lr0 · (1 − t/T)`.
    pub iterations: usize,
    pub lr0: f64,
    pub clip_threshold: f64,
    /// Cost whose gradient drives the parameter update.
    #[serde(serialize_with = "serialize_cost")]
    pub step_cost: CostKind,
    /// Central-difference step for the per-iteration Jacobian.
    pub fd_eps: f64,
    pub seed: u64,
    /// Explicit initial parameters; `None` draws uniform θ ∈ [0, 2π) from the
    /// seed, redrawing while the initial subspace weight is negligible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_theta: Option<Vec<f64>>,
}

fn serialize_cost<S: serde::Serializer>(kind: &CostKind, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_str(kind)
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            iterations: DEFAULT_ITERATIONS,
            lr0: DEFAULT_LR0,
            clip_threshold: DEFAULT_CLIP,
            step_cost: CostKind::C2Reg { alpha: DEFAULT_ALPHA, beta: DEFAULT_BETA },
            fd_eps: DEFAULT_TRAIN_FD_EPS,
            seed: 0,
            initial_theta: None,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be at least 1".into()));
        }
        if !(self.lr0 >= 0.0) || !self.lr0.is_finite() {
            return Err(Error::Config(format!("lr0 must be finite and ≥ 0, got {}", self.lr0)));
        }
        if !(self.clip_threshold > 0.0) {
            return Err(Error::Config(format!(
                "clip threshold must be positive, got {}",
                self.clip_threshold
            )));
        }
        if !(self.fd_eps > 0.0) {
            return Err(Error::Config(format!("fd_eps must be positive, got {}", self.fd_eps)));
        }
        Ok(())
    }

    /// The same config stepping on a different cost — the paired-run twin.
    pub fn with_step_cost(&self, step_cost: CostKind) -> Self {
        TrainConfig { step_cost, ..self.clone() }
    }
}

/// One logged iteration. All values describe the state *before* that
/// iteration's parameter update.
#[derive(Debug, Clone, Serialize)]
pub struct IterationRow {
    pub iter: usize,
    /// The truncated quotient — always evaluated, whatever the stepping cost.
    pub c1: f64,
    /// The stepping cost's value when stepping on a traceless-quotient
    /// variant, otherwise the default-regularized quotient (NaN if that
    /// auxiliary value is singular).
    pub c2: f64,
    /// Norms of the stepping gradient, before clipping.
    pub grad_l2: f64,
    pub grad_linf: f64,
    /// Tr(ρ Π_S): probability mass inside the promised subspace.
    pub subspace_weight: f64,
    /// Success rate (diagonal benchmarks) or target-state fidelity (VQE).
    pub metric: f64,
    /// Truncated SHA-256 of the θ snapshot; not a CSV column.
    pub theta_hash: String,
}

/// Complete trace of one run.
#[derive(Debug, Clone, Serialize)]
pub struct TrainRecord {
    pub rows: Vec<IterationRow>,
    pub final_theta: Vec<f64>,
    /// Metric of the final noisy state.
    pub final_metric: f64,
    /// Metric of a noiseless re-execution at the final parameters.
    pub parameter_quality: f64,
    /// Why the run stopped early, if it did; rows then cover only the
    /// completed iterations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aborted: Option<String>,
}

impl TrainRecord {
    /// Last logged C1 value, if any iteration completed.
    pub fn final_c1(&self) -> Option<f64> {
        self.rows.last().map(|r| r.c1)
    }
}

/// First 16 hex digits of SHA-256 over the little-endian parameter bytes.
pub fn theta_hash(theta: &[f64]) -> String {
    let mut hasher = Sha256::new();
    for x in theta {
        hasher.update(x.to_le_bytes());
    }
    let digest = hasher.finalize();
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// ∞-norm clip that preserves direction: if `‖g‖_∞ > threshold`, the whole
/// vector is scaled by `threshold/‖g‖_∞`.
pub(crate) fn clip_gradient(grad: &[f64], threshold: f64) -> Vec<f64> {
    let linf = grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
    if linf > threshold {
        let scale = threshold / linf;
        grad.iter().map(|g| g * scale).collect()
    } else {
        grad.to_vec()
    }
}

fn norms(grad: &[f64]) -> (f64, f64) {
    let l2 = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
    let linf = grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
    (l2, linf)
}

/// Stepping-cost gradient from the shared Pauli Jacobian.
fn step_gradient(
    kind: CostKind,
    trunc: &TruncatedObservables,
    a: &[f64],
    jac: &[Vec<f64>],
) -> Result<Vec<f64>> {
    match kind {
        CostKind::C0 => c0_gradient_from(trunc, jac),
        CostKind::C1 => c1_gradient_from(trunc, a, jac),
        CostKind::C2Raw => c2_gradient_from(trunc, a, jac),
        CostKind::C2Reg { alpha, beta } => c2_reg_gradient_from(trunc, a, jac, alpha, beta),
    }
}

/// Which cost the `c2` column logs for this stepping cost.
fn c2_log_kind(step: CostKind) -> CostKind {
    match step {
        CostKind::C2Raw | CostKind::C2Reg { .. } => step,
        _ => CostKind::C2Reg { alpha: DEFAULT_ALPHA, beta: DEFAULT_BETA },
    }
}

/// Draw or validate the starting parameters. Seeded draws are redrawn (up to
/// [`MAX_INIT_RESAMPLES`] times) while the initial state carries essentially
/// no subspace weight, so the quotient costs start well-defined.
fn initial_parameters(
    instance: &ProblemInstance,
    spec: &AnsatzSpec,
    noise: &NoiseModel,
    cfg: &TrainConfig,
) -> Result<Vec<f64>> {
    let count = spec.parameter_count();
    if let Some(theta) = &cfg.initial_theta {
        if theta.len() != count {
            return Err(Error::WrongParameterCount { expected: count, got: theta.len() });
        }
        return Ok(theta.clone());
    }
    let trunc = instance.truncated();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut last_weight = 0.0;
    for _ in 0..MAX_INIT_RESAMPLES {
        let theta: Vec<f64> = (0..count)
            .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
            .collect();
        let rho = spec.final_state(&theta, noise)?;
        last_weight = trunc.denominator(&rho);
        if last_weight > INIT_WEIGHT_FLOOR {
            return Ok(theta);
        }
    }
    Err(Error::VanishingSubspaceWeight { weight: last_weight, attempts: MAX_INIT_RESAMPLES })
}

/// Run the training loop: `θ_{t+1} = θ_t − lr_t · clip(∇C_step(θ_t))` with
/// linear learning-rate decay. Deterministic given the config.
///
/// If a quotient becomes undefined mid-run (the state loses its subspace
/// weight, or a raw traceless denominator crosses zero), the run stops and
/// the partial record says why; completed iterations are kept.
pub fn train(
    instance: &ProblemInstance,
    spec: &AnsatzSpec,
    noise: &NoiseModel,
    cfg: &TrainConfig,
) -> Result<TrainRecord> {
    cfg.validate()?;
    if spec.n != instance.n() {
        return Err(Error::DimensionMismatch {
            expected: 1 << instance.n(),
            got: 1 << spec.n,
            n: instance.n(),
        });
    }
    let trunc = instance.truncated();
    let log_kind = c2_log_kind(cfg.step_cost);
    let stepping_on_quotient = matches!(cfg.step_cost, CostKind::C2Raw | CostKind::C2Reg { .. });
    let total = cfg.iterations;

    let mut theta = initial_parameters(instance, spec, noise, cfg)?;
    let mut rows = Vec::with_capacity(total);
    let mut aborted = None;

    for iter in 0..total {
        let (a, jac) = state_pauli_jacobian(spec, &theta, noise, cfg.fd_eps)?;
        let subspace_weight = trunc.k2() + crate::cost::dot(&a, trunc.w2());

        let c1 = match CostKind::C1.evaluate_coefficients(trunc, &a) {
            Ok(v) => v,
            Err(e) => {
                aborted = Some(format!("iteration {iter}: C1 undefined: {e}"));
                break;
            }
        };
        let c2 = match log_kind.evaluate_coefficients(trunc, &a) {
            Ok(v) => v,
            Err(e) if stepping_on_quotient => {
                aborted = Some(format!("iteration {iter}: stepping cost undefined: {e}"));
                break;
            }
            // Auxiliary logging value only — keep the run alive.
            Err(_) => f64::NAN,
        };
        let grad = match step_gradient(cfg.step_cost, trunc, &a, &jac) {
            Ok(g) => g,
            Err(e) => {
                aborted = Some(format!("iteration {iter}: stepping gradient undefined: {e}"));
                break;
            }
        };
        let (grad_l2, grad_linf) = norms(&grad);
        let rho = spec.final_state(&theta, noise)?;
        let metric = instance.metric(&rho)?;
        rows.push(IterationRow {
            iter,
            c1,
            c2,
            grad_l2,
            grad_linf,
            subspace_weight,
            metric,
            theta_hash: theta_hash(&theta),
        });

        let clipped = clip_gradient(&grad, cfg.clip_threshold);
        let lr = cfg.lr0 * (1.0 - iter as f64 / total as f64);
        for (t, g) in theta.iter_mut().zip(&clipped) {
            *t -= lr * g;
        }
    }

    let final_state = spec.final_state(&theta, noise)?;
    let final_metric = instance.metric(&final_state)?;
    let parameter_quality = parameter_quality(instance, spec, &theta)?;
    Ok(TrainRecord { rows, final_theta: theta, final_metric, parameter_quality, aborted })
}

/// Metric of a noiseless re-execution at the given parameters — how good the
/// *parameters* are, with the noise channel switched off.
pub fn parameter_quality(
    instance: &ProblemInstance,
    spec: &AnsatzSpec,
    theta: &[f64],
) -> Result<f64> {
    let rho = spec.final_state_noiseless(theta)?;
    instance.metric(&rho)
}

/// Run the config as given, then once more stepping on `baseline_cost`, same
/// seed and budget — isolating the stepping cost as the only difference.
pub fn paired_runs(
    instance: &ProblemInstance,
    spec: &AnsatzSpec,
    noise: &NoiseModel,
    cfg: &TrainConfig,
    baseline_cost: CostKind,
) -> Result<(TrainRecord, TrainRecord)> {
    let primary = train(instance, spec, noise, cfg)?;
    let baseline = train(instance, spec, noise, &cfg.with_step_cost(baseline_cost))?;
    Ok((primary, baseline))
}

/// One random-parameter draw in a gradient-magnitude survey.
#[derive(Debug, Clone, Serialize)]
pub struct SurveySample {
    pub grad_c1_l2: f64,
    pub grad_c2_l2: f64,
    /// ‖∇C2‖₂ / ‖∇C1‖₂ for this draw.
    pub ratio: f64,
}

/// Gradient magnitudes of the truncated quotient vs the raw traceless
/// quotient at random parameters.
#[derive(Debug, Clone, Serialize)]
pub struct SurveyReport {
    /// False when the subspace makes the traceless quotient identically
    /// undefined (single-eigenvalue sector, `O2' = 0`); no samples are drawn.
    pub applicable: bool,
    pub samples: Vec<SurveySample>,
    /// Mean of the per-sample ratios over the usable draws.
    pub mean_ratio: f64,
    /// Draws skipped because a quotient was singular at that θ.
    pub skipped_singular: usize,
}

/// Sample `samples` uniform θ ∈ [0, 2π)^P and compare ‖∇C1‖₂ with ‖∇C2‖₂
/// (raw traceless quotient), both from one shared Jacobian per draw.
pub fn gradient_norm_survey(
    instance: &ProblemInstance,
    spec: &AnsatzSpec,
    noise: &NoiseModel,
    samples: usize,
    seed: u64,
    fd_eps: f64,
) -> Result<SurveyReport> {
    if samples == 0 {
        return Err(Error::Config("survey needs at least one sample".into()));
    }
    if !(fd_eps > 0.0) {
        return Err(Error::Config(format!("fd_eps must be positive, got {fd_eps}")));
    }
    let trunc = instance.truncated();
    if trunc.w2().iter().all(|&w| w == 0.0) {
        // O2' = 0 (the subspace is the whole space): the traceless quotient
        // is 0/0 everywhere; there is nothing to measure.
        return Ok(SurveyReport {
            applicable: false,
            samples: Vec::new(),
            mean_ratio: f64::NAN,
            skipped_singular: 0,
        });
    }
    let count = spec.parameter_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    let mut skipped = 0usize;
    for _ in 0..samples {
        let theta: Vec<f64> = (0..count)
            .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
            .collect();
        let (a, jac) = state_pauli_jacobian(spec, &theta, noise, fd_eps)?;
        let pair = c1_gradient_from(trunc, &a, &jac)
            .and_then(|g1| c2_gradient_from(trunc, &a, &jac).map(|g2| (g1, g2)));
        match pair {
            Ok((g1, g2)) => {
                let (grad_c1_l2, _) = norms(&g1);
                let (grad_c2_l2, _) = norms(&g2);
                if grad_c1_l2 == 0.0 {
                    skipped += 1;
                    continue;
                }
                out.push(SurveySample {
                    grad_c1_l2,
                    grad_c2_l2,
                    ratio: grad_c2_l2 / grad_c1_l2,
                });
            }
            Err(Error::SingularDenominator { .. })
            | Err(Error::GradientEvaluation { .. }) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    let mean_ratio = if out.is_empty() {
        f64::NAN
    } else {
        out.iter().map(|s| s.ratio).sum::<f64>() / out.len() as f64
    };
    Ok(SurveyReport { applicable: true, samples: out, mean_ratio, skipped_singular: skipped })
}
