//! Executable verification of the analytic claims.
//!
//! Every bound and structural statement the crate's cost design rests on is
//! recast here as a randomized numerical check over concrete circuits and
//! crafted states:
//!
//! * per-layer decay of the state's Pauli-coefficient norm,
//! * per-parameter decay of the coefficient gradient (and of the plain
//!   expectation's gradient),
//! * depth-exponential decay of the truncated cost's gradient,
//! * the amplification inequality relating `|∂C2|` to `|∂C1|`,
//! * the closed-form singular profile of raw `C2` on crafted states,
//! * the solution-space structure of `C1` (out-of-subspace weight is free),
//! * trace preservation of the parameter derivative.
//!
//! Each check returns a [`BoundReport`]: how many instances were asserted,
//! how many samples the claim's applicability condition filtered out, the
//! violation count, and the slack range. A violation is never thrown — it is
//! counted, so a caller can distinguish "the bound failed" from "the check
//! could not run". Checks are pure and independent; callers may run them in
//! parallel.

use std::f64::consts::TAU;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ansatz::AnsatzSpec;
use crate::cost::{
    c1_gradient_from, c2_gradient_from, state_pauli_jacobian, CostKind, TruncatedObservables,
};
use crate::density::{DensityMatrix, NoiseModel};
use crate::error::{Error, Result};
use crate::pauli::PauliObservable;

/// Numerical grace on the decay/amplification inequalities: an instance only
/// counts as violated when observed exceeds the bound by more than this.
pub const BOUND_GRACE: f64 = 1e-9;

/// Central-difference step used by every gradient-based check.
pub const CHECK_FD_EPS: f64 = 1e-4;

/// Generators per parameter for the shipped single-axis rotation blocks.
pub const GENERATORS_PER_PARAMETER: f64 = 1.0;

/// `‖η‖_∞` for half-angle rotation generators (`exp(−iθσ/2)`).
pub const GENERATOR_NORM_INF: f64 = 0.5;

/// Default amplification margin `ε`, with the sweep used for sensitivity
/// reporting. The inequality holds for any positive `ε`; the sweep probes
/// robustness of the derived `s` and `L0`, not a canonical value.
pub const DEFAULT_EPSILON: f64 = 0.1;
pub const EPSILON_SWEEP: [f64; 3] = [0.01, 0.1, 0.5];

/// Agreement tolerance for the crafted singular profile.
pub const PROFILE_TOL: f64 = 1e-8;

/// Distance above the singular point probed for unbounded decrease, and the
/// magnitude the cost must exceed there.
pub const WALL_OFFSET: f64 = 1e-6;
pub const WALL_MAGNITUDE: f64 = 1e4;

/// Agreement tolerance for the solution-space value check.
pub const SOLUTION_VALUE_TOL: f64 = 1e-10;

/// Weight moved onto a non-ground subspace state by the strict-increase
/// perturbation, and the margin the increase must clear.
pub const PERTURBATION_WEIGHT: f64 = 0.05;
pub const STRICT_INCREASE_FLOOR: f64 = 1e-12;

/// Minimum ground-component weight in sampled solution-family states.
pub const MIN_GROUND_WEIGHT: f64 = 1e-6;

/// Trace-difference ceiling for the parameter-derivative check.
pub const TRACE_DIFFERENCE_TOL: f64 = 1e-12;

/// Register cap for the per-layer decay check (dense trajectories).
pub const MAX_DECAY_QUBITS: usize = 8;

pub const CLAIM_STATE_DECAY: &str = "state-decay";
pub const CLAIM_PAULI_GRADIENT_DECAY: &str = "pauli-gradient-decay";
pub const CLAIM_COST_GRADIENT_DECAY: &str = "cost-gradient-decay";
pub const CLAIM_GRADIENT_AMPLIFICATION: &str = "gradient-amplification";
pub const CLAIM_SINGULAR_PROFILE: &str = "singular-profile";
pub const CLAIM_SOLUTION_SPACE: &str = "solution-space";
pub const CLAIM_TRACELESS_DERIVATIVE: &str = "traceless-derivative";

/// Every claim id the `bounds-check` interface accepts, in report order.
pub const CLAIM_IDS: [&str; 7] = [
    CLAIM_STATE_DECAY,
    CLAIM_PAULI_GRADIENT_DECAY,
    CLAIM_COST_GRADIENT_DECAY,
    CLAIM_GRADIENT_AMPLIFICATION,
    CLAIM_SINGULAR_PROFILE,
    CLAIM_SOLUTION_SPACE,
    CLAIM_TRACELESS_DERIVATIVE,
];

/// Resolve a user-supplied claim id to its canonical form.
pub fn validate_claim(id: &str) -> Result<&'static str> {
    CLAIM_IDS
        .iter()
        .find(|c| **c == id)
        .copied()
        .ok_or_else(|| Error::UnknownClaim { given: id.to_string(), valid: CLAIM_IDS.join(", ") })
}

/// The constants a check ran with. Only the fields meaningful for the claim
/// are set; the rest stay out of the serialized report.
#[derive(Debug, Clone, Default, Serialize)]
pub struct BoundParameters {
    /// Channel strength `q` (largest contraction-factor magnitude).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    /// Circuit depth `L` in blocks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    /// Minimal depth `L0` satisfying the amplification side condition.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l0: Option<usize>,
    /// Amplification margin `ε`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Amplification prefactor `s` derived from `ε` and the observable pair.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    /// Truncated-cost decay constant `h`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    /// Generators per parameter (`N`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generators_per_parameter: Option<f64>,
    /// Generator sup-norm (`‖η‖_∞`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator_norm: Option<f64>,
    /// Central-difference step used for observed gradients.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fd_eps: Option<f64>,
    /// Agreement tolerance for equality-style claims.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

/// Outcome of one claim check.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    /// Canonical claim id.
    pub claim: &'static str,
    /// Samples (or grid points) that passed the claim's applicability
    /// condition.
    pub applicable: usize,
    /// Samples the applicability condition filtered out. Reported rather
    /// than dropped so a vacuously-true run is visible.
    pub inapplicable: usize,
    /// Individual inequalities asserted (per layer / per parameter / per
    /// grid point, so usually a multiple of `applicable`).
    pub instances_tested: usize,
    /// Instances where the claim failed beyond its numerical grace.
    pub violations: usize,
    /// Tightest margin seen, signed as bound − observed (negative means a
    /// violation). NaN when nothing was tested.
    pub min_slack: f64,
    /// Loosest margin seen.
    pub max_slack: f64,
    /// The constants the check ran with.
    pub parameters: BoundParameters,
}

impl BoundReport {
    pub fn passing(&self) -> bool {
        self.violations == 0
    }
}

/// Running slack statistics. `push` takes the violation decision from the
/// caller so NaN slacks can be counted as violations rather than slipping
/// through a comparison.
struct SlackStats {
    tested: usize,
    violations: usize,
    min: f64,
    max: f64,
}

impl SlackStats {
    fn new() -> Self {
        SlackStats { tested: 0, violations: 0, min: f64::INFINITY, max: f64::NEG_INFINITY }
    }

    fn push(&mut self, slack: f64, violated: bool) {
        self.tested += 1;
        if violated {
            self.violations += 1;
        }
        self.min = self.min.min(slack);
        self.max = self.max.max(slack);
    }

    fn into_report(
        self,
        claim: &'static str,
        applicable: usize,
        inapplicable: usize,
        parameters: BoundParameters,
    ) -> BoundReport {
        let (min_slack, max_slack) =
            if self.tested == 0 { (f64::NAN, f64::NAN) } else { (self.min, self.max) };
        BoundReport {
            claim,
            applicable,
            inapplicable,
            instances_tested: self.tested,
            violations: self.violations,
            min_slack,
            max_slack,
            parameters,
        }
    }
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// 2-norm over the non-identity coordinates of a coefficient vector.
fn traceless_l2(v: &[f64]) -> f64 {
    l2(&v[1..])
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn random_theta(rng: &mut ChaCha8Rng, count: usize) -> Vec<f64> {
    (0..count).map(|_| rng.random_range(0.0..TAU)).collect()
}

fn need_samples(samples: usize, claim: &str) -> Result<()> {
    if samples == 0 {
        return Err(Error::Config(format!("{claim} check needs at least one sample")));
    }
    Ok(())
}

/// Per-layer decay of the output's Pauli-coefficient norm: after `l` channel
/// applications, `‖a^l‖₂ ≤ q^l √(2^n − 1)` for every sampled parameter
/// vector.
pub fn check_state_decay(
    spec: &AnsatzSpec,
    noise: &NoiseModel,
    samples: usize,
    seed: u64,
) -> Result<BoundReport> {
    need_samples(samples, CLAIM_STATE_DECAY)?;
    if spec.n > MAX_DECAY_QUBITS {
        return Err(Error::Config(format!(
            "state-decay check is capped at {MAX_DECAY_QUBITS} qubits, got {}",
            spec.n
        )));
    }
    let q = noise.strength();
    let ceiling = ((1usize << spec.n) as f64 - 1.0).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = SlackStats::new();
    for _ in 0..samples {
        let theta = random_theta(&mut rng, spec.parameter_count());
        for (index, state) in spec.trajectory(&theta, noise)?.iter().enumerate() {
            let layer = index as i32 + 1;
            let norm = traceless_l2(&state.pauli_coefficients()?);
            let slack = q.powi(layer) * ceiling - norm;
            stats.push(slack, !(slack >= -BOUND_GRACE));
        }
    }
    let parameters = BoundParameters {
        q: Some(q),
        depth: Some(spec.blocks),
        ..BoundParameters::default()
    };
    Ok(stats.into_report(CLAIM_STATE_DECAY, samples, 0, parameters))
}

/// Shared ceiling of the per-parameter gradient bounds:
/// `√(2^{n+1} − 2) · N · ‖η‖_∞ · q^{L+1}` before the claim-specific factor.
fn gradient_bound_root(n: usize, blocks: usize, q: f64) -> f64 {
    ((1usize << (n + 1)) as f64 - 2.0).sqrt()
        * GENERATORS_PER_PARAMETER
        * GENERATOR_NORM_INF
        * q.powi(blocks as i32 + 1)
}

/// Per-parameter decay of the coefficient gradient `g_p = ∂a/∂θ_p`:
/// `‖g_p‖₂ ≤ √(2^{n+1} − 2) · N · ‖η‖_∞ · q^{L+1}`, plus its direct
/// consequence for the plain expectation, `|∂C0_p| ≤ bound · ‖w‖₂` with `w`
/// the observable's traceless coefficients. Two instances per parameter.
pub fn check_gradient_bound_c0(
    spec: &AnsatzSpec,
    noise: &NoiseModel,
    observable: &PauliObservable,
    samples: usize,
    seed: u64,
) -> Result<BoundReport> {
    need_samples(samples, CLAIM_PAULI_GRADIENT_DECAY)?;
    if observable.n() != spec.n {
        return Err(Error::DimensionMismatch {
            expected: 1usize << spec.n,
            got: 1usize << observable.n(),
            n: observable.n(),
        });
    }
    let q = noise.strength();
    let bound = gradient_bound_root(spec.n, spec.blocks, q);
    let w = observable.coefficient_vector()?;
    let w_norm = traceless_l2(&w);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = SlackStats::new();
    for _ in 0..samples {
        let theta = random_theta(&mut rng, spec.parameter_count());
        let (_, jacobian) = state_pauli_jacobian(spec, &theta, noise, CHECK_FD_EPS)?;
        for g in &jacobian {
            let slack = bound - traceless_l2(g);
            stats.push(slack, !(slack >= -BOUND_GRACE));
            let slack_c0 = bound * w_norm - dot(g, &w).abs();
            stats.push(slack_c0, !(slack_c0 >= -BOUND_GRACE));
        }
    }
    let parameters = BoundParameters {
        q: Some(q),
        depth: Some(spec.blocks),
        generators_per_parameter: Some(GENERATORS_PER_PARAMETER),
        generator_norm: Some(GENERATOR_NORM_INF),
        fd_eps: Some(CHECK_FD_EPS),
        ..BoundParameters::default()
    };
    Ok(stats.into_report(CLAIM_PAULI_GRADIENT_DECAY, samples, 0, parameters))
}

/// Depth-exponential decay of the truncated cost's gradient:
/// `|∂C1_p| ≤ √(2^{n+1} − 2) · h · q^{L+1}` with
/// `h = (‖w1‖₂/k2 + λ_max·‖w2‖₂/k2²) · N · ‖η‖_∞`, asserted only on samples
/// whose output keeps at least the uniform share of subspace weight
/// (`|Tr(ρ_L O2)| ≥ k2`); the rest are counted inapplicable.
pub fn check_gradient_bound_c1(
    spec: &AnsatzSpec,
    noise: &NoiseModel,
    trunc: &TruncatedObservables,
    samples: usize,
    seed: u64,
) -> Result<BoundReport> {
    need_samples(samples, CLAIM_COST_GRADIENT_DECAY)?;
    if trunc.n() != spec.n {
        return Err(Error::DimensionMismatch {
            expected: 1usize << spec.n,
            got: 1usize << trunc.n(),
            n: trunc.n(),
        });
    }
    let q = noise.strength();
    let k2 = trunc.k2();
    let h = (l2(trunc.w1()) / k2 + trunc.lambda_max() * l2(trunc.w2()) / (k2 * k2))
        * GENERATORS_PER_PARAMETER
        * GENERATOR_NORM_INF;
    let bound = ((1usize << (spec.n + 1)) as f64 - 2.0).sqrt() * h * q.powi(spec.blocks as i32 + 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = SlackStats::new();
    let mut applicable = 0;
    let mut inapplicable = 0;
    for _ in 0..samples {
        let theta = random_theta(&mut rng, spec.parameter_count());
        // Applicability needs only the output state; the Jacobian is the
        // expensive part, so filter first.
        let a = spec.final_state(&theta, noise)?.pauli_coefficients()?;
        let weight = k2 + dot(&a, trunc.w2());
        if weight.abs() < k2 {
            inapplicable += 1;
            continue;
        }
        applicable += 1;
        let (a, jacobian) = state_pauli_jacobian(spec, &theta, noise, CHECK_FD_EPS)?;
        for d in c1_gradient_from(trunc, &a, &jacobian)? {
            let slack = bound - d.abs();
            stats.push(slack, !(slack >= -BOUND_GRACE));
        }
    }
    let parameters = BoundParameters {
        q: Some(q),
        depth: Some(spec.blocks),
        h: Some(h),
        generators_per_parameter: Some(GENERATORS_PER_PARAMETER),
        generator_norm: Some(GENERATOR_NORM_INF),
        fd_eps: Some(CHECK_FD_EPS),
        ..BoundParameters::default()
    };
    Ok(stats.into_report(CLAIM_COST_GRADIENT_DECAY, applicable, inapplicable, parameters))
}

/// Minimal depth `L0` with `q^{L0} √(2^n − 1) ‖w2‖₂ (1+ε) ≤ k2`, or `None`
/// when no depth satisfies it (e.g. a noiseless channel).
fn minimal_relaxation_depth(q: f64, n: usize, w2_norm: f64, epsilon: f64, k2: f64) -> Option<usize> {
    let ceiling = ((1usize << n) as f64 - 1.0).sqrt();
    let mut l0 = 0usize;
    while q.powi(l0 as i32) * ceiling * w2_norm * (1.0 + epsilon) > k2 {
        l0 += 1;
        if l0 > 100_000 {
            return None;
        }
    }
    Some(l0)
}

/// Gradient amplification of the traceless quotient over the truncated one:
/// `|∂C2_p| ≥ (s / q^{L+1}) |∂C1_p| − 1` on every applicable sample, where
/// `s` is the claim's prefactor built from `ε`, the observable pair, and the
/// minimal depth `L0`. The whole run is inapplicable unless `L > 2·L0 + 1`;
/// individual samples where either quotient is singular are counted
/// inapplicable as well.
pub fn check_amplification(
    spec: &AnsatzSpec,
    noise: &NoiseModel,
    trunc: &TruncatedObservables,
    samples: usize,
    seed: u64,
    epsilon: f64,
) -> Result<BoundReport> {
    need_samples(samples, CLAIM_GRADIENT_AMPLIFICATION)?;
    if trunc.n() != spec.n {
        return Err(Error::DimensionMismatch {
            expected: 1usize << spec.n,
            got: 1usize << trunc.n(),
            n: trunc.n(),
        });
    }
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::Config(format!("amplification margin must be positive, got {epsilon}")));
    }
    let q = noise.strength();
    let n = spec.n;
    let k2 = trunc.k2();
    let w1 = trunc.w1();
    let w2 = trunc.w2();
    let w2_norm = l2(w2);
    let mut parameters = BoundParameters {
        q: Some(q),
        depth: Some(spec.blocks),
        epsilon: Some(epsilon),
        generators_per_parameter: Some(GENERATORS_PER_PARAMETER),
        generator_norm: Some(GENERATOR_NORM_INF),
        fd_eps: Some(CHECK_FD_EPS),
        ..BoundParameters::default()
    };

    // Degenerate truncation (no traceless denominator at all) never yields a
    // meaningful quotient pair; report the run as vacuous rather than erroring.
    if w2.iter().all(|&w| w == 0.0) {
        return Ok(SlackStats::new().into_report(
            CLAIM_GRADIENT_AMPLIFICATION,
            0,
            samples,
            parameters,
        ));
    }

    let l0 = match minimal_relaxation_depth(q, n, w2_norm, epsilon, k2) {
        Some(l0) => l0,
        None => {
            return Ok(SlackStats::new().into_report(
                CLAIM_GRADIENT_AMPLIFICATION,
                0,
                samples,
                parameters,
            ));
        }
    };
    parameters.l0 = Some(l0);

    let cross: Vec<f64> =
        w1.iter().zip(w2).map(|(a, b)| a * k2 - b * trunc.k1()).collect();
    let cross_norm = l2(&cross);
    let ceiling = ((1usize << n) as f64 - 1.0).sqrt();
    let grad_ceiling = ((1usize << (n + 1)) as f64 - 2.0).sqrt();
    let term1 = if cross_norm == 0.0 {
        f64::INFINITY
    } else {
        epsilon * epsilon * k2 * k2
            / ((1.0 + epsilon).powi(2)
                * grad_ceiling
                * GENERATORS_PER_PARAMETER
                * GENERATOR_NORM_INF
                * cross_norm)
    };
    let term2 =
        (k2 / (q.powi(l0 as i32) * ceiling * w2_norm) - q.powi(l0 as i32 + 1)).powi(2);
    let s = term1.min(term2);
    parameters.s = Some(s);

    if spec.blocks <= 2 * l0 + 1 {
        return Ok(SlackStats::new().into_report(
            CLAIM_GRADIENT_AMPLIFICATION,
            0,
            samples,
            parameters,
        ));
    }

    let factor = s / q.powi(spec.blocks as i32 + 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = SlackStats::new();
    let mut applicable = 0;
    let mut inapplicable = 0;
    for _ in 0..samples {
        let theta = random_theta(&mut rng, spec.parameter_count());
        let (a, jacobian) = state_pauli_jacobian(spec, &theta, noise, CHECK_FD_EPS)?;
        let pair = c1_gradient_from(trunc, &a, &jacobian)
            .and_then(|g1| Ok((g1, c2_gradient_from(trunc, &a, &jacobian)?)));
        let (g1, g2) = match pair {
            Ok(pair) => pair,
            Err(Error::SingularDenominator { .. }) => {
                inapplicable += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        applicable += 1;
        for (d1, d2) in g1.iter().zip(&g2) {
            let slack = d2.abs() - (factor * d1.abs() - 1.0);
            stats.push(slack, !(slack >= -BOUND_GRACE));
        }
    }
    Ok(stats.into_report(CLAIM_GRADIENT_AMPLIFICATION, applicable, inapplicable, parameters))
}

/// Log-spaced grid of mixing weights in `(k2, 1]`, starting [`WALL_OFFSET`]
/// above the singular point and ending exactly at 1.
pub fn singular_grid(k2: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::Config(format!("singular grid needs at least 2 points, got {points}")));
    }
    if !(k2 > 0.0 && k2 + WALL_OFFSET < 1.0) {
        return Err(Error::Config(format!(
            "singular grid needs 0 < k2 < 1 − {WALL_OFFSET}, got k2 = {k2}"
        )));
    }
    let span = 1.0 - k2;
    let ratio = (span / WALL_OFFSET).powf(1.0 / (points - 1) as f64);
    let mut grid: Vec<f64> =
        (0..points).map(|i| k2 + WALL_OFFSET * ratio.powi(i as i32)).collect();
    grid[points - 1] = 1.0;
    Ok(grid)
}

/// Closed-form singular profile of raw `C2`: on the crafted family
/// `ρ(m) = m·|v_g⟩⟨v_g| + (1−m)·|j⟩⟨j|` (with `j` outside the subspace),
/// the evaluated cost must match `(m·λ_min − k1)/(m − k2)` within
/// [`PROFILE_TOL`] at every grid point, and — whenever `λ_min < k1/k2` — dip
/// below `−`[`WALL_MAGNITUDE`] at `m = k2 + `[`WALL_OFFSET`].
pub fn check_singularity_profile(trunc: &TruncatedObservables, grid: &[f64]) -> Result<BoundReport> {
    if grid.is_empty() {
        return Err(Error::Config("singular-profile check needs a non-empty grid".into()));
    }
    let n = trunc.n();
    let dim = 1usize << n;
    let outside_index = (0..dim)
        .find(|i| !trunc.subspace().contains(*i))
        .ok_or_else(|| {
            Error::Config("singular-profile check needs a proper subspace".into())
        })?;
    let k2 = trunc.k2();
    for &m in grid {
        if !(m > k2 && m <= 1.0) {
            return Err(Error::Config(format!(
                "grid point m = {m} outside the profile domain ({k2}, 1]"
            )));
        }
    }
    let ground = DensityMatrix::from_state_vector(n, trunc.ground_vector())?;
    let outside = DensityMatrix::basis_state(n, outside_index)?;
    let crafted = |m: f64| -> Result<f64> {
        let rho = DensityMatrix::mixture(&[(m, ground.clone()), (1.0 - m, outside.clone())])?;
        CostKind::C2Raw.evaluate(trunc, &rho)
    };
    let mut stats = SlackStats::new();
    for &m in grid {
        let observed = crafted(m)?;
        let slack = PROFILE_TOL - (observed - trunc.crafted_c2_raw(m)).abs();
        stats.push(slack, !(slack >= 0.0));
    }
    // Unbounded decrease toward the wall, in force whenever the subspace
    // ground value sits below the untruncated-to-truncated ratio.
    if trunc.lambda_min() < trunc.k1() / k2 && k2 + WALL_OFFSET <= 1.0 {
        let slack = -WALL_MAGNITUDE - crafted(k2 + WALL_OFFSET)?;
        stats.push(slack, !(slack >= 0.0));
    }
    let applicable = stats.tested;
    let parameters = BoundParameters { tolerance: Some(PROFILE_TOL), ..BoundParameters::default() };
    Ok(stats.into_report(CLAIM_SINGULAR_PROFILE, applicable, 0, parameters))
}

/// Solution-space structure of the truncated cost: on random states of the
/// family `√p*·|v_g⟩ + Σ_{j∉S} a_j·|j⟩`, `C1` equals the subspace ground
/// value exactly (out-of-subspace weight cancels in the quotient), and
/// moving any weight onto a non-ground subspace direction strictly
/// increases it.
pub fn check_solution_space(
    trunc: &TruncatedObservables,
    samples: usize,
    seed: u64,
) -> Result<BoundReport> {
    need_samples(samples, CLAIM_SOLUTION_SPACE)?;
    let n = trunc.n();
    let dim = 1usize << n;
    let outside: Vec<usize> = (0..dim).filter(|i| !trunc.subspace().contains(*i)).collect();
    if outside.is_empty() {
        return Err(Error::Config(
            "solution-space check needs a proper subspace (no outside directions to weight)"
                .into(),
        ));
    }
    let lambda = trunc.lambda_min();
    // A perturbation target strictly above the ground value, if the sector
    // has one; a fully degenerate sector leaves nothing to increase toward.
    let mut target: Option<(usize, f64)> = None;
    for &b in trunc.subspace().indices() {
        let value = DensityMatrix::basis_state(n, b)?.expectation(trunc.o1())?;
        if value > lambda + 1e-9 && target.map(|(_, best)| value > best).unwrap_or(true) {
            target = Some((b, value));
        }
    }
    let ground = trunc.ground_vector().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = SlackStats::new();
    for _ in 0..samples {
        let p_star: f64 = rng.random_range(0.01..0.99);
        let mut psi = vec![num_complex::Complex64::new(0.0, 0.0); dim];
        for &j in &outside {
            psi[j] =
                num_complex::Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
        let mut out_norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if out_norm < 1e-12 {
            psi[outside[0]] = num_complex::Complex64::new(1.0, 0.0);
            out_norm = 1.0;
        }
        let scale = (1.0 - p_star).sqrt() / out_norm;
        for z in psi.iter_mut() {
            *z *= scale;
        }
        let amp = p_star.sqrt();
        for (slot, g) in psi.iter_mut().zip(&ground) {
            *slot += amp * g;
        }
        debug_assert!(p_star > MIN_GROUND_WEIGHT);
        let rho = DensityMatrix::from_state_vector(n, &psi)?;
        let c1 = CostKind::C1.evaluate(trunc, &rho)?;
        let slack = SOLUTION_VALUE_TOL - (c1 - lambda).abs();
        stats.push(slack, !(slack >= 0.0));
        if let Some((b, _)) = target {
            let perturbed = DensityMatrix::mixture(&[
                (1.0 - PERTURBATION_WEIGHT, rho),
                (PERTURBATION_WEIGHT, DensityMatrix::basis_state(n, b)?),
            ])?;
            let increase = CostKind::C1.evaluate(trunc, &perturbed)? - c1;
            stats.push(increase, !(increase > STRICT_INCREASE_FLOOR));
        }
    }
    let parameters =
        BoundParameters { tolerance: Some(SOLUTION_VALUE_TOL), ..BoundParameters::default() };
    Ok(stats.into_report(CLAIM_SOLUTION_SPACE, samples, 0, parameters))
}

/// Compensated sum of the elementwise diagonal difference of two states.
/// Each trace is 1 by construction; differencing the diagonals first keeps
/// the cancellation at the element scale instead of at 1.
fn diagonal_trace_difference(up: &DensityMatrix, down: &DensityMatrix) -> f64 {
    let dim = up.dim();
    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for i in 0..dim {
        let term = up.data()[i * dim + i].re - down.data()[i * dim + i].re - carry;
        let next = sum + term;
        carry = (next - sum) - term;
        sum = next;
    }
    sum
}

/// Trace preservation of the parameter derivative: for every parameter the
/// central-difference pair of output states has identical trace,
/// `|Tr(ρ_L(θ+ε) − ρ_L(θ−ε))| <` [`TRACE_DIFFERENCE_TOL`].
pub fn check_traceless_derivative(
    spec: &AnsatzSpec,
    noise: &NoiseModel,
    samples: usize,
    seed: u64,
) -> Result<BoundReport> {
    need_samples(samples, CLAIM_TRACELESS_DERIVATIVE)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = SlackStats::new();
    for _ in 0..samples {
        let theta = random_theta(&mut rng, spec.parameter_count());
        for p in 0..theta.len() {
            let mut up = theta.clone();
            let mut down = theta.clone();
            up[p] += CHECK_FD_EPS;
            down[p] -= CHECK_FD_EPS;
            let difference = diagonal_trace_difference(
                &spec.final_state(&up, noise)?,
                &spec.final_state(&down, noise)?,
            );
            let slack = TRACE_DIFFERENCE_TOL - difference.abs();
            stats.push(slack, !(slack >= 0.0));
        }
    }
    let parameters = BoundParameters {
        q: Some(noise.strength()),
        depth: Some(spec.blocks),
        fd_eps: Some(CHECK_FD_EPS),
        tolerance: Some(TRACE_DIFFERENCE_TOL),
        ..BoundParameters::default()
    };
    Ok(stats.into_report(CLAIM_TRACELESS_DERIVATIVE, samples, 0, parameters))
}
