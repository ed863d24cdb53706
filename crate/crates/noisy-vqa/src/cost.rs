//! Truncated-subspace cost functions and their gradients.
//!
//! Given an observable `O` and a promised subspace `S`, define
//! `O1 = Π_S O Π_S` and `O2 = Π_S`, with traceful parts
//! `k1 = Tr(O1)/2^n` and `k2 = |S|/2^n`. The costs on a state ρ:
//!
//! * `C0 = Tr(ρ O)` — the plain expectation;
//! * `C1 = Tr(ρ O1) / Tr(ρ O2)` — the subspace-normalized quotient, whose
//!   global minimum over states overlapping S is the smallest sector
//!   eigenvalue;
//! * `C2 = (Tr(ρ O1) − k1) / (Tr(ρ O2) − k2)` — the same quotient built
//!   from the *traceless* parts. Under local Pauli noise both traceless
//!   expectations shrink like `q^L`, so the quotient keeps gradient signal
//!   that `C1` loses — but its denominator crosses zero;
//! * regularized `C2`: `(Tr(ρ O1) − k1 + β) / (Tr(ρ O2) − k2 + α)`, the
//!   trainable surrogate.
//!
//! In Pauli coordinates (`a_i = Tr(ρ σ_i)`, `w_i = Tr(O σ_i)/2^n`):
//! `Tr(ρ O1) = k1 + a·w1`, `Tr(ρ O2) = k2 + a·w2`, which yields exact
//! quotient-rule gradients from the circuit Jacobian `g = ∂a/∂θ`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::ansatz::AnsatzSpec;
use crate::density::{DensityMatrix, NoiseModel};
use crate::error::{Error, Result};
use crate::linalg;
use crate::pauli::PauliObservable;
use crate::subspace::Subspace;

/// Quotient denominators with magnitude at or below this are treated as
/// singular.
pub const DENOMINATOR_FLOOR: f64 = 1e-12;

/// Default denominator regularizer for the regularized traceless quotient.
pub const DEFAULT_ALPHA: f64 = 0.1;

/// Default numerator regularizer for the regularized traceless quotient.
pub const DEFAULT_BETA: f64 = 0.1;

/// An observable truncated to a promised subspace, with everything the cost
/// functions and theory checks need precomputed.
#[derive(Debug, Clone)]
pub struct TruncatedObservables {
    observable: PauliObservable,
    subspace: Subspace,
    o1: PauliObservable,
    o2: PauliObservable,
    k1: f64,
    k2: f64,
    w1: Vec<f64>,
    w2: Vec<f64>,
    /// Π_S O Π_S restricted to S, row-major |S| × |S|.
    block: Vec<Complex64>,
    sector_eigenvalues: Vec<f64>,
    ground_vector: Vec<Complex64>,
    argmin_index: usize,
}

impl TruncatedObservables {
    pub fn new(observable: PauliObservable, subspace: Subspace) -> Result<Self> {
        let n = observable.n();
        if n != subspace.n() {
            return Err(Error::DimensionMismatch { expected: n, got: subspace.n(), n });
        }
        let dim = 1usize << n;
        let s = subspace.size();

        // The restricted block O[S_i, S_j]; O(rank · |S|²).
        let mut block = vec![Complex64::new(0.0, 0.0); s * s];
        for (i, &row) in subspace.indices().iter().enumerate() {
            for (j, &col) in subspace.indices().iter().enumerate() {
                block[i * s + j] = observable.matrix_entry(row, col);
            }
        }

        // O1 = Π_S O Π_S as a Pauli observable.
        let o1 = if observable.is_diagonal() {
            let mut d = observable.diagonal();
            for (i, v) in d.iter_mut().enumerate() {
                if !subspace.contains(i) {
                    *v = 0.0;
                }
            }
            PauliObservable::decompose_diagonal(n, &d)?
        } else {
            let mut masked = vec![Complex64::new(0.0, 0.0); dim * dim];
            for (i, &row) in subspace.indices().iter().enumerate() {
                for (j, &col) in subspace.indices().iter().enumerate() {
                    masked[row * dim + col] = block[i * s + j];
                }
            }
            PauliObservable::decompose(n, &masked)?
        };
        let o2 = subspace.projector_observable()?;

        let k1 = o1.identity_coefficient();
        let k2 = o2.identity_coefficient();
        let mut w1 = o1.coefficient_vector()?;
        let mut w2 = o2.coefficient_vector()?;
        // Keep only the traceless coordinates; the traceful parts live in
        // k1/k2 so dot products never double-count the identity.
        w1[0] = 0.0;
        w2[0] = 0.0;

        let (sector_eigenvalues, vectors) = linalg::hermitian_eigen(s, &block)?;
        let mut ground_vector = vec![Complex64::new(0.0, 0.0); dim];
        for (i, &idx) in subspace.indices().iter().enumerate() {
            ground_vector[idx] = vectors[0][i];
        }
        // Dominant basis index of the ground vector, ties to the lowest.
        let mut argmin_index = subspace.indices()[0];
        let mut best = -1.0f64;
        for &idx in subspace.indices() {
            let w = ground_vector[idx].norm();
            if w > best + 1e-12 {
                best = w;
                argmin_index = idx;
            }
        }

        Ok(TruncatedObservables {
            observable,
            subspace,
            o1,
            o2,
            k1,
            k2,
            w1,
            w2,
            block,
            sector_eigenvalues,
            ground_vector,
            argmin_index,
        })
    }

    pub fn n(&self) -> usize {
        self.observable.n()
    }

    pub fn observable(&self) -> &PauliObservable {
        &self.observable
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    /// `Π_S O Π_S`.
    pub fn o1(&self) -> &PauliObservable {
        &self.o1
    }

    /// `Π_S`.
    pub fn o2(&self) -> &PauliObservable {
        &self.o2
    }

    /// `O1 − k1·I` (traceless numerator observable).
    pub fn o1_traceless(&self) -> PauliObservable {
        self.o1.shifted(-self.k1)
    }

    /// `O2 − k2·I` (traceless denominator observable).
    pub fn o2_traceless(&self) -> PauliObservable {
        self.o2.shifted(-self.k2)
    }

    /// `Tr(O1) / 2^n`.
    pub fn k1(&self) -> f64 {
        self.k1
    }

    /// `|S| / 2^n`.
    pub fn k2(&self) -> f64 {
        self.k2
    }

    /// Pauli coefficients of O1 with the identity slot zeroed (length 4^n).
    pub fn w1(&self) -> &[f64] {
        &self.w1
    }

    /// Pauli coefficients of O2 with the identity slot zeroed (length 4^n).
    pub fn w2(&self) -> &[f64] {
        &self.w2
    }

    /// Eigenvalues of the restricted block, ascending.
    pub fn sector_eigenvalues(&self) -> &[f64] {
        &self.sector_eigenvalues
    }

    /// Smallest eigenvalue of O over S — the target of the truncated costs.
    pub fn lambda_min(&self) -> f64 {
        self.sector_eigenvalues[0]
    }

    /// Largest (signed) eigenvalue of O over S.
    pub fn lambda_max(&self) -> f64 {
        *self.sector_eigenvalues.last().unwrap()
    }

    /// Ground eigenvector of the restricted block, embedded in the full
    /// 2^n-dimensional space (zero outside S).
    pub fn ground_vector(&self) -> &[Complex64] {
        &self.ground_vector
    }

    /// Dominant basis index of the ground vector (for diagonal observables:
    /// the minimizing basis state, ties to the lowest index).
    pub fn argmin_index(&self) -> usize {
        self.argmin_index
    }

    /// True when the restricted block is a multiple of the identity on S —
    /// then `O1' and O2'` are proportional and the `C2` gradient vanishes
    /// identically.
    pub fn is_degenerate(&self) -> bool {
        let spread = self.lambda_max() - self.lambda_min();
        spread.abs() <= 1e-12
    }

    /// `Tr(ρ O1)` through the restricted block, O(|S|²).
    pub fn numerator(&self, rho: &DensityMatrix) -> f64 {
        let s = self.subspace.size();
        let dim = rho.dim();
        let data = rho.data();
        let mut total = Complex64::new(0.0, 0.0);
        for (i, &row) in self.subspace.indices().iter().enumerate() {
            for (j, &col) in self.subspace.indices().iter().enumerate() {
                // Tr(ρ O1) = Σ_{ij} ρ[col, row] · O1[row, col]
                total += data[col * dim + row] * self.block[i * s + j];
            }
        }
        debug_assert!(total.im.abs() < 1e-8);
        total.re
    }

    /// `Tr(ρ O2)` — the state's weight on S.
    pub fn denominator(&self, rho: &DensityMatrix) -> f64 {
        rho.subspace_weight(self.subspace.indices())
    }

    /// Value of raw `C2` on the crafted family
    /// `ρ(m) = m·|v_g⟩⟨v_g| + (1−m)·(state outside S)`:
    /// `(m·λ_min − k1) / (m − k2)`, singular at `m = k2`.
    pub fn crafted_c2_raw(&self, m: f64) -> f64 {
        (m * self.lambda_min() - self.k1) / (m - self.k2)
    }
}

/// Which cost drives an evaluation or a training step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CostKind {
    /// Plain expectation of the observable.
    C0,
    /// Truncated quotient.
    C1,
    /// Traceless quotient, singular where the state's subspace weight equals
    /// k2.
    C2Raw,
    /// Traceless quotient with regularized numerator (+β) and denominator
    /// (+α).
    C2Reg { alpha: f64, beta: f64 },
}

impl CostKind {
    /// Resolve a config name, attaching α/β to the regularized variant.
    /// Underscored spellings are accepted as aliases.
    pub fn from_config(name: &str, alpha: f64, beta: f64) -> Result<Self> {
        match name {
            "c0" => Ok(CostKind::C0),
            "c1" => Ok(CostKind::C1),
            "c2raw" | "c2_raw" => Ok(CostKind::C2Raw),
            "c2reg" | "c2_reg" => Ok(CostKind::C2Reg { alpha, beta }),
            other => Err(Error::Config(format!(
                "unknown cost `{other}` (expected c0, c1, c2raw, or c2reg)"
            ))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            CostKind::C0 => "c0",
            CostKind::C1 => "c1",
            CostKind::C2Raw => "c2raw",
            CostKind::C2Reg { .. } => "c2reg",
        }
    }

    /// Evaluate on a state. Quotients with a denominator inside
    /// [`DENOMINATOR_FLOOR`] report [`Error::SingularDenominator`].
    pub fn evaluate(&self, trunc: &TruncatedObservables, rho: &DensityMatrix) -> Result<f64> {
        match self {
            CostKind::C0 => rho.expectation(trunc.observable()),
            CostKind::C1 => {
                let den = trunc.denominator(rho);
                checked_div(trunc.numerator(rho), den)
            }
            CostKind::C2Raw => {
                let den = trunc.denominator(rho) - trunc.k2();
                checked_div(trunc.numerator(rho) - trunc.k1(), den)
            }
            CostKind::C2Reg { alpha, beta } => {
                let den = trunc.denominator(rho) - trunc.k2() + alpha;
                checked_div(trunc.numerator(rho) - trunc.k1() + beta, den)
            }
        }
    }

    /// [`Self::evaluate`] in Pauli coordinates: the same costs as functions
    /// of the state's coefficient vector `a` (with `a[0] = Tr ρ = 1`),
    /// matching the dense route within numerical noise.
    pub fn evaluate_coefficients(&self, trunc: &TruncatedObservables, a: &[f64]) -> Result<f64> {
        match self {
            CostKind::C0 => {
                let w = trunc.observable().coefficient_vector()?;
                Ok(dot(a, &w))
            }
            CostKind::C1 => {
                let den = trunc.k2() + dot(a, trunc.w2());
                checked_div(trunc.k1() + dot(a, trunc.w1()), den)
            }
            CostKind::C2Raw => checked_div(dot(a, trunc.w1()), dot(a, trunc.w2())),
            CostKind::C2Reg { alpha, beta } => {
                checked_div(dot(a, trunc.w1()) + beta, dot(a, trunc.w2()) + alpha)
            }
        }
    }
}

impl std::fmt::Display for CostKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CostKind::C2Reg { alpha, beta } => write!(f, "c2reg(alpha={alpha}, beta={beta})"),
            other => write!(f, "{}", other.label()),
        }
    }
}

fn checked_div(num: f64, den: f64) -> Result<f64> {
    if den.abs() <= DENOMINATOR_FLOOR {
        return Err(Error::SingularDenominator { value: den, floor: DENOMINATOR_FLOOR });
    }
    Ok(num / den)
}

/// Central-difference gradient of an arbitrary scalar function of the
/// parameters, parallel over coordinates.
pub fn grad_central_difference<F>(f: F, theta: &[f64], eps: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    theta
        .par_iter()
        .enumerate()
        .map(|(index, _)| {
            let mut up = theta.to_vec();
            let mut down = theta.to_vec();
            up[index] += eps;
            down[index] -= eps;
            let wrap = |e: Error| Error::GradientEvaluation { index, source: Box::new(e) };
            let hi = f(&up).map_err(wrap)?;
            let lo = f(&down).map_err(wrap)?;
            Ok((hi - lo) / (2.0 * eps))
        })
        .collect()
}

/// The circuit's Pauli-coordinate Jacobian: the output state's coefficient
/// vector `a` and, per parameter, `g_p = ∂a/∂θ_p` by central differences.
pub fn state_pauli_jacobian(
    spec: &AnsatzSpec,
    theta: &[f64],
    noise: &NoiseModel,
    eps: f64,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let a = spec.final_state(theta, noise)?.pauli_coefficients()?;
    let jac: Vec<Vec<f64>> = theta
        .par_iter()
        .enumerate()
        .map(|(index, _)| {
            let mut up = theta.to_vec();
            let mut down = theta.to_vec();
            up[index] += eps;
            down[index] -= eps;
            let wrap = |e: Error| Error::GradientEvaluation { index, source: Box::new(e) };
            let hi = spec.final_state(&up, noise).map_err(wrap)?.pauli_coefficients()?;
            let lo = spec.final_state(&down, noise).map_err(wrap)?.pauli_coefficients()?;
            Ok(hi
                .iter()
                .zip(&lo)
                .map(|(h, l)| (h - l) / (2.0 * eps))
                .collect::<Vec<f64>>())
        })
        .collect::<Result<_>>()?;
    Ok((a, jac))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Plain-expectation gradient from the Pauli Jacobian: `∂C0 = g·w` over the
/// observable's full coefficient vector.
pub fn c0_gradient_from(trunc: &TruncatedObservables, jacobian: &[Vec<f64>]) -> Result<Vec<f64>> {
    let w = trunc.observable().coefficient_vector()?;
    Ok(jacobian.iter().map(|g| dot(g, &w)).collect())
}

/// Quotient-rule `C1` gradient from the Pauli Jacobian:
/// `∂C1 = [g·w1 − C1·(g·w2)] / Tr(ρ O2)`.
pub fn c1_gradient_from(
    trunc: &TruncatedObservables,
    a: &[f64],
    jacobian: &[Vec<f64>],
) -> Result<Vec<f64>> {
    let den = trunc.k2() + dot(a, trunc.w2());
    if den.abs() <= DENOMINATOR_FLOOR {
        return Err(Error::SingularDenominator { value: den, floor: DENOMINATOR_FLOOR });
    }
    let c1 = (trunc.k1() + dot(a, trunc.w1())) / den;
    Ok(jacobian
        .iter()
        .map(|g| (dot(g, trunc.w1()) - c1 * dot(g, trunc.w2())) / den)
        .collect())
}

/// Quotient-rule raw-`C2` gradient from the Pauli Jacobian:
/// `∂C2 = [g·w1 − C2·(g·w2)] / Tr(ρ O2′)`. When the restricted block is
/// degenerate (`O1′ ∝ O2′`) the gradient is identically zero and is
/// returned as such without touching the (possibly singular) denominator.
pub fn c2_gradient_from(
    trunc: &TruncatedObservables,
    a: &[f64],
    jacobian: &[Vec<f64>],
) -> Result<Vec<f64>> {
    if trunc.is_degenerate() {
        return Ok(vec![0.0; jacobian.len()]);
    }
    let den = dot(a, trunc.w2());
    if den.abs() <= DENOMINATOR_FLOOR {
        return Err(Error::SingularDenominator { value: den, floor: DENOMINATOR_FLOOR });
    }
    let c2 = dot(a, trunc.w1()) / den;
    Ok(jacobian
        .iter()
        .map(|g| (dot(g, trunc.w1()) - c2 * dot(g, trunc.w2())) / den)
        .collect())
}

/// Regularized-`C2` gradient from the Pauli Jacobian (same quotient rule,
/// shifted denominator).
pub fn c2_reg_gradient_from(
    trunc: &TruncatedObservables,
    a: &[f64],
    jacobian: &[Vec<f64>],
    alpha: f64,
    beta: f64,
) -> Result<Vec<f64>> {
    let den = dot(a, trunc.w2()) + alpha;
    if den.abs() <= DENOMINATOR_FLOOR {
        return Err(Error::SingularDenominator { value: den, floor: DENOMINATOR_FLOOR });
    }
    let value = (dot(a, trunc.w1()) + beta) / den;
    Ok(jacobian
        .iter()
        .map(|g| (dot(g, trunc.w1()) - value * dot(g, trunc.w2())) / den)
        .collect())
}
