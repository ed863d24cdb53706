//! Dense density matrices and the local Pauli channel.
//!
//! States are exact `2^n × 2^n` row-major complex matrices — no sampling
//! anywhere, so every expectation value and Pauli coefficient is computed to
//! floating-point accuracy. Single-qubit gates, the entangler, and the noise
//! channel all act in place through index arithmetic on bit `k` of the basis
//! index (qubit 0 = least-significant bit).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::pauli::{self, PauliObservable};

/// Largest qubit count a dense density matrix supports.
pub const MAX_DENSITY_QUBITS: usize = 12;

/// Single-qubit Pauli error channel applied identically to every qubit:
/// `ρ ↦ (1 - q_x - q_y - q_z) ρ + q_x XρX + q_y YρY + q_z ZρZ` per qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub q_x: f64,
    pub q_y: f64,
    pub q_z: f64,
}

impl NoiseModel {
    pub fn new(q_x: f64, q_y: f64, q_z: f64) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidNoiseRates {
            qx: q_x,
            qy: q_y,
            qz: q_z,
            reason: reason.into(),
        };
        if !(q_x.is_finite() && q_y.is_finite() && q_z.is_finite()) {
            return Err(bad("rates must be finite"));
        }
        if q_x < 0.0 || q_y < 0.0 || q_z < 0.0 {
            return Err(bad("rates must be non-negative"));
        }
        if q_x + q_y + q_z > 1.0 + 1e-12 {
            return Err(bad("rates must sum to at most 1"));
        }
        Ok(NoiseModel { q_x, q_y, q_z })
    }

    pub fn noiseless() -> Self {
        NoiseModel { q_x: 0.0, q_y: 0.0, q_z: 0.0 }
    }

    pub fn is_noiseless(&self) -> bool {
        self.q_x == 0.0 && self.q_y == 0.0 && self.q_z == 0.0
    }

    /// Per-axis contraction factors `(f_x, f_y, f_z)`: the channel scales a
    /// state's X/Y/Z Pauli coefficient on each qubit by the matching factor.
    pub fn contraction_factors(&self) -> [f64; 3] {
        [
            1.0 - 2.0 * (self.q_y + self.q_z),
            1.0 - 2.0 * (self.q_x + self.q_z),
            1.0 - 2.0 * (self.q_x + self.q_y),
        ]
    }

    /// Noise strength `q`: the largest contraction magnitude. Every
    /// non-identity Pauli coefficient shrinks by at least `q` per channel
    /// application per non-identity letter.
    pub fn strength(&self) -> f64 {
        self.contraction_factors().iter().fold(0.0, |m, f| m.max(f.abs()))
    }
}

/// Dense n-qubit density matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    /// `|index⟩⟨index|`.
    pub fn basis_state(n: usize, index: usize) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::InvalidInstance(format!(
                "basis index {index} out of range for {n} qubits"
            )));
        }
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        data[index * dim + index] = Complex64::new(1.0, 0.0);
        Ok(DensityMatrix { n, data })
    }

    /// `|ψ⟩⟨ψ|` from a normalized state vector.
    pub fn from_state_vector(n: usize, psi: &[Complex64]) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        if psi.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: psi.len(), n });
        }
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::UnnormalizedTarget { norm });
        }
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[r * dim + c] = psi[r] * psi[c].conj();
            }
        }
        Ok(DensityMatrix { n, data })
    }

    /// Convex combination `Σ w_i ρ_i` of states on the same register.
    ///
    /// Weights must be non-negative and sum to 1 within 1e-9.
    pub fn mixture(terms: &[(f64, DensityMatrix)]) -> Result<Self> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| Error::InvalidInstance("mixture needs at least one term".into()))?;
        let n = first.n;
        let dim = first.dim();
        let mut total = 0.0;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (weight, rho) in terms {
            if !weight.is_finite() || *weight < 0.0 {
                return Err(Error::InvalidInstance(format!(
                    "mixture weight {weight} is not a finite non-negative number"
                )));
            }
            if rho.n != n {
                return Err(Error::DimensionMismatch { expected: dim, got: rho.dim(), n });
            }
            total += weight;
            for (out, z) in data.iter_mut().zip(rho.data.iter()) {
                *out += weight * z;
            }
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInstance(format!(
                "mixture weights sum to {total}, expected 1"
            )));
        }
        Ok(DensityMatrix { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        let dim = self.dim();
        (0..dim).map(|i| self.data[i * dim + i].re).sum()
    }

    /// `Tr(ρ²)` — 1 exactly for pure states.
    pub fn purity(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Diagonal in the computational basis (measurement probabilities).
    pub fn basis_probabilities(&self) -> Vec<f64> {
        let dim = self.dim();
        (0..dim).map(|i| self.data[i * dim + i].re).collect()
    }

    /// Total probability on the given basis indices.
    pub fn subspace_weight(&self, indices: &[usize]) -> f64 {
        let dim = self.dim();
        indices.iter().map(|&i| self.data[i * dim + i].re).sum()
    }

    /// Apply a 2×2 unitary `[[u00, u01], [u10, u11]]` to one qubit.
    pub fn apply_single_qubit(&mut self, qubit: usize, u: &[Complex64; 4]) {
        assert!(qubit < self.n, "qubit {qubit} out of range for n = {}", self.n);
        let dim = self.dim();
        let b = 1usize << qubit;
        // ρ ← U ρ
        for r0 in 0..dim {
            if r0 & b != 0 {
                continue;
            }
            let r1 = r0 | b;
            for c in 0..dim {
                let x = self.data[r0 * dim + c];
                let y = self.data[r1 * dim + c];
                self.data[r0 * dim + c] = u[0] * x + u[1] * y;
                self.data[r1 * dim + c] = u[2] * x + u[3] * y;
            }
        }
        // ρ ← ρ U†
        for c0 in 0..dim {
            if c0 & b != 0 {
                continue;
            }
            let c1 = c0 | b;
            for r in 0..dim {
                let x = self.data[r * dim + c0];
                let y = self.data[r * dim + c1];
                self.data[r * dim + c0] = x * u[0].conj() + y * u[1].conj();
                self.data[r * dim + c1] = x * u[2].conj() + y * u[3].conj();
            }
        }
    }

    /// `exp(-i θ X / 2)` on one qubit.
    pub fn apply_rx(&mut self, qubit: usize, theta: f64) {
        let (s, c) = (theta / 2.0).sin_cos();
        self.apply_single_qubit(
            qubit,
            &[
                Complex64::new(c, 0.0),
                Complex64::new(0.0, -s),
                Complex64::new(0.0, -s),
                Complex64::new(c, 0.0),
            ],
        );
    }

    /// `exp(-i θ Y / 2)` on one qubit.
    pub fn apply_ry(&mut self, qubit: usize, theta: f64) {
        let (s, c) = (theta / 2.0).sin_cos();
        self.apply_single_qubit(
            qubit,
            &[
                Complex64::new(c, 0.0),
                Complex64::new(-s, 0.0),
                Complex64::new(s, 0.0),
                Complex64::new(c, 0.0),
            ],
        );
    }

    /// `exp(-i θ Z / 2)` on one qubit.
    pub fn apply_rz(&mut self, qubit: usize, theta: f64) {
        let (s, c) = (theta / 2.0).sin_cos();
        self.apply_single_qubit(
            qubit,
            &[
                Complex64::new(c, -s),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(c, s),
            ],
        );
    }

    /// Pauli X on one qubit (used for basis-state preparation).
    pub fn apply_x(&mut self, qubit: usize) {
        self.apply_single_qubit(
            qubit,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
    }

    /// CNOT: flips `target` where `control` is 1. A real symmetric
    /// permutation, so conjugation is two index swaps.
    pub fn apply_cx(&mut self, control: usize, target: usize) {
        assert!(control < self.n && target < self.n && control != target);
        let dim = self.dim();
        let cb = 1usize << control;
        let tb = 1usize << target;
        // Rows: swap r ↔ r^tb for rows with control bit set (each pair once).
        for r in 0..dim {
            if r & cb != 0 && r & tb == 0 {
                let r2 = r | tb;
                for c in 0..dim {
                    self.data.swap(r * dim + c, r2 * dim + c);
                }
            }
        }
        // Columns: same permutation on the right.
        for c in 0..dim {
            if c & cb != 0 && c & tb == 0 {
                let c2 = c | tb;
                for r in 0..dim {
                    self.data.swap(r * dim + c, r * dim + c2);
                }
            }
        }
    }

    /// Conjugate by an arbitrary dense unitary: `ρ ← U ρ U†`. Rejects
    /// matrices that are not unitary to within 1e-9.
    pub fn apply_unitary(&mut self, u: &[Complex64]) -> Result<()> {
        let dim = self.dim();
        if u.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: u.len(), n: self.n });
        }
        let mut deviation = 0.0f64;
        for r in 0..dim {
            for c in 0..dim {
                let mut e = Complex64::new(0.0, 0.0);
                for k in 0..dim {
                    e += u[r * dim + k] * u[c * dim + k].conj();
                }
                let target = if r == c { 1.0 } else { 0.0 };
                deviation = deviation.max((e - target).norm());
            }
        }
        if deviation > 1e-9 {
            return Err(Error::NonUnitary { deviation });
        }
        // ρ ← (U ρ) U†
        let mut tmp = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                let mut e = Complex64::new(0.0, 0.0);
                for k in 0..dim {
                    e += u[r * dim + k] * self.data[k * dim + c];
                }
                tmp[r * dim + c] = e;
            }
        }
        for r in 0..dim {
            for c in 0..dim {
                let mut e = Complex64::new(0.0, 0.0);
                for k in 0..dim {
                    e += tmp[r * dim + k] * u[c * dim + k].conj();
                }
                self.data[r * dim + c] = e;
            }
        }
        Ok(())
    }

    /// Apply the local Pauli channel to **every** qubit (`P^⊗n`).
    ///
    /// Per qubit the four matrix elements of each 2×2 sub-block mix as
    /// ```text
    ///   m00' = (1-q_x-q_y)      m00 + (q_x+q_y)        m11
    ///   m11' = (q_x+q_y)        m00 + (1-q_x-q_y)      m11
    ///   m01' = (1-q_x-q_y-2q_z) m01 + (q_x-q_y)        m10
    ///   m10' = (q_x-q_y)        m01 + (1-q_x-q_y-2q_z) m10
    /// ```
    /// which is exactly the X/Y/Z Kraus mixture written element-wise.
    pub fn apply_local_pauli_channel(&mut self, noise: &NoiseModel) {
        if noise.is_noiseless() {
            return;
        }
        let dim = self.dim();
        let p_flip = noise.q_x + noise.q_y;
        let d_same = 1.0 - p_flip;
        let d_off = 1.0 - p_flip - 2.0 * noise.q_z;
        let d_cross = noise.q_x - noise.q_y;
        for qubit in 0..self.n {
            let b = 1usize << qubit;
            for r0 in 0..dim {
                if r0 & b != 0 {
                    continue;
                }
                let r1 = r0 | b;
                for c0 in 0..dim {
                    if c0 & b != 0 {
                        continue;
                    }
                    let c1 = c0 | b;
                    let m00 = self.data[r0 * dim + c0];
                    let m01 = self.data[r0 * dim + c1];
                    let m10 = self.data[r1 * dim + c0];
                    let m11 = self.data[r1 * dim + c1];
                    self.data[r0 * dim + c0] = d_same * m00 + p_flip * m11;
                    self.data[r1 * dim + c1] = p_flip * m00 + d_same * m11;
                    self.data[r0 * dim + c1] = d_off * m01 + d_cross * m10;
                    self.data[r1 * dim + c0] = d_cross * m01 + d_off * m10;
                }
            }
        }
    }

    /// Full Pauli coefficient vector `a_i = Tr(ρ σ_i)`, indexed by string
    /// code (`a_0 = Tr ρ = 1` for a normalized state).
    pub fn pauli_coefficients(&self) -> Result<Vec<f64>> {
        let t = pauli::pauli_transform(self.n, &self.data)?;
        let scale = (1usize << self.n) as f64;
        Ok(t.iter()
            .map(|z| {
                debug_assert!(z.im.abs() < 1e-8, "Hermitian state must give real coefficients");
                z.re * scale
            })
            .collect())
    }

    /// `Tr(ρ O)`.
    pub fn expectation(&self, obs: &PauliObservable) -> Result<f64> {
        if obs.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: 1usize << obs.n(),
                n: self.n,
            });
        }
        Ok(obs.expectation(&self.data))
    }

    /// `⟨ψ|ρ|ψ⟩` against a normalized pure target.
    pub fn fidelity_to_pure(&self, psi: &[Complex64]) -> Result<f64> {
        let dim = self.dim();
        if psi.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: psi.len(), n: self.n });
        }
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::UnnormalizedTarget { norm });
        }
        let mut f = Complex64::new(0.0, 0.0);
        for r in 0..dim {
            for c in 0..dim {
                f += psi[r].conj() * self.data[r * dim + c] * psi[c];
            }
        }
        debug_assert!(f.im.abs() < 1e-9);
        Ok(f.re)
    }

    /// Check the three physicality conditions: Hermitian, unit trace,
    /// positive semidefinite (to 1e-9).
    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        let herm = linalg::hermiticity_deviation(dim, &self.data);
        if herm > 1e-9 {
            return Err(Error::NonPhysical(format!("not Hermitian (deviation {herm:.3e})")));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > 1e-9 {
            return Err(Error::NonPhysical(format!("trace is {tr}, expected 1")));
        }
        let eigs = linalg::hermitian_eigenvalues(dim, &self.data)?;
        if let Some(neg) = eigs.iter().find(|&&e| e < -1e-9) {
            return Err(Error::NonPhysical(format!("negative eigenvalue {neg:.3e}")));
        }
        Ok(())
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DENSITY_QUBITS {
        return Err(Error::DimensionOverflow {
            qubits: n,
            operation: "dense density matrix".into(),
            max: MAX_DENSITY_QUBITS,
        });
    }
    Ok(())
}
