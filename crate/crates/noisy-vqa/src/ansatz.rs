//! Hardware-efficient ansatz executed under per-block noise.
//!
//! A circuit is `blocks` repetitions of: one parameterized rotation on every
//! qubit (axis chosen per block), a fixed CX entangler, then the local Pauli
//! channel on every qubit. Preparation of the initial basis state is
//! noiseless; the channel fires exactly once per block, after the entangler.
//! Parameters are laid out flat as `theta[block * n + qubit]`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::density::{DensityMatrix, NoiseModel};
use crate::error::{Error, Result};

/// Axis of a parameterized single-qubit rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RotationAxis {
    X,
    Y,
    Z,
}

/// How rotation axes are assigned across blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationSchedule {
    /// Every block rotates about the same axis.
    Fixed(RotationAxis),
    /// Blocks cycle X, Y, Z, X, … by block index.
    Cycle,
}

impl RotationSchedule {
    pub fn axis_for_block(&self, block: usize) -> RotationAxis {
        match self {
            RotationSchedule::Fixed(a) => *a,
            RotationSchedule::Cycle => match block % 3 {
                0 => RotationAxis::X,
                1 => RotationAxis::Y,
                _ => RotationAxis::Z,
            },
        }
    }
}

impl FromStr for RotationSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" => Ok(RotationSchedule::Fixed(RotationAxis::X)),
            "y" => Ok(RotationSchedule::Fixed(RotationAxis::Y)),
            "z" => Ok(RotationSchedule::Fixed(RotationAxis::Z)),
            "xyz" => Ok(RotationSchedule::Cycle),
            other => Err(Error::Config(format!(
                "unknown rotation schedule `{other}` (expected x, y, z, or xyz)"
            ))),
        }
    }
}

impl fmt::Display for RotationSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RotationSchedule::Fixed(RotationAxis::X) => write!(f, "x"),
            RotationSchedule::Fixed(RotationAxis::Y) => write!(f, "y"),
            RotationSchedule::Fixed(RotationAxis::Z) => write!(f, "z"),
            RotationSchedule::Cycle => write!(f, "xyz"),
        }
    }
}

/// Fixed CX pattern applied after each rotation layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntanglerLayout {
    /// CX(j → j+1) for j = 0..n-2.
    Chain,
    /// The chain plus the closing CX(n-1 → 0).
    Ring,
}

impl EntanglerLayout {
    /// (control, target) pairs in application order.
    pub fn pairs(&self, n: usize) -> Vec<(usize, usize)> {
        let mut pairs: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|j| (j, j + 1)).collect();
        if matches!(self, EntanglerLayout::Ring) && n > 2 {
            pairs.push((n - 1, 0));
        }
        pairs
    }
}

/// Shape of a noisy hardware-efficient circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzSpec {
    pub n: usize,
    pub blocks: usize,
    pub schedule: RotationSchedule,
    pub entangler: EntanglerLayout,
    /// Basis state prepared (noiselessly) before block 1, as a bitmask.
    pub initial_bits: usize,
}

impl AnsatzSpec {
    pub fn new(
        n: usize,
        blocks: usize,
        schedule: RotationSchedule,
        entangler: EntanglerLayout,
        initial_bits: usize,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("ansatz needs at least one qubit".into()));
        }
        if initial_bits >= 1usize << n {
            return Err(Error::Config(format!(
                "initial_bits {initial_bits:#b} does not fit in {n} qubits"
            )));
        }
        Ok(AnsatzSpec { n, blocks, schedule, entangler, initial_bits })
    }

    /// Default shape: all-Y rotations, chain entangler, |0…0⟩.
    pub fn ry_chain(n: usize, blocks: usize) -> Result<Self> {
        Self::new(n, blocks, RotationSchedule::Fixed(RotationAxis::Y), EntanglerLayout::Chain, 0)
    }

    pub fn parameter_count(&self) -> usize {
        self.n * self.blocks
    }

    /// The noiselessly prepared input state `|initial_bits⟩`.
    pub fn initial_state(&self) -> Result<DensityMatrix> {
        DensityMatrix::basis_state(self.n, self.initial_bits)
    }

    fn check_theta(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.parameter_count() {
            return Err(Error::WrongParameterCount {
                expected: self.parameter_count(),
                got: theta.len(),
            });
        }
        Ok(())
    }

    fn apply_block(&self, rho: &mut DensityMatrix, block: usize, theta: &[f64], noise: &NoiseModel) {
        let axis = self.schedule.axis_for_block(block);
        for qubit in 0..self.n {
            let angle = theta[block * self.n + qubit];
            match axis {
                RotationAxis::X => rho.apply_rx(qubit, angle),
                RotationAxis::Y => rho.apply_ry(qubit, angle),
                RotationAxis::Z => rho.apply_rz(qubit, angle),
            }
        }
        for (control, target) in self.entangler.pairs(self.n) {
            rho.apply_cx(control, target);
        }
        rho.apply_local_pauli_channel(noise);
    }

    /// Run the circuit and return the output state.
    pub fn final_state(&self, theta: &[f64], noise: &NoiseModel) -> Result<DensityMatrix> {
        self.check_theta(theta)?;
        let mut rho = self.initial_state()?;
        for block in 0..self.blocks {
            self.apply_block(&mut rho, block, theta, noise);
        }
        Ok(rho)
    }

    /// Run the circuit keeping every per-block state: element `l` is the
    /// state after block `l+1`'s channel. The last element is the output.
    pub fn trajectory(&self, theta: &[f64], noise: &NoiseModel) -> Result<Vec<DensityMatrix>> {
        self.check_theta(theta)?;
        let mut rho = self.initial_state()?;
        let mut states = Vec::with_capacity(self.blocks);
        for block in 0..self.blocks {
            self.apply_block(&mut rho, block, theta, noise);
            states.push(rho.clone());
        }
        Ok(states)
    }

    /// Run without noise (for parameter-quality metrics).
    pub fn final_state_noiseless(&self, theta: &[f64]) -> Result<DensityMatrix> {
        self.final_state(theta, &NoiseModel::noiseless())
    }
}

impl fmt::Display for AnsatzSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} qubits × {} blocks, axis {}, {} entangler, input |{:0width$b}⟩",
            self.n,
            self.blocks,
            self.schedule,
            match self.entangler {
                EntanglerLayout::Chain => "chain",
                EntanglerLayout::Ring => "ring",
            },
            self.initial_bits,
            width = self.n,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{PauliObservable, PauliString};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn single_qubit_single_block_frozen_point() {
        // Ry(π/2)|0⟩ then the uniform 3% channel: a_X = 0.88 exactly,
        // pinned by the simulator contract.
        let spec = AnsatzSpec::ry_chain(1, 1).unwrap();
        let noise = NoiseModel::new(0.03, 0.03, 0.03).unwrap();
        let rho = spec.final_state(&[PI / 2.0], &noise).unwrap();
        let x = PauliObservable::from_terms(1, [(PauliString::parse("X").unwrap(), 1.0)]).unwrap();
        assert_abs_diff_eq!(rho.expectation(&x).unwrap(), 0.88, epsilon = 1e-14);
    }

    #[test]
    fn parameter_layout_is_block_major() {
        // Two qubits, two blocks; zero all angles except block 1 / qubit 1.
        // Blocks 0 entangles |00⟩ trivially, so the only action is Ry on
        // qubit 1 in block 1 followed by CX(0→1) (control = qubit 0 = 0).
        let spec = AnsatzSpec::ry_chain(2, 2).unwrap();
        let mut theta = vec![0.0; 4];
        theta[1 * 2 + 1] = PI; // block 1, qubit 1
        let rho = spec.final_state(&theta, &NoiseModel::noiseless()).unwrap();
        // Ry(π) maps |0⟩ → |1⟩ on qubit 1: state |10⟩ = index 2.
        assert_abs_diff_eq!(rho.basis_probabilities()[2], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn entangler_pairs() {
        assert_eq!(EntanglerLayout::Chain.pairs(4), vec![(0, 1), (1, 2), (2, 3)]);
        assert_eq!(EntanglerLayout::Ring.pairs(4), vec![(0, 1), (1, 2), (2, 3), (3, 0)]);
        // A 2-qubit ring would duplicate the only pair; it stays a chain.
        assert_eq!(EntanglerLayout::Ring.pairs(2), vec![(0, 1)]);
        assert_eq!(EntanglerLayout::Chain.pairs(1), vec![]);
    }

    #[test]
    fn schedule_parsing_and_cycling() {
        let s: RotationSchedule = "xyz".parse().unwrap();
        assert_eq!(s.axis_for_block(0), RotationAxis::X);
        assert_eq!(s.axis_for_block(1), RotationAxis::Y);
        assert_eq!(s.axis_for_block(2), RotationAxis::Z);
        assert_eq!(s.axis_for_block(3), RotationAxis::X);
        assert_eq!("y".parse::<RotationSchedule>().unwrap(), RotationSchedule::Fixed(RotationAxis::Y));
        assert!("q".parse::<RotationSchedule>().is_err());
        assert_eq!(s.to_string(), "xyz");
    }

    #[test]
    fn trajectory_matches_final_state() {
        let spec = AnsatzSpec::new(
            3,
            4,
            RotationSchedule::Cycle,
            EntanglerLayout::Ring,
            0b101,
        )
        .unwrap();
        let noise = NoiseModel::new(0.02, 0.01, 0.03).unwrap();
        let theta: Vec<f64> = (0..spec.parameter_count()).map(|i| 0.1 * i as f64).collect();
        let traj = spec.trajectory(&theta, &noise).unwrap();
        assert_eq!(traj.len(), 4);
        let final_state = spec.final_state(&theta, &noise).unwrap();
        assert_eq!(traj.last().unwrap(), &final_state);
        for state in &traj {
            assert_abs_diff_eq!(state.trace(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn initial_bits_prepare_noiselessly() {
        let spec = AnsatzSpec::new(
            4,
            1,
            RotationSchedule::Fixed(RotationAxis::Y),
            EntanglerLayout::Chain,
            0b0011,
        )
        .unwrap();
        let rho = spec.initial_state().unwrap();
        assert_abs_diff_eq!(rho.basis_probabilities()[0b0011], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn input_validation() {
        let spec = AnsatzSpec::ry_chain(2, 3).unwrap();
        assert_eq!(spec.parameter_count(), 6);
        assert!(matches!(
            spec.final_state(&[0.0; 5], &NoiseModel::noiseless()),
            Err(Error::WrongParameterCount { expected: 6, got: 5 })
        ));
        assert!(AnsatzSpec::new(
            2,
            1,
            RotationSchedule::Cycle,
            EntanglerLayout::Chain,
            0b100
        )
        .is_err());
        assert!(AnsatzSpec::ry_chain(0, 1).is_err());
    }
}
