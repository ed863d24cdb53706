//! Evaluate the four cost functions on the same noisy circuit output and
//! show why the regularized quotient is the one worth stepping on.
//!
//!     cargo run --example cost_functions

use noisy_vqa::ansatz::AnsatzSpec;
use noisy_vqa::cost::CostKind;
use noisy_vqa::density::NoiseModel;
use noisy_vqa::error::Result;
use noisy_vqa::problems::ProblemInstance;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let instance = ProblemInstance::builtin("maxcut-cycle4")?;
    let trunc = instance.truncated();
    let spec: AnsatzSpec = instance.default_ansatz();
    let noise = NoiseModel::new(0.03, 0.03, 0.03)?;

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let theta: Vec<f64> =
        (0..spec.parameter_count()).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
    let rho = spec.final_state(&theta, &noise)?;

    let kinds = [
        CostKind::C0,
        CostKind::C1,
        CostKind::C2Raw,
        CostKind::C2Reg { alpha: 0.1, beta: 0.1 },
    ];
    println!("random angles, {} blocks, shipped noise (q = {:.2}):\n", spec.blocks, noise.strength());
    for kind in kinds {
        println!("  {:<28} {:+.6}", kind.to_string(), kind.evaluate(trunc, &rho)?);
    }

    // C1 divides by the subspace weight, so it reads the in-subspace energy
    // even when noise has leaked most of the population outside. C2 then
    // subtracts the identity parts, trading interpretability for gradients
    // that survive deep noise; the α/β offsets keep its denominator away
    // from zero.
    let weight = rho.subspace_weight(instance.subspace().indices());
    println!("\nsubspace weight Tr(Πρ) = {weight:.6}");
    println!("C1 numerator / denominator = {:.6} / {:.6}",
        trunc.numerator(&rho), trunc.denominator(&rho));

    // All the quotients agree at the noiseless solution state: the
    // population sits entirely inside the subspace, so they collapse onto
    // the plain expectation.
    let solution = instance.solutions()[0];
    let ideal = noisy_vqa::density::DensityMatrix::basis_state(instance.n(), solution)?;
    println!("\nat the ideal solution state |{solution:04b}⟩:");
    for kind in [CostKind::C0, CostKind::C1] {
        println!("  {:<28} {:+.6}", kind.to_string(), kind.evaluate(trunc, &ideal)?);
    }
    println!("  λ_min of the truncated observable = {:+.6}", trunc.lambda_min());
    Ok(())
}
