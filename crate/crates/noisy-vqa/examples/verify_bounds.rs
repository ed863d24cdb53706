//! Run the packaged numerical claims — decay envelopes, gradient bounds,
//! amplification, and the structural checks — on one benchmark and print
//! the verdicts.
//!
//!     cargo run --release --example verify_bounds

use noisy_vqa::ansatz::AnsatzSpec;
use noisy_vqa::checks::{self, BoundReport};
use noisy_vqa::density::NoiseModel;
use noisy_vqa::error::Result;
use noisy_vqa::problems::ProblemInstance;

fn show(report: &BoundReport) {
    let verdict = if report.passing() { "PASS" } else { "VIOLATED" };
    println!(
        "{:<24} {verdict}  {} instances ({} applicable / {} inapplicable draws), \
         {} violations, min slack {:+.3e}",
        report.claim,
        report.instances_tested,
        report.applicable,
        report.inapplicable,
        report.violations,
        report.min_slack,
    );
}

fn main() -> Result<()> {
    let instance = ProblemInstance::builtin("maxcut-cycle4")?;
    let trunc = instance.truncated();
    let spec = instance.default_ansatz();
    let noise = NoiseModel::new(0.03, 0.03, 0.03)?;
    let (samples, seed) = (20, 5);
    println!("claims on {} ({}), q = {:.2}\n", instance.name(), spec, noise.strength());

    // Decay family: every Pauli-coefficient norm, gradient norm, and cost
    // gradient must sit inside its q-power envelope. Slack = bound − value;
    // negative slack would be a counterexample.
    show(&checks::check_state_decay(&spec, &noise, samples, seed)?);
    show(&checks::check_gradient_bound_c0(&spec, &noise, instance.observable(), samples, seed)?);
    show(&checks::check_gradient_bound_c1(&spec, &noise, trunc, samples, seed)?);

    // Amplification needs depth: below the relaxation threshold the claim
    // makes no statement, so it runs on a deeper copy of the same ansatz.
    let deep = AnsatzSpec::new(
        spec.n,
        30,
        spec.schedule,
        spec.entangler,
        spec.initial_bits,
    )?;
    for epsilon in checks::EPSILON_SWEEP {
        let report = checks::check_amplification(&deep, &noise, trunc, samples, seed, epsilon)?;
        print!("ε = {epsilon:<5} ");
        if report.applicable == 0 && report.violations == 0 {
            println!(
                "inapplicable at this depth (needs > 2·L0+1 blocks, L0 = {:?})",
                report.parameters.l0
            );
        } else {
            show(&report);
        }
    }

    // Structural claims about the cost itself rather than the circuit.
    let grid = checks::singular_grid(trunc.k2(), 50)?;
    show(&checks::check_singularity_profile(trunc, &grid)?);
    show(&checks::check_solution_space(trunc, samples, seed)?);
    show(&checks::check_traceless_derivative(&spec, &noise, 5, seed)?);
    Ok(())
}
