//! Train the 4-cycle max-cut benchmark twice from the same random start:
//! once stepping on the regularized traceless quotient, once on the plain
//! truncated quotient, and compare where each lands.
//!
//!     cargo run --release --example train_maxcut

use noisy_vqa::cost::CostKind;
use noisy_vqa::density::NoiseModel;
use noisy_vqa::error::Result;
use noisy_vqa::problems::ProblemInstance;
use noisy_vqa::train::{paired_runs, TrainConfig, TrainRecord};

fn tail(label: &str, record: &TrainRecord) {
    println!("{label}");
    println!("  iter    C1        C2        ‖grad‖₂    subspace weight");
    for row in record.rows.iter().rev().take(3).collect::<Vec<_>>().into_iter().rev() {
        println!(
            "  {:>4}  {:+.5}  {:+.5}  {:.2e}   {:.4}",
            row.iter, row.c1, row.c2, row.grad_l2, row.subspace_weight
        );
    }
    println!(
        "  final success rate {:.4}, parameter quality {:.4}\n",
        record.final_metric, record.parameter_quality
    );
}

fn main() -> Result<()> {
    let instance = ProblemInstance::builtin("maxcut-cycle4")?;
    let spec = instance.ansatz(10)?;
    let noise = NoiseModel::new(0.03, 0.03, 0.03)?;
    println!(
        "{} on {}; optimal cut value {}\n",
        instance.name(),
        spec,
        instance.optimal_value()
    );

    let cfg = TrainConfig {
        iterations: 300,
        lr0: 0.1,
        clip_threshold: 1.0,
        step_cost: CostKind::C2Reg { alpha: 0.1, beta: 0.1 },
        fd_eps: 1e-4,
        seed: 1,
        initial_theta: None,
    };

    // Identical initialization and budget; only the stepping cost differs.
    // Progress is always reported as C1 — the quantity with physical
    // meaning — regardless of which cost produced the steps.
    let (primary, baseline) = paired_runs(&instance, &spec, &noise, &cfg, CostKind::C1)?;
    tail("stepping on c2reg:", &primary);
    tail("stepping on c1:", &baseline);

    let gain = primary.final_metric / baseline.final_metric.max(1e-12);
    println!("success-rate ratio (c2reg / c1) = {gain:.2}");
    println!("\nUnder contraction noise the C1 landscape flattens with depth,");
    println!("while the traceless quotient keeps usable gradients; stepping on");
    println!("it typically reaches a better cut from the same start.");
    Ok(())
}
