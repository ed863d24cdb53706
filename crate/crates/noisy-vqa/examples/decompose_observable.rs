//! Decompose a diagonal cost observable over the Pauli basis, truncate it
//! to a feasible subspace, and inspect the pieces the quotient costs are
//! built from.
//!
//!     cargo run --example decompose_observable

use noisy_vqa::cost::TruncatedObservables;
use noisy_vqa::error::Result;
use noisy_vqa::problems::ProblemInstance;

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn main() -> Result<()> {
    let instance = ProblemInstance::builtin("maxcut-cycle4")?;
    let o = instance.observable();
    println!("observable for {} on {} qubits", instance.name(), instance.n());
    println!("  {} Pauli terms, identity coefficient {}", o.rank(), o.identity_coefficient());
    println!("  traceless part ‖·‖₂ = {:.6}", o.traceless_norm2());

    // Truncation keeps only rows/columns inside the feasible subspace:
    // O1 = Π O Π, O2 = Π. Their identity components k1, k2 are split off so
    // the remaining weight vectors w1, w2 are traceless.
    let trunc: &TruncatedObservables = instance.truncated();
    println!("\nsubspace {} ({} of {} basis states)",
        instance.subspace().describe(),
        instance.subspace().indices().len(),
        1 << instance.n(),
    );
    println!("  k1 = Tr(O1)/2^n = {:.6}", trunc.k1());
    println!("  k2 = Tr(O2)/2^n = {:.6}", trunc.k2());
    println!("  ‖w1‖₂ = {:.6}", l2(trunc.w1()));
    println!("  ‖w2‖₂ = {:.6}", l2(trunc.w2()));

    // The spectrum of O1 restricted to the subspace is what the quotient
    // cost can reach; its minimum is the in-subspace optimum.
    let mut eigenvalues = trunc.sector_eigenvalues().to_vec();
    eigenvalues.sort_by(f64::total_cmp);
    println!("\nsector eigenvalues {eigenvalues:?}");
    println!("  λ_min = {:.6} at basis index {}", trunc.lambda_min(), trunc.argmin_index());
    println!("  shifted back by {}: optimal cut value {}", instance.shift(),
        trunc.lambda_min() + instance.shift());

    // Weight vectors live in the 4^n-dimensional Pauli coefficient space;
    // a handful of entries carry everything for a diagonal observable.
    let nonzero = trunc.w1().iter().filter(|w| w.abs() > 1e-12).count();
    println!("\nw1 has {nonzero} non-zero of {} entries", trunc.w1().len());
    Ok(())
}
