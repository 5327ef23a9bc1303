//! How far symmetric diffusive coupling `σT` can go: the coupling strength it
//! needs, and the largest network it can synchronize when the MSF is negative
//! only on a bounded interval.

use syncforge::msf::{diffusive_feasibility, path_eigenvalue, required_sigma, Interval};
use syncforge::synthesis::diffusive_laplacian;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("van der Pol (MSF < 0 for η > 0.39):");
    for n in [8, 32, 64, 128] {
        println!("  N = {n:>3}: λ₂ = {:.3e}, need σ > {:.1}", path_eigenvalue(2, n), required_sigma(0.39, n));
    }

    let rossler = Interval { lo: 0.19, hi: 4.61 };
    println!("\nRössler (MSF < 0 on [{}, {}], bound {:.2}):", rossler.lo, rossler.hi, rossler.hi / rossler.lo);
    for n in 2..=10 {
        let f = diffusive_feasibility(rossler, n)?;
        let range = f.sigma_range.map_or("-".to_string(), |(a, b)| format!("({a:.3}, {b:.3})"));
        println!("  N = {n:>2}: λ_N/λ₂ = {:>7.3}  feasible {:<5}  σ ∈ {range}", f.ratio, f.feasible);
    }

    let (l, spec) = diffusive_laplacian(2.5, 6)?;
    let eig = l.matrix().eigenvalues()?;
    let dev = eig.iter().zip(spec.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("\n2.5·T for N = 6: eigenvalues match the closed form to {dev:.1e}");
    Ok(())
}
