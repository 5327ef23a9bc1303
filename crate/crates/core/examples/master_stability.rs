//! Master stability function of the van der Pol oscillator coupled through
//! `E = [[0,0],[1,0]]`, and the interval where it is negative.
//!
//! Pass `rossler` for the Rössler system (much slower: long chaotic runs).

use syncforge::dynamics::OscillatorModel;
use syncforge::msf::{eta_grid, largest_lyapunov, msf_scan, LyapunovSettings};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "van_der_pol".into());
    let model = OscillatorModel::by_name(&name)?;
    let settings = LyapunovSettings::for_model(model.name());
    let (hi, step) = if model.name() == "rossler" { (5.0, 0.25) } else { (1.0, 0.05) };

    let curve = msf_scan(&model, &eta_grid(0.0, hi, step)?, &settings)?;
    println!("{:>6} {:>10} {:>10}", "eta", "msf", "±");
    for ((eta, v), c) in curve.etas.iter().zip(&curve.values).zip(&curve.convergence) {
        println!("{eta:>6.2} {v:>10.4} {c:>10.1e}");
    }
    for iv in curve.significant_intervals(1e-3) {
        println!("negative on [{:.3}, {:.3}]", iv.lo, iv.hi);
    }
    if model.name() == "van_der_pol" {
        let at_one = largest_lyapunov(&model, 1.0, &settings)?;
        println!("MSF(1) = {:.4}", at_one.exponent);
    }
    Ok(())
}
