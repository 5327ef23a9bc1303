//! The three-step design procedure driven from code: scan the MSF, place
//! eigenvalues inside the negative interval, synthesize, simulate.
//!
//! Outputs land in the directory given as the first argument (default
//! `pipeline-out`), the same files the `syncforge` binary writes.

use std::path::PathBuf;

use syncforge::cli::{cmd_msf, cmd_simulate, cmd_synthesize, write_config, ExperimentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "pipeline-out".into()));
    let mut cfg: ExperimentConfig = serde_json::from_str(
        r#"{
            "model": "van_der_pol",
            "n": 16,
            "spectrum": { "placement": "chebyshev", "from_msf": true },
            "msf": { "lo": 0.0, "hi": 2.0, "step": 0.1 },
            "integrator": { "t_end": 200.0 }
        }"#,
    )?;
    cfg.out = out;
    write_config(&cfg)?;

    let msf = cmd_msf(&cfg)?;
    println!("negative MSF intervals {:?}", msf.intervals);
    let synth = cmd_synthesize(&cfg)?;
    println!("spectrum {:.3?}", &synth.spectrum[..4]);
    println!("max entry {:.3}, verified {}", synth.verification.max_entry, synth.verification.passed());
    let sim = cmd_simulate(&cfg)?;
    println!(
        "final sync error {:.2e}, fitted rate {:?}, predicted {:?}",
        sim.final_sync_error,
        sim.decay_fit.map(|f| f.rate),
        sim.predicted_rate
    );
    println!("files in {}", cfg.out.display());
    Ok(())
}
