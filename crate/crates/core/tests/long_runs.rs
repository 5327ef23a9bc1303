use syncforge::dynamics::{
    attractor_warmup, perturbed_sync_ic, rk4_integrate, simulate_network, NetworkSystem, OscillatorModel,
    SimulationOptions,
};
use syncforge::msf::{largest_lyapunov, LyapunovSettings};
use syncforge::tridiag::TridiagonalMatrix;

#[test]
fn van_der_pol_stays_bounded() {
    let v = OscillatorModel::van_der_pol();
    let mut worst = 0.0_f64;
    rk4_integrate(|x, o| v.eval_into(x, o), &[2.0, 0.0], 1e-3, 10_000, 1, |_, _, x| {
        worst = worst.max(x.iter().fold(0.0_f64, |m, c| m.max(c.abs())));
    })
    .unwrap();
    assert!(worst < 5.0, "{worst}");
}

#[test]
fn warmed_up_van_der_pol_is_on_its_cycle() {
    let v = OscillatorModel::van_der_pol();
    let p = attractor_warmup(&v, &[0.1, 0.0], 100.0, 1e-3).unwrap();
    // Successive downward crossings of y₂ = 0 with y₁ > 0, linearly interpolated.
    let mut crossings = Vec::new();
    let mut prev = p.clone();
    rk4_integrate(|x, o| v.eval_into(x, o), &p, 1e-3, 20_000, 1, |_, _, x| {
        if prev[1] > 0.0 && x[1] <= 0.0 && x[0] > 0.0 {
            let s = prev[1] / (prev[1] - x[1]);
            crossings.push(prev[0] + s * (x[0] - prev[0]));
        }
        prev.copy_from_slice(x);
    })
    .unwrap();
    assert!(crossings.len() >= 2);
    assert!((crossings[1] - crossings[0]).abs() < 1e-4, "{crossings:?}");
}

#[test]
fn rossler_base_orbit_is_chaotic() {
    let s = LyapunovSettings { total_time: 5000.0, ..LyapunovSettings::rossler() };
    let e = largest_lyapunov(&OscillatorModel::rossler(), 0.0, &s).unwrap();
    assert!(e.exponent > 0.03, "{e:?}");
}

#[test]
fn infeasible_diffusive_rossler_does_not_synchronize() {
    // σ = 1 puts σλ₂ ≈ 0.152 below the stable interval.
    let n = 8;
    let r = OscillatorModel::rossler();
    let sys = NetworkSystem::new(r.clone(), TridiagonalMatrix::path_laplacian(n).unwrap()).unwrap();
    let p = attractor_warmup(&r, r.initial_state(), r.warmup_time(), 1e-3).unwrap();
    let x0 = perturbed_sync_ic(&p, n, 1.0, 3).unwrap();
    let sim = simulate_network(&sys, &x0, &SimulationOptions::new(1e-3, 400.0, 100)).unwrap();
    assert!(sim.blowup.is_none());
    let s = &sim.series;
    let late = s.times.iter().zip(&s.sync_error).filter(|(t, _)| **t >= 200.0).map(|(_, e)| *e).fold(f64::INFINITY, f64::min);
    assert!(late >= 1e-3, "{late:e}");
}
