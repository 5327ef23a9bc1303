//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use syncforge::cli::fit_decay_rate;
use syncforge::dynamics::{
    attractor_warmup, perturbed_sync_ic, rk4_integrate, simulate_network, NetworkSystem, OscillatorModel,
    SimulationOptions,
};
use syncforge::msf::{diffusive_feasibility, eta_grid, largest_lyapunov, msf_scan, Interval, LyapunovSettings};
use syncforge::synthesis::{
    bidiagonal_optimal_laplacian, diag2trid, place_eigenvalues, symmetric_3x3_feasible, synthesize, trid_zero_row_sum,
    Placement, SpectrumSpec,
};
use syncforge::tridiag::{symmetric_eigenvalues_jacobi, DenseMatrix, TridiagonalMatrix};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

/// Eigenvalues of a tridiagonal matrix with positive off-diagonal products,
/// via its symmetrization and a dense Jacobi sweep.
fn oracle_eigenvalues(t: &TridiagonalMatrix) -> Vec<f64> {
    let n = t.n();
    let off: Vec<f64> = t.sub().iter().zip(t.sup()).map(|(c, b)| -(b * c).sqrt()).collect();
    let dense = DenseMatrix::from_fn(n, n, |i, j| {
        if i == j {
            t.diag()[i]
        } else if i + 1 == j {
            off[i]
        } else if j + 1 == i {
            off[j]
        } else {
            0.0
        }
    });
    let mut e = symmetric_eigenvalues_jacobi(&dense);
    e.sort_by(f64::total_cmp);
    e
}

fn random_laplacian_spectrum(rng: &mut ChaCha8Rng, n: usize) -> SpectrumSpec {
    loop {
        let mut v: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.01..100.0)).collect();
        v.sort_by(f64::total_cmp);
        if v.windows(2).all(|w| w[1] > w[0]) {
            let mut values = vec![0.0];
            values.extend(v);
            return SpectrumSpec::laplacian(values).unwrap();
        }
    }
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut worst_spec, mut worst_row) = (0.0_f64, 0.0_f64);
    for i in 0..200 {
        let n = rng.random_range(2..=64);
        let spec = random_laplacian_spectrum(&mut rng, n);
        let (l, _) = synthesize(&spec).map_err(|e| format!("instance {i} (N={n}): {e}"))?;
        let m = l.matrix();
        let eig = oracle_eigenvalues(m);
        let lmax = spec.max_abs();
        let dev = eig.iter().zip(spec.values()).fold(0.0_f64, |a, (x, y)| a.max((x - y).abs()));
        let row = m.row_sums().iter().fold(0.0_f64, |a, x| a.max(x.abs()));
        worst_spec = worst_spec.max(dev / lmax);
        worst_row = worst_row.max(row / m.norm_inf());
        check(dev <= 1e-9 * lmax, || format!("instance {i} (N={n}): eigenvalue deviation {dev:e}"))?;
        check(row <= 1e-11 * m.norm_inf(), || format!("instance {i} (N={n}): row sum {row:e}"))?;
        check(m.diag().iter().all(|a| *a > 0.0), || format!("instance {i}: diagonal not positive"))?;
        check(m.sub().iter().chain(m.sup()).all(|b| *b < 0.0), || format!("instance {i}: off-diagonal not negative"))?;
    }
    Ok(format!("200 spectra, worst eigenvalue dev {worst_spec:.1e}·maxλ, worst row sum {worst_row:.1e}·‖L‖"))
}

fn criterion_2() -> Outcome {
    let strategy = (2usize..=48).prop_flat_map(|n| proptest::collection::vec(0.01f64..50.0, n - 1)).prop_filter_map(
        "distinct eigenvalues",
        |mut v| {
            v.sort_by(f64::total_cmp);
            if v.windows(2).any(|w| w[1] - w[0] < 1e-6) {
                return None;
            }
            let mut values = vec![0.0];
            values.extend(v);
            SpectrumSpec::laplacian(values).ok()
        },
    );
    let (resolved, unresolved) = (std::cell::Cell::new(0usize), std::cell::Cell::new(0usize));
    let mut runner = TestRunner::new(Config { cases: 100, failure_persistence: None, ..Config::default() });
    runner
        .run(&strategy, |spec| {
            let s = diag2trid(&spec, None).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let n = s.n();
            prop_assert!(s.diag().iter().all(|a| *a > 0.0), "a_i not all positive");
            let resolution = 4.0 * n as f64 * f64::EPSILON * s.norm_inf();
            for k in 1..n {
                for block in [s.principal(0, k).unwrap(), s.principal(k, n).unwrap()] {
                    let min = oracle_eigenvalues(&block)[0];
                    prop_assert!(min > -resolution, "border block {k} not positive definite (min eig {min:e})");
                    if min < resolution {
                        unresolved.set(unresolved.get() + 1);
                    } else {
                        resolved.set(resolved.get() + 1);
                    }
                }
            }
            let v = s.null_vector().map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert!(v.iter().all(|x| *x > 0.0), "null vector has a zero or sign change");
            let (_, report) = trid_zero_row_sum(&s).map_err(|e| TestCaseError::fail(e.to_string()))?;
            for k in 1..n {
                let ratio = v[k] / v[k - 1];
                let rel = (report.alphas[k - 1] - ratio).abs() / ratio;
                prop_assert!(rel <= 1e-9, "alpha_{} = {} vs v ratio {} (rel {rel:e})", k + 1, report.alphas[k - 1], ratio);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!(
        "100 generated spectra: a_i > 0, null vector positive, α matches, {} border blocks PD, {} at rounding level",
        resolved.get(),
        unresolved.get()
    ))
}

fn criterion_3() -> Outcome {
    let mut worst = 0.0_f64;
    for n in 2..=128 {
        for sigma in [1.0, 2.5] {
            let eig = TridiagonalMatrix::path_laplacian(n).unwrap().scale(sigma).eigenvalues().map_err(|e| e.to_string())?;
            for (k, e) in eig.iter().enumerate() {
                let want = sigma * 4.0 * (k as f64 * PI / (2.0 * n as f64)).sin().powi(2);
                let dev = (e - want).abs();
                worst = worst.max(dev);
                check(dev <= 1e-10, || format!("N={n}, σ={sigma}, k={}: {e} vs {want}", k + 1))?;
            }
        }
    }
    Ok(format!("N = 2..128, σ ∈ {{1, 2.5}}, worst deviation {worst:.1e}"))
}

fn criterion_4() -> Outcome {
    let feasible = symmetric_3x3_feasible(1.0, 3.0).map_err(|e| e.to_string())?;
    check(feasible.feasible, || "(1,3) reported infeasible".into())?;
    let (x, y) = feasible.solutions.iter().copied().min_by(|a, b| {
        let d = |p: &(f64, f64)| (p.0 - 1.0).abs() + (p.1 - 1.0).abs();
        d(a).total_cmp(&d(b))
    })
    .ok_or("no solution returned")?;
    check((x - 1.0).abs() < 1e-9 && (y - 1.0).abs() < 1e-9, || format!("(1,3) solution ({x}, {y}) is not x = y = 1"))?;
    let t = TridiagonalMatrix::path_laplacian(3).unwrap();
    let m = syncforge::synthesis::SymmetricFeasibility::matrix(x, y);
    let dev = t.diag().iter().chain(t.sub()).zip(m.diag().iter().chain(m.sub())).fold(0.0_f64, |a, (p, q)| a.max((p - q).abs()));
    check(dev < 1e-9, || format!("(1,3) matrix differs from T by {dev:e}"))?;
    let infeasible = symmetric_3x3_feasible(1.0, 2.0).map_err(|e| e.to_string())?;
    check(!infeasible.feasible, || "(1,2) reported feasible".into())?;
    Ok("(1,3) feasible with x = y = 1, (1,2) infeasible".into())
}

fn criterion_5() -> Outcome {
    let vdp = OscillatorModel::van_der_pol();
    let settings = LyapunovSettings::van_der_pol();
    let grid = eta_grid(0.0, 0.6, 0.01).map_err(|e| e.to_string())?;
    let curve = msf_scan(&vdp, &grid, &settings).map_err(|e| e.to_string())?;
    check(curve.failed.is_empty(), || format!("{} grid points failed", curve.failed.len()))?;
    let last = *grid.last().unwrap();
    let tail = curve
        .negative_intervals
        .iter()
        .find(|iv| iv.hi == last)
        .ok_or_else(|| format!("MSF not negative at η = {last}: intervals {:?}", curve.negative_intervals))?;
    let at_one = largest_lyapunov(&vdp, 1.0, &settings).map_err(|e| e.to_string())?.exponent;
    check((tail.lo - 0.39).abs() <= 0.05, || format!("sign change at η = {:.4}", tail.lo))?;
    check((at_one + 0.13).abs() <= 0.03, || format!("MSF(1) = {at_one:.4}"))?;
    Ok(format!("sign change at η = {:.4}, MSF(1) = {at_one:.4}", tail.lo))
}

fn criterion_6() -> Outcome {
    let r = OscillatorModel::rossler();
    let grid = eta_grid(0.0, 5.0, 0.05).map_err(|e| e.to_string())?;
    let curve = msf_scan(&r, &grid, &LyapunovSettings::rossler()).map_err(|e| e.to_string())?;
    check(curve.failed.is_empty(), || format!("{} grid points failed", curve.failed.len()))?;
    let widest: Interval = curve
        .negative_intervals
        .iter()
        .copied()
        .max_by(|a, b| (a.hi - a.lo).total_cmp(&(b.hi - b.lo)))
        .ok_or("no negative interval")?;
    let ok = (widest.lo - 0.19).abs() <= 0.1 && (widest.hi - 4.61).abs() <= 0.2;
    let msg = format!("negative on [{:.3}, {:.3}] (all intervals {:?})", widest.lo, widest.hi, curve.negative_intervals);
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_7() -> Outcome {
    let n = 32;
    let vdp = OscillatorModel::van_der_pol();
    let spec = place_eigenvalues(Placement::Linear, 1.0, 10.0, n - 1).map_err(|e| e.to_string())?;
    let (l, _) = synthesize(&spec).map_err(|e| e.to_string())?;
    let sys = NetworkSystem::new(vdp.clone(), l.into_matrix()).map_err(|e| e.to_string())?;
    let point = attractor_warmup(&vdp, vdp.initial_state(), vdp.warmup_time(), 1e-3).map_err(|e| e.to_string())?;
    let x0 = perturbed_sync_ic(&point, n, 1.0, 1).map_err(|e| e.to_string())?;
    let sim = simulate_network(&sys, &x0, &SimulationOptions::new(1e-3, 300.0, 100)).map_err(|e| e.to_string())?;
    check(sim.blowup.is_none(), || format!("blow-up {:?}", sim.blowup))?;
    let s = &sim.series;
    let hit = s.times.iter().zip(&s.sync_error).find(|(_, e)| **e < 1e-8).map(|(t, _)| *t);
    let fit = fit_decay_rate(&s.times, &s.sync_error).ok_or("no decay window")?;
    let msg = format!("sync error < 1e-8 at t = {hit:?}, fitted rate {:.4}", fit.rate);
    check(hit.is_some_and(|t| t < 300.0), || msg.clone())?;
    check((fit.rate + 0.13).abs() <= 0.05, || msg.clone())?;
    Ok(msg)
}

fn criterion_8() -> Outcome {
    let iv = Interval { lo: 0.19, hi: 4.61 };
    let seven = diffusive_feasibility(iv, 7).map_err(|e| e.to_string())?;
    let eight = diffusive_feasibility(iv, 8).map_err(|e| e.to_string())?;
    check(seven.feasible && !eight.feasible, || format!("N=7 {}, N=8 {}", seven.feasible, eight.feasible))?;
    Ok(format!("N=7 feasible (ratio {:.2}), N=8 infeasible (ratio {:.2}), bound {:.2}", seven.ratio, eight.ratio, seven.bound))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = 0.0_f64;
    for i in 0..50 {
        let model = if i % 2 == 0 { OscillatorModel::van_der_pol() } else { OscillatorModel::rossler() };
        let n = rng.random_range(2..=8);
        let sub: Vec<f64> = (0..n - 1).map(|_| -rng.random_range(0.1..5.0)).collect();
        let sup: Vec<f64> = (0..n - 1).map(|_| -rng.random_range(0.1..5.0)).collect();
        let diag: Vec<f64> = (0..n)
            .map(|k| -(if k > 0 { sub[k - 1] } else { 0.0 }) - (if k + 1 < n { sup[k] } else { 0.0 }))
            .collect();
        let l = TridiagonalMatrix::new(diag, sub, sup).map_err(|e| e.to_string())?;
        let sys = NetworkSystem::new(model.clone(), l.clone()).map_err(|e| e.to_string())?;
        let d = model.dim();
        let x: Vec<f64> = (0..n * d).map(|_| rng.random_range(-2.0..2.0)).collect();
        let got = sys.network_rhs(&x).map_err(|e| e.to_string())?;
        let coupling = l.to_dense().kron(model.coupling()).mul_vec(&x);
        for a in 0..n {
            let f = model.eval(&x[a * d..(a + 1) * d]);
            for k in 0..d {
                worst = worst.max((got[a * d + k] - (f[k] - coupling[a * d + k])).abs());
            }
        }
    }
    check(worst <= 1e-13, || format!("structured vs dense deviation {worst:e}"))?;

    let err = |h: f64| {
        let steps = (1.0 / h).round() as usize;
        let x = rk4_integrate(|x, o| o[0] = -x[0], &[1.0], h, steps, steps, |_, _, _| {}).unwrap();
        (x[0] - (-1.0f64).exp()).abs()
    };
    let factor = err(0.1) / err(0.05);
    check((12.0..=20.0).contains(&factor), || format!("RK4 error ratio {factor:.2}"))?;
    Ok(format!("50 instances, worst deviation {worst:.1e}; RK4 halving factor {factor:.2}"))
}

fn criterion_10() -> Outcome {
    let n = 128;
    let vdp = OscillatorModel::van_der_pol();
    let point = attractor_warmup(&vdp, vdp.initial_state(), vdp.warmup_time(), 1e-3).map_err(|e| e.to_string())?;
    let x0 = perturbed_sync_ic(&point, n, 1.0, 1).map_err(|e| e.to_string())?;
    let spec = place_eigenvalues(Placement::Chebyshev, 1.0, 50.0, n - 1).map_err(|e| e.to_string())?;
    let (l, report) = synthesize(&spec).map_err(|e| e.to_string())?;
    check(report.max_entry < 27.0, || format!("max entry {}", report.max_entry))?;
    let mut finals = Vec::new();
    for (label, m) in [("chebyshev [1,50]", l.into_matrix()), ("bidiagonal λ=2", bidiagonal_optimal_laplacian(2.0, n).unwrap())] {
        let sys = NetworkSystem::new(vdp.clone(), m).map_err(|e| e.to_string())?;
        let sim = simulate_network(&sys, &x0, &SimulationOptions::new(1e-3, 300.0, 1000)).map_err(|e| e.to_string())?;
        check(sim.blowup.is_none(), || format!("{label}: blow-up {:?}", sim.blowup))?;
        finals.push(format!("{label}: final sync error {:.1e}", sim.series.sync_error.last().unwrap()));
    }
    Ok(format!("N = 128 smoke runs completed without blow-up ({})", finals.join("; ")))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("inverse eigenvalue round trip", criterion_1),
        ("structural lemmas on diag2trid", criterion_2),
        ("closed-form diffusive spectrum", criterion_3),
        ("3x3 symmetric feasibility", criterion_4),
        ("van der Pol MSF", criterion_5),
        ("Rossler MSF interval", criterion_6),
        ("van der Pol N=32 network", criterion_7),
        ("Rossler diffusive feasibility", criterion_8),
        ("Kronecker equivalence and RK4 order", criterion_9),
        ("N=128 smoke run", criterion_10),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = i + 1;
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let result = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = fmt_secs(start.elapsed());
        match result {
            Ok(msg) => println!("criterion {id:>2} PASS  {name} [{secs}]: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name} [{secs}]: {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}

fn fmt_secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}
