//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits nonzero if any fails.

use std::f64::consts::TAU;
use std::process::Command;

use jcdyn::oracle::{oracle_joint_density, wootters_concurrence_general};
use jcdyn::sweep::{time_series, TimeSeries, DEATH_THRESHOLD};
use jcdyn::{
    concurrence, density_matrix, effective_coupling, energy, epe_point, purity, AtomicDensityMatrix, SystemParams,
    ThermalDistribution,
};

const EPSILON_TAIL: f64 = 1e-12;
const GT_MAX: f64 = 25.0;
const STEPS: usize = 2000;

const ORACLE_TOLERANCE: f64 = 1e-9;
const TRACE_TOLERANCE: f64 = 1e-9;
const POSITIVITY_TOLERANCE: f64 = 1e-9;
const HERMITICITY_TOLERANCE: f64 = 1e-12;
const VACUUM_TOLERANCE: f64 = 1e-12;
const PERIOD_TOLERANCE: f64 = 1e-10;
const MAX_CONCURRENCE_SPREAD: f64 = 2e-3;
const DETUNED_MIN_CONCURRENCE: f64 = 0.85;
const DETUNED_MIN_PURITY: f64 = 0.83;
const DETUNED_MAX_ABS_ENERGY: f64 = 0.1;
const SETTLE_LEVEL: f64 = 0.99;
const EPE_MIN_ENERGY: f64 = -0.7;
const EPE_MIN_ENERGY_TOLERANCE: f64 = 0.05;
const NEAR_MAXIMAL_CONCURRENCE: f64 = 0.999;
const NEAR_MAXIMAL_PURITY: f64 = 0.998;
const NEAR_MAXIMAL_ABS_ENERGY: f64 = 0.01;
const X_STRUCTURE_TOLERANCE: f64 = 1e-12;
const WOOTTERS_TOLERANCE: f64 = 1e-10;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn dist(mean: f64) -> ThermalDistribution {
    ThermalDistribution::new(mean, EPSILON_TAIL).unwrap()
}

fn params(p: u32, delta: f64) -> SystemParams {
    SystemParams::with_detuning(1.0, delta, p, true).unwrap()
}

fn series(p: u32, mean: f64, delta: f64) -> TimeSeries {
    let d = dist(mean);
    time_series(&params(p, delta), &d, &d, GT_MAX, STEPS).unwrap()
}

fn extrema(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// The shared grid: p x symmetric mean x detuning x 50 times in [0, 25].
fn grid() -> Vec<(u32, f64, f64, f64)> {
    let mut out = Vec::new();
    for p in [1, 4] {
        for mean in [0.0, 0.1, 0.5] {
            for delta in [0.0, 1.0, 5.0] {
                for i in 0..50 {
                    out.push((p, mean, delta, GT_MAX * f64::from(i) / 49.0));
                }
            }
        }
    }
    out
}

fn oracle_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    for (p, mean, delta, gt) in grid() {
        let (pr, d) = (params(p, delta), dist(mean));
        let a = density_matrix(&pr, &d, &d, gt).map_err(|e| e.to_string())?;
        let o = oracle_joint_density(&pr, &d, &d, gt).and_then(|j| j.to_x_state()).map_err(|e| e.to_string())?;
        worst = worst.max(a.max_abs_diff(&o));
    }
    let detail = format!("max |rho_analytic - rho_oracle| = {worst:e} (tolerance {ORACLE_TOLERANCE:e})");
    if worst <= ORACLE_TOLERANCE { Ok(detail) } else { Err(detail) }
}

fn invariant_suite() -> Outcome {
    let (mut trace, mut herm, mut min_eig) = (0.0f64, 0.0f64, f64::INFINITY);
    let mut violations = Vec::new();
    for (p, mean, delta, gt) in grid() {
        let (pr, d) = (params(p, delta), dist(mean));
        let rho = density_matrix(&pr, &d, &d, gt).map_err(|e| e.to_string())?;
        let joint = oracle_joint_density(&pr, &d, &d, gt).map_err(|e| e.to_string())?;
        trace = trace.max((rho.trace() - 1.0).abs());
        herm = herm.max(joint.hermiticity_error());
        min_eig = min_eig.min(rho.inner_block_eigenvalues()[0]).min(rho.x1).min(rho.x6).min(joint.min_eigenvalue());
        let e = epe_point(&rho, gt);
        if !(0.0..=1.0).contains(&e.concurrence) || !(0.25..=1.0).contains(&e.purity) || !(-1.0..=1.0).contains(&e.energy) {
            violations.push(format!("p={p} k={mean} delta={delta} gt={gt}: {e:?}"));
        }
    }
    let detail = format!(
        "trace dev {trace:e}, hermiticity {herm:e}, min eigenvalue {min_eig:e}, {} range violations",
        violations.len()
    );
    let ok = trace <= TRACE_TOLERANCE
        && herm <= HERMITICITY_TOLERANCE
        && min_eig >= -POSITIVITY_TOLERANCE
        && violations.is_empty();
    if ok { Ok(detail) } else { Err(format!("{detail}; {}", violations.join("; "))) }
}

fn vacuum_closed_forms() -> Outcome {
    let pr = params(1, 0.0);
    let vac = dist(0.0);
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let gt = GT_MAX * f64::from(i) / 999.0;
        let (s, c) = effective_coupling(&pr, gt).unwrap().area.sin_cos();
        let expected = [c * c, s.powi(4) + c.powi(4), -s * s];
        let analytic = density_matrix(&pr, &vac, &vac, gt).map_err(|e| e.to_string())?;
        let oracle = oracle_joint_density(&pr, &vac, &vac, gt).and_then(|j| j.to_x_state()).map_err(|e| e.to_string())?;
        for rho in [analytic, oracle] {
            let got = [concurrence(&rho), purity(&rho), energy(&rho)];
            for (g, x) in got.iter().zip(expected) {
                worst = worst.max((g - x).abs());
            }
        }
    }
    let detail = format!("1000 times, analytic and oracle, max deviation {worst:e} (tolerance {VACUUM_TOLERANCE:e})");
    if worst <= VACUUM_TOLERANCE { Ok(detail) } else { Err(detail) }
}

fn periodicity() -> Outcome {
    let observables = |rho: &AtomicDensityMatrix| [concurrence(rho), purity(rho), energy(rho)];
    let shifted_dev = |p: u32, mean: f64, shift: f64| -> f64 {
        let (pr, d) = (params(p, 0.0), dist(mean));
        let mut worst = 0.0f64;
        for i in 0..=200 {
            let gt = GT_MAX * f64::from(i) / 200.0;
            let a = observables(&density_matrix(&pr, &d, &d, gt).unwrap());
            let b = observables(&density_matrix(&pr, &d, &d, gt + shift).unwrap());
            for (x, y) in a.iter().zip(b) {
                worst = worst.max((x - y).abs());
            }
        }
        worst
    };
    let mut worst = 0.0f64;
    let mut estimates = Vec::new();
    for p in 1..=4u32 {
        for mean in [0.1, 0.5] {
            worst = worst.max(shifted_dev(p, mean, TAU / f64::from(p)));
        }
        estimates.push(series(p, 0.1, 0.0).first_return());
    }
    let spacing = GT_MAX / STEPS as f64;
    let scaling_ok = estimates
        .iter()
        .zip(1..=4u32)
        .all(|(e, p)| e.is_some_and(|e| (e - TAU / f64::from(p)).abs() <= 2.0 * spacing));
    let control = shifted_dev(1, 0.1, TAU / 4.0);
    let detail = format!(
        "max deviation under shift 2pi/p {worst:e}, first returns {:?}, non-period shift deviation {control:.3}",
        estimates.iter().map(|e| e.map(|v| (v * 1e4).round() / 1e4)).collect::<Vec<_>>()
    );
    if worst <= PERIOD_TOLERANCE && scaling_ok && control > 1e-3 { Ok(detail) } else { Err(detail) }
}

fn mode_structure() -> Outcome {
    let s1 = series(1, 0.1, 0.0);
    let s4 = series(4, 0.1, 0.0);
    let deaths = s1.zero_intervals(DEATH_THRESHOLD);
    let spans = deaths.iter().filter(|(a, b)| b > a).count();
    let (min4, max4) = extrema(s4.epe().map(|e| e.concurrence));
    let (_, max1) = extrema(s1.epe().map(|e| e.concurrence));
    let detail = format!(
        "p=1 death intervals {} (first {:?}), p=4 min C {min4:.4}, |max C(p=1) - max C(p=4)| = {:e}",
        spans,
        deaths.first(),
        (max1 - max4).abs()
    );
    if spans >= 1 && min4 > 0.0 && (max1 - max4).abs() <= MAX_CONCURRENCE_SPREAD { Ok(detail) } else { Err(detail) }
}

fn thermal_strength() -> Outcome {
    let maxima: Vec<[f64; 3]> = [0.1, 0.5, 5.0]
        .iter()
        .map(|&k| {
            let s = series(1, k, 0.0);
            [
                extrema(s.epe().map(|e| e.concurrence)).1,
                extrema(s.epe().map(|e| e.purity)).1,
                extrema(s.epe().map(|e| e.energy)).1,
            ]
        })
        .collect();
    let decreasing = |i: usize| maxima.windows(2).all(|w| w[1][i] < w[0][i]);
    let detail = format!(
        "max C {:?}, max P {:?}, max U {:?} for k = 0.1, 0.5, 5",
        maxima.iter().map(|m| m[0]).collect::<Vec<_>>(),
        maxima.iter().map(|m| m[1]).collect::<Vec<_>>(),
        maxima.iter().map(|m| m[2]).collect::<Vec<_>>()
    );
    if decreasing(0) && decreasing(1) && decreasing(2) { Ok(detail) } else { Err(detail) }
}

fn detuning() -> Outcome {
    let s5 = series(1, 0.1, 5.0);
    let (min_c, _) = extrema(s5.epe().map(|e| e.concurrence));
    let (min_p, _) = extrema(s5.epe().map(|e| e.purity));
    let (_, max_u) = extrema(s5.epe().map(|e| e.energy.abs()));
    let settle: Vec<f64> = [0.1, 1.0, 5.0]
        .iter()
        .map(|&d| series(1, 0.1, d).settle_time(SETTLE_LEVEL).unwrap_or(f64::INFINITY))
        .collect();
    let faster = settle.windows(2).all(|w| w[1] < w[0]);
    let detail = format!(
        "delta=5: min C {min_c:.4}, min P {min_p:.4}, max |U| {max_u:.4}; settle times to C >= {SETTLE_LEVEL} {settle:?}"
    );
    let ok = min_c >= DETUNED_MIN_CONCURRENCE && min_p >= DETUNED_MIN_PURITY && max_u <= DETUNED_MAX_ABS_ENERGY && faster;
    if ok { Ok(detail) } else { Err(detail) }
}

fn epe_trajectory() -> Outcome {
    let s = series(1, 0.1, 0.0);
    let (min_u, _) = extrema(s.epe().map(|e| e.energy));
    let (_, max_abs_u) = extrema(s.epe().map(|e| e.energy.abs()));
    let near: Vec<_> = s.epe().filter(|e| e.concurrence >= NEAR_MAXIMAL_CONCURRENCE).collect();
    let (near_min_p, _) = extrema(near.iter().map(|e| e.purity));
    let (_, near_max_u) = extrema(near.iter().map(|e| e.energy.abs()));
    let min_ok = (min_u - EPE_MIN_ENERGY).abs() <= EPE_MIN_ENERGY_TOLERANCE;
    let near_ok = !near.is_empty() && near_min_p >= NEAR_MAXIMAL_PURITY && near_max_u <= NEAR_MAXIMAL_ABS_ENERGY;
    let bounded = max_abs_u < 1.0 - 1e-9;
    let detail = format!(
        "min U {min_u:.4} (expected {EPE_MIN_ENERGY} +- {EPE_MIN_ENERGY_TOLERANCE}): {}; {} points with C >= {NEAR_MAXIMAL_CONCURRENCE}: min P {near_min_p:.6}, max |U| {near_max_u:.2e}: {}; max |U| {max_abs_u:.4}: {}",
        if min_ok { "ok" } else { "FAIL" },
        near.len(),
        if near_ok { "ok" } else { "FAIL" },
        if bounded { "ok" } else { "FAIL" },
    );
    if min_ok && near_ok && bounded { Ok(detail) } else { Err(detail) }
}

fn x_structure() -> Outcome {
    let (mut off_x, mut wootters) = (0.0f64, 0.0f64);
    for (p, mean, delta, gt) in grid() {
        let (pr, d) = (params(p, delta), dist(mean));
        let joint = oracle_joint_density(&pr, &d, &d, gt).map_err(|e| e.to_string())?;
        off_x = off_x.max(joint.off_x_magnitude());
        let general = wootters_concurrence_general(&joint.matrix).map_err(|e| e.to_string())?;
        let shortcut = concurrence(&joint.to_x_state().map_err(|e| e.to_string())?);
        wootters = wootters.max((general - shortcut).abs());
    }
    let detail = format!("max off-X entry {off_x:e}, max |C_general - C_X| {wootters:e}");
    if off_x <= X_STRUCTURE_TOLERANCE && wootters <= WOOTTERS_TOLERANCE { Ok(detail) } else { Err(detail) }
}

fn cli_contract() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_jcdyn");
    let run = |args: &[&str]| Command::new(bin).args(args).env_remove("JCDYN_EPSILON_TAIL").output().unwrap();
    let mut problems = Vec::new();
    let default = run(&["validate"]);
    if default.status.code() != Some(0) {
        problems.push(format!("default validate exit {:?}", default.status.code()));
    }
    let coarse = run(&["validate", "--p", "1", "--kbar", "5", "--delta", "0", "--epsilon-tail", "1e-2"]);
    if coarse.status.code() != Some(3) {
        problems.push(format!("coarse validate exit {:?}", coarse.status.code()));
    }
    let usage = run(&["validate", "--unknown"]).status.code();
    let io = run(&["timeseries", "--steps", "4", "-o", "/nonexistent-dir/x.csv"]).status.code();
    if usage != Some(1) || io != Some(2) {
        problems.push(format!("usage exit {usage:?}, io exit {io:?}"));
    }
    let args = ["timeseries", "--p", "1", "--kbar", "0.1", "--lbar", "0.1", "--delta", "0", "--steps", "500"];
    let first = run(&args).stdout;
    let second = run(&args).stdout;
    let header = String::from_utf8_lossy(&first).lines().next().unwrap_or_default().to_owned();
    if header != "gt,g_eff,x1,x2,x3_re,x3_im,x5,x6,concurrence,purity,energy" {
        problems.push(format!("header `{header}`"));
    }
    let json_args = ["epe", "--format", "json", "--no-timestamp", "--steps", "500"];
    if first != second || run(&json_args).stdout != run(&json_args).stdout {
        problems.push("repeated runs differ".into());
    }
    let detail = "validate exits 0 and 3, usage 1, io 2, header exact, repeated runs byte-identical".to_string();
    if problems.is_empty() { Ok(detail) } else { Err(problems.join("; ")) }
}

fn main() {
    let criteria: [(&str, Check); 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("invariant suite", invariant_suite),
        ("vacuum closed forms", vacuum_closed_forms),
        ("periodicity", periodicity),
        ("mode structure and sudden death", mode_structure),
        ("thermal strength lowers maxima", thermal_strength),
        ("detuning freezes entanglement", detuning),
        ("entanglement-purity-energy trajectory", epe_trajectory),
        ("X structure and general concurrence", x_structure),
        ("command-line contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
