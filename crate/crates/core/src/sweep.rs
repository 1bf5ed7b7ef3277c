//! Time series, EPE trajectories and multi-configuration scans.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic;
use crate::coupling::effective_coupling;
use crate::error::{invalid, Result};
use crate::model::{AtomicDensityMatrix, SystemParams, ThermalDistribution};
use crate::observables::{epe_point, EpePoint};

/// Concurrence below this value counts as zero.
pub const DEATH_THRESHOLD: f64 = 1e-6;

/// Distance from `(C, P, U) = (1, 1, 0)` that counts as a return to the
/// initial state when estimating the period.
pub const RETURN_TOLERANCE: f64 = 1e-3;

pub const DEFAULT_GT_MAX: f64 = 25.0;
pub const DEFAULT_STEPS: usize = 2000;

/// One evaluated grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub gt: f64,
    pub g_eff: f64,
    pub rho: AtomicDensityMatrix,
    pub epe: EpePoint,
}

/// Observables on the uniform grid `gt_i = i * gt_max / steps`, `i = 0 ..= steps`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub samples: Vec<Sample>,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn epe(&self) -> impl Iterator<Item = &EpePoint> {
        self.samples.iter().map(|s| &s.epe)
    }

    /// Maximal runs of consecutive samples with `C < threshold`, as
    /// `(first gt, last gt)` pairs.
    pub fn zero_intervals(&self, threshold: f64) -> Vec<(f64, f64)> {
        let mut intervals = Vec::new();
        let mut start: Option<f64> = None;
        let mut last = 0.0;
        for s in &self.samples {
            if s.epe.concurrence < threshold {
                start.get_or_insert(s.gt);
                last = s.gt;
            } else if let Some(first) = start.take() {
                intervals.push((first, last));
            }
        }
        if let Some(first) = start {
            intervals.push((first, last));
        }
        intervals
    }

    /// Earliest grid time after which the concurrence stays at or above
    /// `threshold` until the end of the window.
    pub fn settle_time(&self, threshold: f64) -> Option<f64> {
        let last_below = self.samples.iter().rposition(|s| s.epe.concurrence < threshold);
        match last_below {
            None => self.samples.first().map(|s| s.gt),
            Some(i) => self.samples.get(i + 1).map(|s| s.gt),
        }
    }

    /// First grid time after leaving the initial point at which `(C, P, U)`
    /// comes back within [`RETURN_TOLERANCE`] of `(1, 1, 0)`, refined to the
    /// closest sample of that return.
    pub fn first_return(&self) -> Option<f64> {
        let distance = |p: &EpePoint| {
            ((1.0 - p.concurrence).powi(2) + (1.0 - p.purity).powi(2) + p.energy.powi(2)).sqrt()
        };
        let left = self.samples.iter().position(|s| distance(&s.epe) > RETURN_TOLERANCE)?;
        let back = left + self.samples[left..].iter().position(|s| distance(&s.epe) <= RETURN_TOLERANCE)?;
        let end = back + self.samples[back..].iter().position(|s| distance(&s.epe) > RETURN_TOLERANCE).unwrap_or(self.samples.len() - back);
        self.samples[back..end]
            .iter()
            .min_by(|a, b| distance(&a.epe).total_cmp(&distance(&b.epe)))
            .map(|s| s.gt)
    }
}

fn validate_grid(gt_max: f64, steps: usize) -> Result<()> {
    if !(gt_max.is_finite() && gt_max > 0.0) {
        return Err(invalid("gt_max", format!("must be positive, got {gt_max}")));
    }
    if steps < 2 {
        return Err(invalid("steps", format!("must be >= 2, got {steps}")));
    }
    Ok(())
}

/// Evaluates the closed form on the grid, taking the resonant fast path
/// when the detuning is zero. Points are computed in parallel and collected
/// in grid order.
pub fn time_series(
    params: &SystemParams,
    dist_a: &ThermalDistribution,
    dist_b: &ThermalDistribution,
    gt_max: f64,
    steps: usize,
) -> Result<TimeSeries> {
    validate_grid(gt_max, steps)?;
    let samples = (0..=steps)
        .into_par_iter()
        .map(|i| {
            let gt = gt_max * i as f64 / steps as f64;
            let t = params.time_from_gt(gt);
            let rho = analytic::evaluate(params, dist_a, dist_b, t)?;
            let g_eff = effective_coupling(params, t)?.g_eff;
            Ok(Sample { gt, g_eff, rho, epe: epe_point(&rho, gt) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TimeSeries { samples })
}

pub fn epe_trajectory(
    params: &SystemParams,
    dist_a: &ThermalDistribution,
    dist_b: &ThermalDistribution,
    gt_max: f64,
    steps: usize,
) -> Result<Vec<EpePoint>> {
    Ok(time_series(params, dist_a, dist_b, gt_max, steps)?.samples.into_iter().map(|s| s.epe).collect())
}

/// One scanned configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub params: SystemParams,
    pub kbar: f64,
    pub lbar: f64,
    pub epsilon_tail: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extrema {
    pub min: f64,
    pub max: f64,
}

impl Extrema {
    fn of(values: impl Iterator<Item = f64>) -> Self {
        values.fold(Self { min: f64::INFINITY, max: f64::NEG_INFINITY }, |acc, v| Self {
            min: acc.min.min(v),
            max: acc.max.max(v),
        })
    }

    pub fn amplitude(&self) -> f64 {
        self.max - self.min
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: ScanConfig,
    pub concurrence: Extrema,
    pub purity: Extrema,
    pub energy: Extrema,
    /// Sudden-death episodes (`C < DEATH_THRESHOLD`) as `(first, last)` grid times.
    pub death_intervals: Vec<(f64, f64)>,
    /// First return of `(C, P, U)` to the initial point, if any.
    pub period_estimate: Option<f64>,
    /// `2 pi / p` on resonance with moving atoms; `None` otherwise.
    pub expected_period: Option<f64>,
}

impl SweepReport {
    pub fn from_series(config: ScanConfig, series: &TimeSeries) -> Self {
        let p = config.params;
        let expected_period = (p.motion_enabled && p.is_resonant()).then(|| TAU / f64::from(p.p));
        Self {
            config,
            concurrence: Extrema::of(series.epe().map(|e| e.concurrence)),
            purity: Extrema::of(series.epe().map(|e| e.purity)),
            energy: Extrema::of(series.epe().map(|e| e.energy)),
            death_intervals: series.zero_intervals(DEATH_THRESHOLD),
            period_estimate: series.first_return(),
            expected_period,
        }
    }

    /// Whether the estimated period matches `2 pi / p` to within `tolerance`.
    pub fn period_consistent(&self, tolerance: f64) -> Option<bool> {
        Some((self.period_estimate? - self.expected_period?).abs() <= tolerance)
    }
}

/// Runs every configuration on the same grid; reports come back in input order.
pub fn scan(configs: &[ScanConfig], gt_max: f64, steps: usize) -> Result<Vec<SweepReport>> {
    if configs.is_empty() {
        return Err(invalid("configs", "at least one configuration is required"));
    }
    configs
        .iter()
        .map(|config| {
            let dist_a = ThermalDistribution::new(config.kbar, config.epsilon_tail)?;
            let dist_b = ThermalDistribution::new(config.lbar, config.epsilon_tail)?;
            let series = time_series(&config.params, &dist_a, &dist_b, gt_max, steps)?;
            Ok(SweepReport::from_series(*config, &series))
        })
        .collect()
}
