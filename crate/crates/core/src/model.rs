//! Physical parameters, thermal photon statistics and the two-atom X state.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, DynError, Result};

/// Default probability mass allowed beyond the truncation index.
pub const DEFAULT_EPSILON_TAIL: f64 = 1e-12;

/// Largest admissible deviation of a reduced state's trace from one.
pub const TRACE_TOLERANCE: f64 = 1e-9;

/// Slack allowed on positivity and population bounds.
pub const POSITIVITY_TOLERANCE: f64 = 1e-9;

/// Parameters of one (symmetric) atom-cavity pair.
///
/// The atomic velocity is fixed to `v = g L / pi`, so the mode-shape integral
/// depends only on `g t` and `p`; neither `v` nor `L` is stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub g: f64,
    pub omega_c: f64,
    pub omega_0: f64,
    pub delta: f64,
    pub p: u32,
    pub motion_enabled: bool,
}

impl SystemParams {
    /// Builds parameters from the cavity and atomic frequencies; the detuning
    /// is `omega_0 - omega_c`.
    pub fn from_frequencies(g: f64, omega_c: f64, omega_0: f64, p: u32, motion_enabled: bool) -> Result<Self> {
        Self::validate(g, p)?;
        if !omega_c.is_finite() || !omega_0.is_finite() {
            return Err(invalid("omega", "frequencies must be finite"));
        }
        Ok(Self { g, omega_c, omega_0, delta: omega_0 - omega_c, p, motion_enabled })
    }

    /// Builds parameters in units where `omega_0 = 1`. The detuning is stored
    /// exactly as given and `omega_c = 1 - delta`.
    pub fn with_detuning(g: f64, delta: f64, p: u32, motion_enabled: bool) -> Result<Self> {
        Self::validate(g, p)?;
        if !delta.is_finite() {
            return Err(invalid("delta", "detuning must be finite"));
        }
        Ok(Self { g, omega_c: 1.0 - delta, omega_0: 1.0, delta, p, motion_enabled })
    }

    /// Resonant parameters with unit coupling and moving atoms.
    pub fn resonant(p: u32) -> Self {
        Self::with_detuning(1.0, 0.0, p, true).expect("p >= 1 and g = 1 are valid")
    }

    fn validate(g: f64, p: u32) -> Result<()> {
        if !(g.is_finite() && g > 0.0) {
            return Err(invalid("g", format!("coupling must be positive and finite, got {g}")));
        }
        if p == 0 {
            return Err(invalid("p", "mode structure parameter must be >= 1"));
        }
        Ok(())
    }

    pub fn is_resonant(&self) -> bool {
        self.delta == 0.0
    }

    /// Physical time corresponding to a dimensionless time `g t`.
    pub fn time_from_gt(&self, gt: f64) -> f64 {
        gt / self.g
    }
}

/// Geometric photon-number distribution of a single-mode thermal field,
/// truncated so that the discarded tail carries at most `epsilon_tail`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalDistribution {
    pub mean_photons: f64,
    pub n_max: usize,
    pub epsilon_tail: f64,
}

impl ThermalDistribution {
    pub fn new(mean_photons: f64, epsilon_tail: f64) -> Result<Self> {
        if !(mean_photons.is_finite() && mean_photons >= 0.0) {
            return Err(invalid("mean_photons", format!("must be finite and >= 0, got {mean_photons}")));
        }
        if !(epsilon_tail > 0.0 && epsilon_tail < 1.0) {
            return Err(invalid("epsilon_tail", format!("must lie in (0, 1), got {epsilon_tail}")));
        }
        Ok(Self { mean_photons, n_max: truncation_index(mean_photons, epsilon_tail), epsilon_tail })
    }

    pub fn vacuum() -> Self {
        Self { mean_photons: 0.0, n_max: 0, epsilon_tail: DEFAULT_EPSILON_TAIL }
    }

    /// `P_n`; zero for negative `n`.
    pub fn probability(&self, n: i64) -> f64 {
        thermal_probability(self.mean_photons, n)
    }

    /// `P_0 ..= P_{n_max}`.
    pub fn weights(&self) -> Vec<f64> {
        (0..=self.n_max as i64).map(|n| self.probability(n)).collect()
    }

    /// Exact mass of the discarded tail, `(k / (k + 1))^(n_max + 1)`.
    pub fn tail_mass(&self) -> f64 {
        if self.mean_photons == 0.0 {
            return 0.0;
        }
        let ratio = self.mean_photons / (self.mean_photons + 1.0);
        ratio.powf(self.n_max as f64 + 1.0)
    }
}

/// `P_n = k^n / (k + 1)^(n + 1)` with `P_n = 0` for `n < 0`.
pub fn thermal_probability(mean: f64, n: i64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    if mean == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let ratio = mean / (mean + 1.0);
    ratio.powf(n as f64) / (mean + 1.0)
}

/// Smallest `N` with `(k / (k + 1))^(N + 1) <= epsilon`.
pub fn truncation_index(mean: f64, epsilon: f64) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    let ratio = mean / (mean + 1.0);
    let estimate = (epsilon.ln() / ratio.ln()).ceil() - 1.0;
    let mut n = estimate.max(0.0) as usize;
    // the log estimate can be off by one ulp-sized step either way
    while n > 0 && ratio.powf(n as f64) <= epsilon {
        n -= 1;
    }
    while ratio.powf(n as f64 + 1.0) > epsilon {
        n += 1;
    }
    n
}

/// Bose occupation `1 / (exp(omega_c / T) - 1)` of a mode at temperature `T`.
pub fn mean_photons_from_temperature(omega_c: f64, temperature: f64) -> Result<f64> {
    if !(temperature > 0.0) {
        return Err(invalid("temperature", format!("must be > 0, got {temperature}")));
    }
    if !(omega_c > 0.0) {
        return Err(invalid("omega_c", format!("must be > 0, got {omega_c}")));
    }
    Ok(1.0 / (omega_c / temperature).exp_m1())
}

/// Reduced two-atom state in the basis `|gg>, |ge>, |eg>, |ee>`.
///
/// Only the X-shaped entries are nonzero: four populations and the single
/// coherence `x3 = <ge|rho|eg>`; `x4 = conj(x3)` is implied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomicDensityMatrix {
    pub x1: f64,
    pub x2: f64,
    pub x3: Complex64,
    pub x5: f64,
    pub x6: f64,
}

impl AtomicDensityMatrix {
    /// Validating constructor: trace within [`TRACE_TOLERANCE`], populations in
    /// `[0, 1]` and `|x3|^2 <= x2 x5` within [`POSITIVITY_TOLERANCE`].
    pub fn new(x1: f64, x2: f64, x3: Complex64, x5: f64, x6: f64) -> Result<Self> {
        let rho = Self { x1, x2, x3, x5, x6 };
        rho.check()?;
        Ok(rho)
    }

    /// The initial Bell state `(|eg> + |ge>) / sqrt 2`.
    pub fn bell() -> Self {
        Self { x1: 0.0, x2: 0.5, x3: Complex64::new(0.5, 0.0), x5: 0.5, x6: 0.0 }
    }

    pub fn x4(&self) -> Complex64 {
        self.x3.conj()
    }

    pub fn trace(&self) -> f64 {
        self.x1 + self.x2 + self.x5 + self.x6
    }

    pub fn check(&self) -> Result<()> {
        let values = [self.x1, self.x2, self.x3.re, self.x3.im, self.x5, self.x6];
        if values.iter().any(|v| !v.is_finite()) {
            return Err(DynError::NotPositive("non-finite matrix element".into()));
        }
        let deviation = (self.trace() - 1.0).abs();
        if deviation > TRACE_TOLERANCE {
            return Err(DynError::TraceDeviation { deviation, tolerance: TRACE_TOLERANCE });
        }
        for (name, pop) in [("x1", self.x1), ("x2", self.x2), ("x5", self.x5), ("x6", self.x6)] {
            if !(-POSITIVITY_TOLERANCE..=1.0 + POSITIVITY_TOLERANCE).contains(&pop) {
                return Err(DynError::NotPositive(format!("population {name} = {pop} outside [0, 1]")));
            }
        }
        let excess = self.x3.norm_sqr() - self.x2 * self.x5;
        if excess > POSITIVITY_TOLERANCE {
            return Err(DynError::NotPositive(format!("|x3|^2 exceeds x2 x5 by {excess:e}")));
        }
        Ok(())
    }

    /// Eigenvalues of the inner `|ge>, |eg>` block, ascending.
    pub fn inner_block_eigenvalues(&self) -> [f64; 2] {
        let mean = 0.5 * (self.x2 + self.x5);
        let half_gap = (0.25 * (self.x2 - self.x5).powi(2) + self.x3.norm_sqr()).sqrt();
        [mean - half_gap, mean + half_gap]
    }

    /// Dense 4x4 representation.
    pub fn to_matrix(&self) -> nalgebra::Matrix4<Complex64> {
        let zero = Complex64::new(0.0, 0.0);
        let mut m = nalgebra::Matrix4::from_element(zero);
        m[(0, 0)] = self.x1.into();
        m[(1, 1)] = self.x2.into();
        m[(1, 2)] = self.x3;
        m[(2, 1)] = self.x4();
        m[(2, 2)] = self.x5.into();
        m[(3, 3)] = self.x6.into();
        m
    }

    /// Checks that the trace of a state built from truncated thermal weights
    /// is within [`TRACE_TOLERANCE`] of one, then rescales it to unit trace and
    /// validates it.
    pub fn renormalized(x1: f64, x2: f64, x3: Complex64, x5: f64, x6: f64) -> Result<Self> {
        let trace = x1 + x2 + x5 + x6;
        let deviation = (trace - 1.0).abs();
        if !(deviation <= TRACE_TOLERANCE) {
            return Err(DynError::TraceDeviation { deviation, tolerance: TRACE_TOLERANCE });
        }
        Self::new(x1 / trace, x2 / trace, x3 / trace, x5 / trace, x6 / trace)
    }

    /// Largest elementwise magnitude of the difference between two states.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            (self.x1 - other.x1).abs(),
            (self.x2 - other.x2).abs(),
            (self.x3 - other.x3).norm(),
            (self.x5 - other.x5).abs(),
            (self.x6 - other.x6).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}
