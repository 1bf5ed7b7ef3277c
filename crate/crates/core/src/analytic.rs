//! Closed-form reduced state of the two atoms.
//!
//! Each pure branch `(|e,n; g,m> + |g,n; e,m>) / sqrt 2` of the initial
//! mixture evolves under `U_A (x) U_B`, and a single-atom evolution maps
//!
//! ```text
//! |e, n>  ->  A_n |e, n> + B_n |g, n+1>
//! |g, n>  ->  C_n |g, n> + D_n |e, n-1>
//! ```
//!
//! with `|A_n|^2 = c_{n+1}`, `|B_n|^2 = s_{n+1}`, `|C_n|^2 = c_n`,
//! `|D_n|^2 = s_n` and `C_n conj(A_n) = z_n z_{n+1}`, where for the sector
//! with `n` excitations
//!
//! ```text
//! s_n = sin^2(lambda_n t/2) sin^2(2 theta_n)
//! c_n = cos^2(lambda_n t/2) + sin^2(lambda_n t/2) cos^2(2 theta_n)
//! z_n = cos(lambda_n t/2) + i sin(lambda_n t/2) cos(2 theta_n)
//! ```
//!
//! After the field trace every element is a sum of two products of a pure
//! cavity-a sum and a pure cavity-b sum, so an element costs `O(n_max)`
//! instead of `O(n_max^2)`.

use num_complex::Complex64;

use crate::coupling::{dressed_params, effective_coupling, EffectiveCoupling};
use crate::error::{DynError, Result};
use crate::model::{AtomicDensityMatrix, SystemParams, ThermalDistribution};

/// Per-index factors `s_n`, `c_n`, `z_n` for `n = 0 ..= n_max + 1`, plus the
/// thermal weights `P_0 ..= P_{n_max}`.
#[derive(Debug, Clone)]
pub struct SumFactorCache {
    pub weights: Vec<f64>,
    pub transfer: Vec<f64>,
    pub survival: Vec<f64>,
    pub phase: Vec<Complex64>,
}

impl SumFactorCache {
    /// Factors for an arbitrary detuning at coupling `g_eff` and time `t`.
    pub fn general(dist: &ThermalDistribution, g_eff: f64, delta: f64, t: f64) -> Self {
        let len = dist.n_max + 2;
        let mut transfer = Vec::with_capacity(len);
        let mut survival = Vec::with_capacity(len);
        let mut phase = Vec::with_capacity(len);
        for n in 0..len {
            let d = dressed_params(g_eff, delta, n);
            let (sin, cos) = (0.5 * d.lambda_n * t).sin_cos();
            let sin_sq = sin * sin;
            transfer.push(sin_sq * d.sin2theta * d.sin2theta);
            survival.push(cos * cos + sin_sq * d.cos2theta * d.cos2theta);
            phase.push(Complex64::new(cos, sin * d.cos2theta));
        }
        Self { weights: dist.weights(), transfer, survival, phase }
    }

    /// Factors at zero detuning, where `lambda_n t / 2 = g' t sqrt(n)`,
    /// `sin 2theta = -1` and `cos 2theta = 0`.
    pub fn resonant(dist: &ThermalDistribution, area: f64) -> Self {
        let len = dist.n_max + 2;
        let mut transfer = Vec::with_capacity(len);
        let mut survival = Vec::with_capacity(len);
        let mut phase = Vec::with_capacity(len);
        for n in 0..len {
            let (sin, cos) = (area * (n as f64).sqrt()).sin_cos();
            transfer.push(sin * sin);
            survival.push(cos * cos);
            phase.push(Complex64::new(cos, 0.0));
        }
        Self { weights: dist.weights(), transfer, survival, phase }
    }

    /// Thermal averages over one cavity, summed from `n_max` down to 0.
    pub fn side_sums(&self) -> SideSums {
        let mut sums = SideSums::default();
        for n in (0..self.weights.len()).rev() {
            let w = self.weights[n];
            sums.emit += w * self.transfer[n + 1];
            sums.keep_excited += w * self.survival[n + 1];
            sums.keep_ground += w * self.survival[n];
            sums.absorb += w * self.transfer[n];
            sums.coherence += w * self.phase[n] * self.phase[n + 1];
        }
        sums
    }
}

/// Thermal averages of the single-atom transition probabilities and of the
/// coherence factor for one atom-cavity pair.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SideSums {
    /// `sum P_n |B_n|^2`: excited atom emits into the cavity.
    pub emit: f64,
    /// `sum P_n |A_n|^2`
    pub keep_excited: f64,
    /// `sum P_n |C_n|^2`
    pub keep_ground: f64,
    /// `sum P_n |D_n|^2`: ground atom absorbs a cavity photon.
    pub absorb: f64,
    /// `sum P_n C_n conj(A_n)`
    pub coherence: Complex64,
}

/// Combines the two cavity averages into the X-state elements.
pub fn combine(a: &SideSums, b: &SideSums) -> (f64, f64, Complex64, f64, f64) {
    let x1 = 0.5 * (a.emit * b.keep_ground + a.keep_ground * b.emit);
    let x2 = 0.5 * (a.emit * b.absorb + a.keep_ground * b.keep_excited);
    let x3 = 0.5 * a.coherence * b.coherence.conj();
    let x5 = 0.5 * (a.keep_excited * b.keep_ground + a.absorb * b.emit);
    let x6 = 0.5 * (a.keep_excited * b.absorb + a.absorb * b.keep_excited);
    (x1, x2, x3, x5, x6)
}

fn assemble(a: &SumFactorCache, b: &SumFactorCache) -> Result<AtomicDensityMatrix> {
    let (x1, x2, x3, x5, x6) = combine(&a.side_sums(), &b.side_sums());
    AtomicDensityMatrix::renormalized(x1, x2, x3, x5, x6)
}

/// Reduced two-atom state at time `t` for arbitrary detuning.
pub fn density_matrix(
    params: &SystemParams,
    dist_a: &ThermalDistribution,
    dist_b: &ThermalDistribution,
    t: f64,
) -> Result<AtomicDensityMatrix> {
    let EffectiveCoupling { g_eff, .. } = effective_coupling(params, t)?;
    let a = SumFactorCache::general(dist_a, g_eff, params.delta, t);
    let b = SumFactorCache::general(dist_b, g_eff, params.delta, t);
    assemble(&a, &b)
}

/// Reduced two-atom state at time `t` on exact resonance.
pub fn density_matrix_resonant(
    params: &SystemParams,
    dist_a: &ThermalDistribution,
    dist_b: &ThermalDistribution,
    t: f64,
) -> Result<AtomicDensityMatrix> {
    if !params.is_resonant() {
        return Err(DynError::NotResonant(params.delta));
    }
    let EffectiveCoupling { area, .. } = effective_coupling(params, t)?;
    let a = SumFactorCache::resonant(dist_a, area);
    let b = SumFactorCache::resonant(dist_b, area);
    assemble(&a, &b)
}

/// Resonant fast path when `delta == 0`, general path otherwise.
pub fn evaluate(
    params: &SystemParams,
    dist_a: &ThermalDistribution,
    dist_b: &ThermalDistribution,
    t: f64,
) -> Result<AtomicDensityMatrix> {
    if params.is_resonant() {
        density_matrix_resonant(params, dist_a, dist_b, t)
    } else {
        density_matrix(params, dist_a, dist_b, t)
    }
}
