//! Motion-averaged coupling and the dressed (Rabi) parameters of each
//! excitation sector.

use serde::{Deserialize, Serialize};

use crate::error::{DynError, Result};
use crate::model::SystemParams;

/// Instantaneous effective coupling `g'` at time `t`, together with the
/// accumulated coupling area `g' t` that sets the Rabi phases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveCoupling {
    pub g_eff: f64,
    /// `g' t`; equals `[1 - cos(p g t)] / p` for moving atoms.
    pub area: f64,
}

/// `g' = g alpha / t` with `alpha = [1 - cos(p g t)] / (p g)`; `g' = g` when
/// the atomic motion is switched off.
pub fn effective_coupling(params: &SystemParams, t: f64) -> Result<EffectiveCoupling> {
    if t < 0.0 || t.is_nan() {
        return Err(DynError::NegativeTime(t));
    }
    if !params.motion_enabled {
        return Ok(EffectiveCoupling { g_eff: params.g, area: params.g * t });
    }
    if t == 0.0 {
        return Ok(EffectiveCoupling { g_eff: 0.0, area: 0.0 });
    }
    let p = f64::from(params.p);
    // 1 - cos(x) = 2 sin^2(x / 2), without the cancellation near x = 0
    let half = 0.5 * p * params.g * t;
    let area = 2.0 * half.sin().powi(2) / p;
    Ok(EffectiveCoupling { g_eff: area / t, area })
}

/// Generalized Rabi frequency and mixing angle of the sector with `n`
/// excitations, `{|e, n-1>, |g, n>}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DressedParams {
    pub lambda_n: f64,
    pub sin2theta: f64,
    pub cos2theta: f64,
}

/// Dressed parameters for excitation number `n`.
///
/// `lambda_n = sqrt(delta^2 + 4 g'^2 n)` and
/// `theta_n = -arctan[(sqrt(delta^2/4 + g'^2 n) - delta/2) / (g' sqrt n)]`.
/// The `n = 0` sector is the lone state `|g, 0>`: it does not mix, so
/// `sin 2theta = 0` and `cos 2theta` carries the sign of the detuning.
pub fn dressed_params(g_eff: f64, delta: f64, n: usize) -> DressedParams {
    let nf = n as f64;
    let lambda_n = (delta * delta + 4.0 * g_eff * g_eff * nf).sqrt();
    if n == 0 || g_eff == 0.0 {
        let cos2theta = if delta < 0.0 { -1.0 } else { 1.0 };
        if delta == 0.0 && n > 0 {
            // zero coupling at resonance: lambda = 0, the angle is immaterial
            return DressedParams { lambda_n, sin2theta: -1.0, cos2theta: 0.0 };
        }
        return DressedParams { lambda_n, sin2theta: 0.0, cos2theta };
    }
    let coupling = g_eff * nf.sqrt();
    let radius = (0.25 * delta * delta + coupling * coupling).sqrt();
    // radius - delta/2, rewritten to avoid cancellation when delta >> g'
    let numerator = if delta > 0.0 {
        coupling * coupling / (radius + 0.5 * delta)
    } else {
        radius - 0.5 * delta
    };
    let theta = -(numerator / coupling).atan();
    let (sin2theta, cos2theta) = (2.0 * theta).sin_cos();
    DressedParams { lambda_n, sin2theta, cos2theta }
}
