//! Concurrence, purity and energy of the two-atom X state.

use serde::{Deserialize, Serialize};

use crate::model::AtomicDensityMatrix;

/// One sample of the entanglement-purity-energy trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpePoint {
    pub gt: f64,
    pub concurrence: f64,
    pub purity: f64,
    pub energy: f64,
}

/// X-state concurrence `2 max{0, |x3| - sqrt(x1 x6)}`.
pub fn concurrence(rho: &AtomicDensityMatrix) -> f64 {
    let outer = (rho.x1.max(0.0) * rho.x6.max(0.0)).sqrt();
    2.0 * (rho.x3.norm() - outer).max(0.0)
}

/// `Tr(rho^2)`.
pub fn purity(rho: &AtomicDensityMatrix) -> f64 {
    rho.x1 * rho.x1 + rho.x2 * rho.x2 + rho.x5 * rho.x5 + rho.x6 * rho.x6 + 2.0 * rho.x3.norm_sqr()
}

/// Atomic energy `x6 - x1` in units of the transition frequency.
pub fn energy(rho: &AtomicDensityMatrix) -> f64 {
    rho.x6 - rho.x1
}

pub fn epe_point(rho: &AtomicDensityMatrix, gt: f64) -> EpePoint {
    EpePoint { gt, concurrence: concurrence(rho), purity: purity(rho), energy: energy(rho) }
}
