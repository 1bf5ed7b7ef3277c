//! Brute-force reference: propagates state vectors of each atom-cavity pair in
//! a truncated Fock space by numerically diagonalizing every two-level
//! excitation block, then traces out both cavities.
//!
//! Shares nothing with the closed-form path except the parameter types and
//! the frozen effective coupling `g'(t)`.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::coupling::effective_coupling;
use crate::error::{DynError, Result};
use crate::model::{AtomicDensityMatrix, SystemParams, ThermalDistribution, TRACE_TOLERANCE};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Tolerance for hermiticity and X-structure checks on oracle output.
pub const STRUCTURE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Ground,
    Excited,
}

impl Level {
    fn index(self) -> usize {
        match self {
            Level::Ground => 0,
            Level::Excited => 1,
        }
    }
}

/// Propagates the amplitudes of `(|e, n>, |g, n+1>)` for time `t` under the
/// rotating-frame block `[[delta/2, g' sqrt(n+1)], [g' sqrt(n+1), -delta/2]]`.
///
/// The common energy `omega_c (n + 1/2)` of the block is dropped.
pub fn evolve_sector(g_eff: f64, delta: f64, n: usize, t: f64, amplitudes: (Complex64, Complex64)) -> (Complex64, Complex64) {
    let coupling = g_eff * ((n + 1) as f64).sqrt();
    let block = Matrix2::new(0.5 * delta, coupling, coupling, -0.5 * delta);
    let eigen = SymmetricEigen::new(block);
    let v = eigen.eigenvectors;
    let phases = eigen.eigenvalues.map(|e| Complex64::from_polar(1.0, -e * t));
    let (a, b) = amplitudes;
    let proj0 = v[(0, 0)] * a + v[(1, 0)] * b;
    let proj1 = v[(0, 1)] * a + v[(1, 1)] * b;
    (
        v[(0, 0)] * phases[0] * proj0 + v[(0, 1)] * phases[1] * proj1,
        v[(1, 0)] * phases[0] * proj0 + v[(1, 1)] * phases[1] * proj1,
    )
}

/// Amplitudes of one atom-cavity pair over `|g, k>` and `|e, k>`,
/// `k = 0 ..= n_max + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsystemState {
    pub ground: Vec<Complex64>,
    pub excited: Vec<Complex64>,
}

impl SubsystemState {
    /// Basis state `|level, n>` in a space holding photon numbers `0 ..= n_max + 1`.
    pub fn basis(level: Level, n: usize, n_max: usize) -> Self {
        let len = n_max + 2;
        assert!(n < len, "photon number {n} outside the truncated space");
        let mut state = Self { ground: vec![ZERO; len], excited: vec![ZERO; len] };
        match level {
            Level::Ground => state.ground[n] = Complex64::new(1.0, 0.0),
            Level::Excited => state.excited[n] = Complex64::new(1.0, 0.0),
        }
        state
    }

    pub fn norm_sqr(&self) -> f64 {
        self.ground.iter().chain(&self.excited).map(|a| a.norm_sqr()).sum()
    }

    fn amplitudes(&self, level: Level) -> &[Complex64] {
        match level {
            Level::Ground => &self.ground,
            Level::Excited => &self.excited,
        }
    }

    /// Applies the block-diagonal propagator. `|g, 0>` only picks up the
    /// phase `exp(i delta t / 2)`; the topmost excited level has no partner
    /// inside the truncation and must be unpopulated.
    pub fn evolve(&self, g_eff: f64, delta: f64, t: f64) -> Self {
        let len = self.ground.len();
        let mut out = Self { ground: vec![ZERO; len], excited: vec![ZERO; len] };
        out.ground[0] = self.ground[0] * Complex64::from_polar(1.0, 0.5 * delta * t);
        for n in 0..len - 1 {
            let (e, g) = evolve_sector(g_eff, delta, n, t, (self.excited[n], self.ground[n + 1]));
            out.excited[n] = e;
            out.ground[n + 1] = g;
        }
        debug_assert!(self.excited[len - 1] == ZERO, "truncation boundary populated");
        out
    }

    /// `sum_k psi(a, k) conj(phi(a', k))` for every atomic pair `(a, a')`.
    fn field_overlap(&self, other: &Self) -> [[Complex64; 2]; 2] {
        let mut out = [[ZERO; 2]; 2];
        for a in [Level::Ground, Level::Excited] {
            for b in [Level::Ground, Level::Excited] {
                out[a.index()][b.index()] = self
                    .amplitudes(a)
                    .iter()
                    .zip(other.amplitudes(b))
                    .map(|(x, y)| x * y.conj())
                    .sum();
            }
        }
        out
    }
}

/// Full 4x4 two-atom density matrix in the basis `|gg>, |ge>, |eg>, |ee>`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDensity {
    pub matrix: Matrix4<Complex64>,
}

impl JointDensity {
    pub fn zero() -> Self {
        Self { matrix: Matrix4::from_element(ZERO) }
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn hermiticity_error(&self) -> f64 {
        (self.matrix - self.matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest magnitude among entries outside the diagonal and the
    /// `|ge><eg|`, `|eg><ge|` pair.
    pub fn off_x_magnitude(&self) -> f64 {
        let mut max: f64 = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                let on_x = r == c || (r, c) == (1, 2) || (r, c) == (2, 1);
                if !on_x {
                    max = max.max(self.matrix[(r, c)].norm());
                }
            }
        }
        max
    }

    pub fn min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.matrix).eigenvalues.min()
    }

    /// Extracts the X-state elements after checking hermiticity, X structure
    /// and the trace.
    pub fn to_x_state(&self) -> Result<AtomicDensityMatrix> {
        let herm = self.hermiticity_error();
        if herm > STRUCTURE_TOLERANCE {
            return Err(DynError::NotHermitian(herm));
        }
        let off = self.off_x_magnitude();
        if off > STRUCTURE_TOLERANCE {
            return Err(DynError::NotXState(off));
        }
        let m = &self.matrix;
        AtomicDensityMatrix::new(m[(0, 0)].re, m[(1, 1)].re, m[(1, 2)], m[(2, 2)].re, m[(3, 3)].re)
    }
}

/// Initial Bell branch `(|e,n; g,m> + |g,n; e,m>) / sqrt 2`.
pub fn bell_branch() -> [(Complex64, Level, Level); 2] {
    let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [(amp, Level::Excited, Level::Ground), (amp, Level::Ground, Level::Excited)]
}

/// Evolves the pure branch `sum_i c_i |a_i, n; b_i, m>` and returns its
/// field-traced two-atom density matrix (unweighted).
///
/// `n_max_a`, `n_max_b` fix the truncated Fock spaces (`0 ..= n_max + 1`).
pub fn evolve_branch(
    params: &SystemParams,
    terms: &[(Complex64, Level, Level)],
    n: usize,
    m: usize,
    n_max_a: usize,
    n_max_b: usize,
    t: f64,
) -> Result<JointDensity> {
    let g_eff = effective_coupling(params, t)?.g_eff;
    let evolved: Vec<(Complex64, SubsystemState, SubsystemState)> = terms
        .iter()
        .map(|&(c, a, b)| {
            let psi_a = SubsystemState::basis(a, n, n_max_a).evolve(g_eff, params.delta, t);
            let psi_b = SubsystemState::basis(b, m, n_max_b).evolve(g_eff, params.delta, t);
            (c, psi_a, psi_b)
        })
        .collect();

    let mut rho = JointDensity::zero();
    for (ci, ai, bi) in &evolved {
        for (cj, aj, bj) in &evolved {
            let weight = ci * cj.conj();
            let ga = ai.field_overlap(aj);
            let gb = bi.field_overlap(bj);
            for a in 0..2 {
                for b in 0..2 {
                    for a2 in 0..2 {
                        for b2 in 0..2 {
                            rho.matrix[(2 * a + b, 2 * a2 + b2)] += weight * ga[a][a2] * gb[b][b2];
                        }
                    }
                }
            }
        }
    }
    Ok(rho)
}

/// Thermal average of [`evolve_branch`] over every `(n, m)` inside the
/// truncation, accumulated in a fixed order and rescaled to unit trace once
/// the discarded tail is known to be within [`TRACE_TOLERANCE`].
pub fn oracle_joint_density(
    params: &SystemParams,
    dist_a: &ThermalDistribution,
    dist_b: &ThermalDistribution,
    t: f64,
) -> Result<JointDensity> {
    let weights_a = dist_a.weights();
    let weights_b = dist_b.weights();
    let branch = bell_branch();
    let mut rho = JointDensity::zero();
    for (n, &pa) in weights_a.iter().enumerate() {
        for (m, &pb) in weights_b.iter().enumerate() {
            let contribution = evolve_branch(params, &branch, n, m, dist_a.n_max, dist_b.n_max, t)?;
            rho.matrix += contribution.matrix * Complex64::new(pa * pb, 0.0);
        }
    }
    let trace = rho.trace();
    let deviation = (trace - 1.0).abs();
    if !(deviation <= TRACE_TOLERANCE) {
        return Err(DynError::TraceDeviation { deviation, tolerance: TRACE_TOLERANCE });
    }
    rho.matrix /= Complex64::new(trace, 0.0);
    Ok(rho)
}

/// Oracle reduced state, checked for X structure.
pub fn oracle_density_matrix(
    params: &SystemParams,
    dist_a: &ThermalDistribution,
    dist_b: &ThermalDistribution,
    t: f64,
) -> Result<AtomicDensityMatrix> {
    oracle_joint_density(params, dist_a, dist_b, t)?.to_x_state()
}

/// Eigenvalues of a density matrix below this are rounding noise.
const ZERO_EIGENVALUE_CUTOFF: f64 = 1e-14;

/// Wootters concurrence `max{0, l1 - l2 - l3 - l4}`, where the `l_i` are the
/// square roots of the eigenvalues of `rho (sy (x) sy) conj(rho) (sy (x) sy)`
/// in non-increasing order.
///
/// The `l_i` are obtained as the singular values of
/// `sqrt(rho) (sy (x) sy) conj(sqrt(rho))`, whose squares are exactly those
/// eigenvalues; this avoids taking square roots of eigenvalues that vanish
/// up to rounding.
pub fn wootters_concurrence_general(rho: &Matrix4<Complex64>) -> Result<f64> {
    let herm = (rho - rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if herm > STRUCTURE_TOLERANCE {
        return Err(DynError::NotHermitian(herm));
    }
    let sigma_y = Matrix2::new(ZERO, -I, I, ZERO);
    let flip = sigma_y.kronecker(&sigma_y);

    let eigen = SymmetricEigen::new(*rho);
    let cutoff = ZERO_EIGENVALUE_CUTOFF * eigen.eigenvalues.amax().max(1.0);
    let sqrt_vals = eigen
        .eigenvalues
        .map(|v| Complex64::new(if v > cutoff { v.sqrt() } else { 0.0 }, 0.0));
    let sqrt_rho = eigen.eigenvectors * Matrix4::from_diagonal(&sqrt_vals) * eigen.eigenvectors.adjoint();
    let product = sqrt_rho * flip * sqrt_rho.map(|z| z.conj());

    let mut roots: Vec<f64> = product.singular_values().iter().copied().collect();
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0))
}
