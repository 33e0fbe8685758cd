//! Welding diffeomorphism from `v₀`, the matching exterior map, and the
//! boundary ODE for `ψ` as an independent route to `γ⁻¹`.

use num_complex::Complex64;

use crate::boundary::{BoundaryMap, ExteriorMap};
use crate::circle::{CircleDiffeo, CircleGrid, LaurentCoeffs, PeriodicSamples};
use crate::error::{Result, WeldError};
use crate::kernel::{solve_v0_with, KernelFunction, SolveOptions};
use crate::ode::{self, Tolerances};

/// Consistency above which the welding is accepted without a warning.
pub const CONSISTENCY_WARN: f64 = 1e-5;
/// Consistency above which the welding is rejected.
pub const CONSISTENCY_ERROR: f64 = 1e-3;

/// `γ⁻¹` as the lift `τ(x) = ∫₀^x dt/v₀(e^{it})`, so that `γ⁻¹(1) = 1`.
pub fn gamma_inverse_from_v0(v0: &KernelFunction) -> Result<CircleDiffeo> {
    gamma_inverse_with_constant(v0, 0.0)
}

/// `γ⁻¹` with an explicit integration constant `C`: `τ(x) = C + ∫₀^x dt/v₀`.
pub fn gamma_inverse_with_constant(v0: &KernelFunction, c: f64) -> Result<CircleDiffeo> {
    if !v0.is_normalized() {
        return Err(WeldError::NotNormalized {
            mean: v0.normalization_integral() / std::f64::consts::TAU,
        });
    }
    let grid = v0.grid();
    let recip: Vec<f64> = v0.samples().iter().map(|v| 1.0 / v).collect();
    let coeffs = PeriodicSamples::from_real(grid, &recip)?.analyze();
    // Termwise antiderivative of the periodic part. The Nyquist mode
    // integrates to a multiple of sin(N t/2), which vanishes at the nodes.
    let zero = Complex64::new(0.0, 0.0);
    let anti: Vec<Complex64> = coeffs
        .iter()
        .map(|(k, ck)| {
            if k == 0 || k == coeffs.min_index() {
                zero
            } else {
                ck / Complex64::new(0.0, k as f64)
            }
        })
        .collect();
    let anti = LaurentCoeffs::from_ascending(anti)?;
    let p = anti.synthesize();
    let p0 = p.values()[0].re;
    let lift: Vec<f64> = p
        .values()
        .iter()
        .enumerate()
        .map(|(j, pj)| c + grid.node(j) + pj.re - p0)
        .collect();
    CircleDiffeo::from_lift(grid, &lift)
}

/// Laurent coefficients of `f ∘ γ` on `grid`.
pub fn welding_coefficients(f: &BoundaryMap, gamma: &CircleDiffeo, grid: CircleGrid) -> LaurentCoeffs {
    grid.sample(|t| f.eval(Complex64::cis(gamma.eval(t)))).analyze()
}

/// `φ = f ∘ γ` extended to the exterior disk from its Laurent coefficients
/// of index `≤ 1`, together with the consistency defect: the largest
/// coefficient of index `≥ 2`.
pub fn exterior_with_consistency(
    f: &BoundaryMap,
    gamma: &CircleDiffeo,
    grid: CircleGrid,
) -> Result<(ExteriorMap, f64)> {
    let coeffs = welding_coefficients(f, gamma, grid);
    let consistency = coeffs.max_abs_where(|k| k >= 2);
    Ok((ExteriorMap::from_laurent(&coeffs)?, consistency))
}

/// Exterior map matching `f` under the welding `γ`. Fails when the
/// consistency defect exceeds `1e−3`.
pub fn exterior_from_welding(f: &BoundaryMap, gamma: &CircleDiffeo, grid: CircleGrid) -> Result<ExteriorMap> {
    let (ext, consistency) = exterior_with_consistency(f, gamma, grid)?;
    if consistency > CONSISTENCY_ERROR {
        return Err(WeldError::WeldingInconsistent { consistency });
    }
    Ok(ext)
}

/// Boundary values of `ψ ∘ f`, integrating
/// `d/dt ψ(f(e^{it})) = H̃(e^{it}) · i e^{it} f'(e^{it}) · ψ` with
/// `H̃(z) = 1/(z f'(z) v₀(z))` from `ψ(f(1)) = 1`.
pub fn psi_boundary_ode(f: &BoundaryMap, v0: &KernelFunction) -> Result<PeriodicSamples> {
    let grid = v0.grid();
    let interp = v0.interpolant();
    let rhs = |t: f64, psi: Complex64| -> Result<Complex64> {
        let s = Complex64::cis(t);
        let fp = f.deriv(s);
        let v = interp.eval(t).re;
        if !(v > 0.0) {
            return Err(WeldError::NotPositive { min: v });
        }
        let h = 1.0 / (s * fp * v);
        Ok(h * Complex64::new(0.0, 1.0) * s * fp * psi)
    };
    let values = ode::integrate(
        rhs,
        0.0,
        Complex64::new(1.0, 0.0),
        &grid.nodes(),
        Tolerances::default(),
    )?;
    PeriodicSamples::new(grid, values)
}

/// Outcome class of a welding computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeldStatus {
    Ok,
    /// Consistency between the warning and error thresholds: plausible but
    /// under-resolved.
    Warning,
}

/// Thresholds used by [`weld_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeldOptions {
    pub solve: SolveOptions,
    pub consistency_warn: f64,
    pub consistency_error: f64,
}

impl Default for WeldOptions {
    fn default() -> Self {
        Self {
            solve: SolveOptions::default(),
            consistency_warn: CONSISTENCY_WARN,
            consistency_error: CONSISTENCY_ERROR,
        }
    }
}

#[derive(Debug, Clone)]
pub struct WeldingResult {
    pub gamma: CircleDiffeo,
    pub gamma_inv: CircleDiffeo,
    pub v0: KernelFunction,
    pub exterior: ExteriorMap,
    /// Largest Laurent coefficient of `f ∘ γ` with index `≥ 2`.
    pub consistency: f64,
    pub status: WeldStatus,
    /// Sup-norm gap between `ψ ∘ f` from the ODE and `e^{iτ}`.
    pub route_discrepancy: f64,
}

pub fn weld(f: &BoundaryMap, grid: CircleGrid) -> Result<WeldingResult> {
    weld_with(f, grid, &WeldOptions::default())
}

pub fn weld_with(f: &BoundaryMap, grid: CircleGrid, opts: &WeldOptions) -> Result<WeldingResult> {
    let v0 = solve_v0_with(f, grid, &opts.solve)?;
    let gamma_inv = gamma_inverse_from_v0(&v0)?;
    let gamma = gamma_inv.invert()?;
    let (exterior, consistency) = exterior_with_consistency(f, &gamma, grid)?;
    if consistency > opts.consistency_error {
        return Err(WeldError::WeldingInconsistent { consistency });
    }
    let status = if consistency > opts.consistency_warn {
        WeldStatus::Warning
    } else {
        WeldStatus::Ok
    };
    let psi = psi_boundary_ode(f, &v0)?;
    let route_discrepancy = psi.max_abs_diff(&gamma_inv.circle_values());
    Ok(WeldingResult {
        gamma,
        gamma_inv,
        v0,
        exterior,
        consistency,
        status,
        route_discrepancy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_kernel_gives_identity() {
        let g = CircleGrid::new(32).unwrap();
        let v0 = KernelFunction::from_fn(g, |_| 1.0).unwrap();
        let ginv = gamma_inverse_from_v0(&v0).unwrap();
        assert!(ginv.sup_distance(&CircleDiffeo::identity(g)) < 1e-14);
        let psi = psi_boundary_ode(&BoundaryMap::identity(), &v0).unwrap();
        assert!(psi.max_abs_diff(&g.sample(Complex64::cis)) < 1e-10);
    }

    #[test]
    fn unnormalized_kernel_is_rejected() {
        let g = CircleGrid::new(32).unwrap();
        let v0 = KernelFunction::from_fn(g, |_| 2.0).unwrap();
        assert!(matches!(
            gamma_inverse_from_v0(&v0),
            Err(WeldError::NotNormalized { .. })
        ));
    }

    #[test]
    fn lift_derivative_is_reciprocal_kernel() {
        let g = CircleGrid::new(64).unwrap();
        let v0 = KernelFunction::from_fn(g, |t| 2.0 + t.cos() + 0.3 * (2.0 * t).sin())
            .unwrap()
            .normalized()
            .unwrap();
        let ginv = gamma_inverse_from_v0(&v0).unwrap();
        for (d, v) in ginv.derivative_samples().iter().zip(v0.samples()) {
            assert!((d - 1.0 / v).abs() < 1e-9);
        }
        assert!(ginv.lift_samples()[0].abs() < 1e-15);
        let shifted = gamma_inverse_with_constant(&v0, 0.4).unwrap();
        assert!(shifted.sup_distance(&ginv.rotated(0.4)) < 1e-12);
    }

    #[test]
    fn identity_welds_trivially() {
        let g = CircleGrid::new(64).unwrap();
        let res = weld(&BoundaryMap::identity(), g).unwrap();
        assert_eq!(res.status, WeldStatus::Ok);
        assert!(res.consistency < 1e-14);
        assert!((res.exterior.coeff(1) - 1.0).norm() < 1e-13);
        assert!(res.route_discrepancy < 1e-10);
    }
}
