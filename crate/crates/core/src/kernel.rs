//! Kernel function `v₀`: extraction, normalization and the complex kernel.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::boundary::BoundaryMap;
use crate::circle::{CircleDiffeo, CircleGrid, LaurentCoeffs, PeriodicSamples};
use crate::error::{Result, WeldError};
use crate::operator::{assemble, TaylorSystem, DEFAULT_COLLOCATION_RADIUS};

/// Tolerance on `∫dt/v₀ = 2π` for a kernel function to count as normalized.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Singular value diagnostics of a kernel solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaDiagnostics {
    pub smallest: f64,
    pub second: f64,
    pub largest: f64,
}

impl SigmaDiagnostics {
    /// Second-smallest over largest singular value.
    pub fn ratio(&self) -> f64 {
        self.second / self.largest
    }
}

/// Positive samples of a kernel function on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelFunction {
    grid: CircleGrid,
    samples: Vec<f64>,
    normalized: bool,
    sigma: Option<SigmaDiagnostics>,
}

impl KernelFunction {
    /// Wraps positive samples. The normalized flag is set when the
    /// normalization integral already equals `2π`.
    pub fn new(grid: CircleGrid, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(WeldError::LengthMismatch {
                expected: grid.len(),
                got: samples.len(),
            });
        }
        let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
        if !(min > 0.0) || samples.iter().any(|v| !v.is_finite()) {
            return Err(WeldError::NotPositive { min });
        }
        let mut out = Self {
            grid,
            samples,
            normalized: false,
            sigma: None,
        };
        out.normalized = (out.normalization_integral() - TAU).abs() <= NORMALIZATION_TOL;
        Ok(out)
    }

    /// Samples a positive function of the angle.
    pub fn from_fn(grid: CircleGrid, v: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.nodes().into_iter().map(v).collect())
    }

    /// Rescales so that `∫₀^{2π} dt/v₀ = 2π`.
    pub fn normalized(mut self) -> Result<Self> {
        let c = self.normalization_integral() / TAU;
        self.samples.iter_mut().for_each(|v| *v *= c);
        let err = (self.normalization_integral() - TAU).abs();
        if err > NORMALIZATION_TOL {
            return Err(WeldError::Normalization(format!(
                "normalization integral off by {err:e} after rescaling"
            )));
        }
        self.normalized = true;
        Ok(self)
    }

    /// Trapezoidal `∫₀^{2π} dt/v(e^{it})`.
    pub fn normalization_integral(&self) -> f64 {
        let recip: Vec<f64> = self.samples.iter().map(|v| 1.0 / v).collect();
        self.grid.integrate(&recip)
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn sigma(&self) -> Option<SigmaDiagnostics> {
        self.sigma
    }

    /// Second-smallest over largest singular value, when solved.
    pub fn sigma_ratio(&self) -> Option<f64> {
        self.sigma.map(|s| s.ratio())
    }

    pub fn to_periodic(&self) -> PeriodicSamples {
        PeriodicSamples::from_real(self.grid, &self.samples).expect("grid matches by construction")
    }

    /// Fourier coefficients of the samples.
    pub fn interpolant(&self) -> LaurentCoeffs {
        self.to_periodic().analyze()
    }

    /// Trigonometric interpolant at angle `t`.
    pub fn eval(&self, t: f64) -> f64 {
        self.interpolant().eval(t).re
    }

    /// Sup-norm relative error against another kernel on the same grid.
    pub fn max_rel_diff(&self, other: &KernelFunction) -> f64 {
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| ((a - b) / b).abs())
            .fold(0.0, f64::max)
    }
}

/// Rank-gap thresholds for [`solve_v0_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Smallest singular value must not exceed `rank_small · σ_max`.
    pub rank_small: f64,
    /// Second-smallest must be at least `rank_gap · σ_max`.
    pub rank_gap: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            rank_small: 1e-7,
            rank_gap: 1e-3,
        }
    }
}

/// Kernel function of `I_f` with the default thresholds.
pub fn solve_v0(f: &BoundaryMap, grid: CircleGrid) -> Result<KernelFunction> {
    solve_v0_with(f, grid, &SolveOptions::default())
}

pub fn solve_v0_with(f: &BoundaryMap, grid: CircleGrid, opts: &SolveOptions) -> Result<KernelFunction> {
    let system = TaylorSystem::assemble(f, grid)?;
    kernel_of_real_system(&system.real_system(), grid, opts)
}

/// Null vector of a real `N`-column system, sign-fixed, positive and
/// normalized.
pub fn kernel_of_real_system(
    a: &DMatrix<f64>,
    grid: CircleGrid,
    opts: &SolveOptions,
) -> Result<KernelFunction> {
    if a.ncols() != grid.len() {
        return Err(WeldError::LengthMismatch {
            expected: grid.len(),
            got: a.ncols(),
        });
    }
    let (mut basis, sigma) = null_basis(a, 1)?;
    let sigma = SigmaDiagnostics {
        smallest: sigma[0],
        second: sigma[1],
        largest: sigma[2],
    };
    if sigma.smallest > opts.rank_small * sigma.largest || sigma.second < opts.rank_gap * sigma.largest {
        return Err(WeldError::RankGap {
            smallest: sigma.smallest / sigma.largest,
            second: sigma.second / sigma.largest,
        });
    }
    let mut v = basis.remove(0);
    let pivot = v
        .iter()
        .copied()
        .fold(0.0, |m: f64, x| if x.abs() > m.abs() { x } else { m });
    let sign = pivot.signum();
    v.iter_mut().for_each(|x| *x *= sign);
    let max = v.iter().copied().fold(0.0, f64::max);
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min > 0.0) {
        return Err(WeldError::SignIndefinite { ratio: min / max });
    }
    let mut out = KernelFunction::new(grid, v)?.normalized()?;
    out.sigma = Some(sigma);
    Ok(out)
}

/// Right singular vectors of the `k` smallest singular values, plus
/// `[σ_min, σ_next, σ_max]` where `σ_next` is the `(k+1)`-th smallest.
pub fn null_basis(a: &DMatrix<f64>, k: usize) -> Result<(Vec<Vec<f64>>, [f64; 3])> {
    let n = a.ncols();
    if a.nrows() < n || n <= k {
        return Err(WeldError::Domain(format!(
            "system of shape {}x{} too small for a nullspace of dimension {k}",
            a.nrows(),
            n
        )));
    }
    let svd = a.clone().svd(false, true);
    let vt = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let s = |i: usize| svd.singular_values[order[i]];
    let basis = order[..k]
        .iter()
        .map(|&i| vt.row(i).iter().copied().collect())
        .collect();
    Ok((basis, [s(0), s(k), s(order.len() - 1)]))
}

/// Defect of `v` as a kernel member: the largest `|I_f[v]|` over the default
/// collocation ring of `N` points plus the origin.
pub fn residual(f: &BoundaryMap, v: &PeriodicSamples) -> Result<f64> {
    residual_at(f, v, DEFAULT_COLLOCATION_RADIUS, v.grid().len())
}

/// [`residual`] with an explicit collocation ring.
pub fn residual_at(f: &BoundaryMap, v: &PeriodicSamples, radius: f64, m: usize) -> Result<f64> {
    let mat = assemble(f, v.grid(), radius, m)?;
    Ok(mat.apply(v)?.iter().map(|x| x.norm()).fold(0.0, f64::max))
}

/// Tolerance on positive-index Fourier coefficients of an exterior function.
pub const EXTERIOR_COEFF_TOL: f64 = 1e-8;

/// `v₀ · (h ∘ γ⁻¹)` on the grid, where `h` is given by boundary samples of a
/// function analytic in the exterior disk and `gamma_inv` is the lift of
/// `γ⁻¹`.
pub fn complex_kernel_member(
    v0: &KernelFunction,
    gamma_inv: &CircleDiffeo,
    h_exterior: &PeriodicSamples,
) -> Result<PeriodicSamples> {
    let coeffs = h_exterior.analyze();
    let max_coeff = coeffs.max_abs_where(|k| k >= 1);
    if max_coeff > EXTERIOR_COEFF_TOL * h_exterior.max_abs().max(1.0) {
        return Err(WeldError::NotExteriorAnalytic { max_coeff });
    }
    let grid = v0.grid();
    if gamma_inv.grid() != grid {
        return Err(WeldError::LengthMismatch {
            expected: grid.len(),
            got: gamma_inv.grid().len(),
        });
    }
    let values = gamma_inv
        .lift_samples()
        .iter()
        .zip(v0.samples())
        .map(|(&tau, &v)| v * coeffs.eval(tau))
        .collect::<Vec<Complex64>>();
    PeriodicSamples::new(grid, values)
}
