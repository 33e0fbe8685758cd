//! Equispaced grids on the unit circle, discrete Fourier analysis and
//! synthesis, spectral differentiation, and degree-one circle maps stored
//! through their lifts.
//!
//! Every downstream quadrature is the trapezoidal rule on a [`CircleGrid`];
//! for periodic analytic integrands it converges geometrically.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Result, WeldError};

/// `N` equispaced nodes `t_j = 2πj/N` on `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CircleGrid {
    n: usize,
}

impl CircleGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 16 || !n.is_multiple_of(2) {
            return Err(WeldError::InvalidGrid(n));
        }
        Ok(Self { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Node spacing `Δt = 2π/N`.
    pub fn step(&self) -> f64 {
        TAU / self.n as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        TAU * j as f64 / self.n as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.node(j)).collect()
    }

    /// The points `e^{it_j}` on the unit circle.
    pub fn points(&self) -> Vec<Complex64> {
        (0..self.n).map(|j| Complex64::cis(self.node(j))).collect()
    }

    pub fn refined(&self) -> CircleGrid {
        CircleGrid { n: 2 * self.n }
    }

    /// Samples a function of the angle `t`.
    pub fn sample(&self, f: impl Fn(f64) -> Complex64) -> PeriodicSamples {
        PeriodicSamples {
            grid: *self,
            values: (0..self.n).map(|j| f(self.node(j))).collect(),
        }
    }

    /// Trapezoidal approximation of `∫₀^{2π} g(t) dt` from samples.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        values.iter().sum::<f64>() * self.step()
    }
}

/// Complex function values on the nodes of a [`CircleGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSamples {
    grid: CircleGrid,
    values: Vec<Complex64>,
}

impl PeriodicSamples {
    pub fn new(grid: CircleGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(WeldError::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_real(grid: CircleGrid, values: &[f64]) -> Result<Self> {
        Self::new(grid, values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    /// Discrete Fourier coefficients `c_k`, `k = −N/2 .. N/2−1`.
    pub fn analyze(&self) -> LaurentCoeffs {
        let n = self.grid.len();
        let mut buf = self.values.clone();
        plan_forward(n).process(&mut buf);
        let scale = 1.0 / n as f64;
        // Reorder from FFT layout (0..N/2-1, -N/2..-1) to ascending index.
        let mut coeffs = Vec::with_capacity(n);
        coeffs.extend(buf[n / 2..].iter().map(|c| c * scale));
        coeffs.extend(buf[..n / 2].iter().map(|c| c * scale));
        LaurentCoeffs { coeffs }
    }

    /// Derivative with respect to `t`, computed in Fourier space.
    pub fn spectral_derivative(&self) -> PeriodicSamples {
        let coeffs = self.analyze();
        let half = (self.grid.len() / 2) as i64;
        let derived = LaurentCoeffs {
            coeffs: coeffs
                .iter()
                .map(|(k, c)| {
                    if k == -half {
                        Complex64::new(0.0, 0.0)
                    } else {
                        c * Complex64::new(0.0, k as f64)
                    }
                })
                .collect(),
        };
        derived.synthesize()
    }

    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.values.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &PeriodicSamples) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Fourier coefficients `c_k` for `k = −N/2 .. N/2−1`, stored in ascending
/// order of `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentCoeffs {
    coeffs: Vec<Complex64>,
}

impl LaurentCoeffs {
    /// Builds coefficients from an ascending list indexed `−N/2 .. N/2−1`.
    pub fn from_ascending(coeffs: Vec<Complex64>) -> Result<Self> {
        CircleGrid::new(coeffs.len())?;
        Ok(Self { coeffs })
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_index(&self) -> i64 {
        -((self.coeffs.len() / 2) as i64)
    }

    pub fn max_index(&self) -> i64 {
        (self.coeffs.len() / 2) as i64 - 1
    }

    /// Coefficient of index `k`; zero outside the stored band.
    pub fn coeff(&self, k: i64) -> Complex64 {
        if k < self.min_index() || k > self.max_index() {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[(k - self.min_index()) as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let lo = self.min_index();
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (lo + i as i64, c))
    }

    pub fn grid(&self) -> CircleGrid {
        CircleGrid { n: self.coeffs.len() }
    }

    /// Inverse of [`PeriodicSamples::analyze`].
    pub fn synthesize(&self) -> PeriodicSamples {
        let n = self.coeffs.len();
        let mut buf = Vec::with_capacity(n);
        buf.extend_from_slice(&self.coeffs[n / 2..]);
        buf.extend_from_slice(&self.coeffs[..n / 2]);
        plan_inverse(n).process(&mut buf);
        PeriodicSamples {
            grid: self.grid(),
            values: buf,
        }
    }

    /// Trigonometric interpolant at an arbitrary angle. The Nyquist mode is
    /// split evenly between `±N/2` so real data interpolates to real values.
    pub fn eval(&self, x: f64) -> Complex64 {
        self.eval_with_derivative(x).0
    }

    /// Interpolant and its `t`-derivative at `x`.
    pub fn eval_with_derivative(&self, x: f64) -> (Complex64, Complex64) {
        let half = self.coeffs.len() / 2;
        let z = Complex64::cis(x);
        let zc = z.conj();
        let mut value = self.coeff(0);
        let mut deriv = Complex64::new(0.0, 0.0);
        let mut pos = Complex64::new(1.0, 0.0);
        let mut neg = Complex64::new(1.0, 0.0);
        for k in 1..half {
            pos *= z;
            neg *= zc;
            let (cp, cn) = (self.coeff(k as i64), self.coeff(-(k as i64)));
            value += cp * pos + cn * neg;
            deriv += Complex64::new(0.0, k as f64) * (cp * pos - cn * neg);
        }
        let nyq = self.coeff(-(half as i64));
        let arg = half as f64 * x;
        value += nyq * arg.cos();
        deriv -= nyq * (half as f64 * arg.sin());
        (value, deriv)
    }

    /// Largest coefficient modulus over indices `k` satisfying `pred`.
    pub fn max_abs_where(&self, pred: impl Fn(i64) -> bool) -> f64 {
        self.iter()
            .filter(|(k, _)| pred(*k))
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }
}

fn plan_forward(n: usize) -> Arc<dyn Fft<f64>> {
    FftPlanner::new().plan_fft_forward(n)
}

fn plan_inverse(n: usize) -> Arc<dyn Fft<f64>> {
    FftPlanner::new().plan_fft_inverse(n)
}

/// An orientation-preserving circle diffeomorphism represented by its lift
/// `τ` with `τ(x + 2π) = τ(x) + 2π`. The periodic part `τ(x) − x` is kept as
/// samples and as a trigonometric interpolant.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleDiffeo {
    grid: CircleGrid,
    periodic: Vec<f64>,
    coeffs: LaurentCoeffs,
}

impl CircleDiffeo {
    pub fn identity(grid: CircleGrid) -> Self {
        Self::rotation(grid, 0.0)
    }

    pub fn rotation(grid: CircleGrid, angle: f64) -> Self {
        Self::from_periodic_unchecked(grid, vec![angle; grid.len()])
    }

    /// Builds a diffeomorphism from lift values `τ(t_j)`.
    pub fn from_lift(grid: CircleGrid, lift: &[f64]) -> Result<Self> {
        if lift.len() != grid.len() {
            return Err(WeldError::LengthMismatch {
                expected: grid.len(),
                got: lift.len(),
            });
        }
        let periodic = lift
            .iter()
            .enumerate()
            .map(|(j, &tau)| tau - grid.node(j))
            .collect();
        let diffeo = Self::from_periodic_unchecked(grid, periodic);
        diffeo.check_monotone()?;
        Ok(diffeo)
    }

    fn from_periodic_unchecked(grid: CircleGrid, periodic: Vec<f64>) -> Self {
        let coeffs = PeriodicSamples::from_real(grid, &periodic)
            .expect("length matches grid")
            .analyze();
        Self {
            grid,
            periodic,
            coeffs,
        }
    }

    fn check_monotone(&self) -> Result<()> {
        for (j, d) in self.derivative_samples().iter().enumerate() {
            if *d <= 0.0 {
                return Err(WeldError::NotMonotone { node: j });
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    /// Samples of `τ(x) − x`.
    pub fn periodic_part(&self) -> &[f64] {
        &self.periodic
    }

    /// Samples of the lift `τ(t_j)`.
    pub fn lift_samples(&self) -> Vec<f64> {
        self.periodic
            .iter()
            .enumerate()
            .map(|(j, p)| self.grid.node(j) + p)
            .collect()
    }

    /// `τ'(t_j)`, the `#`-derivative of the map.
    pub fn derivative_samples(&self) -> Vec<f64> {
        PeriodicSamples::from_real(self.grid, &self.periodic)
            .expect("length matches grid")
            .spectral_derivative()
            .values()
            .iter()
            .map(|d| 1.0 + d.re)
            .collect()
    }

    pub fn eval(&self, x: f64) -> f64 {
        x + self.coeffs.eval(x).re
    }

    pub fn eval_with_derivative(&self, x: f64) -> (f64, f64) {
        let (p, dp) = self.coeffs.eval_with_derivative(x);
        (x + p.re, 1.0 + dp.re)
    }

    /// The circle map itself, `e^{ix} ↦ e^{iτ(x)}`, on the grid.
    pub fn circle_values(&self) -> PeriodicSamples {
        PeriodicSamples {
            grid: self.grid,
            values: self.lift_samples().into_iter().map(Complex64::cis).collect(),
        }
    }

    /// `self ∘ inner` sampled on this grid.
    pub fn compose(&self, inner: &CircleDiffeo) -> Result<CircleDiffeo> {
        let lift: Vec<f64> = inner.lift_samples().into_iter().map(|x| self.eval(x)).collect();
        CircleDiffeo::from_lift(self.grid, &lift)
    }

    /// Post-composition with the rotation by `angle`.
    pub fn rotated(&self, angle: f64) -> CircleDiffeo {
        Self::from_periodic_unchecked(self.grid, self.periodic.iter().map(|p| p + angle).collect())
    }

    /// Pre-composition with the rotation by `angle`: `x ↦ τ(x + angle)`.
    pub fn precomposed_rotation(&self, angle: f64) -> Result<CircleDiffeo> {
        let lift: Vec<f64> = (0..self.grid.len())
            .map(|j| self.eval(self.grid.node(j) + angle))
            .collect();
        CircleDiffeo::from_lift(self.grid, &lift)
    }

    /// Sup-norm distance between lifts at the grid nodes.
    pub fn sup_distance(&self, other: &CircleDiffeo) -> f64 {
        self.periodic
            .iter()
            .zip(&other.periodic)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Inverse lift, solved node by node with safeguarded Newton.
    pub fn invert(&self) -> Result<CircleDiffeo> {
        let (pmin, pmax) = self
            .periodic
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| {
                (lo.min(p), hi.max(p))
            });
        let pad = 0.1 * (pmax - pmin) + 1e-6;
        let lift = (0..self.grid.len())
            .map(|j| {
                let y = self.grid.node(j);
                self.solve_lift(y, y - pmax - pad, y - pmin + pad)
            })
            .collect::<Result<Vec<f64>>>()?;
        CircleDiffeo::from_lift(self.grid, &lift)
    }

    /// Finds `x` in `[lo, hi]` with `τ(x) = y`.
    fn solve_lift(&self, y: f64, mut lo: f64, mut hi: f64) -> Result<f64> {
        const TOL: f64 = 1e-12;
        // Widen the bracket if the interpolant overshoots the sample range.
        let mut widen = 0;
        while self.eval(lo) > y {
            lo -= PI / 4.0;
            widen += 1;
            if widen > 16 {
                return Err(WeldError::NotMonotone { node: 0 });
            }
        }
        while self.eval(hi) < y {
            hi += PI / 4.0;
            widen += 1;
            if widen > 32 {
                return Err(WeldError::NotMonotone { node: 0 });
            }
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..200 {
            let (tau, dtau) = self.eval_with_derivative(x);
            let g = tau - y;
            if g.abs() <= 1e-3 * TOL {
                return Ok(x);
            }
            if g > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let newton = x - g / dtau;
            let next = if dtau > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if (next - x).abs() <= TOL * 1e-3 * (1.0 + x.abs()) || hi - lo <= TOL * 1e-3 {
                return Ok(next);
            }
            x = next;
        }
        Ok(x)
    }
}

/// Continuous-argument lift of unit-modulus samples `e^{iτ(t_j)}`.
///
/// Rejects maps that are not orientation preserving on the grid or whose
/// degree is not one. `τ(0)` is the principal argument of the first sample.
pub fn lift_circle_map(samples: &PeriodicSamples) -> Result<CircleDiffeo> {
    let grid = samples.grid();
    let vals = samples.values();
    for (j, v) in vals.iter().enumerate() {
        if (v.norm() - 1.0).abs() > 1e-8 {
            return Err(WeldError::Domain(format!(
                "sample {j} has modulus {} (expected 1)",
                v.norm()
            )));
        }
    }
    let n = vals.len();
    let mut lift = Vec::with_capacity(n);
    let mut tau = vals[0].arg();
    lift.push(tau);
    let mut total = 0.0;
    for j in 0..n {
        let step = (vals[(j + 1) % n] / vals[j]).arg();
        if step <= 0.0 {
            return Err(WeldError::NotMonotone { node: j });
        }
        total += step;
        if j + 1 < n {
            tau += step;
            lift.push(tau);
        }
    }
    let degree = total / TAU;
    if (degree - 1.0).abs() > 1e-6 {
        return Err(WeldError::NotDegreeOne(degree));
    }
    CircleDiffeo::from_lift(grid, &lift)
}
