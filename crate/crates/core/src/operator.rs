//! Discretizations of the operator
//!
//! ```text
//! I_f[v](z) = −(1/2πi) ∮ (s f'(s)/f(s))² v(s)/(f(s) − f(z)) ds/s
//! ```
//!
//! and the first variation `δf = iε f² I_f[v]`.
//!
//! Two discretizations are provided. [`NystromMatrix`] evaluates `I_f[v]` at
//! interior collocation points with the trapezoidal rule; it is the defect
//! measure used for residuals. Because `I_f` is smoothing, the singular values
//! of that matrix decay like `ρ^k` with the collocation radius `ρ`, so it
//! cannot expose the one-dimensional kernel through a singular value gap.
//! [`TaylorSystem`] instead maps `v` to the Taylor coefficients of `I_f[v]`.
//! The Cauchy part of the kernel `1/(f(s) − f(z))` is split off and handled
//! exactly in Fourier space, which leaves a smooth remainder; the resulting
//! matrix is a Fourier projection plus a compact perturbation and is well
//! conditioned away from the kernel.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::boundary::BoundaryMap;
use crate::circle::{CircleGrid, PeriodicSamples};
use crate::error::{Result, WeldError};

/// Default radius of the interior collocation ring.
pub const DEFAULT_COLLOCATION_RADIUS: f64 = 0.5;

/// Boundary data shared by both discretizations.
#[derive(Debug, Clone)]
struct BoundaryData {
    points: Vec<Complex64>,
    values: Vec<Complex64>,
    derivs: Vec<Complex64>,
    /// `(s f'(s)/f(s))²`
    factor: Vec<Complex64>,
}

impl BoundaryData {
    fn new(f: &BoundaryMap, grid: CircleGrid) -> Result<Self> {
        let points = grid.points();
        let values: Vec<Complex64> = points.iter().map(|&s| f.eval(s)).collect();
        let derivs: Vec<Complex64> = points.iter().map(|&s| f.deriv(s)).collect();
        for (j, (fv, dv)) in values.iter().zip(&derivs).enumerate() {
            if !(dv.norm() > 0.0) || !dv.is_finite() {
                return Err(WeldError::VanishingDerivative { node: j });
            }
            if fv.norm() < 1e-12 {
                return Err(WeldError::Domain(format!(
                    "f(s_{j}) = {fv} vanishes on the boundary"
                )));
            }
        }
        let factor = points
            .iter()
            .zip(values.iter().zip(&derivs))
            .map(|(&s, (&fv, &dv))| {
                let q = s * dv / fv;
                q * q
            })
            .collect();
        Ok(Self {
            points,
            values,
            derivs,
            factor,
        })
    }
}

/// Trapezoidal discretization of `I_f` at interior collocation points.
///
/// Entry `(i, j)` is `−(1/N) (s_j f'(s_j)/f(s_j))² / (f(s_j) − f(z_i))`.
#[derive(Debug, Clone)]
pub struct NystromMatrix {
    entries: DMatrix<Complex64>,
    collocation: Vec<Complex64>,
    grid: CircleGrid,
    f_id: String,
}

/// `−(1/N)(s f'/f)²`, the quadrature weight of column `j`.
fn column_weights(data: &BoundaryData) -> Vec<Complex64> {
    let n = data.points.len() as f64;
    data.factor.iter().map(|q| -q / n).collect()
}

fn row_entries(data: &BoundaryData, weights: &[Complex64], fz: Complex64) -> Vec<Complex64> {
    weights
        .iter()
        .zip(&data.values)
        .map(|(&w, &fs)| w / (fs - fz))
        .collect()
}

fn dot(row: &[Complex64], v: &[Complex64]) -> Complex64 {
    row.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Collocation layout: `m` points `radius · e^{2πik/m}` followed by the origin.
pub fn collocation_points(radius: f64, m: usize) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = (0..m)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / m as f64))
        .collect();
    pts.push(Complex64::new(0.0, 0.0));
    pts
}

/// Assembles the interior collocation matrix with `m + 1` rows.
pub fn assemble(
    f: &BoundaryMap,
    grid: CircleGrid,
    collocation_radius: f64,
    m: usize,
) -> Result<NystromMatrix> {
    if !(collocation_radius > 0.0 && collocation_radius < 1.0) {
        return Err(WeldError::Domain(format!(
            "collocation radius {collocation_radius} outside (0, 1)"
        )));
    }
    let data = BoundaryData::new(f, grid)?;
    let weights = column_weights(&data);
    let collocation = collocation_points(collocation_radius, m);
    let rows: Vec<Vec<Complex64>> = collocation
        .par_iter()
        .map(|&z| row_entries(&data, &weights, f.eval(z)))
        .collect();
    let n = grid.len();
    let entries = DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]);
    Ok(NystromMatrix {
        entries,
        collocation,
        grid,
        f_id: f.source().label(),
    })
}

impl NystromMatrix {
    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn collocation(&self) -> &[Complex64] {
        &self.collocation
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    pub fn f_id(&self) -> &str {
        &self.f_id
    }

    /// `I_f[v]` at every collocation point.
    pub fn apply(&self, v: &PeriodicSamples) -> Result<Vec<Complex64>> {
        check_grid(self.grid, v)?;
        Ok((0..self.entries.nrows())
            .map(|i| {
                let row: Vec<Complex64> = self.entries.row(i).iter().copied().collect();
                dot(&row, v.values())
            })
            .collect())
    }
}

fn check_grid(grid: CircleGrid, v: &PeriodicSamples) -> Result<()> {
    if v.grid() != grid {
        return Err(WeldError::LengthMismatch {
            expected: grid.len(),
            got: v.grid().len(),
        });
    }
    Ok(())
}

/// `I_f[v](z)` by the trapezoidal rule on the grid of `v`.
pub fn apply(f: &BoundaryMap, v: &PeriodicSamples, z: Complex64) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return Err(WeldError::NotInterior(z));
    }
    let data = BoundaryData::new(f, v.grid())?;
    let weights = column_weights(&data);
    Ok(dot(&row_entries(&data, &weights, f.eval(z)), v.values()))
}

/// First variation `δf(z) = iε f(z)² I_f[v](z)`.
pub fn variation(f: &BoundaryMap, v: &PeriodicSamples, eps: f64, z: Complex64) -> Result<Complex64> {
    let fz = f.eval(z);
    Ok(Complex64::new(0.0, eps) * fz * fz * apply(f, v, z)?)
}

/// Taylor coefficients `m = 0 .. N/2 − 1` of `I_f[v]` as a linear map of the
/// boundary samples of `v`.
///
/// With `1/(f(s) − f(z)) = 1/(f'(s)(s − z)) + R(s, z)`, coefficient `m` is
///
/// ```text
/// −(1/N) Σ_j (s_j f'_j/f_j)² v_j [ s_j^{−m−1}/f'_j + R̂_m(s_j) ],
/// ```
///
/// where `R̂_m(s)` is the `m`-th Taylor coefficient of the smooth remainder,
/// read off from its values on the circle. On the diagonal
/// `R(s, s) = f''(s) / (2 f'(s)²)`.
#[derive(Debug, Clone)]
pub struct TaylorSystem {
    entries: DMatrix<Complex64>,
    grid: CircleGrid,
}

impl TaylorSystem {
    pub fn assemble(f: &BoundaryMap, grid: CircleGrid) -> Result<Self> {
        let data = BoundaryData::new(f, grid)?;
        let n = grid.len();
        let rows = n / 2;
        let second: Vec<Complex64> = data.points.iter().map(|&s| f.second_deriv(s)).collect();
        let fft = FftPlanner::new().plan_fft_forward(n);
        let inv_n = 1.0 / n as f64;

        // Column j: Taylor coefficients of R(s_j, ·) via a DFT over z = s_i.
        let remainder: Vec<Vec<Complex64>> = (0..n)
            .into_par_iter()
            .map(|j| {
                let (sj, fj, dj) = (data.points[j], data.values[j], data.derivs[j]);
                let mut row: Vec<Complex64> = (0..n)
                    .map(|i| {
                        if i == j {
                            second[j] / (2.0 * dj * dj)
                        } else {
                            1.0 / (fj - data.values[i]) - 1.0 / (dj * (sj - data.points[i]))
                        }
                    })
                    .collect();
                fft.process(&mut row);
                row.truncate(rows);
                row.iter_mut().for_each(|c| *c *= inv_n);
                row
            })
            .collect();

        let entries = DMatrix::from_fn(rows, n, |m, j| {
            let sj = data.points[j];
            let cauchy = sj.powi(-(m as i32) - 1) / data.derivs[j];
            -data.factor[j] * inv_n * (cauchy + remainder[j][m])
        });
        Ok(Self { entries, grid })
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    /// Taylor coefficients of `I_f[v]`.
    pub fn apply(&self, v: &PeriodicSamples) -> Result<Vec<Complex64>> {
        check_grid(self.grid, v)?;
        Ok((0..self.entries.nrows())
            .map(|m| {
                let row: Vec<Complex64> = self.entries.row(m).iter().copied().collect();
                dot(&row, v.values())
            })
            .collect())
    }

    /// Real-linear form for real `v`: rows alternate real and imaginary
    /// parts, giving an `N × N` real matrix.
    pub fn real_system(&self) -> DMatrix<f64> {
        let (rows, cols) = self.entries.shape();
        DMatrix::from_fn(2 * rows, cols, |i, j| {
            let e = self.entries[(i / 2, j)];
            if i % 2 == 0 {
                e.re
            } else {
                e.im
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_kills_constants() {
        let g = CircleGrid::new(64).unwrap();
        let f = BoundaryMap::identity();
        let mat = assemble(&f, g, 0.5, 64).unwrap();
        let ones = g.sample(|_| c(1.0, 0.0));
        let out = mat.apply(&ones).unwrap();
        assert!(out.iter().all(|x| x.norm() < 1e-12));
        assert_eq!(mat.entries().nrows(), 65);
    }

    #[test]
    fn identity_on_two_cosine_is_minus_one() {
        // Residues −1/z² at 0 and (z² + 1)/z² at z sum to 1.
        let g = CircleGrid::new(64).unwrap();
        let f = BoundaryMap::identity();
        let v = g.sample(|t| c(2.0 * t.cos(), 0.0));
        let mat = assemble(&f, g, 0.5, 32).unwrap();
        for x in mat.apply(&v).unwrap() {
            assert!((x + 1.0).norm() < 1e-12);
        }
        let at = apply(&f, &v, c(0.0, 0.5)).unwrap();
        assert!((at + 1.0).norm() < 1e-12);
        assert!(apply(&f, &g.sample(|_| c(1.0, 0.0)), c(0.3, 0.1)).unwrap().norm() < 1e-13);
    }

    #[test]
    fn apply_agrees_with_assembled_row() {
        let g = CircleGrid::new(64).unwrap();
        let f = BoundaryMap::moebius(c(0.3, 0.1)).unwrap();
        let v = g.sample(|t| c(1.0 + 0.2 * (3.0 * t).sin(), 0.0));
        let mat = assemble(&f, g, 0.5, 16).unwrap();
        let rows = mat.apply(&v).unwrap();
        for (i, &z) in mat.collocation().iter().enumerate() {
            assert!((apply(&f, &v, z).unwrap() - rows[i]).norm() <= 1e-14);
        }
    }

    #[test]
    fn apply_rejects_boundary_points() {
        let g = CircleGrid::new(16).unwrap();
        let v = g.sample(|_| c(1.0, 0.0));
        assert!(matches!(
            apply(&BoundaryMap::identity(), &v, c(1.0, 0.0)),
            Err(WeldError::NotInterior(_))
        ));
    }

    #[test]
    fn variation_of_identity() {
        let g = CircleGrid::new(64).unwrap();
        let v = g.sample(|t| c(2.0 * t.cos(), 0.0));
        let f = BoundaryMap::identity();
        let d = variation(&f, &v, 0.01, c(0.5, 0.0)).unwrap();
        assert!((d - c(0.0, -0.0025)).norm() < 1e-14);
        assert_eq!(variation(&f, &v, 0.0, c(0.5, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn taylor_system_for_identity_is_fourier_projection() {
        let g = CircleGrid::new(32).unwrap();
        let sys = TaylorSystem::assemble(&BoundaryMap::identity(), g).unwrap();
        let v = g.sample(|t| c(1.0 + (2.0 * t).cos(), 0.5 * t.sin()));
        let coeffs = v.analyze();
        let out = sys.apply(&v).unwrap();
        for (m, x) in out.iter().enumerate() {
            assert!((x + coeffs.coeff(m as i64 + 1)).norm() < 1e-14, "m = {m}");
        }
    }

    #[test]
    fn taylor_system_matches_ring_values() {
        // Synthesizing the Taylor coefficients on the collocation ring must
        // reproduce the interior quadrature.
        let g = CircleGrid::new(128).unwrap();
        let f = BoundaryMap::moebius(c(0.25, -0.1)).unwrap();
        let v = g.sample(|t| c(1.0 + 0.3 * t.cos() + 0.1 * (2.0 * t).sin(), 0.0));
        let taylor = TaylorSystem::assemble(&f, g).unwrap().apply(&v).unwrap();
        for z in [c(0.3, 0.1), c(-0.2, 0.4), c(0.0, 0.0)] {
            let series: Complex64 = taylor.iter().rev().fold(c(0.0, 0.0), |acc, &a| acc * z + a);
            let direct = apply(&f, &v, z).unwrap();
            assert!((series - direct).norm() < 1e-12, "{series} vs {direct}");
        }
    }
}
