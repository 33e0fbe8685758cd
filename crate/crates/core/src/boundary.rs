//! How a univalent map `f` enters the toolkit, and the closed-form catalog
//! used as oracles: identity, Möbius maps, the elliptic-sine map of the disk
//! onto an ellipse, the Joukowski exterior map, and kernel functions built
//! from quadratic differentials.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use crate::circle::{CircleGrid, LaurentCoeffs, PeriodicSamples};
use crate::error::{Result, WeldError};
use crate::kernel::KernelFunction;
use crate::specialfn::{elliptic_f, elliptic_k, Polynomial};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Which normalization a [`BoundaryMap`] satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `f(0) = 0`, `f'(0) = 1`.
    ClassS,
    /// `f(0) = 0`, `f'(0) > 0`; the catalog's own scaling (ellipse foci at ±1).
    Catalog,
}

/// Where the evaluator of a [`BoundaryMap`] comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum MapSource {
    Identity,
    Moebius {
        c: Complex64,
    },
    Ellipse {
        r: f64,
    },
    Taylor,
    /// Boundary samples on a grid of the given size, extended to the disk
    /// through their nonnegative Fourier modes.
    Samples {
        n_nodes: usize,
    },
}

impl MapSource {
    pub fn label(&self) -> String {
        match self {
            MapSource::Identity => "identity".into(),
            MapSource::Moebius { c } => format!("moebius(c={c})"),
            MapSource::Ellipse { r } => format!("ellipse(r={r})"),
            MapSource::Taylor => "taylor".into(),
            MapSource::Samples { n_nodes } => format!("samples(N={n_nodes})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Evaluator {
    Identity,
    Moebius { c: Complex64 },
    Ellipse(EllipseMap),
    Polynomial(Polynomial),
}

/// A univalent map of the closed unit disk, with value, first and second
/// derivative evaluators.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryMap {
    eval: Evaluator,
    source: MapSource,
    normalization: Normalization,
}

/// Options for the boundary-simplicity check.
const SIMPLICITY_PROBES: usize = 8;
const PROBE_RADIUS: f64 = 0.5;

impl BoundaryMap {
    pub fn identity() -> Self {
        Self {
            eval: Evaluator::Identity,
            source: MapSource::Identity,
            normalization: Normalization::ClassS,
        }
    }

    /// `f(z) = z / (1 − cz)`; the image is a disk. `c = 0` is the identity.
    pub fn moebius(c: Complex64) -> Result<Self> {
        if !(c.norm() < 1.0) {
            return Err(WeldError::Domain(format!(
                "moebius: |c| = {} must be < 1",
                c.norm()
            )));
        }
        Ok(Self {
            eval: Evaluator::Moebius { c },
            source: MapSource::Moebius { c },
            normalization: Normalization::ClassS,
        })
    }

    /// `f(z) = sin(π F(z/r, r²) / (2K(r²)))`, mapping the disk onto the
    /// interior of an ellipse with foci `±1`, `f(±r) = ±1`.
    pub fn ellipse(r: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(WeldError::Domain(format!("ellipse: r = {r} outside (0, 1)")));
        }
        let modulus = r * r;
        Ok(Self {
            eval: Evaluator::Ellipse(EllipseMap {
                r,
                modulus,
                quarter_period: elliptic_k(modulus)?,
            }),
            source: MapSource::Ellipse { r },
            normalization: Normalization::Catalog,
        })
    }

    /// Polynomial map `Σ c_k z^k`; requires `c₀ = 0`, `c₁ = 1` and a simple
    /// boundary curve.
    pub fn from_taylor(coeffs: &[Complex64]) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(WeldError::Normalization("need at least c0 and c1".into()));
        }
        let mut trimmed = coeffs.to_vec();
        while trimmed.len() > 2 && trimmed.last().is_some_and(|c| c.norm() == 0.0) {
            trimmed.pop();
        }
        let poly = Polynomial::new(trimmed)?;
        let map = Self {
            eval: Evaluator::Polynomial(poly),
            source: MapSource::Taylor,
            normalization: Normalization::ClassS,
        };
        map.check_class_s(1e-10)?;
        let n = (8 * coeffs.len()).max(256).next_power_of_two();
        map.check_boundary(CircleGrid::new(n)?)?;
        Ok(map)
    }

    /// Map given by boundary samples on a grid. The disk extension uses the
    /// nonnegative Fourier modes; negative modes must be negligible.
    pub fn from_boundary_samples(samples: &PeriodicSamples) -> Result<Self> {
        let map = Self::from_samples_unchecked(samples)?;
        map.check_class_s(1e-8)?;
        map.check_boundary(samples.grid())?;
        Ok(map)
    }

    /// As [`Self::from_boundary_samples`] but only checking analyticity.
    pub(crate) fn from_samples_unchecked(samples: &PeriodicSamples) -> Result<Self> {
        let coeffs = samples.analyze();
        let scale = coeffs.max_abs_where(|_| true).max(f64::MIN_POSITIVE);
        let anti = coeffs.max_abs_where(|k| k < 0);
        if anti > 1e-8 * scale {
            return Err(WeldError::Domain(format!(
                "boundary samples are not the trace of an analytic function \
                 (negative-mode magnitude {anti:.3e})"
            )));
        }
        let mut taylor: Vec<Complex64> = (0..=coeffs.max_index()).map(|k| coeffs.coeff(k)).collect();
        while taylor.len() > 2 && taylor.last().is_some_and(|c| c.norm() <= 1e-17 * scale) {
            taylor.pop();
        }
        Ok(Self {
            eval: Evaluator::Polynomial(Polynomial::new(taylor)?),
            source: MapSource::Samples {
                n_nodes: samples.grid().len(),
            },
            normalization: Normalization::ClassS,
        })
    }

    pub fn source(&self) -> &MapSource {
        &self.source
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    /// Taylor coefficients for polynomial-backed maps.
    pub fn taylor_coeffs(&self) -> Option<&[Complex64]> {
        match &self.eval {
            Evaluator::Polynomial(p) => Some(p.coeffs()),
            _ => None,
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match &self.eval {
            Evaluator::Identity => z,
            Evaluator::Moebius { c } => z / (ONE - c * z),
            Evaluator::Ellipse(e) => e.eval(z),
            Evaluator::Polynomial(p) => p.eval(z),
        }
    }

    pub fn deriv(&self, z: Complex64) -> Complex64 {
        match &self.eval {
            Evaluator::Identity => ONE,
            Evaluator::Moebius { c } => {
                let d = ONE - c * z;
                ONE / (d * d)
            }
            Evaluator::Ellipse(e) => e.deriv(z),
            Evaluator::Polynomial(p) => p.eval_with_derivative(z).1,
        }
    }

    pub fn second_deriv(&self, z: Complex64) -> Complex64 {
        match &self.eval {
            Evaluator::Identity => ZERO,
            Evaluator::Moebius { c } => {
                let d = ONE - c * z;
                2.0 * c / (d * d * d)
            }
            Evaluator::Ellipse(e) => e.second_deriv(z),
            Evaluator::Polynomial(p) => p.derivative().eval_with_derivative(z).1,
        }
    }

    /// `f(e^{it_j})` on a grid.
    pub fn boundary_samples(&self, grid: CircleGrid) -> PeriodicSamples {
        grid.sample(|t| self.eval(Complex64::cis(t)))
    }

    fn check_class_s(&self, tol: f64) -> Result<()> {
        let f0 = self.eval(ZERO);
        let d0 = self.deriv(ZERO);
        if f0.norm() > tol || (d0 - ONE).norm() > tol {
            return Err(WeldError::Normalization(format!(
                "f(0) = {f0}, f'(0) = {d0}; expected 0 and 1"
            )));
        }
        Ok(())
    }

    /// Checks that `f'` does not vanish on the grid and that the boundary
    /// polygon is a simple curve winding once around interior image points.
    pub fn check_boundary(&self, grid: CircleGrid) -> Result<()> {
        let pts = grid.points();
        let derivs: Vec<f64> = pts.iter().map(|&s| self.deriv(s).norm()).collect();
        let dmax = derivs.iter().cloned().fold(0.0, f64::max);
        if let Some(j) = derivs.iter().position(|&d| !(d > 1e-10 * dmax)) {
            return Err(WeldError::VanishingDerivative { node: j });
        }
        let curve: Vec<Complex64> = pts.iter().map(|&s| self.eval(s)).collect();
        for p in 0..SIMPLICITY_PROBES {
            let probe = self.eval(Complex64::from_polar(
                PROBE_RADIUS,
                TAU * p as f64 / SIMPLICITY_PROBES as f64,
            ));
            let w = winding_number(&curve, probe);
            if w != 1 {
                return Err(WeldError::NotSimple(format!(
                    "winding number {w} about the image of probe {p}"
                )));
            }
        }
        if let Some((i, j)) = first_self_intersection(&curve) {
            return Err(WeldError::NotSimple(format!(
                "boundary segments {i} and {j} intersect"
            )));
        }
        Ok(())
    }
}

/// Winding number of a closed polygon about a point.
pub fn winding_number(curve: &[Complex64], point: Complex64) -> i64 {
    let n = curve.len();
    let total: f64 = (0..n)
        .map(|j| ((curve[(j + 1) % n] - point) / (curve[j] - point)).arg())
        .sum();
    (total / TAU).round() as i64
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn segments_cross(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let d1 = cross(p2 - p1, q1 - p1);
    let d2 = cross(p2 - p1, q2 - p1);
    let d3 = cross(q2 - q1, p1 - q1);
    let d4 = cross(q2 - q1, p2 - q1);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Indices of the first pair of non-adjacent polygon edges that cross.
fn first_self_intersection(curve: &[Complex64]) -> Option<(usize, usize)> {
    let n = curve.len();
    let boxes: Vec<(f64, f64, f64, f64)> = (0..n)
        .map(|j| {
            let (a, b) = (curve[j], curve[(j + 1) % n]);
            (a.re.min(b.re), a.re.max(b.re), a.im.min(b.im), a.im.max(b.im))
        })
        .collect();
    for i in 0..n {
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (bi, bj) = (boxes[i], boxes[j]);
            if bi.1 < bj.0 || bj.1 < bi.0 || bi.3 < bj.2 || bj.3 < bi.2 {
                continue;
            }
            if segments_cross(curve[i], curve[(i + 1) % n], curve[j], curve[(j + 1) % n]) {
                return Some((i, j));
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq)]
struct EllipseMap {
    r: f64,
    modulus: f64,
    quarter_period: f64,
}

impl EllipseMap {
    /// `u = z/r`, nudged off the real slit `|u| > 1` so that the elliptic
    /// integral and its derivative are taken on the same side.
    fn scaled(&self, z: Complex64) -> Complex64 {
        let mut u = z / self.r;
        if u.im == 0.0 && u.re.abs() > 1.0 {
            u.im = 1e-200;
        }
        u
    }

    fn phase(&self, u: Complex64) -> Complex64 {
        let f = elliptic_f(u, self.modulus).expect("modulus is in [0, 1)");
        f * (FRAC_PI_2 / self.quarter_period)
    }

    /// `1/√((1 − u²)(1 − k²u²))` on the principal branches.
    fn integrand(&self, u: Complex64) -> Complex64 {
        let k2 = self.modulus * self.modulus;
        ONE / ((ONE - u * u).sqrt() * (ONE - k2 * u * u).sqrt())
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        self.phase(self.scaled(z)).sin()
    }

    fn deriv(&self, z: Complex64) -> Complex64 {
        let u = self.scaled(z);
        let scale = FRAC_PI_2 / (self.quarter_period * self.r);
        if (ONE - u * u).norm() < 1e-12 {
            // f is conformal at ±r; the 0·∞ product has the finite limit
            // (π/2K)² / ((1 − k²) r).
            let c = FRAC_PI_2 / self.quarter_period;
            return Complex64::new(c * c / ((1.0 - self.modulus * self.modulus) * self.r), 0.0);
        }
        self.phase(u).cos() * scale * self.integrand(u)
    }

    fn second_deriv(&self, z: Complex64) -> Complex64 {
        let u = self.scaled(z);
        let k2 = self.modulus * self.modulus;
        let c = FRAC_PI_2 / self.quarter_period;
        let theta = self.phase(u);
        let d = self.integrand(u);
        let dd = u * (ONE - k2 * u * u + k2 * (ONE - u * u)) * d * d * d;
        let t1 = c * d / self.r;
        let t2 = c * dd / (self.r * self.r);
        -theta.sin() * t1 * t1 + theta.cos() * t2
    }
}

/// A map of the exterior disk with a simple pole at infinity,
/// `φ(ζ) = β₁ζ + β₀ + Σ_{k≥1} β_{−k} ζ^{−k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExteriorMap {
    /// `beta[0] = β₁`, `beta[1] = β₀`, `beta[k + 1] = β_{−k}`.
    beta: Vec<Complex64>,
}

impl ExteriorMap {
    /// Keeps the Laurent coefficients of index `≤ 1`.
    pub fn from_laurent(coeffs: &LaurentCoeffs) -> Result<Self> {
        let beta: Vec<Complex64> = (coeffs.min_index()..=1).rev().map(|k| coeffs.coeff(k)).collect();
        Self::from_coefficients(beta)
    }

    /// Coefficients `[β₁, β₀, β_{−1}, β_{−2}, …]`.
    pub fn from_coefficients(beta: Vec<Complex64>) -> Result<Self> {
        if beta.is_empty() || beta[0].norm() == 0.0 {
            return Err(WeldError::Domain(
                "exterior map needs a nonzero capacity β₁".into(),
            ));
        }
        Ok(Self { beta })
    }

    /// `φ(ζ) = ½(c_λ ζ + 1/(c_λ ζ))`, `c_λ = (1 + √(1 − λ²))/λ`: the exterior
    /// of the disk onto the exterior of the ellipse with foci ±1 and
    /// eccentricity `λ`.
    pub fn joukowski(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(WeldError::Domain(format!(
                "joukowski: λ = {lambda} outside (0, 1)"
            )));
        }
        let c = joukowski_scale(lambda);
        Self::from_coefficients(vec![
            Complex64::new(0.5 * c, 0.0),
            ZERO,
            Complex64::new(0.5 / c, 0.0),
        ])
    }

    pub fn capacity(&self) -> Complex64 {
        self.beta[0]
    }

    /// `β_k` for `k ≤ 1`; zero for higher or unstored indices.
    pub fn coeff(&self, k: i64) -> Complex64 {
        if k > 1 {
            return ZERO;
        }
        self.beta.get((1 - k) as usize).copied().unwrap_or(ZERO)
    }

    /// `(k, β_k)` pairs in descending `k`.
    pub fn coefficients(&self) -> Vec<(i64, Complex64)> {
        self.beta
            .iter()
            .enumerate()
            .map(|(i, &b)| (1 - i as i64, b))
            .collect()
    }

    pub fn eval(&self, zeta: Complex64) -> Complex64 {
        let inv = ONE / zeta;
        let tail = self.beta[1..].iter().rev().fold(ZERO, |acc, &b| acc * inv + b);
        self.beta[0] * zeta + tail
    }

    pub fn boundary_samples(&self, grid: CircleGrid) -> PeriodicSamples {
        grid.sample(|t| self.eval(Complex64::cis(t)))
    }
}

/// `c_λ = (1 + √(1 − λ²))/λ`.
pub fn joukowski_scale(lambda: f64) -> f64 {
    (1.0 + (1.0 - lambda * lambda).sqrt()) / lambda
}

/// Inverse of the Joukowski map on its exterior domain: the root of
/// `cζ + 1/(cζ) = 2w` with `|cζ| ≥ 1`.
pub fn joukowski_inverse(lambda: f64, w: Complex64) -> Complex64 {
    let c = joukowski_scale(lambda);
    let disc = (w * w - ONE).sqrt();
    let (a, b) = (w + disc, w - disc);
    let root = if a.norm() >= b.norm() { a } else { b };
    root / c
}

/// `v₀(e^{it}) = 2K(r²)|r² − e^{2it}|/π`, the kernel function of the
/// elliptic-sine map.
pub fn ellipse_kernel(r: f64, grid: CircleGrid) -> Result<KernelFunction> {
    if !(r > 0.0 && r < 1.0) {
        return Err(WeldError::Domain(format!(
            "ellipse_kernel: r = {r} outside (0, 1)"
        )));
    }
    let kk = elliptic_k(r * r)?;
    let samples: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|&t| 2.0 * kk * (Complex64::new(r * r, 0.0) - Complex64::cis(2.0 * t)).norm() / PI)
        .collect();
    KernelFunction::new(grid, samples)
}

/// `v₀(z) ∝ ∏_{k=0}^{n−1} |z − r e^{2πik/n}|` on the circle, with the constant
/// fixed by `∫₀^{2π} dt/v₀ = 2π`.
pub fn quad_diff_kernel(n: usize, r: f64, grid: CircleGrid) -> Result<KernelFunction> {
    if n == 0 {
        return Err(WeldError::Domain("quad_diff_kernel: n must be at least 1".into()));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(WeldError::Domain(format!(
            "quad_diff_kernel: r = {r} outside (0, 1)"
        )));
    }
    let roots: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r, TAU * k as f64 / n as f64))
        .collect();
    let samples: Vec<f64> = grid
        .points()
        .iter()
        .map(|&z| roots.iter().map(|&zk| (z - zk).norm()).product())
        .collect();
    KernelFunction::new(grid, samples)?.normalized()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn taylor_identity_and_quadratic() {
        let id = BoundaryMap::from_taylor(&[ZERO, ONE]).unwrap();
        assert_eq!(id.eval(c(0.3, 0.2)), c(0.3, 0.2));
        let q = BoundaryMap::from_taylor(&[ZERO, ONE, c(0.2, 0.0)]).unwrap();
        assert!((q.eval(ONE) - c(1.2, 0.0)).norm() < 1e-15);
        assert!((q.deriv(ONE) - c(1.4, 0.0)).norm() < 1e-15);
        assert!((q.second_deriv(ONE) - c(0.4, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn taylor_rejects_self_intersecting_cubic() {
        let err = BoundaryMap::from_taylor(&[ZERO, ONE, ZERO, c(0.6, 0.0)]).unwrap_err();
        assert!(matches!(err, WeldError::NotSimple(_)), "{err}");
    }

    #[test]
    fn taylor_rejects_bad_normalization() {
        assert!(matches!(
            BoundaryMap::from_taylor(&[c(0.1, 0.0), ONE]),
            Err(WeldError::Normalization(_))
        ));
        assert!(BoundaryMap::from_taylor(&[ZERO, c(2.0, 0.0)]).is_err());
    }

    #[test]
    fn moebius_values() {
        let id = BoundaryMap::moebius(ZERO).unwrap();
        assert_eq!(id.eval(c(0.4, -0.1)), c(0.4, -0.1));
        let m = BoundaryMap::moebius(c(0.3, 0.0)).unwrap();
        assert!((m.eval(ONE) - c(1.0 / 0.7, 0.0)).norm() < 1e-15);
        assert!(BoundaryMap::moebius(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn moebius_derivatives_match_finite_differences() {
        let m = BoundaryMap::moebius(c(0.2, 0.25)).unwrap();
        let z = c(0.3, 0.5);
        let h = 1e-5;
        let fd = (m.eval(z + h) - m.eval(z - h)) / (2.0 * h);
        assert!((fd - m.deriv(z)).norm() < 1e-9);
        let fd2 = (m.deriv(z + h) - m.deriv(z - h)) / (2.0 * h);
        assert!((fd2 - m.second_deriv(z)).norm() < 1e-8);
    }

    #[test]
    fn ellipse_special_points() {
        let r = 0.6;
        let f = BoundaryMap::ellipse(r).unwrap();
        assert_eq!(f.eval(ZERO), ZERO);
        assert!((f.eval(c(r, 0.0)) - ONE).norm() < 1e-14);
        assert!((f.eval(c(-r, 0.0)) + ONE).norm() < 1e-14);
        assert_eq!(f.normalization(), Normalization::Catalog);
        assert!(BoundaryMap::ellipse(1.0).is_err());
    }

    #[test]
    fn ellipse_derivatives_match_finite_differences() {
        let f = BoundaryMap::ellipse(0.6).unwrap();
        let h = 1e-5;
        for z in [
            c(0.1, 0.2),
            ONE,
            c(-1.0, 0.0),
            Complex64::cis(0.3),
            Complex64::cis(2.9),
            c(0.0, 1.0),
        ] {
            // Differences along the tangent to stay inside the closed disk.
            let dir = if z.norm() > 0.99 { c(0.0, 1.0) * z } else { ONE };
            let fd = (f.eval(z + h * dir) - f.eval(z - h * dir)) / (2.0 * h * dir);
            assert!((fd - f.deriv(z)).norm() < 1e-8, "f' at {z}");
            let fd2 = (f.deriv(z + h * dir) - f.deriv(z - h * dir)) / (2.0 * h * dir);
            assert!((fd2 - f.second_deriv(z)).norm() < 1e-7, "f'' at {z}");
        }
    }

    #[test]
    fn ellipse_boundary_is_simple() {
        let f = BoundaryMap::ellipse(0.6).unwrap();
        f.check_boundary(CircleGrid::new(256).unwrap()).unwrap();
    }

    #[test]
    fn joukowski_vertices() {
        let lambda = 0.4;
        let phi = ExteriorMap::joukowski(lambda).unwrap();
        let cl = joukowski_scale(lambda);
        assert!((phi.eval(ONE) - c(1.0 / lambda, 0.0)).norm() < 1e-14);
        assert!((phi.eval(c(0.0, 1.0)) - c(0.0, 0.5 * (cl - 1.0 / cl))).norm() < 1e-14);
        assert!(ExteriorMap::joukowski(1.2).is_err());
        let w = phi.eval(Complex64::cis(1.1));
        assert!((joukowski_inverse(lambda, w) - Complex64::cis(1.1)).norm() < 1e-13);
    }

    #[test]
    fn ellipse_kernel_values() {
        let r: f64 = 0.6;
        let g = CircleGrid::new(256).unwrap();
        let v = ellipse_kernel(r, g).unwrap();
        let kk = elliptic_k(r * r).unwrap();
        assert!((v.samples()[0] - 2.0 * kk * (1.0 - r * r) / PI).abs() < 1e-14);
        assert!((v.samples()[64] - 2.0 * kk * (1.0 + r * r) / PI).abs() < 1e-14);
        assert!((v.normalization_integral() - TAU).abs() < 1e-9);
    }

    #[test]
    fn quad_diff_kernel_n2_is_ellipse_kernel() {
        let g = CircleGrid::new(256).unwrap();
        let a = quad_diff_kernel(2, 0.6, g).unwrap();
        let b = ellipse_kernel(0.6, g).unwrap();
        let err = a
            .samples()
            .iter()
            .zip(b.samples())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn quad_diff_kernel_n1_is_proportional_to_distance() {
        let g = CircleGrid::new(64).unwrap();
        let v = quad_diff_kernel(1, 0.3, g).unwrap();
        let ratios: Vec<f64> = g
            .points()
            .iter()
            .zip(v.samples())
            .map(|(z, s)| s / (z - c(0.3, 0.0)).norm())
            .collect();
        let spread = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(spread < 1e-13);
        assert!(v.samples().iter().all(|&s| s > 0.0));
    }

    #[test]
    fn samples_map_roundtrip() {
        let g = CircleGrid::new(64).unwrap();
        let m = BoundaryMap::moebius(c(0.2, 0.0)).unwrap();
        let s = BoundaryMap::from_boundary_samples(&m.boundary_samples(g)).unwrap();
        let z = c(0.1, -0.4);
        assert!((s.eval(z) - m.eval(z)).norm() < 1e-14);
        assert!((s.deriv(z) - m.deriv(z)).norm() < 1e-13);
    }

    #[test]
    fn samples_of_nonanalytic_function_rejected() {
        let g = CircleGrid::new(32).unwrap();
        let s = g.sample(|t| Complex64::cis(t) + 0.1 * Complex64::cis(-t));
        assert!(BoundaryMap::from_boundary_samples(&s).is_err());
    }
}
