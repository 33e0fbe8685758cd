//! Carlson's symmetric elliptic integral, Legendre's `F` and `K`, and the
//! polynomial utilities (root finding, residues at simple poles) used by the
//! inverse problem.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Result, WeldError};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Carlson's `R_F(x, y, z)` on the principal branch, by the duplication
/// theorem followed by the seventh-order Taylor tail.
pub fn carlson_rf(x: Complex64, y: Complex64, z: Complex64) -> Result<Complex64> {
    let zeros = [x, y, z].iter().filter(|a| a.norm() == 0.0).count();
    if zeros >= 2 {
        return Err(WeldError::Domain(
            "carlson_rf: at most one argument may be zero".into(),
        ));
    }
    let (x0, y0) = (x, y);
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + z) / 3.0;
    let mut a = a0;
    // r = 1e-17 gives a truncation error well below double precision.
    let q = (3.0e-17f64).powf(-1.0 / 6.0)
        * [(a0 - x).norm(), (a0 - y).norm(), (a0 - z).norm()]
            .into_iter()
            .fold(0.0, f64::max);
    let mut scale = 1.0;
    for _ in 0..100 {
        if q * scale < a.norm() {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sy * sz + sz * sx;
        x = (x + lambda) * 0.25;
        y = (y + lambda) * 0.25;
        z = (z + lambda) * 0.25;
        a = (a + lambda) * 0.25;
        scale *= 0.25;
    }
    let xx = (a0 - x0) * scale / a;
    let yy = (a0 - y0) * scale / a;
    let zz = -(xx + yy);
    let e2 = xx * yy - zz * zz;
    let e3 = xx * yy * zz;
    let series =
        ONE - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - e2 * e3 * (3.0 / 44.0) - e2 * e2 * e2 * (5.0 / 208.0)
            + e3 * e3 * (3.0 / 104.0)
            + e2 * e2 * e3 / 16.0;
    Ok(series / a.sqrt())
}

/// Incomplete elliptic integral of the first kind
/// `F(z, k) = ∫₀^z dq / √((1 − q²)(1 − k²q²))`, evaluated as
/// `z · R_F(1 − z², 1 − k²z², 1)`.
///
/// The value is the continuation along the segment from `0` to `z`, which is
/// single valued off the real slits `|Re z| > 1`. The branch points `±1` and
/// `±1/k` themselves are integrable endpoints, so `F(1, k) = K(k)`.
pub fn elliptic_f(z: Complex64, k: f64) -> Result<Complex64> {
    if !(0.0..1.0).contains(&k) {
        return Err(WeldError::Domain(format!(
            "elliptic_f: modulus {k} outside [0, 1)"
        )));
    }
    if !z.is_finite() {
        return Err(WeldError::Domain(format!("elliptic_f: non-finite argument {z}")));
    }
    if z.norm() == 0.0 {
        return Ok(ZERO);
    }
    let z2 = z * z;
    Ok(z * carlson_rf(ONE - z2, ONE - k * k * z2, ONE)?)
}

/// Complete elliptic integral `K(k) = F(1, k)` by the arithmetic-geometric
/// mean.
pub fn elliptic_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(WeldError::Domain(format!(
            "elliptic_k: modulus {k} outside [0, 1)"
        )));
    }
    let mut a = 1.0;
    let mut b = (1.0 - k * k).sqrt();
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    Ok(FRAC_PI_2 / a)
}

/// Polynomial with complex coefficients in ascending order of degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        match coeffs.last() {
            Some(lead) if lead.norm() > 0.0 => Ok(Self { coeffs }),
            _ => Err(WeldError::Domain("polynomial leading coefficient is zero".into())),
        }
    }

    /// `leading · ∏ (x − root)`.
    pub fn from_roots(roots: &[Complex64], leading: Complex64) -> Result<Self> {
        let mut coeffs = vec![leading];
        for &r in roots {
            let mut next = vec![ZERO; coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().expect("nonempty")
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * x + c)
    }

    /// `(p(x), p'(x))` by Horner's scheme.
    pub fn eval_with_derivative(&self, x: Complex64) -> (Complex64, Complex64) {
        let mut p = ZERO;
        let mut dp = ZERO;
        for &c in self.coeffs.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    }

    /// `Σ |a_k| |x|^k`, the natural scale for rounding error in `p(x)`.
    pub fn eval_scale(&self, x: Complex64) -> f64 {
        let r = x.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() == 1 {
            return Polynomial { coeffs: vec![ZERO] };
        }
        Polynomial {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        }
    }

    pub fn max_coeff_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Roots of a polynomial, listed with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Monic polynomial `∏ (x − root)`.
    pub fn monic(&self) -> Polynomial {
        Polynomial::from_roots(&self.roots, ONE).expect("leading coefficient is one")
    }
}

/// All roots of `p` by Ehrlich–Aberth iteration, polished with Newton steps.
pub fn poly_roots(p: &Polynomial) -> Result<RootSet> {
    let n = p.degree();
    if n == 0 {
        return Err(WeldError::Domain("poly_roots: degree must be at least 1".into()));
    }
    let lead = p.leading();
    if n == 1 {
        return Ok(RootSet {
            roots: vec![-p.coeffs()[0] / lead],
        });
    }
    // Initial points on a circle of radius given by the geometric mean of the
    // root moduli, rotated off the real axis to break symmetry.
    let mut radius = (p.coeffs()[0] / lead).norm().powf(1.0 / n as f64);
    if !radius.is_finite() || radius == 0.0 {
        radius = 1.0;
    }
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| radius * Complex64::cis(std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();

    const MAX_ITER: usize = 500;
    let mut converged = false;
    for _ in 0..MAX_ITER {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (v, dv) = p.eval_with_derivative(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| ONE / (z[i] - z[j])).sum();
            let step = ratio / (ONE - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }

    for root in z.iter_mut() {
        for _ in 0..3 {
            let (v, dv) = p.eval_with_derivative(*root);
            if dv.norm() == 0.0 {
                break;
            }
            let step = v / dv;
            if !step.is_finite() || step.norm() < 1e-17 * root.norm() {
                break;
            }
            *root -= step;
        }
    }

    let residual_ok = z
        .iter()
        .all(|&r| p.eval(r).norm() <= 1e-10 * p.eval_scale(r).max(p.max_coeff_abs()));
    if !converged && !residual_ok {
        return Err(WeldError::RootsNotConverged {
            iterations: MAX_ITER,
            partial: z,
        });
    }
    Ok(RootSet { roots: z })
}

/// Residue of `x^power / q(x)` at a simple root `pole` of `q`:
/// `pole^power / q'(pole)`.
pub fn simple_residue(power: u32, q: &Polynomial, pole: Complex64) -> Result<Complex64> {
    let dq = q.derivative();
    let d = dq.eval(pole);
    let scale = dq.eval_scale(pole).max(f64::MIN_POSITIVE);
    if d.norm() < 1e-8 * scale {
        return Err(WeldError::MultipleRoot {
            pole,
            derivative: d.norm(),
        });
    }
    Ok(pole.powu(power) / d)
}
