//! Reconstruction of `f` from a kernel function that is a positive
//! trigonometric polynomial
//!
//! ```text
//! v₀(z) = a₀ + Σ_{k=1}^n (a_k z^k + conj(a_k) z^{−k})
//!       = κ ∏ (e^{−it_k}/z)(z_k − z)(z − 1/conj(z_k)),   z_k = r_k e^{it_k}.
//! ```
//!
//! With `Q(z) = zⁿ v₀(z)` and `P(w) = ∏ (w − w_k)`, the map satisfies
//! `w^{n−1} dw / P(w) = z^{n−1} dz / Q(z)` with `w_k = f(z_k)`. Comparing
//! residues gives `w_k^{n−1} / P_k(w_k) = A_k := Res_{z_k} z^{n−1}/Q`, and
//! `f'(0) = 1` forces `∏ w_k = (−1)ⁿ Q(0)`.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::boundary::BoundaryMap;
use crate::circle::{CircleGrid, PeriodicSamples};
use crate::error::{Result, WeldError};
use crate::kernel::{solve_v0, KernelFunction, NORMALIZATION_TOL};
use crate::ode::{self, Tolerances};
use crate::specialfn::{poly_roots, simple_residue, Polynomial};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Seed of the multi-start generator when none is given.
pub const DEFAULT_SEED: u64 = 42;
/// Roots closer than this to the unit circle are rejected.
pub const CIRCLE_MARGIN: f64 = 1e-6;
/// Tolerance of the residue equations for an accepted candidate.
pub const RESIDUE_TOL: f64 = 1e-9;
/// Tolerance of `∏ w_k = (−1)ⁿ Q(0)` for an accepted candidate.
pub const PRODUCT_TOL: f64 = 1e-8;
/// Largest admissible sup-norm gap between the input kernel and the kernel
/// of the recovered map.
pub const ROUND_TRIP_TOL: f64 = 1e-5;
/// Candidates closer than this (sup norm) are duplicates.
const DEDUP_TOL: f64 = 1e-6;
/// Rays passing closer than this to a root of `Q` take a detour.
const DETOUR_MARGIN: f64 = 2e-2;
const SERIES_TERMS: usize = 30;

/// A positive trigonometric polynomial kernel in both representations.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolyV0 {
    /// `a₀ .. a_n`; `a₀` is real.
    coeffs: Vec<Complex64>,
    /// Interior roots `z_k` of `Q`.
    roots: Vec<Complex64>,
    kappa: f64,
    q_poly: Polynomial,
    grid: CircleGrid,
}

impl TrigPolyV0 {
    /// From coefficients `a₀ .. a_n`. The kernel is rescaled if needed so that
    /// `∫dt/v₀ = 2π`.
    pub fn from_coeffs(a: &[Complex64], grid: CircleGrid) -> Result<Self> {
        if a.len() < 2 {
            return Err(WeldError::DegreeZero);
        }
        let n = a.len() - 1;
        if a[n].norm() == 0.0 {
            return Err(WeldError::Domain("leading coefficient a_n vanishes".into()));
        }
        let scale = a.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if a[0].im.abs() > 1e-12 * scale {
            return Err(WeldError::Domain(format!("a0 = {} must be real", a[0])));
        }
        let mut coeffs = a.to_vec();
        coeffs[0].im = 0.0;
        let q = q_from_coeffs(&coeffs);
        let min = grid
            .points()
            .iter()
            .map(|&z| eval_coeffs(&coeffs, z))
            .fold(f64::INFINITY, f64::min);
        if !(min > 0.0) {
            return Err(WeldError::NotPositive { min });
        }
        let all = poly_roots(&q)?.roots;
        let roots = interior_roots(&all)?;
        if roots.len() != n {
            return Err(WeldError::Domain(format!(
                "Q has {} roots inside the disk, expected {n}",
                roots.len()
            )));
        }
        // Leading coefficient of the product form is κ (−1)ⁿ ∏ |z_k|/z_k.
        let phase: Complex64 = roots.iter().map(|z| z.norm() / z).product();
        let kappa_c = coeffs[n] / (phase * if n.is_multiple_of(2) { 1.0 } else { -1.0 });
        if kappa_c.im.abs() > 1e-8 * kappa_c.norm() || !(kappa_c.re > 0.0) {
            return Err(WeldError::Domain(format!(
                "root pairing inconsistent with a positive kernel (κ = {kappa_c})"
            )));
        }
        Self::assemble(roots, kappa_c.re, grid)
    }

    /// From the interior roots `z_k`, with `κ` fixed by the normalization.
    pub fn from_roots(roots: &[Complex64], grid: CircleGrid) -> Result<Self> {
        if roots.is_empty() {
            return Err(WeldError::DegreeZero);
        }
        for &z in roots {
            if !(z.norm() > 0.0) {
                return Err(WeldError::Domain("roots must be nonzero".into()));
            }
            if !(z.norm() < 1.0 - CIRCLE_MARGIN) {
                return Err(WeldError::RootNearCircle { root: z });
            }
        }
        for (i, &a) in roots.iter().enumerate() {
            for &b in &roots[..i] {
                if (a - b).norm() < 1e-10 {
                    return Err(WeldError::CoincidentRoots(b, a));
                }
            }
        }
        Self::assemble(roots.to_vec(), 1.0, grid)
    }

    /// Builds both representations from roots and a provisional `κ`, then
    /// rescales so the normalization holds. Since `∫dt/v₀ = 2π Σ A_k`, the
    /// rescaling is exact.
    fn assemble(roots: Vec<Complex64>, kappa: f64, grid: CircleGrid) -> Result<Self> {
        let n = roots.len();
        let q = q_from_roots(&roots, kappa)?;
        let mut residue_sum = ZERO;
        for &z in &roots {
            residue_sum += simple_residue((n - 1) as u32, &q, z)?;
        }
        let kappa = kappa * residue_sum.re;
        let q = q_from_roots(&roots, kappa)?;
        let mut coeffs: Vec<Complex64> = (0..=n).map(|k| q.coeffs()[n + k]).collect();
        coeffs[0].im = 0.0;
        let out = Self {
            coeffs,
            roots,
            kappa,
            q_poly: q,
            grid,
        };
        let min = out.samples().iter().copied().fold(f64::INFINITY, f64::min);
        if !(min > 0.0) {
            return Err(WeldError::NotPositive { min });
        }
        let integral = out.kernel_unchecked().normalization_integral();
        if (integral - TAU).abs() > NORMALIZATION_TOL {
            return Err(WeldError::Normalization(format!(
                "∫dt/v0 = {integral} on {} nodes; refine the grid",
                grid.len()
            )));
        }
        Ok(out)
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn q_poly(&self) -> &Polynomial {
        &self.q_poly
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    /// `v₀(e^{it})` from the product form `κ ∏ |e^{it} − z_k|² / r_k`.
    pub fn eval(&self, t: f64) -> f64 {
        let z = Complex64::cis(t);
        self.kappa
            * self
                .roots
                .iter()
                .map(|&zk| (z - zk).norm_sqr() / zk.norm())
                .product::<f64>()
    }

    pub fn samples(&self) -> Vec<f64> {
        self.grid.nodes().into_iter().map(|t| self.eval(t)).collect()
    }

    fn kernel_unchecked(&self) -> KernelFunction {
        KernelFunction::new(self.grid, self.samples()).expect("positivity checked")
    }

    /// Samples as a normalized kernel function.
    pub fn kernel(&self) -> KernelFunction {
        self.kernel_unchecked()
    }

    /// `Q(z)` from the product form, accurate near its roots.
    fn q_product(&self, z: Complex64) -> Complex64 {
        self.kappa
            * self
                .roots
                .iter()
                .map(|&zk| (zk.norm() / zk) * (zk - z) * (z - 1.0 / zk.conj()))
                .product::<Complex64>()
    }
}

fn q_from_coeffs(a: &[Complex64]) -> Polynomial {
    let n = a.len() - 1;
    let mut q = vec![ZERO; 2 * n + 1];
    q[n] = a[0];
    for k in 1..=n {
        q[n + k] = a[k];
        q[n - k] = a[k].conj();
    }
    Polynomial::new(q).expect("leading coefficient checked")
}

fn q_from_roots(roots: &[Complex64], kappa: f64) -> Result<Polynomial> {
    let n = roots.len();
    let phase: Complex64 = roots.iter().map(|z| z.norm() / z).product();
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let all: Vec<Complex64> = roots
        .iter()
        .copied()
        .chain(roots.iter().map(|z| 1.0 / z.conj()))
        .collect();
    let q = Polynomial::from_roots(&all, kappa * sign * phase)?;
    // Enforce the self-reciprocal symmetry q_{n−k} = conj(q_{n+k}).
    let c = q.coeffs();
    let sym: Vec<Complex64> = (0..=2 * n)
        .map(|j| {
            let mirror = c[2 * n - j].conj();
            0.5 * (c[j] + mirror)
        })
        .collect();
    Polynomial::new(sym)
}

fn eval_coeffs(a: &[Complex64], z: Complex64) -> f64 {
    let mut v = a[0].re;
    let mut p = ONE;
    for ak in &a[1..] {
        p *= z;
        v += 2.0 * (ak * p).re;
    }
    v
}

/// Interior roots, after checking distance from the circle, simplicity and
/// pairing with their reflections.
fn interior_roots(all: &[Complex64]) -> Result<Vec<Complex64>> {
    for (i, &a) in all.iter().enumerate() {
        if (a.norm() - 1.0).abs() < CIRCLE_MARGIN {
            return Err(WeldError::RootNearCircle { root: a });
        }
        for &b in &all[..i] {
            if (a - b).norm() < 1e-8 * (1.0 + a.norm()) {
                return Err(WeldError::CoincidentRoots(b, a));
            }
        }
    }
    let inside: Vec<Complex64> = all.iter().copied().filter(|z| z.norm() < 1.0).collect();
    for &z in &inside {
        let mirror = 1.0 / z.conj();
        let nearest = all
            .iter()
            .map(|&y| (y - mirror).norm())
            .fold(f64::INFINITY, f64::min);
        if nearest > 1e-6 * mirror.norm() {
            return Err(WeldError::Domain(format!("root {z} has no reflected partner")));
        }
    }
    let mut inside = inside;
    inside.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(inside)
}

/// `A_k = z_k^{n−1} / Q'(z_k)`.
pub fn residues(v: &TrigPolyV0) -> Result<Vec<Complex64>> {
    let n = v.degree() as u32;
    v.roots
        .iter()
        .map(|&z| simple_residue(n - 1, &v.q_poly, z))
        .collect()
}

/// Residue equations `w_k^{n−1} − A_k P_k(w_k)` for every `k`, followed by
/// the product condition `∏ w − (−1)ⁿ Q(0)`.
pub fn system_residuals(v: &TrigPolyV0, a: &[Complex64], w: &[Complex64]) -> (Vec<Complex64>, Complex64) {
    let n = w.len();
    let eqs = (0..n)
        .map(|k| w[k].powu(n as u32 - 1) - a[k] * partial_product(w, k))
        .collect();
    (eqs, product_defect(v, w))
}

fn partial_product(w: &[Complex64], k: usize) -> Complex64 {
    (0..w.len()).filter(|&j| j != k).map(|j| w[k] - w[j]).product()
}

fn product_defect(v: &TrigPolyV0, w: &[Complex64]) -> Complex64 {
    let sign = if w.len().is_multiple_of(2) { 1.0 } else { -1.0 };
    w.iter().product::<Complex64>() - sign * v.q_poly.coeffs()[0]
}

/// The square Newton system: residue equations `1 .. n−1` and the product
/// condition. The residue equations are invariant under scaling `w`, and
/// their sum is implied by `Σ A_k = 1`, so the dropped equation follows
/// from the others.
fn newton_system(v: &TrigPolyV0, a: &[Complex64], w: &[Complex64]) -> DVector<Complex64> {
    let n = w.len();
    let mut f = DVector::from_element(n, ZERO);
    for k in 0..n - 1 {
        f[k] = w[k].powu(n as u32 - 1) - a[k] * partial_product(w, k);
    }
    f[n - 1] = product_defect(v, w);
    f
}

fn newton_jacobian(a: &[Complex64], w: &[Complex64]) -> DMatrix<Complex64> {
    let n = w.len();
    let mut jac = DMatrix::from_element(n, n, ZERO);
    let except = |k: usize, j: usize| -> Complex64 {
        (0..n)
            .filter(|&l| l != k && l != j)
            .map(|l| w[k] - w[l])
            .product()
    };
    for k in 0..n - 1 {
        let mut diag = if n >= 2 {
            (n as f64 - 1.0) * w[k].powu(n as u32 - 2)
        } else {
            ZERO
        };
        for j in 0..n {
            if j == k {
                continue;
            }
            let e = except(k, j);
            diag -= a[k] * e;
            jac[(k, j)] = a[k] * e;
        }
        jac[(k, k)] = diag;
    }
    for j in 0..n {
        jac[(n - 1, j)] = (0..n).filter(|&l| l != j).map(|l| w[l]).product();
    }
    jac
}

fn sup_norm(v: &DVector<Complex64>) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Damped Newton from `w0`; `None` if it stalls.
fn newton(v: &TrigPolyV0, a: &[Complex64], w0: Vec<Complex64>, scale: f64) -> Option<Vec<Complex64>> {
    let mut w = w0;
    let mut f = newton_system(v, a, &w);
    let mut norm = sup_norm(&f);
    for _ in 0..100 {
        if norm <= 1e-14 * scale.powi(w.len() as i32).max(1.0) {
            break;
        }
        let step = newton_jacobian(a, &w).lu().solve(&f)?;
        let mut lambda = 1.0;
        loop {
            let trial: Vec<Complex64> = w.iter().zip(step.iter()).map(|(x, d)| x - lambda * d).collect();
            let ft = newton_system(v, a, &trial);
            let nt = sup_norm(&ft);
            if nt.is_finite() && (nt < norm || lambda < 1e-3) {
                w = trial;
                f = ft;
                norm = nt;
                break;
            }
            lambda *= 0.5;
        }
        if !w.iter().all(|x| x.is_finite()) {
            return None;
        }
    }
    Some(w)
}

fn accept(v: &TrigPolyV0, a: &[Complex64], w: &[Complex64]) -> bool {
    let (eqs, prod) = system_residuals(v, a, w);
    let distinct = (0..w.len()).all(|i| (0..i).all(|j| (w[i] - w[j]).norm() > DEDUP_TOL));
    distinct && eqs.iter().all(|e| e.norm() <= RESIDUE_TOL) && prod.norm() <= PRODUCT_TOL
}

fn lexicographic(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o.is_ne() {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

/// Solutions `w₁ .. w_n` of the residue system and product condition, with
/// the default seed.
pub fn solve_wk(v: &TrigPolyV0, attempts: usize) -> Result<Vec<Vec<Complex64>>> {
    solve_wk_seeded(v, attempts, DEFAULT_SEED)
}

/// Multi-start Newton. Starts are `ρ |Q(0)|^{1/n} z_k/|z_k|` for
/// `ρ ∈ {0.5, 1, 2}`, then random perturbations of those, up to `attempts`
/// starts in total. Distinct solutions are returned in lexicographic order;
/// permutations count as distinct.
pub fn solve_wk_seeded(v: &TrigPolyV0, attempts: usize, seed: u64) -> Result<Vec<Vec<Complex64>>> {
    let a = residues(v)?;
    let n = v.degree();
    let q0 = v.q_poly.coeffs()[0];
    if n == 1 {
        let w = vec![-q0];
        return if accept(v, &a, &w) {
            Ok(vec![w])
        } else {
            Err(WeldError::NoCandidates { attempts: 1 })
        };
    }
    let scale = q0.norm().powf(1.0 / n as f64);
    let dirs: Vec<Complex64> = v.roots.iter().map(|z| z / z.norm()).collect();
    let mut starts: Vec<Vec<Complex64>> = [1.0, 0.5, 2.0]
        .iter()
        .map(|rho| dirs.iter().map(|d| rho * scale * d).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while starts.len() < attempts {
        let base = starts[starts.len() % 3].clone();
        let perturbed = base
            .iter()
            .map(|&b| {
                let r = scale * rng.gen_range(0.0..1.0f64);
                b + Complex64::from_polar(r, rng.gen_range(0.0..TAU))
            })
            .collect();
        starts.push(perturbed);
    }
    starts.truncate(attempts.max(1));

    let solved: Vec<Option<Vec<Complex64>>> = starts
        .into_par_iter()
        .map(|w0| newton(v, &a, w0, scale).filter(|w| accept(v, &a, w)))
        .collect();
    let mut found: Vec<Vec<Complex64>> = Vec::new();
    for w in solved.into_iter().flatten() {
        let dup = found
            .iter()
            .any(|u| u.iter().zip(&w).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) <= DEDUP_TOL);
        if !dup {
            found.push(w);
        }
    }
    if found.is_empty() {
        return Err(WeldError::NoCandidates { attempts });
    }
    found.sort_by(|x, y| lexicographic(x, y));
    Ok(found)
}

/// Right-hand side and seed of `w^{n−1} dw / P(w) = z^{n−1} dz / Q(z)`.
struct Flow<'a> {
    v: &'a TrigPolyV0,
    w: &'a [Complex64],
    /// `u = w/z = Σ d_m z^m`.
    series: Vec<Complex64>,
    seed_radius: f64,
}

impl<'a> Flow<'a> {
    fn new(v: &'a TrigPolyV0, w: &'a [Complex64]) -> Result<Self> {
        let min_root = v.roots.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
        let seed_radius = (0.5 * min_root).min(0.1);
        let series = series_seed(v, w, SERIES_TERMS)?;
        Ok(Self {
            v,
            w,
            series,
            seed_radius,
        })
    }

    fn seed(&self, z: Complex64) -> Complex64 {
        z * self.series.iter().rev().fold(ZERO, |acc, &d| acc * z + d)
    }

    /// `dw/dz = (z/w)^{n−1} P(w) / Q(z)`.
    fn slope(&self, z: Complex64, w: Complex64) -> Result<Complex64> {
        let n = self.w.len() as u32;
        let p: Complex64 = self.w.iter().map(|&wk| w - wk).product();
        let q = self.v.q_product(z);
        let out = (z / w).powu(n - 1) * p / q;
        if !out.is_finite() {
            return Err(WeldError::Ode(format!("singular slope at z = {z}, w = {w}")));
        }
        Ok(out)
    }

    /// Boundary value at angle `alpha`, approaching along the ray at
    /// `alpha + offset` and then along the unit circle.
    fn boundary_value(&self, alpha: f64, offset: f64) -> Result<Complex64> {
        let beta = alpha + offset;
        let dir = Complex64::cis(beta);
        let rho0 = self.seed_radius;
        let w0 = self.seed(rho0 * dir);
        let ray = ode::integrate(
            |rho, w| self.slope(rho * dir, w).map(|s| s * dir),
            rho0,
            w0,
            &[1.0],
            Tolerances::default(),
        )?[0];
        if offset == 0.0 {
            return Ok(ray);
        }
        let sign = -offset.signum();
        let arc = ode::integrate(
            |s, w| {
                let z = Complex64::cis(beta + sign * s);
                self.slope(z, w).map(|d| d * Complex64::new(0.0, sign) * z)
            },
            0.0,
            ray,
            &[offset.abs()],
            Tolerances::default(),
        )?[0];
        Ok(arc)
    }

    /// Smallest angular offset whose ray keeps clear of every root.
    fn detour(&self, alpha: f64) -> Result<f64> {
        let clear = |beta: f64| {
            let d = Complex64::cis(beta);
            self.v
                .roots
                .iter()
                .all(|&zk| segment_distance(zk, self.seed_radius * d, d) >= DETOUR_MARGIN)
        };
        if clear(alpha) {
            return Ok(0.0);
        }
        for k in 1..=64 {
            let delta = 0.02 * k as f64;
            for s in [1.0, -1.0] {
                if clear(alpha + s * delta) {
                    return Ok(s * delta);
                }
            }
        }
        Err(WeldError::Ode(format!("no clear ray near angle {alpha}")))
    }
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let t = ((p - a) * ab.conj()).re / ab.norm_sqr();
    (p - (a + t.clamp(0.0, 1.0) * ab)).norm()
}

fn series_mul(a: &[Complex64], b: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        for (j, &y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn series_pow(a: &[Complex64], p: usize, len: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; len];
    out[0] = ONE;
    for _ in 0..p {
        out = series_mul(&out, a, len);
    }
    out
}

/// Coefficient `m` of `u^{n−1} (u + z u') Q(z) − P(z u)`, truncated.
fn series_defect(q: &[Complex64], p: &[Complex64], u: &[Complex64], n: usize, m: usize) -> Complex64 {
    let len = m + 1;
    let du: Vec<Complex64> = u
        .iter()
        .take(len)
        .enumerate()
        .map(|(j, &d)| (j as f64 + 1.0) * d)
        .collect();
    let lhs = series_mul(&series_mul(&series_pow(u, n - 1, len), &du, len), q, len);
    // P(z u) = Σ p_j z^j u^j.
    let mut zu = vec![ZERO; len];
    let k = len.saturating_sub(1).min(u.len());
    zu[1..=k].copy_from_slice(&u[..k]);
    let mut rhs = vec![ZERO; len];
    let mut power = vec![ZERO; len];
    power[0] = ONE;
    for &pj in p {
        for (r, x) in rhs.iter_mut().zip(&power) {
            *r += pj * x;
        }
        power = series_mul(&power, &zu, len);
    }
    lhs[m] - rhs[m]
}

/// Taylor coefficients `d_0 = 1, d_1, …` of `u = f(z)/z`. The coefficient of
/// `d_m` at order `m` is `(n + m) Q(0)`.
pub fn series_seed(v: &TrigPolyV0, w: &[Complex64], terms: usize) -> Result<Vec<Complex64>> {
    let n = v.degree();
    if w.len() != n {
        return Err(WeldError::LengthMismatch {
            expected: n,
            got: w.len(),
        });
    }
    let q = v.q_poly.coeffs();
    let p = Polynomial::from_roots(w, ONE)?;
    let mut u = vec![ZERO; terms];
    u[0] = ONE;
    for m in 1..terms {
        let defect = series_defect(q, p.coeffs(), &u, n, m);
        u[m] = -defect / ((n + m) as f64 * q[0]);
    }
    Ok(u)
}

/// Boundary value of the solution through the ray at `alpha + offset`; two
/// homotopic paths must agree.
pub fn boundary_value(v: &TrigPolyV0, w: &[Complex64], alpha: f64, offset: f64) -> Result<Complex64> {
    Flow::new(v, w)?.boundary_value(alpha, offset)
}

/// Integrates the map from the seed near 0 to every grid node and extends it
/// to the disk from its boundary Fourier modes.
pub fn integrate_f(v: &TrigPolyV0, w: &[Complex64], grid: CircleGrid) -> Result<BoundaryMap> {
    let flow = Flow::new(v, w)?;
    let values = grid
        .nodes()
        .into_par_iter()
        .map(|t| flow.boundary_value(t, flow.detour(t)?))
        .collect::<Result<Vec<Complex64>>>()?;
    BoundaryMap::from_samples_unchecked(&PeriodicSamples::new(grid, values)?)
}

/// A recovered map with its data.
#[derive(Debug, Clone)]
pub struct InverseSolution {
    pub w: Vec<Complex64>,
    /// `P(w) = ∏ (w − w_k)`.
    pub p_poly: Polynomial,
    pub f_map: BoundaryMap,
    pub univalent: bool,
    /// Sup-norm gap between the input kernel and the kernel of `f_map`.
    pub residual: f64,
}

/// The constant kernel `v₀ ≡ 1` corresponds to rotations; the normalized
/// representative is the identity.
pub fn identity_solution() -> InverseSolution {
    InverseSolution {
        w: Vec::new(),
        p_poly: Polynomial::new(vec![ONE]).expect("nonzero"),
        f_map: BoundaryMap::identity(),
        univalent: true,
        residual: 0.0,
    }
}

/// Outcome of testing one candidate.
#[derive(Debug, Clone)]
pub struct CandidateReport {
    pub w: Vec<Complex64>,
    /// `max |f(z_k) − w_k|`.
    pub label_defect: f64,
    pub univalent: bool,
    /// `None` when the map could not be integrated or the kernel solve failed.
    pub residual: Option<f64>,
    pub error: Option<String>,
}

fn evaluate_candidate(v: &TrigPolyV0, w: &[Complex64]) -> (CandidateReport, Option<BoundaryMap>) {
    let mut report = CandidateReport {
        w: w.to_vec(),
        label_defect: f64::INFINITY,
        univalent: false,
        residual: None,
        error: None,
    };
    let f = match integrate_f(v, w, v.grid) {
        Ok(f) => f,
        Err(e) => {
            report.error = Some(e.to_string());
            return (report, None);
        }
    };
    report.label_defect = v
        .roots
        .iter()
        .zip(w)
        .map(|(&z, &wk)| (f.eval(z) - wk).norm())
        .fold(0.0, f64::max);
    report.univalent = f.check_boundary(v.grid).is_ok();
    if report.univalent {
        match solve_v0(&f, v.grid) {
            Ok(k) => {
                let gap = k
                    .samples()
                    .iter()
                    .zip(v.samples())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                report.residual = Some(gap);
            }
            Err(e) => report.error = Some(e.to_string()),
        }
    }
    (report, Some(f))
}

/// Every candidate of [`solve_wk`] with its filter outcomes, sorted by
/// residual and then lexicographically by `w`.
pub fn candidate_reports(v: &TrigPolyV0, attempts: usize, seed: u64) -> Result<Vec<CandidateReport>> {
    let cands = solve_wk_seeded(v, attempts, seed)?;
    let mut reports: Vec<CandidateReport> = cands.par_iter().map(|w| evaluate_candidate(v, w).0).collect();
    sort_reports(&mut reports);
    Ok(reports)
}

fn sort_reports(reports: &mut [CandidateReport]) {
    reports.sort_by(|a, b| {
        let ra = a.residual.unwrap_or(f64::INFINITY);
        let rb = b.residual.unwrap_or(f64::INFINITY);
        ra.total_cmp(&rb).then_with(|| lexicographic(&a.w, &b.w))
    });
}

/// Label tolerance `|f(z_k) − w_k|` for a surviving candidate.
const LABEL_TOL: f64 = 1e-6;

/// Recovers `f` with the default attempt budget and seed.
pub fn reconstruct(v: &TrigPolyV0) -> Result<InverseSolution> {
    reconstruct_with(v, 64, DEFAULT_SEED)
}

/// Integrates every candidate and keeps those whose map is univalent, sends
/// `z_k` to `w_k`, and reproduces `v₀` to `1e−5`. Exactly one must remain.
pub fn reconstruct_with(v: &TrigPolyV0, attempts: usize, seed: u64) -> Result<InverseSolution> {
    reconstruct_detailed(v, attempts, seed)?.0
}

/// [`reconstruct_with`] together with the report of every candidate, sorted
/// as in [`candidate_reports`]. The outer error covers failures before any
/// candidate is tested.
pub fn reconstruct_detailed(
    v: &TrigPolyV0,
    attempts: usize,
    seed: u64,
) -> Result<(Result<InverseSolution>, Vec<CandidateReport>)> {
    let cands = solve_wk_seeded(v, attempts, seed)?;
    let tried = cands.len();
    let mut results: Vec<(CandidateReport, Option<BoundaryMap>)> =
        cands.par_iter().map(|w| evaluate_candidate(v, w)).collect();
    results.sort_by(|a, b| {
        let ra = a.0.residual.unwrap_or(f64::INFINITY);
        let rb = b.0.residual.unwrap_or(f64::INFINITY);
        ra.total_cmp(&rb).then_with(|| lexicographic(&a.0.w, &b.0.w))
    });
    let reports: Vec<CandidateReport> = results.iter().map(|(r, _)| r.clone()).collect();
    let mut survivors: Vec<(CandidateReport, BoundaryMap)> = results
        .into_iter()
        .filter_map(|(r, f)| {
            let ok =
                r.univalent && r.label_defect <= LABEL_TOL && r.residual.is_some_and(|x| x <= ROUND_TRIP_TOL);
            if ok {
                f.map(|f| (r, f))
            } else {
                None
            }
        })
        .collect();
    let outcome = match survivors.len() {
        0 => Err(WeldError::NoUnivalentCandidate { tried }),
        1 => {
            let (r, f) = survivors.remove(0);
            Polynomial::from_roots(&r.w, ONE).map(|p_poly| InverseSolution {
                p_poly,
                w: r.w,
                f_map: f,
                univalent: r.univalent,
                residual: r.residual.unwrap_or(f64::INFINITY),
            })
        }
        _ => Err(WeldError::MultipleSurvivors {
            residuals: survivors.iter().filter_map(|(r, _)| r.residual).collect(),
        }),
    };
    Ok((outcome, reports))
}
