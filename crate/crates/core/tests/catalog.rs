use std::f64::consts::TAU;

use proptest::prelude::*;
use weldkit::boundary::{ellipse_kernel, joukowski_scale, quad_diff_kernel};
use weldkit::{BoundaryMap, CircleGrid, Complex64, ExteriorMap};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Center and radius of the circle through three points.
fn circumcircle(a: Complex64, b: Complex64, z: Complex64) -> (Complex64, f64) {
    let (b, z) = (b - a, z - a);
    let d = 2.0 * (b.re * z.im - b.im * z.re);
    let (nb, nz) = (b.norm_sqr(), z.norm_sqr());
    let center = c((z.im * nb - b.im * nz) / d, (b.re * nz - z.re * nb) / d);
    (center + a, center.norm())
}

/// Largest distance from points of `a` to the polygon through `b`.
fn one_sided_hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let seg = |p: Complex64, x: Complex64, y: Complex64| {
        let d = y - x;
        let t = (((p - x) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
        (p - x - t * d).norm()
    };
    a.iter()
        .map(|&p| {
            (0..b.len())
                .map(|j| seg(p, b[j], b[(j + 1) % b.len()]))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

#[test]
fn catalog_samples_agree_across_refinement() {
    let g = CircleGrid::new(64).unwrap();
    let fine = g.refined();
    for f in [
        BoundaryMap::identity(),
        BoundaryMap::moebius(c(0.3, -0.2)).unwrap(),
        BoundaryMap::ellipse(0.6).unwrap(),
    ] {
        let coarse = f.boundary_samples(g);
        let refined = f.boundary_samples(fine);
        for j in 0..g.len() {
            assert!((coarse.values()[j] - refined.values()[2 * j]).norm() <= 1e-12);
        }
    }
}

#[test]
fn ellipse_boundary_satisfies_ellipse_equation() {
    let g = CircleGrid::new(256).unwrap();
    for r in [0.4, 0.6, 0.8] {
        let f = BoundaryMap::ellipse(r).unwrap();
        let a = f.eval(c(1.0, 0.0)).re;
        let b = (f.eval(c(0.0, 1.0)) * c(0.0, -1.0)).re;
        // Foci at ±1.
        assert!((a * a - b * b - 1.0).abs() < 1e-10, "r = {r}");
        for w in f.boundary_samples(g).values() {
            let lhs = (w.re / a).powi(2) + (w.im / b).powi(2);
            assert!((lhs - 1.0).abs() <= 1e-8, "r = {r}: {lhs}");
        }
    }
}

#[test]
fn joukowski_traces_the_ellipse() {
    let g = CircleGrid::new(512).unwrap();
    let f = BoundaryMap::ellipse(0.6).unwrap();
    let lambda = 1.0 / f.eval(c(1.0, 0.0)).re;
    let phi = ExteriorMap::joukowski(lambda).unwrap();
    let cl = joukowski_scale(lambda);
    assert!((phi.eval(c(1.0, 0.0)) - 1.0 / lambda).norm() < 1e-13);
    assert!((phi.eval(c(0.0, 1.0)) - c(0.0, 0.5 * (cl - 1.0 / cl))).norm() < 1e-13);
    let a = f.boundary_samples(g).into_values();
    let b = phi.boundary_samples(g).into_values();
    let h = one_sided_hausdorff(&a, &b).max(one_sided_hausdorff(&b, &a));
    // Polygon chords deviate from the curve by O(h²); compare at that scale.
    assert!(h <= 1e-4, "hausdorff {h}");
    // Exact check: every f-sample lies on the ellipse traced by φ.
    let (ma, mb) = (phi.eval(c(1.0, 0.0)).re, phi.eval(c(0.0, 1.0)).im);
    for w in &a {
        assert!(((w.re / ma).powi(2) + (w.im / mb).powi(2) - 1.0).abs() <= 1e-8);
    }
}

#[test]
fn ellipse_kernel_spot_values_and_normalization() {
    let g = CircleGrid::new(256).unwrap();
    let r: f64 = 0.6;
    let k = weldkit::specialfn::elliptic_k(r * r).unwrap();
    let v = ellipse_kernel(r, g).unwrap();
    let pi = std::f64::consts::PI;
    assert!((v.samples()[0] - 2.0 * k * (1.0 - r * r) / pi).abs() < 1e-14);
    assert!((v.samples()[64] - 2.0 * k * (1.0 + r * r) / pi).abs() < 1e-14);
    assert!((v.normalization_integral() - TAU).abs() <= 1e-9);
    assert!(v.is_normalized());
}

#[test]
fn quad_diff_kernels_are_positive() {
    let g = CircleGrid::new(128).unwrap();
    for n in 1..=5 {
        let v = quad_diff_kernel(n, 0.7, g).unwrap();
        assert!(v.samples().iter().all(|&x| x > 0.0));
        assert!((v.normalization_integral() - TAU).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn moebius_image_is_a_circle(m in 0.05..0.9f64, a in 0.0..TAU) {
        let f = BoundaryMap::moebius(Complex64::from_polar(m, a)).unwrap();
        let (center, radius) = circumcircle(f.eval(c(1.0, 0.0)), f.eval(c(0.0, 1.0)), f.eval(c(-1.0, 0.0)));
        let g = CircleGrid::new(128).unwrap();
        for w in f.boundary_samples(g).values() {
            prop_assert!(((w - center).norm() - radius).abs() <= 1e-12 * radius.max(1.0));
        }
    }
}
