//! Acceptance gate. Prints one line per criterion and exits nonzero if any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use weldkit::boundary::{ellipse_kernel, joukowski_scale};
use weldkit::inverse::{reconstruct, residues, solve_wk, system_residuals, TrigPolyV0};
use weldkit::kernel::{complex_kernel_member, residual, solve_v0};
use weldkit::welding::{exterior_from_welding, weld, welding_coefficients};
use weldkit::{BoundaryMap, CircleDiffeo, CircleGrid, Complex64, WeldError};

type Exterior = fn(Complex64) -> Complex64;
type Check = fn() -> Outcome;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn grid(n: usize) -> CircleGrid {
    CircleGrid::new(n).expect("valid grid")
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn fail(err: impl std::fmt::Display) -> Outcome {
    outcome(false, format!("error: {err}"))
}

fn timed(limit: Option<Duration>, check: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let mut out = check();
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            out.pass = false;
            out.detail = format!("{}; runtime {elapsed:.2?} over {limit:.0?}", out.detail);
        }
    }
    (out, elapsed)
}

fn identity_welding() -> Outcome {
    let g = grid(128);
    let res = match weld(&BoundaryMap::identity(), g) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let v_err = res
        .v0
        .samples()
        .iter()
        .map(|v| (v - 1.0).abs())
        .fold(0.0, f64::max);
    let lift_err = res.gamma.sup_distance(&CircleDiffeo::identity(g));
    let ext_err = res
        .exterior
        .coefficients()
        .iter()
        .map(|&(k, b)| if k == 1 { (b - 1.0).norm() } else { b.norm() })
        .fold(0.0, f64::max);
    outcome(
        v_err <= 1e-10 && lift_err <= 1e-10 && ext_err <= 1e-10,
        format!("v0 err {v_err:.1e}, lift err {lift_err:.1e}, exterior err {ext_err:.1e}"),
    )
}

fn kernel_rank() -> Outcome {
    let g = grid(256);
    let cases = [
        ("identity", BoundaryMap::identity()),
        ("moebius(0.3)", BoundaryMap::moebius(c(0.3, 0.0)).expect("valid")),
        ("ellipse(0.6)", BoundaryMap::ellipse(0.6).expect("valid")),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, f) in cases {
        let start = Instant::now();
        match solve_v0(&f, g) {
            Ok(v) => {
                let s = v.sigma().expect("solved kernel carries diagnostics");
                let (lo, gap) = (s.smallest / s.largest, s.second / s.largest);
                let took = start.elapsed();
                pass &= lo <= 1e-7 && gap >= 1e-3 && took < Duration::from_secs(10);
                parts.push(format!("{name}: {lo:.1e}/{gap:.2} in {took:.2?}"));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{name}: {e}"));
            }
        }
    }
    outcome(pass, parts.join("; "))
}

fn ellipse_kernel_formula() -> Outcome {
    let g = grid(256);
    let f = BoundaryMap::ellipse(0.6).expect("valid");
    match (solve_v0(&f, g), ellipse_kernel(0.6, g)) {
        (Ok(v), Ok(exact)) => {
            let err = v.max_rel_diff(&exact);
            outcome(err <= 1e-6, format!("relative error {err:.1e}"))
        }
        (Err(e), _) | (_, Err(e)) => fail(e),
    }
}

fn exterior_match() -> Outcome {
    let g = grid(256);
    let f = BoundaryMap::ellipse(0.6).expect("valid");
    let res = match weld(&f, g) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let lambda = 1.0 / f.eval(c(1.0, 0.0)).re;
    let cl = joukowski_scale(lambda);
    let coeffs = welding_coefficients(&f, &res.gamma, g);
    let e1 = (coeffs.coeff(1) - 0.5 * cl).norm();
    let em1 = (coeffs.coeff(-1) - 0.5 / cl).norm();
    let others = coeffs.max_abs_where(|k| k != 1 && k != -1);
    outcome(
        e1 <= 1e-6 && em1 <= 1e-6 && others <= 1e-6,
        format!("beta_1 err {e1:.1e}, beta_-1 err {em1:.1e}, other coefficients {others:.1e}"),
    )
}

fn complex_kernel() -> Outcome {
    let g = grid(256);
    let f = BoundaryMap::ellipse(0.6).expect("valid");
    let res = match weld(&f, g) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let hs: [(&str, Exterior); 3] = [
        ("1", |_| c(1.0, 0.0)),
        ("1/z", |z| 1.0 / z),
        ("1/z^2 + 0.5/z", |z| 1.0 / (z * z) + 0.5 / z),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, h) in hs {
        let samples = g.sample(|t| h(Complex64::cis(t)));
        let r = complex_kernel_member(&res.v0, &res.gamma_inv, &samples).and_then(|v| residual(&f, &v));
        match r {
            Ok(r) => {
                pass &= r <= 1e-5;
                parts.push(format!("h = {name}: {r:.1e}"));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("h = {name}: {e}"));
            }
        }
    }
    outcome(pass, parts.join("; "))
}

fn two_routes() -> Outcome {
    let g = grid(256);
    let maps = [
        ("identity", BoundaryMap::identity()),
        ("moebius(0.3)", BoundaryMap::moebius(c(0.3, 0.0)).expect("valid")),
        ("ellipse(0.6)", BoundaryMap::ellipse(0.6).expect("valid")),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, f) in maps {
        match weld(&f, g) {
            Ok(r) => {
                pass &= r.route_discrepancy <= 1e-8;
                parts.push(format!("{name}: {:.1e}", r.route_discrepancy));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{name}: {e}"));
            }
        }
    }
    outcome(pass, parts.join("; "))
}

fn inverse_degree_two() -> Outcome {
    let g = grid(256);
    let v = match TrigPolyV0::from_roots(&[c(0.6, 0.0), c(-0.6, 0.0)], g) {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    let mut pass = true;
    let mut parts = Vec::new();

    match residues(&v) {
        Ok(a) => {
            let sum_err = (a.iter().sum::<Complex64>() - 1.0).norm();
            pass &= sum_err <= 1e-10;
            parts.push(format!("sum A_k err {sum_err:.1e}"));
            match solve_wk(&v, 64) {
                Ok(cands) => {
                    let foci = cands
                        .iter()
                        .any(|w| (w[0] - 1.0).norm() <= 1e-6 && (w[1] + 1.0).norm() <= 1e-6);
                    let prod = cands
                        .iter()
                        .map(|w| system_residuals(&v, &a, w).1.norm())
                        .fold(0.0, f64::max);
                    pass &= foci && prod <= 1e-8;
                    let listed: Vec<String> = cands
                        .iter()
                        .map(|w| format!("({:.4}, {:.4})", w[0].re, w[1].re))
                        .collect();
                    parts.push(format!(
                        "candidates [{}] contain (1, -1): {foci}; product err {prod:.1e}",
                        listed.join(", ")
                    ));
                }
                Err(e) => {
                    pass = false;
                    parts.push(e.to_string());
                }
            }
        }
        Err(e) => {
            pass = false;
            parts.push(e.to_string());
        }
    }

    let target = BoundaryMap::ellipse(0.6).expect("valid");
    match reconstruct(&v) {
        Ok(sol) => {
            let err = sol
                .f_map
                .boundary_samples(g)
                .max_abs_diff(&target.boundary_samples(g));
            pass &= err <= 1e-7;
            parts.push(format!("boundary err vs ellipse map {err:.2e}"));
        }
        Err(e) => {
            pass = false;
            parts.push(format!("reconstruct: {e}"));
        }
    }
    outcome(pass, parts.join("; "))
}

fn inverse_degree_one() -> Outcome {
    let g = grid(256);
    let mut pass = true;
    let mut parts = Vec::new();
    for z1 in [c(0.3, 0.0), c(-0.1, 0.4)] {
        let sol = match TrigPolyV0::from_roots(&[z1], g).and_then(|v| reconstruct(&v)) {
            Ok(s) => s,
            Err(e) => return fail(e),
        };
        let c1 = sol.f_map.taylor_coeffs().map_or(c(0.0, 0.0), |t| t[2]);
        let err = match BoundaryMap::moebius(c1) {
            Ok(m) => sol.f_map.boundary_samples(g).max_abs_diff(&m.boundary_samples(g)),
            Err(_) => f64::INFINITY,
        };
        let ok = c1.norm() > 0.0 && c1.norm() < 1.0 && err <= 1e-8;
        pass &= ok;
        parts.push(format!(
            "z1 = {z1}: |c1| = {:.4}, boundary err {err:.1e}",
            c1.norm()
        ));
    }
    outcome(pass, parts.join("; "))
}

fn round_trip() -> Outcome {
    let g = grid(256);
    let mut cases: Vec<(String, Vec<Complex64>)> = [0.4, 0.6, 0.8]
        .iter()
        .map(|&r| (format!("r = {r}"), vec![c(r, 0.0), c(-r, 0.0)]))
        .collect();
    cases.extend(
        [0.2, 0.5]
            .iter()
            .map(|&m| (format!("|z1| = {m}"), vec![Complex64::from_polar(m, 0.7)])),
    );
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, roots) in cases {
        let r = TrigPolyV0::from_roots(&roots, g).and_then(|v| {
            let sol = reconstruct(&v)?;
            let back = solve_v0(&sol.f_map, g)?;
            Ok(back
                .samples()
                .iter()
                .zip(v.samples())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max))
        });
        match r {
            Ok(err) => {
                pass &= err <= 1e-5;
                parts.push(format!("{name}: {err:.1e}"));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{name}: {e}"));
            }
        }
    }
    outcome(pass, parts.join("; "))
}

fn convergence_order() -> Outcome {
    const FLOOR: f64 = 1e-12;
    let f = BoundaryMap::ellipse(0.6).expect("valid");
    let mut residuals = Vec::new();
    for n in [64, 128, 256, 512] {
        let g = grid(n);
        match ellipse_kernel(0.6, g).and_then(|v| residual(&f, &v.to_periodic())) {
            Ok(r) => residuals.push(r),
            Err(e) => return fail(e),
        }
    }
    let pass = residuals
        .windows(2)
        .all(|w| w[0] <= FLOOR || w[1] <= FLOOR || w[1] <= 0.5 * w[0]);
    let shown: Vec<String> = residuals.iter().map(|r| format!("{r:.1e}")).collect();
    outcome(pass, format!("residuals N = 64..512: {}", shown.join(", ")))
}

fn negative_control() -> Outcome {
    let g = grid(256);
    let f = BoundaryMap::ellipse(0.6).expect("valid");
    match exterior_from_welding(&f, &CircleDiffeo::identity(g), g) {
        Err(WeldError::WeldingInconsistent { consistency }) => outcome(
            consistency >= 1e-2,
            format!("rejected with consistency {consistency:.3}"),
        ),
        Err(e) => fail(e),
        Ok(_) => outcome(false, "mismatched pair accepted"),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, Option<Duration>, Check); 11] = [
        ("identity welding", Some(Duration::from_secs(1)), identity_welding),
        ("kernel rank", None, kernel_rank),
        ("ellipse kernel formula", None, ellipse_kernel_formula),
        ("exterior Joukowski match", None, exterior_match),
        ("complex kernel membership", None, complex_kernel),
        ("two-route welding", None, two_routes),
        (
            "inverse n=2 (ellipse)",
            Some(Duration::from_secs(30)),
            inverse_degree_two,
        ),
        ("inverse n=1 (Moebius)", None, inverse_degree_one),
        ("round trip", None, round_trip),
        ("convergence order", None, convergence_order),
        ("negative control", None, negative_control),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let (out, took) = timed(*limit, check);
        let tag = if out.pass { "PASS" } else { "FAIL" };
        if !out.pass {
            failed += 1;
        }
        println!("{tag} [{:>2}] {name} ({took:.2?}): {}", i + 1, out.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
