//! Result documents. Every number is written in its shortest form that
//! parses back to the same `f64`, so files round-trip exactly.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use weldkit::inverse::CandidateReport;
use weldkit::kernel::SigmaDiagnostics;
use weldkit::welding::WeldStatus;
use weldkit::{InverseSolution, WeldingResult};

pub type Pair = [f64; 2];

pub fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

fn pairs(zs: &[Complex64]) -> Vec<Pair> {
    zs.iter().copied().map(pair).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sigma {
    pub smallest: f64,
    pub second: f64,
    pub largest: f64,
}

impl From<SigmaDiagnostics> for Sigma {
    fn from(s: SigmaDiagnostics) -> Self {
        Self {
            smallest: s.smallest,
            second: s.second,
            largest: s.largest,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaurentTerm {
    pub k: i64,
    pub value: Pair,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeldReport {
    pub command: String,
    pub map: String,
    pub grid: usize,
    pub v0: Vec<f64>,
    /// `τ = γ⁻¹` lift at the nodes.
    pub gamma_inverse_lift: Vec<f64>,
    pub gamma_lift: Vec<f64>,
    /// Exterior map coefficients in descending index.
    pub laurent: Vec<LaurentTerm>,
    pub consistency: f64,
    pub status: String,
    pub route_discrepancy: f64,
    pub sigma: Option<Sigma>,
}

impl WeldReport {
    pub fn new(label: String, res: &WeldingResult) -> Self {
        Self {
            command: "weld".into(),
            map: label,
            grid: res.v0.grid().len(),
            v0: res.v0.samples().to_vec(),
            gamma_inverse_lift: res.gamma_inv.lift_samples(),
            gamma_lift: res.gamma.lift_samples(),
            laurent: res
                .exterior
                .coefficients()
                .into_iter()
                .map(|(k, b)| LaurentTerm { k, value: pair(b) })
                .collect(),
            consistency: res.consistency,
            status: match res.status {
                WeldStatus::Ok => "ok".into(),
                WeldStatus::Warning => "warning".into(),
            },
            route_discrepancy: res.route_discrepancy,
            sigma: res.v0.sigma().map(Sigma::from),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub w: Vec<Pair>,
    pub label_defect: f64,
    pub univalent: bool,
    pub residual: Option<f64>,
    pub error: Option<String>,
}

impl From<&CandidateReport> for Candidate {
    fn from(r: &CandidateReport) -> Self {
        Self {
            w: pairs(&r.w),
            // Infinity has no JSON form; an unintegrable candidate has no label.
            label_defect: if r.label_defect.is_finite() {
                r.label_defect
            } else {
                -1.0
            },
            univalent: r.univalent,
            residual: r.residual,
            error: r.error.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructReport {
    pub command: String,
    pub grid: usize,
    pub roots: Vec<Pair>,
    pub kappa: f64,
    pub v0: Vec<f64>,
    pub w: Vec<Pair>,
    /// `P(w)` coefficients in ascending degree.
    pub p_coeffs: Vec<Pair>,
    /// `f(e^{it})` at the nodes.
    pub boundary: Vec<Pair>,
    pub gamma_inverse_lift: Vec<f64>,
    pub univalent: bool,
    pub residual: f64,
    pub candidates: Vec<Candidate>,
}

impl ReconstructReport {
    pub fn new(
        v: &weldkit::TrigPolyV0,
        sol: &InverseSolution,
        gamma_inverse_lift: Vec<f64>,
        candidates: &[CandidateReport],
    ) -> Self {
        let g = v.grid();
        Self {
            command: "reconstruct".into(),
            grid: g.len(),
            roots: pairs(v.roots()),
            kappa: v.kappa(),
            v0: v.samples(),
            w: pairs(&sol.w),
            p_coeffs: pairs(sol.p_poly.coeffs()),
            boundary: pairs(sol.f_map.boundary_samples(g).values()),
            gamma_inverse_lift,
            univalent: sol.univalent,
            residual: sol.residual,
            candidates: candidates.iter().map(Candidate::from).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorReport {
    pub command: String,
    pub map: String,
    pub grid: usize,
    /// `"input"` or `"kernel"` when `v` was computed.
    pub v_source: String,
    pub points: Vec<Pair>,
    pub values: Vec<Pair>,
    pub max_abs: f64,
}

impl OperatorReport {
    pub fn new(map: String, grid: usize, v_source: &str, points: &[Complex64], values: &[Complex64]) -> Self {
        Self {
            command: "apply-operator".into(),
            map,
            grid,
            v_source: v_source.into(),
            points: pairs(points),
            values: pairs(values),
            max_abs: values.iter().map(|z| z.norm()).fold(0.0, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Defect {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub command: String,
    pub case: String,
    pub grid: usize,
    pub defects: Vec<Defect>,
    pub pass: bool,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// Columns `t, re_f, im_f, v0, tau`.
pub fn csv(nodes: &[f64], f: &[Complex64], v0: &[f64], tau: &[f64]) -> String {
    let mut out = String::from("t,re_f,im_f,v0,tau\n");
    for (((t, z), v), x) in nodes.iter().zip(f).zip(v0).zip(tau) {
        writeln!(out, "{t},{},{},{v},{x}", z.re, z.im).expect("write to string");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use weldkit::{welding::weld, BoundaryMap, CircleGrid};

    #[test]
    fn weld_report_round_trips() {
        let g = CircleGrid::new(32).unwrap();
        let res = weld(&BoundaryMap::moebius(Complex64::new(0.3, 0.1)).unwrap(), g).unwrap();
        let report = WeldReport::new("moebius".into(), &res);
        let back: WeldReport = serde_json::from_str(&to_json(&report)).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn awkward_floats_round_trip() {
        let values = vec![0.1 + 0.2, 1.0 / 3.0, f64::MIN_POSITIVE, 1e300, -2.5e-17];
        let text = serde_json::to_string(&values).unwrap();
        let back: Vec<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(values, back);
    }

    #[test]
    fn csv_header_and_rows() {
        let text = csv(
            &[0.0, 0.5],
            &[Complex64::new(1.0, 0.0); 2],
            &[1.0, 1.0],
            &[0.0, 0.5],
        );
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines, ["t,re_f,im_f,v0,tau", "0,1,0,1,0", "0.5,1,0,1,0.5"]);
    }
}
