//! Job input files. Complex numbers are `[re, im]` pairs throughout.

use num_complex::Complex64;
use serde_json::{Map, Value};
use weldkit::{BoundaryMap, CircleGrid, PeriodicSamples, TrigPolyV0};

use crate::CliError;

pub const DEFAULT_GRID: usize = 256;

/// A parsed map description, resolved against a grid only when built.
#[derive(Debug, Clone, PartialEq)]
pub enum MapSpec {
    Identity,
    Ellipse { r: f64 },
    Moebius { c: Complex64 },
    Taylor(Vec<Complex64>),
    Samples(Vec<Complex64>),
}

impl MapSpec {
    pub fn build(&self) -> Result<BoundaryMap, CliError> {
        let map = match self {
            MapSpec::Identity => BoundaryMap::identity(),
            MapSpec::Ellipse { r } => BoundaryMap::ellipse(*r)?,
            MapSpec::Moebius { c } => BoundaryMap::moebius(*c)?,
            MapSpec::Taylor(coeffs) => BoundaryMap::from_taylor(coeffs)?,
            MapSpec::Samples(values) => {
                let grid = CircleGrid::new(values.len())?;
                BoundaryMap::from_boundary_samples(&PeriodicSamples::new(grid, values.clone())?)?
            }
        };
        Ok(map)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    Roots(Vec<Complex64>),
    Coeffs(Vec<Complex64>),
}

impl KernelSpec {
    pub fn build(&self, grid: CircleGrid) -> Result<TrigPolyV0, CliError> {
        Ok(match self {
            KernelSpec::Roots(r) => TrigPolyV0::from_roots(r, grid)?,
            KernelSpec::Coeffs(a) => TrigPolyV0::from_coeffs(a, grid)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapJob {
    pub map: MapSpec,
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelJob {
    pub kernel: KernelSpec,
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorJob {
    pub map: MapSpec,
    pub grid: Option<usize>,
    /// Samples of `v` on the grid; the computed kernel when absent.
    pub v: Option<Vec<Complex64>>,
    pub points: Option<Vec<Complex64>>,
}

fn schema(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}

pub fn parse_document(text: &str) -> Result<Map<String, Value>, CliError> {
    match serde_json::from_str::<Value>(text) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => Err(schema("input must be a JSON object")),
        Err(e) => Err(schema(format!("invalid JSON: {e}"))),
    }
}

fn reject_unknown(obj: &Map<String, Value>, allowed: &[&str]) -> Result<(), CliError> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(schema(format!(
            "unknown key \"{k}\" (expected one of {allowed:?})"
        ))),
        None => Ok(()),
    }
}

fn number(v: &Value, what: &str) -> Result<f64, CliError> {
    v.as_f64()
        .ok_or_else(|| schema(format!("{what} must be a number")))
}

fn complex(v: &Value, what: &str) -> Result<Complex64, CliError> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok(Complex64::new(number(re, what)?, number(im, what)?)),
        _ => Err(schema(format!("{what} must be an [re, im] pair"))),
    }
}

fn complex_list(v: &Value, what: &str) -> Result<Vec<Complex64>, CliError> {
    let items = v
        .as_array()
        .ok_or_else(|| schema(format!("{what} must be an array of [re, im] pairs")))?;
    items
        .iter()
        .enumerate()
        .map(|(i, x)| complex(x, &format!("{what}[{i}]")))
        .collect()
}

/// Real numbers or `[re, im]` pairs.
fn sample_list(v: &Value, what: &str) -> Result<Vec<Complex64>, CliError> {
    let items = v
        .as_array()
        .ok_or_else(|| schema(format!("{what} must be an array")))?;
    items
        .iter()
        .enumerate()
        .map(|(i, x)| match x {
            Value::Number(_) => Ok(Complex64::new(number(x, what)?, 0.0)),
            _ => complex(x, &format!("{what}[{i}]")),
        })
        .collect()
}

fn grid_field(obj: &Map<String, Value>) -> Result<Option<usize>, CliError> {
    match obj.get("grid") {
        None => Ok(None),
        Some(v) => v
            .as_u64()
            .map(|n| Some(n as usize))
            .ok_or_else(|| schema("grid must be a nonnegative integer")),
    }
}

fn map_spec(obj: &Map<String, Value>) -> Result<MapSpec, CliError> {
    let given: Vec<&str> = ["map", "taylor", "samples"]
        .into_iter()
        .filter(|k| obj.contains_key(*k))
        .collect();
    if given.len() != 1 {
        return Err(schema(
            "exactly one of \"map\", \"taylor\" or \"samples\" is required",
        ));
    }
    match given[0] {
        "taylor" => Ok(MapSpec::Taylor(complex_list(&obj["taylor"], "taylor")?)),
        "samples" => Ok(MapSpec::Samples(complex_list(&obj["samples"], "samples")?)),
        _ => {
            let name = obj["map"]
                .as_str()
                .ok_or_else(|| schema("map must be a string"))?;
            let param = |key: &str| {
                obj.get(key)
                    .ok_or_else(|| schema(format!("map \"{name}\" needs \"{key}\"")))
            };
            match name {
                "identity" => Ok(MapSpec::Identity),
                "ellipse" => Ok(MapSpec::Ellipse {
                    r: number(param("r")?, "r")?,
                }),
                "moebius" => Ok(MapSpec::Moebius {
                    c: complex(param("c")?, "c")?,
                }),
                other => Err(schema(format!(
                    "unknown map \"{other}\" (expected identity, ellipse or moebius)"
                ))),
            }
        }
    }
}

pub fn map_job(text: &str) -> Result<MapJob, CliError> {
    let obj = parse_document(text)?;
    reject_unknown(&obj, &["map", "r", "c", "taylor", "samples", "grid"])?;
    Ok(MapJob {
        map: map_spec(&obj)?,
        grid: grid_field(&obj)?,
    })
}

pub fn kernel_job(text: &str) -> Result<KernelJob, CliError> {
    let obj = parse_document(text)?;
    reject_unknown(&obj, &["v0_roots", "v0_coeffs", "grid"])?;
    let kernel = match (obj.get("v0_roots"), obj.get("v0_coeffs")) {
        (Some(r), None) => KernelSpec::Roots(complex_list(r, "v0_roots")?),
        (None, Some(a)) => KernelSpec::Coeffs(complex_list(a, "v0_coeffs")?),
        _ => return Err(schema("exactly one of \"v0_roots\" or \"v0_coeffs\" is required")),
    };
    Ok(KernelJob {
        kernel,
        grid: grid_field(&obj)?,
    })
}

pub fn operator_job(text: &str) -> Result<OperatorJob, CliError> {
    let obj = parse_document(text)?;
    reject_unknown(
        &obj,
        &["map", "r", "c", "taylor", "samples", "grid", "v", "points"],
    )?;
    Ok(OperatorJob {
        map: map_spec(&obj)?,
        grid: grid_field(&obj)?,
        v: obj.get("v").map(|v| sample_list(v, "v")).transpose()?,
        points: obj.get("points").map(|p| complex_list(p, "points")).transpose()?,
    })
}
