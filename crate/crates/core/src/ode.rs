//! Adaptive Dormand–Prince 5(4) for a complex scalar ODE `y' = F(x, y)`.

use num_complex::Complex64;

use crate::error::{Result, WeldError};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B_LOW: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

#[derive(Debug, Clone, Copy)]
pub(crate) struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-13,
        }
    }
}

/// Integrates from `x0` through every point of `outputs` (ascending, all
/// `≥ x0`), returning the state at each. Steps are clipped to land on the
/// output points exactly.
pub(crate) fn integrate<F>(
    mut rhs: F,
    x0: f64,
    y0: Complex64,
    outputs: &[f64],
    tol: Tolerances,
) -> Result<Vec<Complex64>>
where
    F: FnMut(f64, Complex64) -> Result<Complex64>,
{
    let mut out = Vec::with_capacity(outputs.len());
    let (mut x, mut y) = (x0, y0);
    let span = outputs.last().map_or(0.0, |&e| (e - x0).abs()).max(1e-300);
    let mut h = span / 64.0;
    let mut k1 = rhs(x, y)?;
    for &target in outputs {
        if target < x {
            return Err(WeldError::Ode(format!("output point {target} precedes {x}")));
        }
        while x < target {
            let mut step = h.min(target - x);
            let last = step == target - x;
            if step < 1e-14 * span.max(x.abs()) && !last {
                return Err(WeldError::Ode(format!("step size underflow at x = {x}")));
            }
            let mut k = [Complex64::new(0.0, 0.0); 7];
            k[0] = k1;
            for s in 1..7 {
                let ys = y + step * (0..s).map(|j| A[s][j] * k[j]).sum::<Complex64>();
                k[s] = rhs(x + C[s] * step, ys)?;
            }
            let y_new = y + step * (0..7).map(|j| B[j] * k[j]).sum::<Complex64>();
            let err = step * (0..7).map(|j| (B[j] - B_LOW[j]) * k[j]).sum::<Complex64>();
            let scale = tol.atol + tol.rtol * y.norm().max(y_new.norm());
            let ratio = err.norm() / scale;
            if ratio <= 1.0 {
                x = if last { target } else { x + step };
                y = y_new;
                k1 = k[6];
            } else if step <= 1e-14 * span.max(x.abs()) {
                return Err(WeldError::Ode(format!("step size underflow at x = {x}")));
            }
            let factor = if ratio == 0.0 {
                5.0
            } else {
                (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
            };
            step *= factor;
            h = step;
            if !y.is_finite() {
                return Err(WeldError::Ode(format!("non-finite state at x = {x}")));
            }
        }
        out.push(y);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_rotation() {
        let xs: Vec<f64> = (1..=8).map(|k| k as f64 * 0.75).collect();
        let ys = integrate(
            |_, y| Ok(Complex64::new(0.0, 1.0) * y),
            0.0,
            Complex64::new(1.0, 0.0),
            &xs,
            Tolerances::default(),
        )
        .unwrap();
        for (x, y) in xs.iter().zip(ys) {
            assert!((y - Complex64::cis(*x)).norm() < 1e-11);
        }
    }

    #[test]
    fn nonautonomous_polynomial() {
        let ys = integrate(
            |x, _| Ok(Complex64::new(3.0 * x * x, -1.0)),
            0.0,
            Complex64::new(0.0, 0.0),
            &[2.0],
            Tolerances::default(),
        )
        .unwrap();
        assert!((ys[0] - Complex64::new(8.0, -2.0)).norm() < 1e-12);
    }

    #[test]
    fn blow_up_is_reported() {
        let r = integrate(
            |_, y| Ok(y * y),
            0.0,
            Complex64::new(1.0, 0.0),
            &[2.0],
            Tolerances::default(),
        );
        assert!(matches!(r, Err(WeldError::Ode(_))));
    }
}
