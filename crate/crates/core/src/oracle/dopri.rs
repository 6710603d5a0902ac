//! Dormand–Prince 5(4) with FSAL and standard step-size control, for
//! complex systems driven by a real parameter.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];

/// Fifth-order weights minus the embedded fourth-order ones.
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

#[derive(Clone, Debug, PartialEq)]
pub struct DopriOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl DopriOptions {
    pub fn with_tol(tol: f64) -> Self {
        DopriOptions { rtol: tol, atol: tol, max_steps: 2_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Integration {
    pub y: Vec<C64>,
    pub accepted: usize,
    pub rejected: usize,
}

/// Integrate `y' = f(t, y)` from `t0` to `t1`.
///
/// Fails with a path error when the step size collapses (a singularity on
/// or very near the path) or the step budget runs out.
pub fn integrate(
    f: &dyn Fn(f64, &[C64], &mut [C64]) -> Result<()>,
    t0: f64,
    t1: f64,
    y0: &[C64],
    opts: &DopriOptions,
) -> Result<Integration> {
    let n = y0.len();
    let span = t1 - t0;
    let dir = span.signum();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k: Vec<Vec<C64>> = vec![vec![C64::default(); n]; 7];
    f(t, &y, &mut k[0])?;
    let mut h = dir * (span.abs() * 1e-3).max(1e-6).min(span.abs());
    let mut stage = vec![C64::default(); n];
    let mut y_new = vec![C64::default(); n];
    let (mut accepted, mut rejected) = (0, 0);
    while (t1 - t) * dir > 0.0 {
        if accepted + rejected >= opts.max_steps {
            return Err(Error::Path(format!("step budget exhausted at t = {t}")));
        }
        if h.abs() < 1e-13 * span.abs() {
            return Err(Error::Path(format!("step size collapsed at t = {t}")));
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        for s in 1..7 {
            for i in 0..n {
                let mut acc = C64::default();
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += kj[i] * A[s][j];
                }
                stage[i] = y[i] + acc * h;
            }
            f(t + C[s] * h, &stage, &mut k[s])?;
        }
        // stage 7 was evaluated at the fifth-order solution
        y_new.copy_from_slice(&stage);
        let mut err = 0.0;
        for i in 0..n {
            let mut e = C64::default();
            for (j, kj) in k.iter().enumerate() {
                e += kj[i] * E[j];
            }
            let sc = opts.atol + opts.rtol * y[i].norm().max(y_new[i].norm());
            err += (e.norm() * h.abs() / sc).powi(2);
        }
        let err = (err / n as f64).sqrt();
        if !err.is_finite() {
            rejected += 1;
            h *= 0.2;
            continue;
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        if err <= 1.0 {
            t += h;
            y.copy_from_slice(&y_new);
            let last = k.pop().expect("seven stages");
            k.insert(0, last);
            accepted += 1;
            h *= fac;
        } else {
            rejected += 1;
            h *= fac.min(1.0);
        }
    }
    Ok(Integration { y, accepted, rejected })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_round_trip() {
        // y' = i y over [0, 2 pi] returns to the start
        let f = |_: f64, y: &[C64], dy: &mut [C64]| {
            dy[0] = C64::i() * y[0];
            Ok(())
        };
        let out = integrate(&f, 0.0, 2.0 * std::f64::consts::PI, &[C64::new(1.0, 0.0)], &DopriOptions::with_tol(1e-12))
            .unwrap();
        assert!((out.y[0] - 1.0).norm() < 1e-10);
    }

    #[test]
    fn fifth_order_on_polynomial() {
        // y' = 5 t^4 is integrated exactly by a fifth-order method
        let f = |t: f64, _: &[C64], dy: &mut [C64]| {
            dy[0] = C64::new(5.0 * t.powi(4), 0.0);
            Ok(())
        };
        let out = integrate(&f, 0.0, 2.0, &[C64::default()], &DopriOptions::with_tol(1e-6)).unwrap();
        assert!((out.y[0] - 32.0).norm() < 1e-10);
    }

    #[test]
    fn blow_up_is_a_path_error() {
        let f = |_: f64, y: &[C64], dy: &mut [C64]| {
            dy[0] = y[0] * y[0];
            Ok(())
        };
        let r = integrate(&f, 0.0, 2.0, &[C64::new(1.0, 0.0)], &DopriOptions::with_tol(1e-10));
        assert!(matches!(r, Err(Error::Path(_))));
    }
}
