use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NewtonOptions {
    pub max_iterations: usize,
    /// Success threshold on the residual max-norm.
    pub tolerance: f64,
    /// Step for the central-difference Jacobian.
    pub jacobian_step: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { max_iterations: 100, tolerance: 1e-10, jacobian_step: 1e-7 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NewtonReport {
    pub solution: Vec<C64>,
    pub residual_norm: f64,
    pub iterations: usize,
    pub jacobian_rank: usize,
    /// Some step was a least-squares (minimum-norm) step because the
    /// Jacobian was singular or not square.
    pub least_squares: bool,
    /// Residual max-norm after each iteration.
    pub trace: Vec<f64>,
}

fn max_norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

fn jacobian(f: &dyn Fn(&[C64]) -> Result<Vec<C64>>, x: &[C64], m: usize, h: f64) -> Result<DMatrix<C64>> {
    let mut jac = DMatrix::zeros(m, x.len());
    let mut xp = x.to_vec();
    for k in 0..x.len() {
        xp[k] = x[k] + h;
        let fp = f(&xp)?;
        xp[k] = x[k] - h;
        let fm = f(&xp)?;
        xp[k] = x[k];
        for i in 0..m {
            jac[(i, k)] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    Ok(jac)
}

fn rank(jac: &DMatrix<C64>) -> usize {
    let sv = jac.clone().svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > 1e-8 * top.max(1e-300)).count()
}

/// Damped Newton (Gauss-Newton when the system is not square) for a
/// holomorphic residual map, with a numerical Jacobian.
///
/// Succeeds when the residual max-norm drops below `opts.tolerance`; the
/// step is halved (up to 30 times) while it increases the residual.
pub fn newton_critical(
    f: &dyn Fn(&[C64]) -> Result<Vec<C64>>,
    x0: &[C64],
    opts: &NewtonOptions,
) -> Result<NewtonReport> {
    let mut x = x0.to_vec();
    let mut r = f(&x)?;
    let m = r.len();
    let mut norm = max_norm(&r);
    let mut trace = vec![norm];
    let mut least_squares = m != x.len();
    let mut iterations = 0;
    while norm >= opts.tolerance && iterations < opts.max_iterations {
        iterations += 1;
        let jac = jacobian(f, &x, m, opts.jacobian_step)?;
        let rhs = DVector::from_iterator(m, r.iter().map(|v| -v));
        let step = match (m == x.len()).then(|| jac.clone().lu().solve(&rhs)).flatten() {
            Some(s) if s.iter().all(|v| v.re.is_finite() && v.im.is_finite()) && rank(&jac) == x.len() => s,
            _ => {
                least_squares = true;
                let svd = jac.clone().svd(true, true);
                let top = svd.singular_values.iter().cloned().fold(0.0, f64::max);
                svd.solve(&rhs, 1e-10 * top.max(1e-300)).map_err(|e| Error::InvalidInput(e.to_string()))?
            }
        };
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec<C64> = x.iter().zip(step.iter()).map(|(a, s)| a + s * t).collect();
            if let Ok(rt) = f(&trial) {
                let nt = max_norm(&rt);
                if nt < norm {
                    x = trial;
                    r = rt;
                    norm = nt;
                    accepted = true;
                    break;
                }
            }
            t /= 2.0;
        }
        trace.push(norm);
        if !accepted {
            break;
        }
    }
    if norm >= opts.tolerance {
        return Err(Error::NoConvergence { iterations, residual: norm, trace });
    }
    let jacobian_rank = rank(&jacobian(f, &x, m, opts.jacobian_step)?);
    Ok(NewtonReport { solution: x, residual_norm: norm, iterations, jacobian_rank, least_squares, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_root() {
        let f = |x: &[C64]| Ok(vec![x[0] * x[0] - 2.0]);
        let rep = newton_critical(&f, &[C64::new(1.0, 0.1)], &NewtonOptions::default()).unwrap();
        assert!((rep.solution[0] - 2f64.sqrt()).norm() < 1e-10);
        assert_eq!(rep.jacobian_rank, 1);
    }

    #[test]
    fn infeasible() {
        let f = |x: &[C64]| Ok(vec![x[0] - 1.0, x[0] - 2.0]);
        assert!(matches!(
            newton_critical(&f, &[C64::new(0.0, 0.0)], &NewtonOptions::default()),
            Err(Error::NoConvergence { .. })
        ));
    }
}
