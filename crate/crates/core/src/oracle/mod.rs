//! Numerical monodromy: integrate `(L - lambda) psi = 0` once around a
//! circle and compare the continued fundamental matrix with the identity.

pub mod dopri;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::cm::{CMConfig2, Kernel, Lattice, NumElement};
use crate::error::{Error, Result};
use crate::exact::Var;
use crate::operator::EllipticOp;
use dopri::{integrate, DopriOptions};

/// `a_0 .. a_{n-1}` of the monic operator `D^n + sum a_k D^k` at `z`.
pub type Coefficients<'a> = dyn Fn(C64) -> Result<Vec<C64>> + Send + Sync + 'a;

pub const DEFAULT_INTEGRATION_TOL: f64 = 1e-12;

pub fn default_lambdas() -> Vec<C64> {
    vec![C64::new(1.0, 0.0), C64::new(-2.0, 1.0), C64::new(0.0, 5.0)]
}

fn ser_c64<S: Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

fn ser_matrix<S: Serializer>(m: &[Vec<C64>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<[f64; 2]>> = m.iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect();
    rows.serialize(s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonodromyReport {
    /// Row-major; column `j` is the continuation of the solution whose
    /// scaled initial data is the `j`-th unit vector.
    #[serde(serialize_with = "ser_matrix")]
    pub matrix: Vec<Vec<C64>>,
    pub deviation: f64,
    #[serde(serialize_with = "ser_c64")]
    pub determinant: C64,
    #[serde(serialize_with = "ser_c64")]
    pub lambda: C64,
    #[serde(serialize_with = "ser_c64")]
    pub center: C64,
    pub radius: f64,
    pub steps: usize,
}

/// Continue a fundamental system of `(L - lambda) psi = 0` around the
/// circle `center + radius e^{i theta}`, starting at `theta = 0`.
///
/// The unknowns are `Y_k = radius^k psi^(k)`, which keeps the companion
/// system well scaled for small circles; the matrix is the one of these
/// variables (conjugate to the plain one by a diagonal matrix).
pub fn monodromy_matrix(
    coeffs: &Coefficients,
    n: usize,
    center: C64,
    radius: f64,
    lambda: C64,
    tol: f64,
) -> Result<MonodromyReport> {
    if n == 0 || radius <= 0.0 || !radius.is_finite() {
        return Err(Error::InvalidInput(format!("order {n}, radius {radius}")));
    }
    let scale: Vec<f64> = (0..=n).map(|k| radius.powi(k as i32)).collect();
    let rhs = |theta: f64, y: &[C64], dy: &mut [C64]| -> Result<()> {
        let u = C64::from_polar(1.0, theta);
        let a = coeffs(center + u * radius).map_err(|e| match e {
            Error::NearPole(p) => Error::Path(format!("singularity on the path near {p}")),
            other => other,
        })?;
        if a.len() != n {
            return Err(Error::InvalidInput(format!("expected {n} coefficients, got {}", a.len())));
        }
        let w = C64::i() * u;
        for j in 0..n {
            let col = &y[j * n..(j + 1) * n];
            let out = &mut dy[j * n..(j + 1) * n];
            for k in 0..n - 1 {
                out[k] = w * col[k + 1];
            }
            let mut top = (lambda - a[0]) * scale[n] * col[0];
            for k in 1..n {
                top -= a[k] * scale[n - k] * col[k];
            }
            out[n - 1] = w * top;
        }
        Ok(())
    };
    let mut y0 = vec![C64::default(); n * n];
    for j in 0..n {
        y0[j * n + j] = C64::new(1.0, 0.0);
    }
    let run = integrate(&rhs, 0.0, 2.0 * PI, &y0, &DopriOptions::with_tol(tol))?;
    let matrix: Vec<Vec<C64>> = (0..n).map(|k| (0..n).map(|j| run.y[j * n + k]).collect()).collect();
    let mut deviation: f64 = 0.0;
    for (k, row) in matrix.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let id = if j == k { 1.0 } else { 0.0 };
            deviation = deviation.max((x - id).norm());
        }
    }
    let determinant = DMatrix::from_fn(n, n, |k, j| matrix[k][j]).determinant();
    Ok(MonodromyReport { matrix, deviation, determinant, lambda, center, radius, steps: run.accepted })
}

/// Numeric version of an elliptic operator: parameter values (including
/// the curve invariants, taken from the lattice unless overridden).
#[derive(Clone, Debug)]
pub struct OperatorDescriptor {
    pub op: EllipticOp,
    pub values: BTreeMap<Var, C64>,
    pub lattice: Lattice,
}

impl OperatorDescriptor {
    pub fn new(op: EllipticOp, lattice: Lattice) -> Self {
        let values = BTreeMap::from([(Var::G2, lattice.g2()), (Var::G3, lattice.g3())]);
        OperatorDescriptor { op, values, lattice }
    }

    pub fn with(mut self, v: Var, x: C64) -> Self {
        self.values.insert(v, x);
        self
    }

    pub fn order(&self) -> usize {
        self.op.order()
    }

    fn check_monic(&self) -> Result<()> {
        let lead = self.op.coeff(self.order()).constant_value().and_then(|p| p.constant_value());
        match lead {
            Some(c) if c == crate::exact::rational::int(1) => Ok(()),
            _ => Err(Error::InvalidInput("operator must be monic".into())),
        }
    }

    fn value(&self) -> impl Fn(Var) -> Option<C64> + '_ {
        |v| self.values.get(&v).copied()
    }

    fn missing(&self) -> Error {
        let need: Vec<String> = (0..=self.order())
            .flat_map(|k| {
                let c = self.op.coeff(k);
                c.part0().iter().chain(c.part1()).flat_map(|p| p.vars()).collect::<Vec<_>>()
            })
            .filter(|v| !self.values.contains_key(v))
            .map(|v| v.to_string())
            .collect();
        Error::InvalidInput(format!("no numeric value for {}", need.join(", ")))
    }

    /// Coefficients from the Laurent expansions at the pole at the origin,
    /// truncated where `(radius / shortest period)^order` is negligible.
    pub fn local_evaluator(&self, radius: f64) -> Result<Box<Coefficients<'static>>> {
        self.check_monic()?;
        let rho = radius / self.lattice.shortest_period_norm();
        if rho >= 0.75 {
            return Err(Error::InvalidInput(format!("radius {radius} outside the series disk")));
        }
        let order = ((17.0 * 10f64.ln() / (1.0 / rho).ln()).ceil() as i64 + 4).clamp(8, 120);
        let value = self.value();
        let mut table = Vec::new();
        for k in 0..self.order() {
            let s = self.op.coeff(k).to_series(order);
            let low = s.low().min(0);
            let cs = (low..order)
                .map(|j| s.coeff(j).ok().and_then(|p| p.eval_complex(&value)))
                .collect::<Option<Vec<C64>>>()
                .ok_or_else(|| self.missing())?;
            table.push((low, cs));
        }
        Ok(Box::new(move |z: C64| {
            if z.norm() < crate::cm::lattice::NEAR_POLE {
                return Err(Error::NearPole(format!("{z}")));
            }
            Ok(table
                .iter()
                .map(|(low, cs)| cs.iter().rev().fold(C64::default(), |acc, c| acc * z + c) * z.powi(*low as i32))
                .collect())
        }))
    }

    /// Coefficients from numerical `P`, `P'` on the lattice.
    pub fn global_evaluator(&self) -> Result<Box<Coefficients<'static>>> {
        self.check_monic()?;
        let value = self.value();
        let parts = (0..self.order())
            .map(|k| NumElement::new(&self.op.coeff(k), &value))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| self.missing())?;
        let lattice = self.lattice.clone();
        Ok(Box::new(move |z: C64| {
            let (p, dp) = lattice.wp_pair(z)?;
            Ok(parts.iter().map(|e| e.eval(p, dp)).collect())
        }))
    }

    /// Local series around the origin when the circle is centred there,
    /// global evaluation otherwise.
    pub fn evaluator(&self, center: C64, radius: f64) -> Result<Box<Coefficients<'static>>> {
        check_circle(&self.lattice, center, radius)?;
        if center.norm() < 1e-14 && radius <= 0.5 * self.lattice.shortest_period_norm() {
            self.local_evaluator(radius)
        } else {
            self.global_evaluator()
        }
    }
}

/// Poles outside the circle must be at least twice the radius away from
/// its centre.
pub fn check_circle(lattice: &Lattice, center: C64, radius: f64) -> Result<()> {
    let nearest = center - lattice.reduce(center);
    let tau = lattice.tau();
    for m in -6..=6 {
        for k in -6..=6 {
            let d = (nearest + m as f64 + tau * k as f64 - center).norm();
            if d >= radius * (1.0 - 1e-12) && d < 2.0 * radius {
                return Err(Error::Path(format!(
                    "pole at distance {d} from the centre is too close to the circle of radius {radius}"
                )));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Trivial,
    Nontrivial,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Trivial => "trivial",
            Verdict::Nontrivial => "nontrivial",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Trivial if every deviation is below `10 tol`, nontrivial if any exceeds
/// `1000 tol`.
#[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN counts as nontrivial
pub fn classify_deviations(deviations: &[f64], tol: f64) -> Verdict {
    if deviations.iter().any(|&d| !(d <= 1e3 * tol)) {
        Verdict::Nontrivial
    } else if deviations.iter().all(|&d| d < 10.0 * tol) {
        Verdict::Trivial
    } else {
        Verdict::Inconclusive
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictReport {
    pub verdict: Verdict,
    pub reports: Vec<MonodromyReport>,
}

/// Where and how finely to integrate when deciding a verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct VerdictOptions {
    pub center: C64,
    /// Radius as a fraction of the shortest period.
    pub radius_fraction: f64,
    pub integration_tol: f64,
}

impl Default for VerdictOptions {
    // large circles make obstructions of high weight visible: their size
    // scales like radius^(index gap)
    fn default() -> Self {
        VerdictOptions { center: C64::default(), radius_fraction: 0.4, integration_tol: DEFAULT_INTEGRATION_TOL }
    }
}

/// Monodromy around one circle for several `lambda`, classified with the
/// verdict tolerance `tol`.
pub fn verdict_for(
    coeffs: &Coefficients,
    n: usize,
    lambdas: &[C64],
    center: C64,
    radius: f64,
    tol: f64,
    integration_tol: f64,
) -> Result<VerdictReport> {
    if lambdas.len() < 3 {
        return Err(Error::InvalidInput("at least three lambda samples are needed".into()));
    }
    let reports = lambdas
        .par_iter()
        .map(|&l| monodromy_matrix(coeffs, n, center, radius, l, integration_tol))
        .collect::<Result<Vec<_>>>()?;
    let devs: Vec<f64> = reports.iter().map(|r| r.deviation).collect();
    Ok(VerdictReport { verdict: classify_deviations(&devs, tol), reports })
}

pub fn integrability_verdict(op: &OperatorDescriptor, lambdas: &[C64], tol: f64) -> Result<VerdictReport> {
    integrability_verdict_with(op, lambdas, tol, &VerdictOptions::default())
}

pub fn integrability_verdict_with(
    op: &OperatorDescriptor,
    lambdas: &[C64],
    tol: f64,
    opts: &VerdictOptions,
) -> Result<VerdictReport> {
    let radius = opts.radius_fraction * op.lattice.shortest_period_norm();
    let coeffs = op.evaluator(opts.center, radius)?;
    verdict_for(&*coeffs, op.order(), lambdas, opts.center, radius, tol, opts.integration_tol)
}

/// `D^2 - sum m(m+1) f(z - z_i)` for a configuration of poles.
pub fn finite_gap_coefficients(cfg: &CMConfig2, kernel: Kernel) -> Box<Coefficients<'static>> {
    let cfg = cfg.clone();
    Box::new(move |z: C64| {
        let mut u = C64::default();
        for (zi, &m) in cfg.points.iter().zip(&cfg.multiplicities) {
            u += kernel.value(z - zi)? * (m * (m + 1)) as f64;
        }
        Ok(vec![-u, C64::default()])
    })
}
