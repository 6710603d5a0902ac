use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::lattice::{epsilon, Kernel, Lattice};
use crate::error::{Error, Result};

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

fn check_points(kernel: &Kernel, z: &[C64]) -> Result<()> {
    for i in 0..z.len() {
        for j in 0..i {
            kernel.check_distinct(z[i], z[j])?;
        }
    }
    Ok(())
}

/// Poles `z_i` of `D^2 - sum m_i (m_i + 1) f(z - z_i)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CMConfig2 {
    pub points: Vec<C64>,
    pub multiplicities: Vec<u32>,
}

/// For each `i` and `s = 1..m_i`: `sum_(j != i) m_j (m_j + 1) f^(2s-1)(z_i - z_j)`.
/// Residuals are listed by `i`, then `s`.
pub fn finite_gap_residuals(cfg: &CMConfig2, kernel: &Kernel) -> Result<Vec<C64>> {
    if cfg.points.len() != cfg.multiplicities.len() {
        return Err(Error::InvalidConfiguration("one multiplicity per point".into()));
    }
    check_points(kernel, &cfg.points)?;
    let mut out = Vec::new();
    for (i, (&zi, &mi)) in cfg.points.iter().zip(&cfg.multiplicities).enumerate() {
        for s in 1..=mi as usize {
            let mut acc = zero();
            for (j, (&zj, &mj)) in cfg.points.iter().zip(&cfg.multiplicities).enumerate() {
                if j != i && mj > 0 {
                    acc += (mj * (mj + 1)) as f64 * kernel.derivative(zi - zj, 2 * s - 1)?;
                }
            }
            out.push(acc);
        }
    }
    Ok(out)
}

/// `U = sum_(i != j) f(z_i - z_j)`; with all multiplicities 1 the
/// finite-gap residuals are exactly `dU/dz_i`.
pub fn calogero_potential(points: &[C64], kernel: &Kernel) -> Result<C64> {
    let mut acc = zero();
    for (i, &zi) in points.iter().enumerate() {
        for (j, &zj) in points.iter().enumerate() {
            if i != j {
                acc += kernel.value(zi - zj)?;
            }
        }
    }
    Ok(acc)
}

/// Poles, residue parameters and the constant of
/// `D^3 + (c - 3 sum f(z - z_i)) D - 3/2 sum f'(z - z_i) + 3 sum p_i f(z - z_i)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CMConfig3 {
    pub points: Vec<C64>,
    pub momenta: Vec<C64>,
    pub c: C64,
}

/// `[c + 3 p_i^2 - 3 sum_j f(z_i - z_j)]_i` followed by
/// `[3 sum_j (p_i + p_j) f'(z_i - z_j)]_i`.
///
/// The first block is `d/dp_i (F + c H1)`, the second is `-d/dz_i F`.
pub fn cm3_residuals(cfg: &CMConfig3, kernel: &Kernel) -> Result<Vec<C64>> {
    let (z, p) = (&cfg.points, &cfg.momenta);
    if z.len() != p.len() {
        return Err(Error::InvalidConfiguration("one momentum per point".into()));
    }
    check_points(kernel, z)?;
    let n = z.len();
    let mut first = vec![zero(); n];
    let mut second = vec![zero(); n];
    for i in 0..n {
        let mut s0 = zero();
        let mut s1 = zero();
        for j in (0..n).filter(|&j| j != i) {
            let (f, df) = kernel.pair(z[i] - z[j])?;
            s0 += f;
            s1 += (p[i] + p[j]) * df;
        }
        first[i] = cfg.c + 3.0 * p[i] * p[i] - 3.0 * s0;
        second[i] = 3.0 * s1;
    }
    first.extend(second);
    Ok(first)
}

/// `F = sum p_i^3 - 3/2 sum_(i != j) (p_i + p_j) f(z_i - z_j)`.
pub fn cm3_f(cfg: &CMConfig3, kernel: &Kernel) -> Result<C64> {
    let (z, p) = (&cfg.points, &cfg.momenta);
    let mut acc: C64 = p.iter().map(|x| x * x * x).sum();
    for i in 0..z.len() {
        for j in (0..z.len()).filter(|&j| j != i) {
            acc -= 1.5 * (p[i] + p[j]) * kernel.value(z[i] - z[j])?;
        }
    }
    Ok(acc)
}

/// `H1 = sum p_i`.
pub fn cm3_h1(cfg: &CMConfig3) -> C64 {
    cfg.momenta.iter().sum()
}

/// `H2 = sum p_i^2 - sum_(i != j) f(z_i - z_j)`.
pub fn cm3_h2(cfg: &CMConfig3, kernel: &Kernel) -> Result<C64> {
    let kin: C64 = cfg.momenta.iter().map(|x| x * x).sum();
    Ok(kin - calogero_potential(&cfg.points, kernel)?)
}

/// The three points fixed by `z -> eps z` on `Z + eps Z`:
/// `0, i/sqrt(3), -i/sqrt(3)`.
pub fn hexagonal_fixed_points() -> [C64; 3] {
    let h = 1.0 / 3f64.sqrt();
    [zero(), C64::new(0.0, h), C64::new(0.0, -h)]
}

/// A `Z_3`-symmetric configuration on the hexagonal lattice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cryst3Config {
    pub points: Vec<C64>,
    pub momenta: Vec<C64>,
    /// Coefficients of `P(z - eta_r) D` in the operator.
    pub alpha: [C64; 3],
    /// Coefficients of `P'(z - eta_r)` in the operator.
    pub beta: [C64; 3],
}

/// Hamiltonian parameters `(A, B, C)` matched to an operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cryst3Params {
    pub a: [C64; 3],
    pub b: [C64; 3],
    pub c: C64,
}

impl Cryst3Config {
    /// `A_r = alpha_r - 1`, `B_r = alpha_r/2 - beta_r`, `C = 1`.
    pub fn hamiltonian_params(&self) -> Cryst3Params {
        Cryst3Params {
            a: self.alpha.map(|x| x - 1.0),
            b: std::array::from_fn(|r| self.alpha[r] / 2.0 - self.beta[r]),
            c: C64::new(1.0, 0.0),
        }
    }
}

fn check_hexagonal(lat: &Lattice) -> Result<()> {
    if (lat.tau() - epsilon()).norm() > 1e-12 {
        return Err(Error::InvalidLattice(format!("the Z_3 system needs tau = e^(2 pi i/3), got {}", lat.tau())));
    }
    Ok(())
}

fn check_cryst(cfg: &Cryst3Config, lat: &Lattice) -> Result<()> {
    check_hexagonal(lat)?;
    if cfg.points.len() != cfg.momenta.len() {
        return Err(Error::InvalidConfiguration("one momentum per point".into()));
    }
    let eps = epsilon();
    for (i, &zi) in cfg.points.iter().enumerate() {
        for eta in hexagonal_fixed_points() {
            lat.check_regular(zi - eta)
                .map_err(|_| Error::InvalidConfiguration(format!("point {zi} is a fixed point")))?;
        }
        for &zj in &cfg.points[..i] {
            for s in 0..3 {
                lat.check_regular(zi - eps.powi(s) * zj)
                    .map_err(|_| Error::InvalidConfiguration(format!("points {zi} and {zj} share an orbit")))?;
            }
        }
    }
    Ok(())
}

/// The two families of integrability conditions for the `Z_3`-symmetric
/// third-order operator, as residuals (left minus right side):
/// `3 p_i^2 - 3 sum_j sum_s P(z_i - eps^s z_j) + sum_r (alpha_r - 1) P(z_i - eta_r)`
/// and
/// `sum_r ((alpha_r - 1) P'(z_i - eta_r) p_i + (alpha_r/2 - beta_r) P''(z_i - eta_r))
///  - 3 sum_j sum_s P'(z_i - eps^s z_j)(p_i + eps^-s p_j)`.
pub fn cryst3_residuals(cfg: &Cryst3Config, lat: &Lattice) -> Result<Vec<C64>> {
    check_cryst(cfg, lat)?;
    let (z, p) = (&cfg.points, &cfg.momenta);
    let n = z.len();
    let eps = epsilon();
    let eta = hexagonal_fixed_points();
    let mut first = Vec::with_capacity(2 * n);
    let mut second = Vec::with_capacity(n);
    for i in 0..n {
        let mut f = 3.0 * p[i] * p[i];
        let mut g = zero();
        for r in 0..3 {
            let (w, dw) = lat.wp_pair(z[i] - eta[r])?;
            let ddw = lat.wp_derivative(z[i] - eta[r], 2)?;
            f += (cfg.alpha[r] - 1.0) * w;
            g += (cfg.alpha[r] - 1.0) * dw * p[i] + (cfg.alpha[r] / 2.0 - cfg.beta[r]) * ddw;
        }
        for j in (0..n).filter(|&j| j != i) {
            for s in 0..3 {
                let (w, dw) = lat.wp_pair(z[i] - eps.powi(s) * z[j])?;
                f -= 3.0 * w;
                g -= 3.0 * dw * (p[i] + eps.powi(-s) * p[j]);
            }
        }
        first.push(f);
        second.push(g);
    }
    first.extend(second);
    Ok(first)
}

/// `H = sum p_i^3 + sum_i sum_r (A_r P(z_i - eta_r) p_i + B_r P'(z_i - eta_r))
///      - 3C sum_(i != j) sum_s P(z_i - eps^s z_j) p_i`.
pub fn cryst3_hamiltonian(z: &[C64], p: &[C64], params: &Cryst3Params, lat: &Lattice) -> Result<C64> {
    let eps = epsilon();
    let eta = hexagonal_fixed_points();
    let mut h = zero();
    for i in 0..z.len() {
        h += p[i] * p[i] * p[i];
        for r in 0..3 {
            let (w, dw) = lat.wp_pair(z[i] - eta[r])?;
            h += params.a[r] * w * p[i] + params.b[r] * dw;
        }
        for j in (0..z.len()).filter(|&j| j != i) {
            for s in 0..3 {
                h -= 3.0 * params.c * lat.wp(z[i] - eps.powi(s) * z[j])? * p[i];
            }
        }
    }
    Ok(h)
}

/// `[dH/dp_i]_i` followed by `[dH/dz_i]_i`, differentiated term by term.
pub fn cryst3_grad_h(z: &[C64], p: &[C64], params: &Cryst3Params, lat: &Lattice) -> Result<Vec<C64>> {
    check_hexagonal(lat)?;
    let n = z.len();
    let eps = epsilon();
    let eta = hexagonal_fixed_points();
    let mut dp = vec![zero(); n];
    let mut dz = vec![zero(); n];
    for i in 0..n {
        dp[i] += 3.0 * p[i] * p[i];
        for r in 0..3 {
            let (w, dw) = lat.wp_pair(z[i] - eta[r])?;
            dp[i] += params.a[r] * w;
            dz[i] += params.a[r] * dw * p[i] + params.b[r] * lat.wp_derivative(z[i] - eta[r], 2)?;
        }
        for j in (0..n).filter(|&j| j != i) {
            for s in 0..3 {
                let es = eps.powi(s);
                let (w, dw) = lat.wp_pair(z[i] - es * z[j])?;
                let t = -3.0 * params.c * p[i];
                dp[i] += -3.0 * params.c * w;
                dz[i] += t * dw;
                dz[j] += t * dw * (-es);
            }
        }
    }
    dp.extend(dz);
    Ok(dp)
}

/// `P((1 - eps) z) + eps^-1/3 (P(z) + P(z - eta_1) + P(z - eta_2))`; zero
/// on the hexagonal lattice.
pub fn cryst3_identity_defect(z: C64, lat: &Lattice) -> Result<C64> {
    let eps = epsilon();
    let eta = hexagonal_fixed_points();
    let lhs = lat.wp((1.0 - eps) * z)?;
    let mut s = zero();
    for e in eta {
        s += lat.wp(z - e)?;
    }
    Ok(lhs + eps.inv() / 3.0 * s)
}

/// `w_0..w_3`: the half periods `0, 1/2, tau/2, (1 + tau)/2`.
pub fn half_periods(lat: &Lattice) -> [C64; 4] {
    let t = lat.tau();
    [zero(), C64::new(0.5, 0.0), t / 2.0, (1.0 + t) / 2.0]
}

/// `U = sum_i sum_j (m_i + 1/2)^2 P(z_j - w_i) + sum_(k != j) (P(z_j - z_k) + P(z_j + z_k))`.
pub fn inozemtsev_potential(z: &[C64], m: &[f64; 4], lat: &Lattice) -> Result<C64> {
    let w = half_periods(lat);
    let mut u = zero();
    for (j, &zj) in z.iter().enumerate() {
        for i in 0..4 {
            u += (m[i] + 0.5).powi(2) * lat.wp(zj - w[i])?;
        }
        for (k, &zk) in z.iter().enumerate() {
            if k != j {
                u += lat.wp(zj - zk)? + lat.wp(zj + zk)?;
            }
        }
    }
    Ok(u)
}

/// `dU/dz_j` for the Inozemtsev potential.
pub fn inozemtsev_gradient(z: &[C64], m: &[f64; 4], lat: &Lattice) -> Result<Vec<C64>> {
    let w = half_periods(lat);
    for (j, &zj) in z.iter().enumerate() {
        for wi in w {
            lat.check_regular(zj - wi)
                .map_err(|_| Error::InvalidConfiguration(format!("point {zj} is a half period")))?;
        }
        for &zk in &z[..j] {
            for v in [zj - zk, zj + zk] {
                lat.check_regular(v)
                    .map_err(|_| Error::InvalidConfiguration(format!("points {zj} and {zk} collide")))?;
            }
        }
    }
    let mut g = vec![zero(); z.len()];
    for (j, &zj) in z.iter().enumerate() {
        for i in 0..4 {
            g[j] += (m[i] + 0.5).powi(2) * lat.wp_prime(zj - w[i])?;
        }
        for (k, &zk) in z.iter().enumerate() {
            if k != j {
                g[j] += 2.0 * (lat.wp_prime(zj - zk)? + lat.wp_prime(zj + zk)?);
            }
        }
    }
    Ok(g)
}
