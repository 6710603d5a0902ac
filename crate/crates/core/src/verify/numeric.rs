use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{engine, ensure, Outcome};
use crate::cm::residuals::hexagonal_fixed_points;
use crate::cm::{
    cm3_f, cm3_h1, cm3_residuals, cryst3_grad_h, cryst3_hamiltonian, cryst3_identity_defect, cryst3_residuals, epsilon,
    finite_gap_residuals, newton_critical, CMConfig2, CMConfig3, Cm3Problem, Cryst3Config, Kernel, Lattice,
    NewtonOptions,
};
use crate::exact::rational::int;
use crate::exact::{MultiPoly, Var};
use crate::locus3::constraints_for;
use crate::monodromy::ConstraintSet;
use crate::operator::{cyclic_l0, parse_operator, third_order_from_gaps, CurveKind};
use crate::oracle::{
    default_lambdas, finite_gap_coefficients, integrability_verdict, monodromy_matrix, verdict_for, OperatorDescriptor,
    Verdict,
};

/// Verdict tolerance for the oracle: trivial below 1e-7, nontrivial above 1e-5.
const VERDICT_TOL: f64 = 1e-8;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn rand_c(rng: &mut ChaCha8Rng, r: f64) -> C64 {
    c(rng.gen_range(-r..r), rng.gen_range(-r..r))
}

fn random_lattice(rng: &mut ChaCha8Rng) -> Lattice {
    loop {
        let tau = c(rng.gen_range(-0.5..0.5), rng.gen_range(0.9..1.6));
        if tau.norm() >= 1.0 {
            return Lattice::new(tau).expect("upper half plane");
        }
    }
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

fn max_rel(a: &[C64], b: &[C64]) -> f64 {
    let scale = a.iter().chain(b).map(|z| z.norm()).fold(1.0, f64::max);
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

/// Constraint polynomials at `(c, e)` on a curve, each divided by
/// `s^weight` with `s = |g2|^(1/4)` so that the numbers are of order one.
struct ScaledConstraints {
    polys: Vec<(MultiPoly, i32)>,
    g2: C64,
    g3: C64,
    s: f64,
}

impl ScaledConstraints {
    fn new(cs: &ConstraintSet, lat: &Lattice) -> Self {
        let polys = cs.polys().map(|p| (p.clone(), p.homogeneous_weight().unwrap_or(0) as i32)).collect();
        let s = lat.g2().norm().powf(0.25).max(lat.g3().norm().powf(1.0 / 6.0));
        ScaledConstraints { polys, g2: lat.g2(), g3: lat.g3(), s }
    }

    fn eval(&self, cval: C64, eval: C64) -> Vec<C64> {
        let vals: BTreeMap<Var, C64> = [(Var::C, cval), (Var::E, eval), (Var::G2, self.g2), (Var::G3, self.g3)].into();
        self.polys
            .iter()
            .map(|(p, w)| p.eval_complex(&|v| vals.get(&v).copied()).expect("c, e, g2, g3 only") / self.s.powi(*w))
            .collect()
    }

    fn residual(&self, cval: C64, eval: C64) -> f64 {
        self.eval(cval, eval).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// A point of the locus on this curve, by Newton from random starts.
    fn point(&self, rng: &mut ChaCha8Rng) -> Option<(C64, C64)> {
        let s = self.s;
        let f = |x: &[C64]| Ok(self.eval(x[0] * s * s, x[1] * s));
        let opts = NewtonOptions { tolerance: 1e-13, ..NewtonOptions::default() };
        for _ in 0..40 {
            let x0 = [rand_c(rng, 1.0), rand_c(rng, 1.0)];
            if let Ok(rep) = newton_critical(&f, &x0, &opts) {
                return Some((rep.solution[0] * s * s, rep.solution[1] * s));
            }
        }
        None
    }
}

fn locus_agreement(rng: &mut ChaCha8Rng, samples: usize) -> std::result::Result<String, String> {
    let pairs = [(1, 1), (4, 1), (1, 4), (2, 2), (5, 2), (2, 5), (4, 4), (5, 5)];
    let mut worst_on: f64 = 0.0;
    let mut least_off = f64::INFINITY;
    let mut k = 0;
    let mut attempts = 0;
    while k < samples {
        attempts += 1;
        if attempts > 10 * samples {
            return Err("could not place enough points on the locus".into());
        }
        let (q, r) = pairs[rng.gen_range(0..pairs.len())];
        let lat = random_lattice(rng);
        let cs = engine(constraints_for(q, r))?;
        let sc = ScaledConstraints::new(&cs, &lat);
        let Some((mut cv, mut ev)) = sc.point(rng) else { continue };
        let on = k % 2 == 0;
        if !on {
            cv += 1e-2 * sc.s * sc.s * C64::from_polar(1.0, rng.gen_range(0.0..TAU));
            ev += 1e-2 * sc.s * C64::from_polar(1.0, rng.gen_range(0.0..TAU));
        }
        let engine_on = sc.residual(cv, ev) < 1e-9;
        let desc = OperatorDescriptor::new(engine(third_order_from_gaps(q, r))?, lat).with(Var::C, cv).with(Var::E, ev);
        let rep = engine(integrability_verdict(&desc, &default_lambdas(), VERDICT_TOL))?;
        let dev = rep.reports.iter().map(|x| x.deviation).fold(0.0, f64::max);
        ensure(rep.verdict != Verdict::Inconclusive, || {
            format!("(q, r) = ({q}, {r}): inconclusive, deviation {dev:e}")
        })?;
        ensure(engine_on == (rep.verdict == Verdict::Trivial), || {
            format!("(q, r) = ({q}, {r}), c = {cv}, e = {ev}: engine on-locus {engine_on}, oracle {}", rep.verdict)
        })?;
        ensure(engine_on == on, || {
            format!("(q, r) = ({q}, {r}): sample meant to be on-locus={on} but engine says {engine_on}")
        })?;
        if on {
            worst_on = worst_on.max(dev);
        } else {
            least_off = least_off.min(dev);
        }
        k += 1;
    }
    Ok(format!(
        "locus agreement {samples}/{samples} (on-locus deviation <= {worst_on:.1e}, off-locus >= {least_off:.1e})"
    ))
}

pub fn monodromy(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let square = Lattice::square();
    let radius = 0.25 * square.shortest_period_norm();
    let lame = OperatorDescriptor::new(engine(parse_operator("D^2 - 2*P"))?, square.clone());
    let coeffs = engine(lame.evaluator(C64::default(), radius))?;
    let mut lame_dev: f64 = 0.0;
    for _ in 0..5 {
        let l = rand_c(&mut rng, 5.0);
        let rep = engine(monodromy_matrix(&*coeffs, 2, C64::default(), radius, l, 1e-12))?;
        ensure(rep.deviation < 1e-8, || format!("Lame at lambda = {l}: deviation {:e}", rep.deviation))?;
        ensure((rep.determinant - 1.0).norm() < 1e-8, || format!("Lame at lambda = {l}: det {}", rep.determinant))?;
        lame_dev = lame_dev.max(rep.deviation);
    }
    let bad = OperatorDescriptor::new(engine(parse_operator("D^2 - 5/2*P"))?, square.clone());
    let coeffs = engine(bad.evaluator(C64::default(), radius))?;
    let rep = engine(monodromy_matrix(&*coeffs, 2, C64::default(), radius, c(1.0, 0.0), 1e-12))?;
    ensure(rep.deviation > 1e-2, || format!("a = -5/2: deviation only {:e}", rep.deviation))?;
    let bad_dev = rep.deviation;

    let hex = Lattice::hexagonal();
    let cyclic: [(&[i64], CurveKind, &Lattice); 4] = [
        (&[-1, 1, 3], CurveKind::Equianharmonic, &hex),
        (&[-3, 1, 5], CurveKind::Equianharmonic, &hex),
        (&[-1, 1, 2, 4], CurveKind::Lemniscatic, &square),
        (&[-1, 1, 2, 3, 4, 6], CurveKind::Equianharmonic, &hex),
    ];
    let mut cyc_dev: f64 = 0.0;
    for (idx, curve, lat) in cyclic {
        let idx: Vec<_> = idx.iter().map(|&m| int(m)).collect();
        let desc = OperatorDescriptor::new(engine(cyclic_l0(&idx, curve))?, lat.clone());
        let rep = engine(integrability_verdict(&desc, &default_lambdas(), VERDICT_TOL))?;
        let dev = rep.reports.iter().map(|x| x.deviation).fold(0.0, f64::max);
        ensure(rep.verdict == Verdict::Trivial, || {
            format!("cyclic L(0) with indices {idx:?}: {} (deviation {dev:e})", rep.verdict)
        })?;
        cyc_dev = cyc_dev.max(dev);
    }
    let agreement = locus_agreement(&mut rng, 10)?;
    Ok(format!(
        "Lame deviation <= {lame_dev:.1e}; a = -5/2 deviation {bad_dev:.2}; cyclic n = 3, 3, 4, 6 deviation <= {cyc_dev:.1e}; {agreement}"
    ))
}

pub fn calogero_moser(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kernel = Kernel::Elliptic(Lattice::square());

    // one pole: c = -3 p^2, the (2, 2) locus 3c + e^2 = 0 at e = 3p
    let two_two = engine(constraints_for(2, 2))?;
    let poly = two_two.polys().next().ok_or("no (2, 2) condition")?.clone();
    for _ in 0..5 {
        let p = rand_c(&mut rng, 2.0);
        let pb = Cm3Problem {
            base: CMConfig3 { points: vec![C64::default()], momenta: vec![p], c: rand_c(&mut rng, 3.0) },
            kernel: kernel.clone(),
            vary_points: false,
            vary_momenta: false,
            vary_c: true,
        };
        let (cfg, _) = engine(pb.solve(&NewtonOptions { tolerance: 1e-14, ..NewtonOptions::default() }))?;
        ensure(rel(cfg.c, -3.0 * p * p) < 1e-12, || format!("p = {p}: c = {}, expected {}", cfg.c, -3.0 * p * p))?;
        let e = 3.0 * p;
        let vals: BTreeMap<Var, C64> = [(Var::C, cfg.c), (Var::E, e)].into();
        let v = poly.eval_complex(&|x| vals.get(&x).copied()).ok_or("unexpected variable")?;
        ensure(v.norm() < 1e-12 * e.norm_sqr().max(1.0), || format!("p = {p}: (2, 2) condition {v}"))?;
    }

    // two simple poles at a half period
    let mut half_res: f64 = 0.0;
    for lat in [Lattice::square(), random_lattice(&mut rng)] {
        for w in [c(0.5, 0.0), lat.tau() / 2.0] {
            let cfg = CMConfig2 { points: vec![C64::default(), w], multiplicities: vec![1, 1] };
            let k = Kernel::Elliptic(lat.clone());
            let res = engine(finite_gap_residuals(&cfg, &k))?.iter().map(|z| z.norm()).fold(0.0, f64::max);
            ensure(res < 1e-12, || format!("half period {w}: residual {res:e}"))?;
            half_res = half_res.max(res);
            let coeffs = finite_gap_coefficients(&cfg, k);
            let radius = 0.2 * lat.shortest_period_norm();
            for center in cfg.points.clone() {
                let rep = engine(verdict_for(&*coeffs, 2, &default_lambdas(), center, radius, VERDICT_TOL, 1e-12))?;
                ensure(rep.verdict == Verdict::Trivial, || format!("half period {w}, pole {center}: {}", rep.verdict))?;
            }
        }
    }

    // residuals against finite differences of F + c H1
    let h = 1e-5;
    let mut fd_err: f64 = 0.0;
    for _ in 0..10 {
        let n = rng.gen_range(2..=3);
        let cfg = CMConfig3 {
            points: (0..n).map(|_| c(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0))).collect(),
            momenta: (0..n).map(|_| rand_c(&mut rng, 1.0)).collect(),
            c: rand_c(&mut rng, 2.0),
        };
        let Ok(res) = cm3_residuals(&cfg, &kernel) else { continue };
        let g = |x: &CMConfig3| -> crate::error::Result<C64> { Ok(cm3_f(x, &kernel)? + x.c * cm3_h1(x)) };
        let mut fd = Vec::new();
        for i in 0..n {
            let (mut a, mut b) = (cfg.clone(), cfg.clone());
            a.momenta[i] += h;
            b.momenta[i] -= h;
            fd.push(engine(g(&a))? / (2.0 * h) - engine(g(&b))? / (2.0 * h));
        }
        for i in 0..n {
            let (mut a, mut b) = (cfg.clone(), cfg.clone());
            a.points[i] += h;
            b.points[i] -= h;
            fd.push(-(engine(g(&a))? - engine(g(&b))?) / (2.0 * h));
        }
        let err = max_rel(&res, &fd);
        ensure(err < 1e-6, || format!("cm3 residuals vs finite differences: {err:e}"))?;
        fd_err = fd_err.max(err);
    }

    // a two-pole critical point by Newton
    let opts = NewtonOptions { tolerance: 1e-11, ..NewtonOptions::default() };
    let mut found = None;
    for _ in 0..20 {
        let pb = Cm3Problem {
            base: CMConfig3 {
                points: vec![C64::default(), c(0.5, 0.0) + rand_c(&mut rng, 0.1)],
                momenta: vec![rand_c(&mut rng, 1.0), rand_c(&mut rng, 1.0)],
                c: rand_c(&mut rng, 3.0),
            },
            kernel: kernel.clone(),
            vary_points: true,
            vary_momenta: true,
            vary_c: true,
        };
        if let Ok((cfg, rep)) = pb.solve(&opts) {
            found = Some((cfg, rep.residual_norm));
            break;
        }
    }
    let (cfg, res) = found.ok_or("Newton found no two-pole critical point")?;
    ensure(res < 1e-10, || format!("two-pole critical point residual {res:e}"))?;
    Ok(format!(
        "c = -3p^2 to 1e-12; half-period residual {half_res:.1e}, oracle trivial; finite differences agree to {fd_err:.1e}; \
         two-pole critical point z2 = {:.6}, residual {res:.1e}",
        cfg.points[1]
    ))
}

pub fn crystallographic(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hex = Lattice::hexagonal();
    let eps = epsilon();
    let cell = |rng: &mut ChaCha8Rng| rng.gen_range(0.0..1.0) + eps * rng.gen_range(0.0..1.0);

    let mut worst_identity: f64 = 0.0;
    let mut n = 0;
    while n < 20 {
        let z = cell(&mut rng);
        let Ok(lhs) = hex.wp((1.0 - eps) * z) else { continue };
        if lhs.norm() > 1e4 || hexagonal_fixed_points().iter().any(|&e| hex.check_regular(z - e).is_err()) {
            continue;
        }
        let d = engine(cryst3_identity_defect(z, &hex))?.norm() / lhs.norm().max(1.0);
        ensure(d < 1e-10, || format!("identity defect {d:e} at z = {z}"))?;
        worst_identity = worst_identity.max(d);
        n += 1;
    }

    let (mut worst_grad, mut worst_fd): (f64, f64) = (0.0, 0.0);
    let h = 1e-5;
    let mut n = 0;
    while n < 20 {
        let k = rng.gen_range(1..=3);
        let cfg = Cryst3Config {
            points: (0..k).map(|_| cell(&mut rng)).collect(),
            momenta: (0..k).map(|_| rand_c(&mut rng, 1.0)).collect(),
            alpha: std::array::from_fn(|_| rand_c(&mut rng, 2.0)),
            beta: std::array::from_fn(|_| rand_c(&mut rng, 2.0)),
        };
        let Ok(res) = cryst3_residuals(&cfg, &hex) else { continue };
        if res.iter().any(|z| z.norm() > 1e6) {
            continue;
        }
        let params = cfg.hamiltonian_params();
        let grad = engine(cryst3_grad_h(&cfg.points, &cfg.momenta, &params, &hex))?;
        let err = max_rel(&res, &grad);
        ensure(err < 1e-8, || format!("residuals vs grad H: {err:e}"))?;
        worst_grad = worst_grad.max(err);
        let ham = |z: &[C64], p: &[C64]| cryst3_hamiltonian(z, p, &params, &hex);
        let mut fd = Vec::new();
        for i in 0..k {
            let (mut a, mut b) = (cfg.momenta.clone(), cfg.momenta.clone());
            a[i] += h;
            b[i] -= h;
            fd.push((engine(ham(&cfg.points, &a))? - engine(ham(&cfg.points, &b))?) / (2.0 * h));
        }
        for i in 0..k {
            let (mut a, mut b) = (cfg.points.clone(), cfg.points.clone());
            a[i] += h;
            b[i] -= h;
            fd.push((engine(ham(&a, &cfg.momenta))? - engine(ham(&b, &cfg.momenta))?) / (2.0 * h));
        }
        let err = max_rel(&grad, &fd);
        ensure(err < 1e-5, || format!("grad H vs finite differences: {err:e}"))?;
        worst_fd = worst_fd.max(err);
        n += 1;
    }
    Ok(format!(
        "identity defect <= {worst_identity:.1e} at 20 points; residuals = grad H to {worst_grad:.1e} at 20 configurations \
         (finite differences {worst_fd:.1e})"
    ))
}

pub fn elliptic(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lattices = [Lattice::square(), Lattice::hexagonal(), engine(Lattice::new(c(0.3, 1.1)))?];
    let (mut relation, mut period, mut series): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for lat in &lattices {
        let (g2, g3, tau) = (lat.g2(), lat.g3(), lat.tau());
        let mut n = 0;
        while n < 100 {
            let z = rng.gen_range(0.0..1.0) + tau * rng.gen_range(0.0..1.0);
            if lat.reduce(z).norm() < 0.05 * lat.shortest_period_norm() {
                continue;
            }
            let (p, dp) = engine(lat.wp_pair(z))?;
            let rhs = 4.0 * p * p * p - g2 * p - g3;
            let r = (dp * dp - rhs).norm() / dp.norm_sqr().max(rhs.norm()).max(1.0);
            ensure(r < 1e-9, || format!("tau = {tau}, z = {z}: defining relation residual {r:e}"))?;
            relation = relation.max(r);
            for w in [C64::new(1.0, 0.0), tau] {
                let (p2, dp2) = engine(lat.wp_pair(z + w))?;
                let d = rel(p, p2).max(rel(dp, dp2));
                ensure(d < 1e-10, || format!("tau = {tau}, z = {z}: period {w} changes P by {d:e}"))?;
                period = period.max(d);
            }
            n += 1;
        }
        for _ in 0..20 {
            let z = C64::from_polar(rng.gen_range(0.02..0.09) * lat.shortest_period_norm(), rng.gen_range(0.0..TAU));
            let (a, da) = lat.series_pair(z);
            let (b, db) = lat.qseries_pair(lat.reduce_cell(z));
            let d = ((a - b).norm() / a.norm()).max((da - db).norm() / da.norm());
            ensure(d < 1e-10, || format!("tau = {tau}, z = {z}: series and q-expansion differ by {d:e}"))?;
            series = series.max(d);
        }
    }
    Ok(format!(
        "3 lattices x 100 points: relation {relation:.1e}, periodicity {period:.1e}; series vs q-expansion {series:.1e}"
    ))
}
