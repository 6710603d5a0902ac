use fingap_core::cm::residuals::{cm3_f, cm3_h1, cm3_residuals, CMConfig3};
use fingap_core::cm::{Cm3Problem, Kernel, Lattice, NewtonOptions};
use fingap_core::exact::rational::rat;
use fingap_core::exact::{RatFunc, Var};
use fingap_core::locus3::reference::r2_c_over_e2;
use fingap_core::operator::parse_operator;
use fingap_core::oracle::{monodromy_matrix, OperatorDescriptor};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn tau() -> impl Strategy<Value = C64> {
    (-0.5f64..0.5, 0.9f64..1.8).prop_map(|(x, y)| C64::new(x, y))
}

/// A point of the period cell kept away from the lattice.
fn cell_point() -> impl Strategy<Value = (f64, f64)> {
    (0.08f64..0.92, 0.08f64..0.92)
}

fn complex() -> impl Strategy<Value = C64> {
    (-1.5f64..1.5, -1.5f64..1.5).prop_map(|(x, y)| C64::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weierstrass_relation_and_periodicity(t in tau(), (a, b) in cell_point()) {
        let lat = Lattice::new(t).unwrap();
        let z = a + b * t;
        let (p, dp) = lat.wp_pair(z).unwrap();
        let (g2, g3) = (lat.g2(), lat.g3());
        let scale = dp.norm_sqr() + 4.0 * p.norm().powi(3) + g2.norm() * p.norm() + g3.norm();
        prop_assert!((dp * dp - 4.0 * p * p * p + g2 * p + g3).norm() < 1e-12 * scale);
        for shift in [C64::new(1.0, 0.0), t] {
            let q = lat.wp(z + shift).unwrap();
            prop_assert!((q - p).norm() < 1e-10 * p.norm().max(1.0));
        }
    }

    /// The first residual block is d/dp (F + c H1), the second is -d/dz F.
    #[test]
    fn cm3_residuals_are_gradients(
        t in tau(),
        pts in prop::collection::vec(cell_point(), 3),
        momenta in prop::collection::vec(complex(), 3),
        c in complex(),
    ) {
        let lat = Lattice::new(t).unwrap();
        let points: Vec<C64> = pts.iter().map(|&(a, b)| a + b * t).collect();
        for i in 0..3 {
            for j in 0..i {
                prop_assume!((lat.reduce(points[i] - points[j])).norm() > 0.1);
            }
        }
        let kernel = Kernel::Elliptic(lat);
        let cfg = CMConfig3 { points, momenta, c };
        let res = cm3_residuals(&cfg, &kernel).unwrap();
        let objective = |cfg: &CMConfig3| cm3_f(cfg, &kernel).unwrap() + cfg.c * cm3_h1(cfg);
        let h = 1e-5;
        let size: f64 = res.iter().map(|r| r.norm()).fold(1.0, f64::max);
        for i in 0..3 {
            let (mut up, mut down) = (cfg.clone(), cfg.clone());
            up.momenta[i] += h;
            down.momenta[i] -= h;
            let dp = (objective(&up) - objective(&down)) / (2.0 * h);
            prop_assert!((dp - res[i]).norm() < 1e-5 * size, "d/dp_{}: {} vs {}", i, dp, res[i]);
            let (mut up, mut down) = (cfg.clone(), cfg.clone());
            up.points[i] += h;
            down.points[i] -= h;
            let dz = (cm3_f(&up, &kernel).unwrap() - cm3_f(&down, &kernel).unwrap()) / (2.0 * h);
            prop_assert!((-dz - res[3 + i]).norm() < 1e-5 * size, "d/dz_{}: {} vs {}", i, -dz, res[3 + i]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Lame operators with integer m: trivial monodromy on every small
    /// circle, and a unimodular matrix (the Wronskian is constant).
    #[test]
    fn lame_monodromy_is_trivial_and_unimodular(
        m in 1i64..=3,
        lambda in complex(),
        fraction in prop::sample::select(vec![0.05f64, 0.1, 0.15]),
        t in tau(),
    ) {
        let lat = Lattice::new(t).unwrap();
        let radius = fraction * lat.shortest_period_norm();
        let op = parse_operator(&format!("D^2 - {}*P", m * (m + 1))).unwrap();
        let desc = OperatorDescriptor::new(op, lat);
        let coeffs = desc.evaluator(C64::default(), radius).unwrap();
        let rep = monodromy_matrix(&*coeffs, 2, C64::default(), radius, lambda * 5.0, 1e-12).unwrap();
        prop_assert!((rep.determinant - 1.0).norm() < 1e-8, "det {}", rep.determinant);
        prop_assert!(rep.deviation < 1e-7, "deviation {}", rep.deviation);
    }
}

#[test]
fn single_particle_matches_the_symbolic_branch() {
    // exact side: c = -e^2/3 at (q, r) = (2, 2); numeric side: c = -3 p^2 with e = 3p
    let at_two = r2_c_over_e2().substitute(Var::Q, &RatFunc::constant(rat(2, 1))).unwrap();
    assert_eq!(at_two.constant_value(), Some(rat(-1, 3)));
    for p in [C64::new(0.3, 0.1), C64::new(-1.2, 0.7), C64::new(2.0, 0.0)] {
        let problem = Cm3Problem {
            base: CMConfig3 { points: vec![C64::default()], momenta: vec![p], c: C64::new(1.0, 1.0) },
            kernel: Kernel::Elliptic(Lattice::square()),
            vary_points: false,
            vary_momenta: false,
            vary_c: true,
        };
        let (cfg, report) = problem.solve(&NewtonOptions::default()).unwrap();
        assert!(report.residual_norm < 1e-10);
        let e = 3.0 * p;
        assert!((cfg.c + e * e / 3.0).norm() < 1e-12, "{}", cfg.c);
    }
}
