//! One function per subcommand. Each returns the text to emit and whether a
//! verification inside the command failed.

use fingap_core::cm::residuals::{
    calogero_potential, cm3_f, cm3_h1, cryst3_grad_h, cryst3_residuals, finite_gap_residuals, inozemtsev_gradient,
    CMConfig2, CMConfig3, Cryst3Config,
};
use fingap_core::cm::{Cm3Problem, Cryst3Problem, FiniteGapProblem, Kernel, Lattice, NewtonOptions};
use fingap_core::exact::rational::parse_rational;
use fingap_core::exact::{MultiPoly, Rational, Var};
use fingap_core::locus3::grid::{grid_cell, scan_grid, to_csv, to_json};
use fingap_core::locus3::reconstruct::samples_for;
use fingap_core::locus3::reference::closed_form;
use fingap_core::locus3::{branch_value, constraints_for, reconstruct_in_q, CurveFamily, Quantity};
use fingap_core::monodromy::{trivial_monodromy_constraints, Mode};
use fingap_core::operator::global::check_gaps;
use fingap_core::operator::indicial::{index_data, indicial_from_b};
use fingap_core::operator::{
    find_commuting, homogeneous_integrable, indicial_polynomial, localize, parse_operator, third_order_from_gaps,
    IndexData,
};
use fingap_core::oracle::{
    default_lambdas, integrability_verdict_with, monodromy_matrix, OperatorDescriptor, VerdictOptions,
    DEFAULT_INTEGRATION_TOL,
};
use fingap_core::verify;
use num_complex::Complex64 as C64;
use serde::Serialize;
use serde_json::json;

use crate::args::*;
use crate::output::{json, read_json_arg, round_sig};
use crate::CliError;

/// What a command produced.
pub struct Output {
    pub text: String,
    /// A check performed by the command did not hold (exit code 1).
    pub mismatch: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, mismatch: false }
    }
}

type Res = Result<Output, CliError>;

fn rationals(xs: &[String]) -> Result<Vec<Rational>, CliError> {
    xs.iter().map(|s| parse_rational(s).map_err(CliError::from)).collect()
}

fn texts(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(Rational::to_string).collect()
}

fn lattice(tau: C64) -> Result<Lattice, CliError> {
    Ok(Lattice::new(tau)?)
}

fn kernel(kind: KernelKind, tau: C64) -> Result<Kernel, CliError> {
    Ok(match kind {
        KernelKind::Elliptic => Kernel::Elliptic(lattice(tau)?),
        KernelKind::Trigonometric => Kernel::Trigonometric,
        KernelKind::Rational => Kernel::Rational,
    })
}

fn gap_pair(q: Option<i64>, r: Option<i64>) -> Result<Option<(i64, i64)>, CliError> {
    match (q, r) {
        (Some(q), Some(r)) => Ok(Some((q, r))),
        (None, None) => Ok(None),
        _ => Err(CliError::Usage("--q and --r go together".into())),
    }
}

fn index_json(idx: &IndexData, n: usize, polynomial: &MultiPoly) -> serde_json::Value {
    let (integrable, reason) = homogeneous_integrable(idx, n);
    json!({
        "order": n,
        "polynomial": polynomial.to_string(),
        "indices": texts(&idx.indices),
        "unresolved": if idx.is_resolved() { Vec::new() } else { texts(&idx.unresolved) },
        "gaps": texts(&idx.gaps()),
        "homogeneous_integrable": integrable,
        "reason": reason,
    })
}

pub fn indicial(a: &IndicialArgs) -> Res {
    if let Some(spec) = &a.operator {
        let op = parse_operator(spec)?;
        let (p, idx) = indicial_polynomial(&localize(&op, 4))?;
        return Ok(Output::ok(json(&index_json(&idx, op.order(), &p))?));
    }
    if let Some((q, r)) = gap_pair(a.q, a.r)? {
        check_gaps(q, r)?;
        let (p, idx) = indicial_polynomial(&localize(&third_order_from_gaps(q, r)?, 4))?;
        return Ok(Output::ok(json(&index_json(&idx, 3, &p))?));
    }
    let n = a.n.ok_or_else(|| CliError::Usage("give --n with --b2.., or --operator, or --q/--r".into()))?;
    if n < 2 {
        return Err(CliError::Usage("--n must be at least 2".into()));
    }
    let given = [&a.b2, &a.b3, &a.b4, &a.b5, &a.b6];
    if given.iter().skip(n - 1).any(|b| b.is_some()) {
        return Err(CliError::Usage(format!("an order-{n} operator has b2..b{n} only")));
    }
    let mut b = Vec::new();
    for x in given.iter().take(n - 1) {
        b.push(match x {
            Some(s) => parse_rational(s)?,
            None => Rational::from_integer(0.into()),
        });
    }
    let p = indicial_from_b(n, &b);
    let idx = index_data(&p);
    Ok(Output::ok(json(&index_json(&idx, n, &MultiPoly::from_univariate(Var::M, &p)))?))
}

pub fn homog_check(a: &HomogArgs) -> Res {
    let indices = match (&a.indices, gap_pair(a.q, a.r)?) {
        (Some(list), None) => rationals(list)?,
        (None, Some((q, r))) => fingap_core::operator::gap_indices(q, r).to_vec(),
        _ => return Err(CliError::Usage("give either --indices or --q/--r".into())),
    };
    let n = a.n.unwrap_or(indices.len());
    let idx = IndexData::from_indices(indices);
    let (integrable, reason) = homogeneous_integrable(&idx, n);
    Ok(Output::ok(json(&json!({
        "indices": texts(&idx.indices),
        "n": n,
        "integrable": integrable,
        "reason": reason,
    }))?))
}

pub fn constraints(a: &ConstraintsArgs) -> Res {
    let cs = match a.mode {
        ModeArg::Middle => constraints_for(a.q, a.r)?,
        ModeArg::Full => {
            let op = localize(&third_order_from_gaps(a.q, a.r)?, a.q + a.r + 8);
            match trivial_monodromy_constraints(&op, Mode::Full)? {
                fingap_core::monodromy::MonodromyOutcome::Constraints(mut cs) => {
                    cs.q = Some(a.q);
                    cs.r = Some(a.r);
                    cs
                }
                fingap_core::monodromy::MonodromyOutcome::Unsatisfiable { reason } => {
                    return Ok(Output::ok(json(&json!({"n": 3, "q": a.q, "r": a.r, "unsatisfiable": reason}))?));
                }
            }
        }
    };
    Ok(Output::ok(json(&cs)?))
}

/// Admissible q from r up to `q_max` (default r + 9).
fn q_values(r: i64, q_max: Option<i64>) -> Vec<i64> {
    (r..=q_max.unwrap_or(r + 9)).filter(|&q| check_gaps(q, r).is_ok()).collect()
}

pub fn locus(a: &LocusArgs) -> Res {
    let curve: CurveFamily = a.curve.parse()?;
    let cells = match a.q {
        Some(q) => {
            if a.r_max.is_some() {
                return Err(CliError::Usage("--q fixes a single cell; drop --r-max".into()));
            }
            vec![grid_cell(q, a.r, curve)?]
        }
        None => {
            let r_max = a.r_max.unwrap_or(a.r);
            if r_max < a.r || a.r < 1 {
                return Err(CliError::Usage("need 1 <= --r <= --r-max".into()));
            }
            // cells are solved in parallel and come back in (r, q) order
            let cells = scan_grid(a.r..=r_max, a.q_span, curve)?;
            cells.into_iter().filter(|c| a.q_max.is_none_or(|m| c.q <= m)).collect()
        }
    };
    // every consistent branch must back-substitute, and the cyclic point must be there
    let mismatch = cells.iter().any(|c| !c.cyclic_verified())
        || cells.iter().flat_map(|c| &c.rows).any(|row| {
            !row.verified
                && !matches!(
                    row.classification,
                    fingap_core::locus3::Classification::Inconsistent | fingap_core::locus3::Classification::Unresolved
                )
        });
    let text = match a.format {
        Format::Csv => to_csv(&cells),
        Format::Json => to_json(&cells) + "\n",
    };
    Ok(Output { text, mismatch })
}

pub fn reconstruct(a: &ReconstructArgs) -> Res {
    let quantity: Quantity = a.quantity.parse()?;
    let samples = match &a.samples {
        Some(s) => s.clone(),
        None => samples_for(a.r, quantity),
    };
    for &q in &samples {
        check_gaps(q, a.r)?;
    }
    let f = reconstruct_in_q(a.r, quantity, &samples)?;
    let published = closed_form(a.r, quantity);
    let agrees = published.as_ref().map(|p| *p == f);
    Ok(Output {
        text: json(&json!({
            "r": a.r,
            "quantity": quantity.to_string(),
            "samples": samples,
            "function": f.to_string(),
            "published": published.map(|p| p.to_string()),
            "agrees": agrees,
        }))?,
        mismatch: agrees == Some(false),
    })
}

#[derive(Serialize)]
struct JRow {
    q: i64,
    j: String,
    published: String,
    matches: String,
}

pub fn jtable(a: &JTableArgs) -> Res {
    check_gaps(a.r, a.r)?;
    let published = closed_form(a.r, Quantity::J);
    let mut rows = Vec::new();
    let mut mismatch = false;
    for q in q_values(a.r, a.q_max) {
        let j = branch_value(q, a.r, Quantity::J).ok();
        let p = published.as_ref().map(|f| {
            f.substitute(Var::Q, &fingap_core::exact::RatFunc::constant(Rational::from_integer(q.into())))
                .ok()
                .and_then(|x| x.constant_value())
        });
        let matches = match (&j, &p) {
            (Some(j), Some(Some(p))) => {
                mismatch |= j != p;
                (j == p).to_string()
            }
            (None, Some(Some(_))) => {
                mismatch = true;
                "false".into()
            }
            _ => "-".into(),
        };
        rows.push(JRow {
            q,
            j: j.map_or_else(|| "-".into(), |x| x.to_string()),
            published: p.flatten().map_or_else(|| "-".into(), |x| x.to_string()),
            matches,
        });
    }
    let text = match a.format {
        Format::Csv => {
            let mut out = String::from("q,j,published,matches\n");
            for r in &rows {
                out.push_str(&format!("{},{},{},{}\n", r.q, r.j, r.published, r.matches));
            }
            out
        }
        Format::Json => json(&rows)?,
    };
    Ok(Output { text, mismatch })
}

pub fn commute(a: &CommuteArgs) -> Res {
    let l = parse_operator(&a.operator)?;
    let m = find_commuting(&l, a.order, a.pole_bound)?;
    Ok(Output::ok(json(&json!({
        "operator": l.to_string(),
        "order": a.order,
        "commuting": m.map(|m| m.to_string()),
    }))?))
}

fn max_norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn cm2_residuals(a: &Cm2Args) -> Res {
    let cfg: CMConfig2 = serde_json::from_str(&read_json_arg(&a.config)?)?;
    let kernel = kernel(a.kernel, a.tau)?;
    if a.solve {
        let pb = FiniteGapProblem { base: cfg, kernel: kernel.clone() };
        let (cfg, report) = pb.solve(&NewtonOptions::default())?;
        let residuals = finite_gap_residuals(&cfg, &kernel)?;
        return Ok(Output::ok(json(&json!({
            "config": cfg,
            "residuals": residuals,
            "max_residual": max_norm(&residuals),
            "report": report,
        }))?));
    }
    let residuals = finite_gap_residuals(&cfg, &kernel)?;
    let potential = calogero_potential(&cfg.points, &kernel)?;
    Ok(Output::ok(json(&json!({
        "residuals": residuals,
        "max_residual": max_norm(&residuals),
        "calogero_potential": potential,
    }))?))
}

pub fn cm3_crit(a: &Cm3Args) -> Res {
    let cfg: CMConfig3 = serde_json::from_str(&read_json_arg(&a.config)?)?;
    let kernel = kernel(a.kernel, a.tau)?;
    let vary = |name: &str| a.vary.iter().any(|v| v == name);
    for v in &a.vary {
        if !["points", "momenta", "c"].contains(&v.as_str()) {
            return Err(CliError::Usage(format!("--vary takes points, momenta, c; got '{v}'")));
        }
    }
    let pb = Cm3Problem {
        base: cfg.clone(),
        kernel: kernel.clone(),
        vary_points: vary("points"),
        vary_momenta: vary("momenta"),
        vary_c: vary("c"),
    };
    let (cfg, report) = if pb.unknowns().is_empty() {
        (cfg, None)
    } else {
        let (cfg, rep) = pb.solve(&NewtonOptions::default())?;
        (cfg, Some(rep))
    };
    let residuals = fingap_core::cm::residuals::cm3_residuals(&cfg, &kernel)?;
    Ok(Output::ok(json(&json!({
        "config": cfg,
        "residuals": residuals,
        "max_residual": max_norm(&residuals),
        "F": cm3_f(&cfg, &kernel)?,
        "H1": cm3_h1(&cfg),
        "report": report,
    }))?))
}

pub fn cryst3_crit(a: &Cryst3Args) -> Res {
    let cfg: Cryst3Config = serde_json::from_str(&read_json_arg(&a.config)?)?;
    let lat = Lattice::hexagonal();
    let (cfg, report) = if a.solve {
        let (cfg, rep) = Cryst3Problem { base: cfg, lattice: lat.clone() }.solve(&NewtonOptions::default())?;
        (cfg, Some(rep))
    } else {
        (cfg, None)
    };
    let residuals = cryst3_residuals(&cfg, &lat)?;
    let params = cfg.hamiltonian_params();
    let grad = cryst3_grad_h(&cfg.points, &cfg.momenta, &params, &lat)?;
    Ok(Output::ok(json(&json!({
        "config": cfg,
        "hamiltonian_params": params,
        "residuals": residuals,
        "max_residual": max_norm(&residuals),
        "grad_h": grad,
        "max_grad_h": max_norm(&grad),
        "report": report,
    }))?))
}

pub fn inozemtsev_grad(a: &InozemtsevArgs) -> Res {
    let points: Vec<C64> = serde_json::from_str(&read_json_arg(&a.points)?)?;
    let m: [f64; 4] =
        a.m.clone().try_into().map_err(|_| CliError::Usage("--m takes exactly four values m0,m1,m2,m3".into()))?;
    let lat = lattice(a.tau)?;
    let grad = inozemtsev_gradient(&points, &m, &lat)?;
    Ok(Output::ok(json(&json!({
        "points": points,
        "m": m,
        "gradient": grad,
        "max_gradient": max_norm(&grad),
    }))?))
}

pub fn monodromy(a: &MonodromyArgs) -> Res {
    let op = parse_operator(&a.operator)?;
    let mut desc = OperatorDescriptor::new(op, lattice(a.tau)?);
    for (name, value) in &a.set {
        let v = Var::from_name(name).ok_or_else(|| CliError::Usage(format!("unknown variable '{name}'")))?;
        desc = desc.with(v, *value);
    }
    let lambdas = if a.lambda.is_empty() { default_lambdas() } else { a.lambda.clone() };
    let opts = VerdictOptions {
        center: a.center,
        radius_fraction: a.radius_fraction,
        integration_tol: a.integration_tol.unwrap_or(DEFAULT_INTEGRATION_TOL),
    };
    if lambdas.len() >= 3 {
        let report = integrability_verdict_with(&desc, &lambdas, a.tol, &opts)?;
        return Ok(Output::ok(json(&report)?));
    }
    // too few samples for a verdict: report the matrices only
    let radius = opts.radius_fraction * desc.lattice.shortest_period_norm();
    let coeffs = desc.evaluator(opts.center, radius)?;
    let reports = lambdas
        .iter()
        .map(|&l| monodromy_matrix(&*coeffs, desc.order(), opts.center, radius, l, opts.integration_tol))
        .collect::<fingap_core::Result<Vec<_>>>()?;
    Ok(Output::ok(json(&json!({ "verdict": null, "reports": reports }))?))
}

pub fn verify_paper(a: &VerifyArgs, seed: u64) -> Res {
    let ids: Vec<u8> =
        if a.criteria.is_empty() { verify::CRITERIA.iter().map(|c| c.0).collect() } else { a.criteria.clone() };
    let mut results = Vec::new();
    for id in ids {
        if !verify::CRITERIA.iter().any(|c| c.0 == id) {
            return Err(CliError::Usage(format!("no criterion {id}; they are numbered 1 to 11")));
        }
        let res = verify::run_criterion(id, seed);
        eprintln!("{res}");
        results.push(res);
    }
    let mismatch = results.iter().any(|r| !r.passed);
    let text = match a.format {
        Format::Json => {
            // timings go to stderr only, so the output is reproducible
            let rows: Vec<_> = results
                .iter()
                .map(|r| json!({"id": r.id, "name": r.name, "passed": r.passed, "detail": r.detail}))
                .collect();
            json(&rows)?
        }
        Format::Csv => {
            let mut out = String::new();
            for r in &results {
                let tag = if r.passed { "PASS" } else { "FAIL" };
                out.push_str(&format!("[{tag}] criterion {:>2} {}: {}\n", r.id, r.name, r.detail));
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            out.push_str(&format!("{} of {} criteria passed\n", results.len() - failed, results.len()));
            out
        }
    };
    Ok(Output { text, mismatch })
}

/// Seconds rounded like every other number.
pub fn seconds(d: std::time::Duration) -> f64 {
    round_sig(d.as_secs_f64())
}
