use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::curve::CurveFamily;
use crate::exact::ratfunc::substitute_into_poly;
use crate::exact::{MultiPoly, RatFunc, Var};
use crate::monodromy::ConstraintSet;

/// Shape of one piece of the integrability locus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    /// `c = e = g2 = 0`, present for every gap pair.
    CyclicPoint,
    /// Free operator parameters remain on every curve.
    OneParameterFamily,
    /// Finitely many operators on every curve.
    FiniteSet,
    /// Only finitely many curves (a fixed j-invariant) carry a solution.
    ExoticJ,
    /// The remaining conditions force the branch parameter to vanish.
    Inconsistent,
    /// The solver found no pivot; residual conditions are left as is.
    Unresolved,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::CyclicPoint => "cyclic-point",
            Classification::OneParameterFamily => "one-parameter-family",
            Classification::FiniteSet => "finite-set",
            Classification::ExoticJ => "exotic-j",
            Classification::Inconsistent => "inconsistent",
            Classification::Unresolved => "unresolved",
        })
    }
}

/// One branch of the solved locus.
#[derive(Clone, Debug, PartialEq)]
pub struct LocusBranch {
    /// Solved unknowns, as rational functions of the free ones.
    pub assignments: BTreeMap<Var, RatFunc>,
    /// `v^2 = s`, kept as a relation so that no square roots are needed.
    pub square_relation: Option<(Var, RatFunc)>,
    /// Conditions left over: the nonzero witness of an inconsistent branch,
    /// or the unsolved conditions of an unresolved one.
    pub residual_conditions: Vec<MultiPoly>,
    /// Polynomials assumed nonzero when dividing.
    pub assumptions: Vec<MultiPoly>,
    pub classification: Classification,
    pub curve: CurveFamily,
    /// Every source condition reduces to zero on the branch.
    pub verified: bool,
}

impl LocusBranch {
    /// Value of `v` on the branch (`None` when `v` is free or only fixed
    /// through the square relation).
    pub fn value(&self, v: Var) -> Option<&RatFunc> {
        self.assignments.get(&v)
    }

    pub fn is_consistent(&self) -> bool {
        !matches!(self.classification, Classification::Inconsistent | Classification::Unresolved)
    }

    /// Reduce a polynomial on the branch: substitute the assignments and the
    /// square relation. Zero iff the polynomial vanishes on the branch.
    pub fn reduce(&self, p: &MultiPoly) -> MultiPoly {
        reduce_with(p, &self.assignments, self.square_relation.as_ref())
    }

    /// Every condition of `cs` vanishes on the branch.
    pub fn satisfies(&self, cs: &ConstraintSet) -> bool {
        cs.polys().all(|p| self.reduce(&self.curve.specialize(p)).is_zero())
    }

    /// Text form: `c = ..., g2 = ...; c^2 = ...`.
    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = self.assignments.iter().map(|(v, x)| format!("{v} = {x}")).collect();
        if let Some((v, s)) = &self.square_relation {
            parts.push(format!("{v}^2 = {s}"));
        }
        if parts.is_empty() {
            parts.push("no constraint".into());
        }
        parts.join(", ")
    }
}

/// Substitute `v -> value` into `p`, returning a numerator (the result
/// times a nonzero power of the value's denominator).
fn subst_numer(p: &MultiPoly, v: Var, value: &RatFunc) -> MultiPoly {
    substitute_into_poly(p, v, value).0
}

fn reduce_with(p: &MultiPoly, assign: &BTreeMap<Var, RatFunc>, rel: Option<&(Var, RatFunc)>) -> MultiPoly {
    let poly_part: BTreeMap<Var, MultiPoly> =
        assign.iter().filter(|(_, x)| x.denom().is_one()).map(|(v, x)| (*v, x.numer().clone())).collect();
    let mut out = if poly_part.is_empty() { p.clone() } else { p.substitute_many(&poly_part) };
    for (v, x) in assign {
        if !x.denom().is_one() {
            out = subst_numer(&out, *v, x);
        }
    }
    if let Some((v, s)) = rel {
        out = reduce_square(&out, *v, s);
    }
    out
}

/// Reduce modulo `v^2 = N/D`: `sum_k p_k v^(k mod 2) N^(k/2) D^(K - k/2)`.
fn reduce_square(p: &MultiPoly, v: Var, s: &RatFunc) -> MultiPoly {
    let deg = p.degree_in(v) as usize;
    if deg < 2 {
        return p.clone();
    }
    let coeffs = p.coefficients_in(v);
    let top = deg / 2;
    let vv = MultiPoly::var(v);
    let mut out = MultiPoly::zero();
    for (k, pk) in coeffs.iter().enumerate() {
        if pk.is_zero() {
            continue;
        }
        let mut t = pk * &s.numer().pow((k / 2) as u32);
        t = &t * &s.denom().pow((top - k / 2) as u32);
        if k % 2 == 1 {
            t = &t * &vv;
        }
        out += &t;
    }
    out
}

#[derive(Clone, Debug)]
struct State {
    assign: BTreeMap<Var, RatFunc>,
    relation: Option<(Var, RatFunc)>,
    pending: Vec<MultiPoly>,
    nonzero: BTreeSet<Var>,
    assumptions: Vec<MultiPoly>,
}

impl State {
    fn set(&mut self, v: Var, value: RatFunc) {
        // keep every stored value in terms of free unknowns only
        for x in self.assign.values_mut() {
            *x = x.substitute(v, &value).expect("nonzero denominator on the branch");
        }
        if let Some((w, s)) = self.relation.take() {
            if w == v {
                // v was fixed only up to sign; its square must still match
                let lhs = &value * &value;
                let diff = &lhs - &s;
                self.pending.push(diff.numer().clone());
            } else {
                self.relation = Some((w, s.substitute(v, &value).expect("nonzero denominator on the branch")));
            }
        }
        self.assign.insert(v, value);
        if let Some((w, s)) = self.relation.take() {
            if s.is_zero() {
                self.set(w, s);
            } else {
                self.relation = Some((w, s));
            }
        }
    }

    fn reduce(&self, p: &MultiPoly) -> MultiPoly {
        reduce_with(p, &self.assign, self.relation.as_ref())
    }

    fn zero_branch(&self, v: Var) -> State {
        let mut s = self.clone();
        s.set(v, RatFunc::zero());
        s
    }
}

enum Step {
    Progress,
    Stuck,
    Inconsistent(MultiPoly),
}

fn weight_of(p: &MultiPoly) -> i64 {
    p.weights().into_iter().max().unwrap_or(0)
}

/// Solve the conditions of `cs`, restricted to `curve`, branch by
/// branch: lowest-weight condition first; a monomial factor splits off the
/// branches where one of its variables vanishes; the rest is solved for its
/// highest-weight unknown appearing linearly, or kept as a square relation
/// when it is a pure quadratic. Every consistent branch is checked by
/// back-substitution before it is returned; the cyclic point is always the
/// first branch.
pub fn triangular_solve(cs: &ConstraintSet, curve: CurveFamily) -> Vec<LocusBranch> {
    let unknowns = curve.unknowns();
    let source: Vec<MultiPoly> = cs.polys().map(|p| curve.specialize(p)).collect();
    let mut stack = vec![State {
        assign: BTreeMap::new(),
        relation: None,
        pending: source.clone(),
        nonzero: BTreeSet::new(),
        assumptions: Vec::new(),
    }];
    let mut done: Vec<LocusBranch> = Vec::new();

    while let Some(mut st) = stack.pop() {
        let outcome = loop {
            let mut pending: Vec<MultiPoly> =
                st.pending.iter().map(|p| st.reduce(p)).filter(|p| !p.is_zero()).map(|p| p.normalized()).collect();
            pending.sort_by_key(|p| (weight_of(p), p.clone()));
            pending.dedup();
            st.pending = pending;
            if st.pending.is_empty() {
                break None;
            }
            let mut step = Step::Stuck;
            for idx in 0..st.pending.len() {
                let p = st.pending[idx].clone();
                let mono = p.monomial_content();
                let rest = p.div_monomial(&mono).expect("monomial content divides");
                let fresh: Vec<Var> = mono.pairs().map(|(v, _)| v).filter(|v| !st.nonzero.contains(v)).collect();
                for &v in &fresh {
                    stack.push(st.zero_branch(v));
                    st.nonzero.insert(v);
                }
                if rest.is_constant() {
                    step = Step::Inconsistent(p);
                    break;
                }
                if let Some(s) = solve_one(&mut st, &rest, &unknowns, &mut stack) {
                    step = s;
                    break;
                }
                st.pending[idx] = rest;
            }
            match step {
                Step::Progress => continue,
                Step::Stuck => break Some(Err(st.pending.clone())),
                Step::Inconsistent(w) => break Some(Ok(w)),
            }
        };
        let (classification, residual) = match outcome {
            None => (classify(&st, curve), Vec::new()),
            Some(Ok(witness)) => (Classification::Inconsistent, vec![witness]),
            Some(Err(rest)) => (Classification::Unresolved, rest),
        };
        done.push(LocusBranch {
            assignments: st.assign,
            square_relation: st.relation,
            residual_conditions: residual,
            assumptions: st.assumptions,
            classification,
            curve,
            verified: false,
        });
    }

    let verify = |b: &LocusBranch| source.iter().all(|p| b.reduce(p).is_zero());
    let mut cyclic = cyclic_branch(curve);
    cyclic.verified = verify(&cyclic);
    let mut out = vec![cyclic];
    let mut seen = BTreeSet::new();
    // exploration is depth-first from a stack; restore discovery order
    for mut b in done.into_iter().rev() {
        if b.classification == Classification::CyclicPoint {
            continue;
        }
        // a contradiction reached without solving anything only says that a
        // variable assumed nonzero must vanish; its zero branch is elsewhere
        if b.classification == Classification::Inconsistent && b.assignments.values().all(RatFunc::is_zero) {
            continue;
        }
        b.verified = b.is_consistent() && verify(&b);
        if seen.insert((b.describe(), b.classification)) {
            out.push(b);
        }
    }
    out
}

/// Solve `rest = 0` for one unknown, or record a square relation.
fn solve_one(st: &mut State, rest: &MultiPoly, unknowns: &[Var], stack: &mut Vec<State>) -> Option<Step> {
    let present = rest.vars();
    for &v in unknowns.iter().filter(|v| present.contains(v)) {
        let deg = rest.degree_in(v);
        let co = rest.coefficients_in(v);
        if deg == 1 {
            let (b, a) = (&co[0], &co[1]);
            // a = 0 (and then b = 0) is a separate branch
            let amono = a.monomial_content();
            for (w, _) in amono.pairs() {
                if !st.nonzero.contains(&w) {
                    stack.push(st.zero_branch(w));
                    st.nonzero.insert(w);
                }
            }
            let acore = a.div_monomial(&amono).expect("monomial content divides");
            if !acore.is_constant() {
                st.assumptions.push(acore.normalized());
            }
            let value = RatFunc::new(-b.clone(), a.clone()).expect("nonzero pivot");
            st.set(v, value);
            return Some(Step::Progress);
        }
        if deg == 2 && co[1].is_zero() && st.relation.is_none() {
            let s = RatFunc::new(-co[0].clone(), co[2].clone()).expect("nonzero leading coefficient");
            if s.is_zero() {
                st.set(v, s);
                return Some(Step::Progress);
            }
            if !co[2].is_constant() {
                st.assumptions.push(co[2].normalized());
            }
            st.relation = Some((v, s));
            return Some(Step::Progress);
        }
    }
    None
}

fn is_zero_on(st: &State, v: Var) -> bool {
    st.assign.get(&v).is_some_and(RatFunc::is_zero)
}

fn classify(st: &State, curve: CurveFamily) -> Classification {
    let g2_zero = match curve {
        CurveFamily::Generic => is_zero_on(st, Var::G2),
        CurveFamily::Cuspidal => true,
        CurveFamily::Nodal => is_zero_on(st, Var::T),
    };
    if g2_zero && is_zero_on(st, Var::C) && is_zero_on(st, Var::E) {
        return Classification::CyclicPoint;
    }
    let determined = |v: &Var| st.assign.contains_key(v) || st.relation.as_ref().is_some_and(|r| r.0 == *v);
    let free = curve.unknowns().iter().filter(|v| !determined(v)).count() as i64;
    match free - curve.moduli() as i64 {
        d if d >= 1 => Classification::OneParameterFamily,
        0 => Classification::FiniteSet,
        _ => Classification::ExoticJ,
    }
}

/// `c = e = 0` and `g2 = 0` (for the nodal family: `t = 0`).
pub fn cyclic_branch(curve: CurveFamily) -> LocusBranch {
    let mut assignments = BTreeMap::new();
    assignments.insert(Var::C, RatFunc::zero());
    assignments.insert(Var::E, RatFunc::zero());
    match curve {
        CurveFamily::Generic => {
            assignments.insert(Var::G2, RatFunc::zero());
        }
        CurveFamily::Nodal => {
            assignments.insert(Var::T, RatFunc::zero());
        }
        CurveFamily::Cuspidal => {}
    }
    LocusBranch {
        assignments,
        square_relation: None,
        residual_conditions: Vec::new(),
        assumptions: Vec::new(),
        classification: Classification::CyclicPoint,
        curve,
        verified: false,
    }
}
