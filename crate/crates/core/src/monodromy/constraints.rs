use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use super::frobenius::frobenius_solve;
use crate::error::{Error, Result};
use crate::exact::rational::Rational;
use crate::exact::{Monomial, MultiPoly, RatFunc, Var};
use crate::operator::indicial::{homogeneous_integrable, indicial_polynomial};
use crate::operator::LocalOp;

/// Which Frobenius solutions are checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Every index; obstructions must vanish for every value of the free
    /// parameters introduced at earlier resonances.
    Full,
    /// Third order only: the middle solution, whose single resonance sits
    /// at the top index.
    MiddleOnly,
}

/// One polynomial condition, tagged with the power of lambda it multiplies.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Condition {
    pub lambda_degree: u32,
    pub poly: MultiPoly,
}

impl Serialize for Condition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Condition", 2)?;
        st.serialize_field("lambda_degree", &self.lambda_degree)?;
        st.serialize_field("poly", &self.poly.to_string())?;
        st.end()
    }
}

/// Where a group of conditions came from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Source {
    #[serde(serialize_with = "serialize_rational")]
    pub index: Rational,
    pub offset: usize,
}

fn serialize_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Conditions for trivial local monodromy. Each stored polynomial is
/// normalized (content 1, positive leading coefficient) and nonzero, so an
/// empty set means "no constraint".
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstraintSet {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<i64>,
    pub conditions: Vec<Condition>,
    pub sources: Vec<Source>,
}

impl ConstraintSet {
    pub fn new(n: usize) -> Self {
        ConstraintSet { n, q: None, r: None, conditions: Vec::new(), sources: Vec::new() }
    }

    /// Add a condition (dropped if zero).
    pub fn push(&mut self, lambda_degree: u32, poly: &MultiPoly) {
        if poly.is_zero() {
            return;
        }
        self.conditions.push(Condition { lambda_degree, poly: poly.normalized() });
    }

    /// Sort by lambda-degree descending, then polynomial; drop duplicates.
    pub fn finish(mut self) -> Self {
        self.conditions.sort_by(|a, b| b.lambda_degree.cmp(&a.lambda_degree).then_with(|| a.poly.cmp(&b.poly)));
        self.conditions.dedup();
        self
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.is_empty()
    }

    pub fn len(&self) -> usize {
        self.conditions.len()
    }

    pub fn polys(&self) -> impl Iterator<Item = &MultiPoly> {
        self.conditions.iter().map(|c| &c.poly)
    }

    /// Conditions at a given lambda-degree.
    pub fn at_degree(&self, d: u32) -> Vec<&MultiPoly> {
        self.conditions.iter().filter(|c| c.lambda_degree == d).map(|c| &c.poly).collect()
    }

    pub fn max_lambda_degree(&self) -> Option<u32> {
        self.conditions.iter().map(|c| c.lambda_degree).max()
    }

    /// Values of the conditions after substitution; only nonzero ones are
    /// returned.
    pub fn residuals(&self, values: &BTreeMap<Var, RatFunc>) -> Result<Vec<RatFunc>> {
        let mut out = Vec::new();
        for p in self.polys() {
            let v = RatFunc::from_poly(p.clone()).substitute_many(values)?;
            if !v.is_zero() {
                out.push(v);
            }
        }
        Ok(out)
    }

    /// True when every condition vanishes identically after substitution.
    pub fn annihilated_by(&self, values: &BTreeMap<Var, RatFunc>) -> Result<bool> {
        Ok(self.residuals(values)?.is_empty())
    }

    /// Condition polynomials as functions of the listed assignments only;
    /// the remaining variables stay symbolic.
    pub fn specialize(&self, values: &BTreeMap<Var, MultiPoly>) -> ConstraintSet {
        let mut out = ConstraintSet { conditions: Vec::new(), ..self.clone() };
        for c in &self.conditions {
            out.push(c.lambda_degree, &c.poly.substitute_many(values));
        }
        out.finish()
    }

    /// Every condition is weighted-homogeneous with weight `total - 3d`.
    pub fn weights_consistent(&self, total: i64) -> bool {
        self.conditions.iter().all(|c| c.poly.homogeneous_weight() == Some(total - 3 * c.lambda_degree as i64))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("constraint sets always serialize")
    }
}

/// Result of the trivial-monodromy test at one point.
#[derive(Clone, Debug, PartialEq)]
pub enum MonodromyOutcome {
    /// Indices are not integers distinct modulo the order: monodromy is
    /// nontrivial whatever the parameters.
    Unsatisfiable {
        reason: String,
    },
    Constraints(ConstraintSet),
}

impl MonodromyOutcome {
    pub fn constraints(&self) -> Option<&ConstraintSet> {
        match self {
            MonodromyOutcome::Constraints(c) => Some(c),
            MonodromyOutcome::Unsatisfiable { .. } => None,
        }
    }

    /// For operators with numeric data: monodromy is trivial.
    pub fn is_trivial(&self) -> bool {
        self.constraints().is_some_and(ConstraintSet::is_empty)
    }
}

/// Coefficients of `p` as a polynomial in `vars`, keyed by the monomial in
/// those variables.
pub fn split_coefficients(p: &MultiPoly, in_vars: impl Fn(Var) -> bool) -> BTreeMap<Monomial, MultiPoly> {
    let mut out: BTreeMap<Monomial, MultiPoly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let key = Monomial::from_pairs(m.pairs().filter(|(v, _)| in_vars(*v)));
        let rest = Monomial::from_pairs(m.pairs().filter(|(v, _)| !in_vars(*v)));
        out.entry(key).or_insert_with(MultiPoly::zero).add_term(rest, c.clone());
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Conditions on the operator's parameters for `(L - lambda) psi = 0` to
/// have only single-valued solutions near 0 for every lambda.
pub fn trivial_monodromy_constraints(op: &LocalOp, mode: Mode) -> Result<MonodromyOutcome> {
    let n = op.order();
    let (_, idx) = indicial_polynomial(op)?;
    let (ok, reason) = homogeneous_integrable(&idx, n);
    if !ok {
        return Ok(MonodromyOutcome::Unsatisfiable { reason: reason.to_string() });
    }
    let m = &idx.indices;
    let mut cs = ConstraintSet::new(n);
    if n == 3 {
        let gaps = idx.gaps();
        cs.q = Some(gaps[0].to_integer().try_into().expect("small gap"));
        cs.r = Some(gaps[1].to_integer().try_into().expect("small gap"));
    }
    let top = &m[n - 1];
    let starts: Vec<&Rational> = match mode {
        Mode::Full => m[..n - 1].iter().collect(),
        Mode::MiddleOnly => {
            if n != 3 {
                return Err(Error::InvalidInput("middle-only mode needs a third-order operator".into()));
            }
            vec![&m[1]]
        }
    };
    for start in starts {
        let depth: usize = (top - start).to_integer().try_into().expect("small resonance offset");
        let sol = frobenius_solve(op, start, depth, 1)?;
        for ob in &sol.obstructions {
            cs.sources.push(Source { index: start.clone(), offset: ob.offset });
            let split = split_coefficients(&ob.poly, |v| v == Var::LAMBDA || v.is_aux());
            for (key, coeff) in split {
                cs.push(key.exponent(Var::LAMBDA), &coeff);
            }
        }
    }
    Ok(MonodromyOutcome::Constraints(cs.finish()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;
    use crate::operator::{localize, parse_operator, third_order_from_gaps};

    fn middle(q: i64, r: i64) -> ConstraintSet {
        let l = localize(&third_order_from_gaps(q, r).unwrap(), q + r + 8);
        trivial_monodromy_constraints(&l, Mode::MiddleOnly).unwrap().constraints().unwrap().clone()
    }

    #[test]
    fn gaps_two_two() {
        let cs = middle(2, 2);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs.conditions[0].poly, MultiPoly::parse("3*c + e^2").unwrap());
        assert_eq!(
            cs.to_json(),
            r#"{"n":3,"q":2,"r":2,"conditions":[{"lambda_degree":0,"poly":"3*c + e^2"}],"sources":[{"index":"1","offset":2}]}"#
        );
    }

    #[test]
    fn gaps_four_four() {
        let cs = middle(4, 4);
        assert_eq!(cs.at_degree(1), vec![&MultiPoly::var(Var::E)]);
        // modulo the leading condition e = 0, the rest is c^2 = 12 g2
        let e0: BTreeMap<Var, MultiPoly> = [(Var::E, MultiPoly::zero())].into();
        let rest = cs.specialize(&e0);
        assert_eq!(rest.polys().cloned().collect::<Vec<_>>(), vec![MultiPoly::parse("-12*g2 + c^2").unwrap()]);
        assert!(cs.weights_consistent(4));
    }

    #[test]
    fn lame_is_unconstrained() {
        let l = localize(&parse_operator("D^2 - 2*P").unwrap(), 8);
        let out = trivial_monodromy_constraints(&l, Mode::Full).unwrap();
        assert!(out.is_trivial());
        let bad = localize(&parse_operator("D^2 - 5/2*P").unwrap(), 8);
        assert!(matches!(
            trivial_monodromy_constraints(&bad, Mode::Full).unwrap(),
            MonodromyOutcome::Unsatisfiable { .. }
        ));
    }

    #[test]
    fn lambda_degree_grows_with_r() {
        for (q, r) in [(1, 1), (2, 2), (4, 4), (5, 5), (7, 7)] {
            let cs = middle(q, r);
            assert_eq!(cs.max_lambda_degree(), Some((r / 3) as u32), "r = {r}");
            assert!(cs.weights_consistent(r));
        }
    }

    #[test]
    fn cyclic_point_solves_everything() {
        let vals: BTreeMap<Var, RatFunc> =
            [(Var::C, RatFunc::zero()), (Var::E, RatFunc::zero()), (Var::G2, RatFunc::zero())].into();
        for (q, r) in [(4, 1), (5, 2), (7, 4), (8, 5)] {
            assert!(middle(q, r).annihilated_by(&vals).unwrap());
        }
        let _ = int(0);
    }

    #[test]
    fn full_mode_at_two_two() {
        let l = localize(&third_order_from_gaps(2, 2).unwrap(), 12);
        let full = trivial_monodromy_constraints(&l, Mode::Full).unwrap();
        let cs = full.constraints().unwrap();
        // on the locus c = -e^2/3 every full condition vanishes
        let e = RatFunc::var(Var::E);
        let c = &(&e * &e) * &RatFunc::constant(crate::exact::rational::rat(-1, 3));
        let vals: BTreeMap<Var, RatFunc> = [(Var::C, c)].into();
        assert!(cs.annihilated_by(&vals).unwrap());
        assert!(!cs.is_empty());
    }
}
