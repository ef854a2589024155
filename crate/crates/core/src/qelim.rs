//! Quantifier elimination in the style of Reddy and Loveland: Cooper's
//! method with the elimination set taken from the lower bounds on `x`,
//! quantifiers pushed over disjunctions before each step.

use std::collections::{BTreeMap, HashSet};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{BoundCheck, BoundValue, DEFAULT_CAP_BITS};
use crate::formula::{
    cmp, div, metrics, Atom, Formula, LinearTerm, MetricsReport, Rel, TermSets, VarId,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QeError {
    #[error("formula is not quantifier-free")]
    NotQuantifierFree,
    #[error("no value for variable `{0}`")]
    MissingVariable(String),
}

/// Literal of the internal negation normal form. `Lt` is the shape every
/// comparison mentioning the eliminated variable is rewritten to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Lit {
    /// `t < c`
    Lt(LinearTerm, BigInt),
    /// `d | t + c`
    Div(BigInt, LinearTerm, BigInt),
    /// `¬ d | t + c`
    NotDiv(BigInt, LinearTerm, BigInt),
    /// A comparison kept as written.
    Cmp(LinearTerm, Rel, BigInt),
}

impl Lit {
    fn term(&self) -> &LinearTerm {
        match self {
            Lit::Lt(t, _) | Lit::Div(_, t, _) | Lit::NotDiv(_, t, _) | Lit::Cmp(t, _, _) => t,
        }
    }

    fn contains(&self, x: &VarId) -> bool {
        self.term().contains(x)
    }

    fn negate(&self) -> Nnf {
        match self {
            Lit::Lt(t, c) => Nnf::lit(Lit::Lt(t.neg(), 1 - c)),
            Lit::Div(d, t, c) => Nnf::lit(Lit::NotDiv(d.clone(), t.clone(), c.clone())),
            Lit::NotDiv(d, t, c) => Nnf::lit(Lit::Div(d.clone(), t.clone(), c.clone())),
            Lit::Cmp(t, r, c) => Nnf::lit(Lit::Cmp(t.clone(), r.negate(), c.clone())),
        }
    }

    fn to_formula(&self) -> Formula {
        let flip = |t: &LinearTerm| t.iter().next().is_some_and(|(_, k)| k.is_negative());
        match self {
            Lit::Lt(t, c) if flip(t) => cmp(t.neg(), Rel::Gt, -c),
            Lit::Lt(t, c) => cmp(t.clone(), Rel::Lt, c.clone()),
            Lit::Div(d, t, c) if flip(t) => div(d.clone(), t.neg(), (-c).mod_floor(d)),
            Lit::Div(d, t, c) => div(d.clone(), t.clone(), c.clone()),
            Lit::NotDiv(d, t, c) => {
                Formula::not(Lit::Div(d.clone(), t.clone(), c.clone()).to_formula())
            }
            Lit::Cmp(t, r, c) => cmp(t.clone(), *r, c.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Nnf {
    True,
    False,
    Lit(Lit),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

impl Nnf {
    fn from_bool(b: bool) -> Nnf {
        if b {
            Nnf::True
        } else {
            Nnf::False
        }
    }

    /// Normalizing literal constructor: constants fold, `t < c` and
    /// divisibility atoms are divided by the gcd of their coefficients.
    fn lit(l: Lit) -> Nnf {
        match l {
            Lit::Lt(t, c) => {
                if t.is_zero() {
                    return Nnf::from_bool(c.is_positive());
                }
                let g = t.gcd();
                if g.is_one() {
                    Nnf::Lit(Lit::Lt(t, c))
                } else {
                    let t = LinearTerm::from_pairs(t.iter().map(|(v, k)| (v.clone(), k / &g)));
                    Nnf::Lit(Lit::Lt(t, c.div_ceil(&g)))
                }
            }
            Lit::Div(d, t, c) => {
                let c = c.mod_floor(&d);
                let g = t.gcd().gcd(&d);
                if !c.is_multiple_of(&g) {
                    return Nnf::False;
                }
                let (d, c) = (&d / &g, &c / &g);
                if d.is_one() {
                    return Nnf::True;
                }
                if t.is_zero() {
                    return Nnf::from_bool(c.is_zero());
                }
                let t = LinearTerm::from_pairs(t.iter().map(|(v, k)| (v.clone(), k / &g)));
                Nnf::Lit(Lit::Div(d, t, c))
            }
            Lit::NotDiv(d, t, c) => match Nnf::lit(Lit::Div(d, t, c)) {
                Nnf::Lit(Lit::Div(d, t, c)) => Nnf::Lit(Lit::NotDiv(d, t, c)),
                Nnf::True => Nnf::False,
                _ => Nnf::True,
            },
            Lit::Cmp(t, r, c) => {
                if t.is_zero() {
                    Nnf::from_bool(r.holds(&BigInt::zero(), &c))
                } else {
                    Nnf::Lit(Lit::Cmp(t, r, c))
                }
            }
        }
    }

    fn junction(items: Vec<Nnf>, conj: bool) -> Nnf {
        let (unit, zero) = if conj {
            (Nnf::True, Nnf::False)
        } else {
            (Nnf::False, Nnf::True)
        };
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        let mut push = |f: Nnf, out: &mut Vec<Nnf>| {
            if seen.insert(f.clone()) {
                out.push(f);
            }
        };
        for item in items {
            match item {
                f if f == unit => {}
                f if f == zero => return zero,
                Nnf::And(children) if conj => children.into_iter().for_each(|c| push(c, &mut out)),
                Nnf::Or(children) if !conj => children.into_iter().for_each(|c| push(c, &mut out)),
                f => push(f, &mut out),
            }
        }
        out.sort();
        match out.len() {
            0 => unit,
            1 => out.pop().expect("one element"),
            _ if conj => Nnf::And(out),
            _ => Nnf::Or(out),
        }
    }

    fn and(items: Vec<Nnf>) -> Nnf {
        Nnf::junction(items, true)
    }

    fn or(items: Vec<Nnf>) -> Nnf {
        Nnf::junction(items, false)
    }

    fn negate(&self) -> Nnf {
        match self {
            Nnf::True => Nnf::False,
            Nnf::False => Nnf::True,
            Nnf::Lit(l) => l.negate(),
            Nnf::And(c) => Nnf::or(c.iter().map(Nnf::negate).collect()),
            Nnf::Or(c) => Nnf::and(c.iter().map(Nnf::negate).collect()),
        }
    }

    fn map_lits(&self, f: &mut impl FnMut(&Lit) -> Nnf) -> Nnf {
        match self {
            Nnf::True | Nnf::False => self.clone(),
            Nnf::Lit(l) => f(l),
            Nnf::And(c) => Nnf::and(c.iter().map(|g| g.map_lits(f)).collect()),
            Nnf::Or(c) => Nnf::or(c.iter().map(|g| g.map_lits(f)).collect()),
        }
    }

    fn for_each_lit<'a>(&'a self, f: &mut impl FnMut(&'a Lit)) {
        match self {
            Nnf::True | Nnf::False => {}
            Nnf::Lit(l) => f(l),
            Nnf::And(c) | Nnf::Or(c) => c.iter().for_each(|g| g.for_each_lit(f)),
        }
    }

    fn contains(&self, x: &VarId) -> bool {
        let mut found = false;
        self.for_each_lit(&mut |l| found |= l.contains(x));
        found
    }

    /// Converts a quantifier-free formula, eliminating `→` and `↔`.
    fn from_formula(f: &Formula) -> Result<Nnf, QeError> {
        Ok(match f {
            Formula::True => Nnf::True,
            Formula::False => Nnf::False,
            Formula::Atom(Atom::Cmp {
                term,
                rel,
                constant,
            }) => Nnf::lit(Lit::Cmp(term.clone(), *rel, constant.clone())),
            Formula::Atom(Atom::Div {
                divisor,
                term,
                constant,
            }) => Nnf::lit(Lit::Div(divisor.clone(), term.clone(), constant.clone())),
            Formula::Not(a) => Nnf::from_formula(a)?.negate(),
            Formula::And(a, b) => Nnf::and(vec![Nnf::from_formula(a)?, Nnf::from_formula(b)?]),
            Formula::Or(a, b) => Nnf::or(vec![Nnf::from_formula(a)?, Nnf::from_formula(b)?]),
            Formula::Implies(a, b) => {
                Nnf::or(vec![Nnf::from_formula(a)?.negate(), Nnf::from_formula(b)?])
            }
            Formula::Iff(a, b) => {
                let (a, b) = (Nnf::from_formula(a)?, Nnf::from_formula(b)?);
                Nnf::and(vec![
                    Nnf::or(vec![a.negate(), b.clone()]),
                    Nnf::or(vec![a, b.negate()]),
                ])
            }
            Formula::Exists(..) | Formula::Forall(..) => return Err(QeError::NotQuantifierFree),
        })
    }

    fn to_formula(&self) -> Formula {
        match self {
            Nnf::True => Formula::True,
            Nnf::False => Formula::False,
            Nnf::Lit(l) => l.to_formula(),
            Nnf::And(c) => Formula::conj(c.iter().map(Nnf::to_formula)),
            Nnf::Or(c) => Formula::disj(c.iter().map(Nnf::to_formula)),
        }
    }
}

/// Rewrites every literal mentioning `x` into `t < c`, `d | t + c`, or a
/// disjunction of those.
fn prepare(f: &Nnf, x: &VarId) -> Nnf {
    f.map_lits(&mut |l| {
        if !l.contains(x) {
            return Nnf::Lit(l.clone());
        }
        match l {
            Lit::Lt(..) | Lit::Div(..) => Nnf::Lit(l.clone()),
            Lit::NotDiv(d, t, c) => {
                let mut alternatives = Vec::new();
                let mut i = BigInt::one();
                while &i < d {
                    alternatives.push(Nnf::lit(Lit::Div(d.clone(), t.clone(), c + &i)));
                    i += 1;
                }
                Nnf::or(alternatives)
            }
            Lit::Cmp(t, rel, c) => {
                let lt = |t: LinearTerm, c: BigInt| Nnf::lit(Lit::Lt(t, c));
                match rel {
                    Rel::Lt => lt(t.clone(), c.clone()),
                    Rel::Le => lt(t.clone(), c + 1),
                    Rel::Gt => lt(t.neg(), -c),
                    Rel::Ge => lt(t.neg(), 1 - c),
                    Rel::Eq => Nnf::and(vec![lt(t.clone(), c + 1), lt(t.neg(), 1 - c)]),
                    Rel::Ne => Nnf::or(vec![lt(t.clone(), c.clone()), lt(t.neg(), -c)]),
                }
            }
        }
    })
}

/// A lower bound `t + c < k·x` on `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct LowerBound {
    k: BigInt,
    term: LinearTerm,
    constant: BigInt,
}

fn lower_bounds(f: &Nnf, x: &VarId) -> Vec<LowerBound> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    f.for_each_lit(&mut |l| {
        if let Lit::Lt(t, c) = l {
            let a = t.coeff(x);
            if a.is_negative() {
                let b = LowerBound {
                    k: -a,
                    term: t.without(x),
                    constant: -c,
                };
                if seen.insert(b.clone()) {
                    out.push(b);
                }
            }
        }
    });
    out
}

fn lcm_nnf(f: &Nnf, x: &VarId) -> BigInt {
    let mut l = BigInt::one();
    f.for_each_lit(&mut |lit| match lit {
        Lit::Div(d, t, _) if t.contains(x) => l = l.lcm(d),
        Lit::Lt(t, _) if t.coeff(x).is_negative() => l = l.lcm(&-t.coeff(x)),
        _ => {}
    });
    l
}

fn minus_infinity(f: &Nnf, x: &VarId) -> Nnf {
    f.map_lits(&mut |l| match l {
        Lit::Lt(t, _) if t.contains(x) => Nnf::from_bool(t.coeff(x).is_positive()),
        _ => Nnf::Lit(l.clone()),
    })
}

/// `l[s/k·x]` for `s = term + constant`, assuming `k | s`.
fn substitute_lit(l: &Lit, x: &VarId, k: &BigInt, term: &LinearTerm, constant: &BigInt) -> Nnf {
    if !l.contains(x) {
        return Nnf::Lit(l.clone());
    }
    let t = l.term();
    let a = t.coeff(x);
    let rest = t.without(x).scale(k);
    let new_term = term.scale(&a).add(&rest);
    match l {
        Lit::Lt(_, c) => Nnf::lit(Lit::Lt(new_term, k * c - &a * constant)),
        Lit::Div(d, _, c) => Nnf::lit(Lit::Div(k * d, new_term, &a * constant + k * c)),
        Lit::NotDiv(d, _, c) => Nnf::lit(Lit::NotDiv(k * d, new_term, &a * constant + k * c)),
        Lit::Cmp(_, r, c) => Nnf::lit(Lit::Cmp(new_term, *r, k * c - &a * constant)),
    }
}

/// Counters for one eliminated variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EliminationStep {
    pub variable: String,
    /// Largest `lcm(x, φ)` over the disjuncts eliminated separately.
    #[serde(serialize_with = "crate::util::ser_display")]
    pub lcm: BigInt,
    /// Largest substitution range `k·D` used for a lower bound.
    #[serde(serialize_with = "crate::util::ser_display")]
    pub range: BigInt,
    /// Largest number of lower bounds over those disjuncts.
    pub b_set_size: usize,
    /// Disjuncts generated in total.
    pub disjuncts: usize,
    /// Number of separately eliminated disjuncts.
    pub branches: usize,
    pub before: MetricsReport,
    pub after: MetricsReport,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct QeTrace {
    pub steps: Vec<EliminationStep>,
}

#[derive(Default)]
struct StepCounters {
    lcm: BigInt,
    range: BigInt,
    b_set_size: usize,
    disjuncts: usize,
    branches: usize,
}

/// lcm of the divisors of divisibility atoms mentioning `x`; a period of
/// every such atom in `x`.
fn period(f: &Nnf, x: &VarId) -> BigInt {
    let mut l = BigInt::one();
    f.for_each_lit(&mut |lit| {
        if let Lit::Div(d, t, _) = lit {
            if t.contains(x) {
                l = l.lcm(d);
            }
        }
    });
    l
}

/// `∃x.φ` for `φ` already prepared for `x` and mentioning `x`.
///
/// With `D` the period of the divisibility atoms, a least solution above
/// the lower bound `b < k·x` satisfies `b < k·x ≤ b + k·D`, so `j` runs to
/// `k·D` for that bound. `lcm(x, φ)` alone can be too small when `k` and
/// `D` share a factor.
fn cooper(f: &Nnf, x: &VarId, counters: &mut StepCounters) -> Nnf {
    let d = period(f, x);
    let bounds = lower_bounds(f, x);
    counters.lcm = counters.lcm.clone().max(lcm_nnf(f, x));
    counters.b_set_size = counters.b_set_size.max(bounds.len());
    counters.branches += 1;

    let minus_inf = minus_infinity(f, x);
    let mut disjuncts = Vec::new();
    let mut j = BigInt::one();
    while j <= d {
        let jt = LinearTerm::zero();
        disjuncts.push(minus_inf.map_lits(&mut |l| substitute_lit(l, x, &BigInt::one(), &jt, &j)));
        if !minus_inf.contains(x) {
            break;
        }
        j += 1;
    }
    for b in &bounds {
        let range = &b.k * &d;
        counters.range = counters.range.clone().max(range.clone());
        let mut j = BigInt::one();
        while j <= range {
            let c = &b.constant + &j;
            disjuncts.push(Nnf::and(vec![
                Nnf::lit(Lit::Div(b.k.clone(), b.term.clone(), c.clone())),
                f.map_lits(&mut |l| substitute_lit(l, x, &b.k, &b.term, &c)),
            ]));
            j += 1;
        }
    }
    counters.disjuncts += disjuncts.len();
    Nnf::or(disjuncts)
}

fn eliminate_nnf(f: &Nnf, x: &VarId, counters: &mut StepCounters) -> Nnf {
    match prepare(f, x) {
        Nnf::Or(children) => Nnf::or(
            children
                .iter()
                .map(|c| eliminate_prepared(c, x, counters))
                .collect(),
        ),
        g => eliminate_prepared(&g, x, counters),
    }
}

fn eliminate_prepared(f: &Nnf, x: &VarId, counters: &mut StepCounters) -> Nnf {
    if !f.contains(x) {
        return f.clone();
    }
    match f {
        Nnf::And(children) => {
            let (bound, mut free): (Vec<Nnf>, Vec<Nnf>) =
                children.iter().cloned().partition(|c| c.contains(x));
            free.push(cooper(&Nnf::and(bound), x, counters));
            Nnf::and(free)
        }
        _ => cooper(f, x, counters),
    }
}

/// Negation normal form of a quantifier-free formula in which every atom
/// mentioning `x` is `t < c` or `d | t + c`.
pub fn step1_rewrite(phi: &Formula, x: &VarId) -> Result<Formula, QeError> {
    Ok(prepare(&Nnf::from_formula(phi)?, x).to_formula())
}

/// lcm of the divisors of divisibility atoms mentioning `x` and the
/// coefficients of `x` in its lower bounds; 1 when there are none.
pub fn lcm_of(x: &VarId, phi: &Formula) -> Result<BigInt, QeError> {
    Ok(lcm_nnf(&prepare(&Nnf::from_formula(phi)?, x), x))
}

/// The formula with upper bounds on `x` replaced by true and lower bounds
/// by false.
pub fn psi_minus_inf(phi: &Formula, x: &VarId) -> Result<Formula, QeError> {
    Ok(minus_infinity(&prepare(&Nnf::from_formula(phi)?, x), x).to_formula())
}

/// `α[s/k·x]` with `s = term + constant` and `k > 0`.
pub fn substitute(alpha: &Atom, x: &VarId, k: &BigInt, term: &LinearTerm, constant: &BigInt) -> Formula {
    let lit = match alpha {
        Atom::Cmp {
            term: t,
            rel,
            constant: c,
        } => Lit::Cmp(t.clone(), *rel, c.clone()),
        Atom::Div {
            divisor,
            term: t,
            constant: c,
        } => Lit::Div(divisor.clone(), t.clone(), c.clone()),
    };
    match substitute_lit(&lit, x, k, term, constant) {
        Nnf::Lit(Lit::Cmp(t, r, c)) => cmp(t, r, c),
        other => other.to_formula(),
    }
}

/// A quantifier-free formula equivalent to `∃x.φ`.
pub fn eliminate_exists(x: &VarId, phi: &Formula) -> Result<Formula, QeError> {
    let mut counters = StepCounters::default();
    Ok(eliminate_nnf(&Nnf::from_formula(phi)?, x, &mut counters).to_formula())
}

fn eliminate_rec(phi: &Formula, trace: &mut QeTrace) -> Nnf {
    let step = |x: &VarId, body: Nnf, negated: bool, trace: &mut QeTrace| {
        let body = if negated { body.negate() } else { body };
        let mut counters = StepCounters {
            lcm: BigInt::one(),
            ..StepCounters::default()
        };
        let before = metrics(&Formula::exists(x.clone(), body.to_formula()));
        let out = eliminate_nnf(&body, x, &mut counters);
        trace.steps.push(EliminationStep {
            variable: x.name.clone(),
            lcm: counters.lcm,
            range: counters.range,
            b_set_size: counters.b_set_size,
            disjuncts: counters.disjuncts,
            branches: counters.branches,
            before,
            after: metrics(&out.to_formula()),
        });
        if negated {
            out.negate()
        } else {
            out
        }
    };
    match phi {
        Formula::Exists(x, body) => {
            let body = eliminate_rec(body, trace);
            step(x, body, false, trace)
        }
        Formula::Forall(x, body) => {
            let body = eliminate_rec(body, trace);
            step(x, body, true, trace)
        }
        Formula::Not(a) => eliminate_rec(a, trace).negate(),
        Formula::And(a, b) => Nnf::and(vec![eliminate_rec(a, trace), eliminate_rec(b, trace)]),
        Formula::Or(a, b) => Nnf::or(vec![eliminate_rec(a, trace), eliminate_rec(b, trace)]),
        Formula::Implies(a, b) => {
            Nnf::or(vec![eliminate_rec(a, trace).negate(), eliminate_rec(b, trace)])
        }
        Formula::Iff(a, b) => {
            let (a, b) = (eliminate_rec(a, trace), eliminate_rec(b, trace));
            Nnf::and(vec![
                Nnf::or(vec![a.negate(), b.clone()]),
                Nnf::or(vec![a, b.negate()]),
            ])
        }
        atom => Nnf::from_formula(atom).expect("atoms are quantifier-free"),
    }
}

/// An equivalent quantifier-free formula. Quantifiers are eliminated
/// innermost first; `∀x` is treated as `¬∃x¬`. Quantifier-free input is
/// returned unchanged.
pub fn eliminate_all(phi: &Formula) -> Formula {
    eliminate_all_traced(phi).0
}

pub fn eliminate_all_traced(phi: &Formula) -> (Formula, QeTrace) {
    let mut trace = QeTrace::default();
    if phi.is_quantifier_free() {
        return (phi.clone(), trace);
    }
    let out = eliminate_rec(phi, &mut trace).to_formula();
    (out, trace)
}

/// Truth value of a quantifier-free formula under `assignment`.
pub fn eval_qf(phi: &Formula, assignment: &BTreeMap<VarId, BigInt>) -> Result<bool, QeError> {
    if !phi.is_quantifier_free() {
        return Err(QeError::NotQuantifierFree);
    }
    eval_bounded(phi, assignment, 0)
}

/// Truth value with quantified variables ranging over `[-w, w]` only.
/// Exact for quantifier-free formulas.
pub fn eval_bounded(
    phi: &Formula,
    assignment: &BTreeMap<VarId, BigInt>,
    w: i64,
) -> Result<bool, QeError> {
    let mut env = assignment.clone();
    eval_in(phi, &mut env, w)
}

fn eval_in(phi: &Formula, env: &mut BTreeMap<VarId, BigInt>, w: i64) -> Result<bool, QeError> {
    Ok(match phi {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => {
            let value = a
                .term()
                .eval(|v| env.get(v).cloned())
                .map_err(|v| QeError::MissingVariable(v.name))?;
            a.holds_at(&value)
        }
        Formula::Not(a) => !eval_in(a, env, w)?,
        Formula::And(a, b) => eval_in(a, env, w)? && eval_in(b, env, w)?,
        Formula::Or(a, b) => eval_in(a, env, w)? || eval_in(b, env, w)?,
        Formula::Implies(a, b) => !eval_in(a, env, w)? || eval_in(b, env, w)?,
        Formula::Iff(a, b) => eval_in(a, env, w)? == eval_in(b, env, w)?,
        Formula::Exists(x, body) | Formula::Forall(x, body) => {
            let exists = matches!(phi, Formula::Exists(..));
            let saved = env.get(x).cloned();
            let mut result = !exists;
            for v in -w..=w {
                env.insert(x.clone(), BigInt::from(v));
                if eval_in(body, env, w)? == exists {
                    result = exists;
                    break;
                }
            }
            match saved {
                Some(s) => env.insert(x.clone(), s),
                None => env.remove(x),
            };
            result
        }
    })
}

/// `true` when `phi` is a quantifier prefix over a quantifier-free matrix.
pub fn is_prenex(phi: &Formula) -> bool {
    match phi {
        Formula::Exists(_, body) | Formula::Forall(_, body) => is_prenex(body),
        other => other.is_quantifier_free(),
    }
}

/// Measured growth of `ψ = eliminate_all(φ)` against the bounds on the
/// result of quantifier elimination.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub checks: Vec<BoundCheck>,
}

impl BoundsReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn big(v: impl Into<BigUint>) -> BoundValue {
    BoundValue::Exact(v.into())
}

/// Checks `ψ` against the general bounds in terms of the length `n` of
/// `φ`, and for prenex `φ` also against the bounds in terms of `|T(φ)|`,
/// `|D(φ)|` and the longest quantifier block.
pub fn check_bounds(phi: &Formula, psi: &Formula) -> BoundsReport {
    let cap = DEFAULT_CAP_BITS;
    let mp = metrics(phi);
    let mq = metrics(psi);
    let one = big(1u32);
    let a = big((mp.max_coef.clone().max(mp.max_div.clone()).max(BigInt::from(2)) + 1u32).magnitude().clone());
    let b = big((mp.max_const.clone().max(BigInt::from(2)) + 1u32).magnitude().clone());
    let qbl1 = big(mp.qbl + 1);
    let pow2 = |k: u32| big(2u32).pow(&big(k), cap);
    let coef_bound = a.pow(&pow2(2 * mp.qn), cap);

    let measured = |v: usize| BigUint::from(v);
    let mut checks = Vec::new();

    let n = big(mp.length.max(2));
    let t_exp = qbl1.pow(&big(mp.qa), cap);
    let d_exp = one.add(&qbl1.pow(&big(mp.qa + 2), cap), cap);
    let n_d = n.pow(&d_exp, cap);
    checks.push(BoundCheck::new("|T(psi)| <= n^((qbl+1)^qa)", measured(mq.t_set_size), n.pow(&t_exp, cap), false));
    checks.push(BoundCheck::new("|D(psi)| <= n^(1+(qbl+1)^(qa+2))", measured(mq.d_set_size), n_d.clone(), false));
    checks.push(BoundCheck::new("max_coef(psi) < a^(2^(2qn))", mq.max_coef.magnitude().clone(), coef_bound.clone(), true));
    checks.push(BoundCheck::new("max_div(psi) < a^(2^(2qn))", mq.max_div.magnitude().clone(), coef_bound.clone(), true));
    let const_bound = b.mul(&a.pow(&pow2(3 * mp.qn).mul(&n_d, cap), cap), cap);
    checks.push(BoundCheck::new(
        "max_const(psi) < b*a^(2^(3qn)*n^(1+(qbl+1)^(qa+2)))",
        mq.max_const.magnitude().clone(),
        const_bound,
        true,
    ));

    if is_prenex(phi) && mp.qn > 0 {
        let sets = TermSets::of(phi);
        let t = big(sets.terms.len().max(2));
        let d = big(sets.divs.len().max(1));
        let dt = d.mul(&t.pow(&qbl1.pow(&big(mp.qa + 2), cap), cap), cap);
        checks.push(BoundCheck::new(
            "prenex: |T(psi)| <= T^((l+1)^qa)",
            measured(mq.t_set_size),
            t.pow(&t_exp, cap),
            false,
        ));
        checks.push(BoundCheck::new(
            "prenex: |D(psi)| <= D*T^((l+1)^(qa+2))",
            measured(mq.d_set_size),
            dt.clone(),
            false,
        ));
        let const_bound = b.mul(&a.pow(&pow2(3 * mp.qn).mul(&dt, cap), cap), cap);
        checks.push(BoundCheck::new(
            "prenex: max_const(psi) < b*a^(2^(3qn)*D*T^((l+1)^(qa+2)))",
            mq.max_const.magnitude().clone(),
            const_bound,
            true,
        ));
    }
    BoundsReport { checks }
}
