//! Presburger formulas over the extended language (constants, negation,
//! divisibility predicates), their normalized atoms and structural
//! operations.

mod metrics;
mod parse;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use metrics::{metrics, metrics_with, LengthMeasure, MetricsReport, TermSets};
pub use parse::{parse, ParseError, RawTerm};

/// A variable together with its position in the global variable order.
///
/// Ordering is by `index` first, so sorted collections of variables follow
/// the order of first occurrence in the source text.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VarId {
    pub index: usize,
    pub name: String,
}

impl VarId {
    pub fn new(name: impl Into<String>, index: usize) -> Self {
        VarId {
            index,
            name: name.into(),
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Homogeneous linear term `k_1*x_1 + ... + k_r*x_r` with nonzero
/// coefficients. The empty term is `0`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearTerm {
    coeffs: BTreeMap<VarId, BigInt>,
}

impl LinearTerm {
    pub fn zero() -> Self {
        LinearTerm::default()
    }

    pub fn var(v: VarId) -> Self {
        Self::from_pairs([(v, BigInt::one())])
    }

    /// Sums up the given summands; repeated variables are collected and
    /// zero coefficients dropped.
    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (VarId, BigInt)>,
    {
        let mut coeffs: BTreeMap<VarId, BigInt> = BTreeMap::new();
        for (v, k) in pairs {
            *coeffs.entry(v).or_default() += k;
        }
        coeffs.retain(|_, k| !k.is_zero());
        LinearTerm { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, v: &VarId) -> BigInt {
        self.coeffs.get(v).cloned().unwrap_or_default()
    }

    pub fn contains(&self, v: &VarId) -> bool {
        self.coeffs.contains_key(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarId, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn vars(&self) -> impl Iterator<Item = &VarId> {
        self.coeffs.keys()
    }

    pub fn num_vars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn add(&self, other: &LinearTerm) -> LinearTerm {
        Self::from_pairs(
            self.coeffs
                .iter()
                .chain(other.coeffs.iter())
                .map(|(v, k)| (v.clone(), k.clone())),
        )
    }

    pub fn scale(&self, factor: &BigInt) -> LinearTerm {
        Self::from_pairs(self.coeffs.iter().map(|(v, k)| (v.clone(), k * factor)))
    }

    pub fn neg(&self) -> LinearTerm {
        self.scale(&-BigInt::one())
    }

    /// The term with `v` removed.
    pub fn without(&self, v: &VarId) -> LinearTerm {
        let mut coeffs = self.coeffs.clone();
        coeffs.remove(v);
        LinearTerm { coeffs }
    }

    pub fn rename(&self, from: &VarId, to: &VarId) -> LinearTerm {
        Self::from_pairs(self.coeffs.iter().map(|(v, k)| {
            let v = if v == from { to.clone() } else { v.clone() };
            (v, k.clone())
        }))
    }

    /// `‖t‖⁻`: sum of the absolute values of the negative coefficients.
    pub fn norm_neg(&self) -> BigInt {
        self.coeffs
            .values()
            .filter(|k| k.is_negative())
            .map(|k| -k)
            .sum()
    }

    /// `‖t‖⁺`: sum of the positive coefficients.
    pub fn norm_pos(&self) -> BigInt {
        self.coeffs.values().filter(|k| k.is_positive()).sum()
    }

    /// gcd of the absolute coefficients; 1 for the zero term.
    pub fn gcd(&self) -> BigInt {
        use num_integer::Integer;
        let g = self
            .coeffs
            .values()
            .fold(BigInt::zero(), |acc, k| acc.gcd(k));
        if g.is_zero() {
            BigInt::one()
        } else {
            g
        }
    }

    /// Evaluates the term; variables missing from `value` are an error
    /// reported as `Err(var)`.
    pub fn eval<F>(&self, mut value: F) -> Result<BigInt, VarId>
    where
        F: FnMut(&VarId) -> Option<BigInt>,
    {
        let mut acc = BigInt::zero();
        for (v, k) in &self.coeffs {
            let x = value(v).ok_or_else(|| v.clone())?;
            acc += k * x;
        }
        Ok(acc)
    }

    /// Evaluates the term at a small-integer vector given in variable order.
    pub fn eval_digits(&self, digits: &[i64]) -> BigInt {
        debug_assert_eq!(digits.len(), self.coeffs.len());
        self.coeffs
            .values()
            .zip(digits)
            .map(|(k, &d)| k * d)
            .sum()
    }
}

impl fmt::Display for LinearTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (v, k)) in self.coeffs.iter().enumerate() {
            let abs = k.abs();
            if i == 0 {
                if k.is_negative() {
                    f.write_str("-")?;
                }
            } else if k.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if abs.is_one() {
                write!(f, "{v}")?;
            } else {
                write!(f, "{abs}*{v}")?;
            }
        }
        Ok(())
    }
}

/// Comparison relations of (in)equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rel {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Rel {
    pub fn holds(self, lhs: &BigInt, rhs: &BigInt) -> bool {
        match self {
            Rel::Eq => lhs == rhs,
            Rel::Ne => lhs != rhs,
            Rel::Lt => lhs < rhs,
            Rel::Le => lhs <= rhs,
            Rel::Gt => lhs > rhs,
            Rel::Ge => lhs >= rhs,
        }
    }

    /// The relation obtained by swapping both sides.
    pub fn flip(self) -> Rel {
        match self {
            Rel::Lt => Rel::Gt,
            Rel::Le => Rel::Ge,
            Rel::Gt => Rel::Lt,
            Rel::Ge => Rel::Le,
            r => r,
        }
    }

    /// The logical negation of the relation.
    pub fn negate(self) -> Rel {
        match self {
            Rel::Eq => Rel::Ne,
            Rel::Ne => Rel::Eq,
            Rel::Lt => Rel::Ge,
            Rel::Le => Rel::Gt,
            Rel::Gt => Rel::Le,
            Rel::Ge => Rel::Lt,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Eq => "=",
            Rel::Ne => "!=",
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
        }
    }
}

/// Normalized atomic formula: `t ⋈ c` or `d | t + c`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Cmp {
        term: LinearTerm,
        rel: Rel,
        constant: BigInt,
    },
    Div {
        divisor: BigInt,
        term: LinearTerm,
        constant: BigInt,
    },
}

impl Atom {
    pub fn term(&self) -> &LinearTerm {
        match self {
            Atom::Cmp { term, .. } | Atom::Div { term, .. } => term,
        }
    }

    pub fn contains(&self, v: &VarId) -> bool {
        self.term().contains(v)
    }

    /// Truth value of the atom once its term has been evaluated to `value`.
    pub fn holds_at(&self, value: &BigInt) -> bool {
        match self {
            Atom::Cmp { rel, constant, .. } => rel.holds(value, constant),
            Atom::Div {
                divisor, constant, ..
            } => {
                use num_integer::Integer;
                (value + constant).is_multiple_of(divisor)
            }
        }
    }

    /// The same atom over a different term.
    pub fn with_term(&self, term: LinearTerm) -> Atom {
        match self {
            Atom::Cmp { rel, constant, .. } => Atom::Cmp {
                term,
                rel: *rel,
                constant: constant.clone(),
            },
            Atom::Div {
                divisor, constant, ..
            } => Atom::Div {
                divisor: divisor.clone(),
                term,
                constant: constant.clone(),
            },
        }
    }

    fn rename(&self, from: &VarId, to: &VarId) -> Atom {
        self.with_term(self.term().rename(from, to))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Cmp {
                term,
                rel,
                constant,
            } => write!(f, "{term} {} {constant}", rel.symbol()),
            Atom::Div {
                divisor,
                term,
                constant,
            } => {
                write!(f, "{divisor} divides {term}")?;
                if constant.is_positive() {
                    write!(f, " + {constant}")
                } else if constant.is_negative() {
                    write!(f, " - {}", constant.abs())
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Builds the normalized comparison atom for `lhs ⋈ rhs`, folding it to a
/// literal when no variable survives.
pub fn normalize_atom(lhs: &RawTerm, rel: Rel, rhs: &RawTerm) -> Formula {
    let term = lhs.term.add(&rhs.term.neg());
    let constant = &rhs.constant - &lhs.constant;
    cmp(term, rel, constant)
}

/// Builds the normalized divisibility atom `d | raw`.
pub fn normalize_div(divisor: BigInt, raw: &RawTerm) -> Formula {
    div(divisor, raw.term.clone(), raw.constant.clone())
}

/// `t ⋈ c` with constant folding.
pub fn cmp(term: LinearTerm, rel: Rel, constant: BigInt) -> Formula {
    if term.is_zero() {
        Formula::from_bool(rel.holds(&BigInt::zero(), &constant))
    } else {
        Formula::Atom(Atom::Cmp {
            term,
            rel,
            constant,
        })
    }
}

/// `d | t + c` with constant folding.
pub fn div(divisor: BigInt, term: LinearTerm, constant: BigInt) -> Formula {
    use num_integer::Integer;
    if term.is_zero() {
        Formula::from_bool(constant.is_multiple_of(&divisor))
    } else {
        Formula::Atom(Atom::Div {
            divisor,
            term,
            constant,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    pub fn dual(self) -> Quantifier {
        match self {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Atom),
    True,
    False,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(VarId, Box<Formula>),
    Forall(VarId, Box<Formula>),
}

impl Formula {
    pub fn from_bool(b: bool) -> Formula {
        if b {
            Formula::True
        } else {
            Formula::False
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn exists(v: VarId, f: Formula) -> Formula {
        Formula::Exists(v, Box::new(f))
    }

    pub fn forall(v: VarId, f: Formula) -> Formula {
        Formula::Forall(v, Box::new(f))
    }

    /// Left-nested conjunction; `True` for an empty iterator.
    pub fn conj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `False` for an empty iterator.
    pub fn disj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::True | Formula::False => true,
            Formula::Not(a) => a.is_quantifier_free(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    /// Calls `f` on every atom occurrence.
    pub fn for_each_atom<'a>(&'a self, f: &mut impl FnMut(&'a Atom)) {
        match self {
            Formula::Atom(a) => f(a),
            Formula::True | Formula::False => {}
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => a.for_each_atom(f),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.for_each_atom(f);
                b.for_each_atom(f);
            }
        }
    }

    /// Calls `f` on every subformula, including `self`, in pre-order.
    pub fn for_each_subformula<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::Atom(_) | Formula::True | Formula::False => {}
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => {
                a.for_each_subformula(f)
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.for_each_subformula(f);
                b.for_each_subformula(f);
            }
        }
    }

    /// Distinct atoms in their normalized forms.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.for_each_atom(&mut |a| {
            out.insert(a.clone());
        });
        out
    }

    /// All variables occurring anywhere (free, bound or binder-only).
    pub fn all_vars(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        self.for_each_subformula(&mut |g| match g {
            Formula::Atom(a) => out.extend(a.term().vars().cloned()),
            Formula::Exists(v, _) | Formula::Forall(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }

    /// Variables bound by some quantifier.
    pub fn bound_vars(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        self.for_each_subformula(&mut |g| {
            if let Formula::Exists(v, _) | Formula::Forall(v, _) = g {
                out.insert(v.clone());
            }
        });
        out
    }

    /// Free variables in the global variable order.
    pub fn free_vars(&self) -> BTreeSet<VarId> {
        fn go(f: &Formula, bound: &mut Vec<VarId>, out: &mut BTreeSet<VarId>) {
            match f {
                Formula::Atom(a) => {
                    for v in a.term().vars() {
                        if !bound.contains(v) {
                            out.insert(v.clone());
                        }
                    }
                }
                Formula::True | Formula::False => {}
                Formula::Not(a) => go(a, bound, out),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Implies(a, b)
                | Formula::Iff(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::Exists(v, a) | Formula::Forall(v, a) => {
                    bound.push(v.clone());
                    go(a, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Renames bound variables so that binders are pairwise distinct and
    /// disjoint from the free variables. Fresh variables are appended to the
    /// global order and named by priming the original name.
    pub fn rename_apart(&self) -> Formula {
        let all = self.all_vars();
        let mut used_names: HashSet<String> = all.iter().map(|v| v.name.clone()).collect();
        let mut next_index = all.iter().map(|v| v.index + 1).max().unwrap_or(0);
        let mut seen: HashSet<VarId> = self.free_vars().into_iter().collect();
        let mut renamer = Renamer {
            used_names: &mut used_names,
            next_index: &mut next_index,
            seen: &mut seen,
        };
        renamer.go(self, &[])
    }

    /// Substitutes `to` for free occurrences of `from`.
    fn rename_free(&self, from: &VarId, to: &VarId) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(a.rename(from, to)),
            Formula::True | Formula::False => self.clone(),
            Formula::Not(a) => Formula::not(a.rename_free(from, to)),
            Formula::And(a, b) => Formula::and(a.rename_free(from, to), b.rename_free(from, to)),
            Formula::Or(a, b) => Formula::or(a.rename_free(from, to), b.rename_free(from, to)),
            Formula::Implies(a, b) => {
                Formula::implies(a.rename_free(from, to), b.rename_free(from, to))
            }
            Formula::Iff(a, b) => Formula::iff(a.rename_free(from, to), b.rename_free(from, to)),
            Formula::Exists(v, _) | Formula::Forall(v, _) if v == from => self.clone(),
            Formula::Exists(v, a) => Formula::exists(v.clone(), a.rename_free(from, to)),
            Formula::Forall(v, a) => Formula::forall(v.clone(), a.rename_free(from, to)),
        }
    }
}

struct Renamer<'a> {
    used_names: &'a mut HashSet<String>,
    next_index: &'a mut usize,
    seen: &'a mut HashSet<VarId>,
}

impl Renamer<'_> {
    fn fresh(&mut self, base: &VarId) -> VarId {
        let mut name = format!("{}'", base.name);
        while self.used_names.contains(&name) {
            name.push('\'');
        }
        self.used_names.insert(name.clone());
        let v = VarId::new(name, *self.next_index);
        *self.next_index += 1;
        v
    }

    fn go(&mut self, f: &Formula, scope: &[(VarId, VarId)]) -> Formula {
        let lookup = |v: &VarId| {
            scope
                .iter()
                .rev()
                .find(|(from, _)| from == v)
                .map(|(_, to)| to.clone())
        };
        match f {
            Formula::Atom(a) => {
                let term = LinearTerm::from_pairs(
                    a.term()
                        .iter()
                        .map(|(v, k)| (lookup(v).unwrap_or_else(|| v.clone()), k.clone())),
                );
                Formula::Atom(a.with_term(term))
            }
            Formula::True | Formula::False => f.clone(),
            Formula::Not(a) => Formula::not(self.go(a, scope)),
            Formula::And(a, b) => Formula::and(self.go(a, scope), self.go(b, scope)),
            Formula::Or(a, b) => Formula::or(self.go(a, scope), self.go(b, scope)),
            Formula::Implies(a, b) => Formula::implies(self.go(a, scope), self.go(b, scope)),
            Formula::Iff(a, b) => Formula::iff(self.go(a, scope), self.go(b, scope)),
            Formula::Exists(v, a) | Formula::Forall(v, a) => {
                let target = if self.seen.contains(v) {
                    self.fresh(v)
                } else {
                    v.clone()
                };
                self.seen.insert(target.clone());
                let mut inner = scope.to_vec();
                inner.push((v.clone(), target.clone()));
                let body = self.go(a, &inner);
                match f {
                    Formula::Exists(..) => Formula::exists(target, body),
                    _ => Formula::forall(target, body),
                }
            }
        }
    }
}

impl Formula {
    /// Replaces the free variable `from` by `to` (used by the engine when
    /// aligning tracks); binders named `from` shadow the substitution.
    pub fn substitute_var(&self, from: &VarId, to: &VarId) -> Formula {
        self.rename_free(from, to)
    }
}

// Precedence levels for printing: quantifier < iff < implies < or < and < unary.
fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Exists(..) | Formula::Forall(..) => 0,
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        _ => 5,
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, g: &Formula, min_prec: u8) -> fmt::Result {
    if prec(g) < min_prec {
        write!(f, "({g})")
    } else {
        write!(f, "{g}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Not(a) => {
                f.write_str("!")?;
                write_operand(f, a, 5)
            }
            Formula::And(a, b) => {
                write_operand(f, a, 4)?;
                f.write_str(" & ")?;
                write_operand(f, b, 5)
            }
            Formula::Or(a, b) => {
                write_operand(f, a, 3)?;
                f.write_str(" | ")?;
                write_operand(f, b, 4)
            }
            Formula::Implies(a, b) => {
                write_operand(f, a, 3)?;
                f.write_str(" -> ")?;
                write_operand(f, b, 2)
            }
            Formula::Iff(a, b) => {
                write_operand(f, a, 1)?;
                f.write_str(" <-> ")?;
                write_operand(f, b, 2)
            }
            Formula::Exists(v, a) => write!(f, "E {v}. {a}"),
            Formula::Forall(v, a) => write!(f, "A {v}. {a}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(name: &str, i: usize) -> VarId {
        VarId::new(name, i)
    }

    fn int(i: i64) -> BigInt {
        BigInt::from(i)
    }

    fn raw(pairs: &[(&VarId, i64)], c: i64) -> RawTerm {
        RawTerm {
            term: LinearTerm::from_pairs(pairs.iter().map(|(v, k)| ((*v).clone(), int(*k)))),
            constant: int(c),
        }
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let x = v("x", 0);
        let t = LinearTerm::from_pairs([(x.clone(), int(2)), (x.clone(), int(-2))]);
        assert!(t.is_zero());
        assert_eq!(t.to_string(), "0");
    }

    #[test]
    fn normalize_collects_and_subtracts() {
        let (x, y) = (v("x", 0), v("y", 1));
        let f = normalize_atom(&raw(&[(&x, 1)], 1), Rel::Lt, &raw(&[(&y, 1)], 3));
        let expected = Atom::Cmp {
            term: LinearTerm::from_pairs([(x, int(1)), (y, int(-1))]),
            rel: Rel::Lt,
            constant: int(2),
        };
        assert_eq!(f, Formula::Atom(expected));
    }

    #[test]
    fn normalize_folds_constants() {
        let f = normalize_atom(&raw(&[], 5), Rel::Lt, &raw(&[], 4));
        assert_eq!(f, Formula::False);
        let g = normalize_div(int(3), &raw(&[], 9));
        assert_eq!(g, Formula::True);
    }

    #[test]
    fn normalize_div_sums_constants() {
        let x = v("x", 0);
        let f = normalize_div(int(2), &raw(&[(&x, 2)], 4));
        assert_eq!(f.to_string(), "2 divides 2*x + 4");
    }

    #[test]
    fn normalize_is_idempotent() {
        let (x, y) = (v("x", 0), v("y", 1));
        let f = normalize_atom(&raw(&[(&x, 3), (&y, -2)], 4), Rel::Ge, &raw(&[(&y, 1)], -7));
        let Formula::Atom(Atom::Cmp {
            term,
            rel,
            constant,
        }) = &f
        else {
            panic!("expected atom")
        };
        let again = normalize_atom(
            &RawTerm {
                term: term.clone(),
                constant: BigInt::zero(),
            },
            *rel,
            &RawTerm {
                term: LinearTerm::zero(),
                constant: constant.clone(),
            },
        );
        assert_eq!(f, again);
    }

    #[test]
    fn free_vars_examples() {
        let f = parse("x - y > 32").unwrap();
        let names: Vec<_> = f.free_vars().into_iter().map(|v| v.name).collect();
        assert_eq!(names, ["x", "y"]);
        let g = parse("E x. x = y").unwrap();
        let names: Vec<_> = g.free_vars().into_iter().map(|v| v.name).collect();
        assert_eq!(names, ["y"]);
        assert!(parse("E x. x = 0").unwrap().free_vars().is_empty());
    }

    #[test]
    fn rename_apart_separates_sibling_binders() {
        let f = parse("(E x. x = 0) & (E x. x = 1)").unwrap();
        let g = f.rename_apart();
        assert_eq!(g.to_string(), "(E x. x = 0) & (E x'. x' = 1)");
    }

    #[test]
    fn rename_apart_inner_binder_shadows() {
        let f = parse("E x. E x. x = 0").unwrap();
        assert_eq!(f.rename_apart().to_string(), "E x. E x'. x' = 0");
    }

    #[test]
    fn rename_apart_identity_without_reuse() {
        let f = parse("E x. A y. x + y > 0 | x = 2").unwrap();
        assert_eq!(f.rename_apart(), f);
    }

    #[test]
    fn rename_apart_avoids_free_variables() {
        let f = parse("x > 0 & E x. x < 0").unwrap();
        let g = f.rename_apart();
        assert_eq!(g.to_string(), "x > 0 & (E x'. x' < 0)");
        assert_eq!(g.free_vars(), f.free_vars());
    }

    #[test]
    fn display_round_trips_through_parser() {
        for text in [
            "x - y > 32",
            "E x. 2*x - y = 0",
            "3 divides x + 4",
            "!(x < 1) | y >= -3 & true",
            "(E x. x = 0) <-> (A y. y != 2)",
            "x = 1 -> y = 2 -> z = 3",
        ] {
            let f = parse(text).unwrap();
            let again = parse(&f.to_string()).unwrap();
            assert_eq!(f.to_string(), again.to_string(), "{text}");
        }
    }
}
