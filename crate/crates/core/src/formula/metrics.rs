use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{Atom, Formula, LinearTerm, Quantifier, VarId};

/// How integer literals contribute to the formula length.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum LengthMeasure {
    /// An integer `k` counts as `|k|` letters (its expanded version).
    #[default]
    Linear,
    /// An integer `k` counts as its number of binary digits.
    Logarithmic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MetricsReport {
    pub length: u64,
    pub qn: u32,
    pub qa: u32,
    pub qbl: u32,
    pub t_set_size: usize,
    pub d_set_size: usize,
    #[serde(serialize_with = "crate::util::ser_display")]
    pub max_coef: BigInt,
    #[serde(serialize_with = "crate::util::ser_display")]
    pub max_const: BigInt,
    #[serde(serialize_with = "crate::util::ser_display")]
    pub max_div: BigInt,
}

pub fn metrics(phi: &Formula) -> MetricsReport {
    metrics_with(phi, LengthMeasure::Linear)
}

pub fn metrics_with(phi: &Formula, measure: LengthMeasure) -> MetricsReport {
    let sets = TermSets::of(phi);
    let mut max_coef = BigInt::one();
    let mut max_const = BigInt::one();
    let mut max_div = BigInt::one();
    for atom in phi.atoms() {
        match &atom {
            Atom::Cmp { term, constant, .. } => {
                for (_, k) in term.iter() {
                    max_coef = max_coef.max(k.abs());
                }
                max_const = max_const.max(constant.abs());
            }
            Atom::Div { divisor, .. } => max_div = max_div.max(divisor.clone()),
        }
    }
    MetricsReport {
        length: length(phi, measure),
        qn: qn(phi),
        qa: qa(phi),
        qbl: qbl(phi),
        t_set_size: sets.terms.len(),
        d_set_size: sets.divs.len(),
        max_coef,
        max_const,
        max_div,
    }
}

/// The sets `T(φ)` of homogeneous terms of (in)equations and `D(φ)` of
/// divisibility predicates `d | t`, over the normalized atoms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TermSets {
    pub terms: BTreeSet<LinearTerm>,
    pub divs: BTreeSet<(BigInt, LinearTerm)>,
}

impl TermSets {
    pub fn of(phi: &Formula) -> TermSets {
        let mut sets = TermSets::default();
        phi.for_each_atom(&mut |a| match a {
            Atom::Cmp { term, .. } => {
                sets.terms.insert(term.clone());
            }
            Atom::Div { divisor, term, .. } => {
                sets.divs.insert((divisor.clone(), term.clone()));
            }
        });
        sets
    }

    /// Splits into the entries mentioning one of `bound` (`T₊`, `D₊`) and
    /// the rest (`T₋`, `D₋`).
    pub fn split(&self, bound: &BTreeSet<VarId>) -> (TermSets, TermSets) {
        let mentions = |t: &LinearTerm| t.vars().any(|v| bound.contains(v));
        let mut plus = TermSets::default();
        let mut minus = TermSets::default();
        for t in &self.terms {
            if mentions(t) {
                plus.terms.insert(t.clone());
            } else {
                minus.terms.insert(t.clone());
            }
        }
        for d in &self.divs {
            if mentions(&d.1) {
                plus.divs.insert(d.clone());
            } else {
                minus.divs.insert(d.clone());
            }
        }
        (plus, minus)
    }
}

fn int_len(k: &BigInt, measure: LengthMeasure) -> u64 {
    let abs = k.abs();
    let n = match measure {
        LengthMeasure::Linear => u64::try_from(&abs).unwrap_or(u64::MAX),
        LengthMeasure::Logarithmic => abs.bits(),
    };
    n.max(1)
}

fn term_len(t: &LinearTerm, constant: &BigInt, measure: LengthMeasure) -> u64 {
    let mut n = 0u64;
    for (i, (_, k)) in t.iter().enumerate() {
        if i > 0 {
            n += 1; // the `+`
        }
        n = n.saturating_add(int_len(k, measure) + 1);
    }
    if !constant.is_zero() {
        if !t.is_zero() {
            n += 1;
        }
        n = n.saturating_add(int_len(constant, measure));
    }
    n.max(1)
}

/// Number of letters used to write the formula; integers are measured
/// according to `measure`.
fn length(phi: &Formula, measure: LengthMeasure) -> u64 {
    match phi {
        Formula::Atom(Atom::Cmp { term, constant, .. }) => term_len(term, &BigInt::zero(), measure)
            .saturating_add(1)
            .saturating_add(int_len(constant, measure)),
        Formula::Atom(Atom::Div {
            divisor,
            term,
            constant,
        }) => term_len(term, constant, measure)
            .saturating_add(int_len(divisor, measure))
            .saturating_add(1),
        Formula::True | Formula::False => 1,
        Formula::Not(a) => 1 + length(a, measure),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            1 + length(a, measure) + length(b, measure)
        }
        Formula::Exists(_, a) | Formula::Forall(_, a) => 2 + length(a, measure),
    }
}

fn qn(phi: &Formula) -> u32 {
    match phi {
        Formula::Atom(_) | Formula::True | Formula::False => 0,
        Formula::Not(a) => qn(a),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            qn(a) + qn(b)
        }
        Formula::Exists(_, a) | Formula::Forall(_, a) => 1 + qn(a),
    }
}

fn qa(phi: &Formula) -> u32 {
    qa_q(phi, Quantifier::Exists).min(qa_q(phi, Quantifier::Forall))
}

/// The alternation count relative to an outer quantifier `q`. Implications
/// are read as `¬a ∨ b` and equivalences as `(a → b) ∧ (b → a)`.
fn qa_q(phi: &Formula, q: Quantifier) -> u32 {
    match phi {
        Formula::Atom(_) | Formula::True | Formula::False => 0,
        Formula::Not(a) => qa_q(a, q.dual()),
        Formula::And(a, b) | Formula::Or(a, b) => qa_q(a, q).max(qa_q(b, q)),
        Formula::Implies(a, b) => qa_q(a, q.dual()).max(qa_q(b, q)),
        Formula::Iff(a, b) => {
            let fwd = qa_q(a, q.dual()).max(qa_q(b, q));
            let bwd = qa_q(b, q.dual()).max(qa_q(a, q));
            fwd.max(bwd)
        }
        Formula::Exists(_, a) | Formula::Forall(_, a) => {
            if quantifier_of(phi) == q {
                qa_q(a, q).max(1)
            } else {
                1 + qa_q(a, q.dual())
            }
        }
    }
}

fn quantifier_of(phi: &Formula) -> Quantifier {
    match phi {
        Formula::Forall(..) => Quantifier::Forall,
        _ => Quantifier::Exists,
    }
}

fn qbl(phi: &Formula) -> u32 {
    let mut best = 0;
    phi.for_each_subformula(&mut |g| {
        best = best
            .max(qbl_q(g, Quantifier::Exists))
            .max(qbl_q(g, Quantifier::Forall));
    });
    best
}

fn qbl_q(phi: &Formula, q: Quantifier) -> u32 {
    match phi {
        Formula::Not(a) => qbl_q(a, q.dual()),
        Formula::And(a, b) | Formula::Or(a, b) => qbl_q(a, q) + qbl_q(b, q),
        Formula::Implies(a, b) => qbl_q(a, q.dual()) + qbl_q(b, q),
        Formula::Iff(a, b) => {
            qbl_q(a, q.dual()) + qbl_q(b, q) + qbl_q(b, q.dual()) + qbl_q(a, q)
        }
        Formula::Exists(_, a) | Formula::Forall(_, a) if quantifier_of(phi) == q => {
            1 + qbl_q(a, q)
        }
        _ => 0,
    }
}
