//! Automata for atomic formulas: the clamped construction for
//! (in)equations, the minimal inequation and equation constructions, and
//! the residue automaton for divisibility.
//!
//! Every automaton built here represents its atom over the tracks given by
//! a variable list; variables of the list that do not occur in the atom are
//! read and ignored.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::automaton::{AutomatonError, Dwa, StateId};
use crate::encoding::Base;
use crate::formula::{cmp, Atom, Formula, LinearTerm, Rel, VarId};

/// Largest automaton the constructions here are willing to allocate.
pub const STATE_LIMIT: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtomError {
    #[error("expected {expected}, found `{atom}`")]
    WrongShape { expected: &'static str, atom: String },
    #[error("bounds m = {m}, n = {n} are invalid for `{atom}`")]
    InvalidBounds { m: BigInt, n: BigInt, atom: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("variable `{0}` has no track")]
    MissingTrack(String),
    #[error("construction would exceed {STATE_LIMIT} states")]
    TooLarge,
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

/// The parameters of the clamped construction for a comparison atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomAutomatonSpec {
    pub atom: Atom,
    pub base: Base,
    pub norm_neg: BigInt,
    pub norm_pos: BigInt,
    /// `m = min{c, -‖t‖⁺} - 1`, the largest value kept apart from "small".
    pub small_max: BigInt,
    /// `n = max{c, ‖t‖⁻} + 1`.
    pub large_min: BigInt,
    pub gcd_t: BigInt,
}

impl AtomAutomatonSpec {
    pub fn new(atom: &Atom, base: Base) -> AtomAutomatonSpec {
        let term = atom.term();
        let c = match atom {
            Atom::Cmp { constant, .. } | Atom::Div { constant, .. } => constant,
        };
        let norm_neg = term.norm_neg();
        let norm_pos = term.norm_pos();
        AtomAutomatonSpec {
            small_max: c.clone().min(-&norm_pos) - 1,
            large_min: c.clone().max(norm_neg.clone()) + 1,
            atom: atom.clone(),
            base,
            norm_neg,
            norm_pos,
            gcd_t: term.gcd(),
        }
    }
}

/// `t[b]` and `t[σ(b)]` for every letter over a fixed track list.
struct TermTable {
    base: Base,
    arity: usize,
    rho: BigInt,
    norm_neg: BigInt,
    norm_pos: BigInt,
    letter: Vec<BigInt>,
    sign: Vec<BigInt>,
}

impl TermTable {
    fn new(coeffs: &[BigInt], base: Base) -> TermTable {
        let arity = coeffs.len();
        let size = base.alphabet_size(arity);
        let mut letter = Vec::with_capacity(size);
        let mut sign = Vec::with_capacity(size);
        for a in 0..size {
            let digits = base.letter_digits(a, arity);
            letter.push(coeffs.iter().zip(&digits).map(|(k, &d)| k * d).sum());
            sign.push(
                coeffs
                    .iter()
                    .zip(&digits)
                    .filter(|(_, &d)| d != 0)
                    .map(|(k, _)| -k)
                    .sum(),
            );
        }
        TermTable {
            base,
            arity,
            rho: BigInt::from(base.get()),
            norm_neg: coeffs.iter().filter(|k| k.is_negative()).map(|k| -k).sum(),
            norm_pos: coeffs.iter().filter(|k| k.is_positive()).sum(),
            letter,
            sign,
        }
    }

    fn negated(&self) -> TermTable {
        TermTable {
            base: self.base,
            arity: self.arity,
            rho: self.rho.clone(),
            norm_neg: self.norm_pos.clone(),
            norm_pos: self.norm_neg.clone(),
            letter: self.letter.iter().map(|v| -v).collect(),
            sign: self.sign.iter().map(|v| -v).collect(),
        }
    }

    fn alphabet(&self) -> usize {
        self.letter.len()
    }

    fn step(&self, q: &BigInt, a: usize) -> BigInt {
        &self.rho * q + &self.letter[a]
    }
}

fn coeffs_over(term: &LinearTerm, vars: &[VarId]) -> Result<Vec<BigInt>, AtomError> {
    if let Some(v) = term.vars().find(|v| !vars.contains(v)) {
        return Err(AtomError::MissingTrack(v.name.clone()));
    }
    Ok(vars.iter().map(|v| term.coeff(v)).collect())
}

fn own_vars(atom: &Atom) -> Vec<VarId> {
    atom.term().vars().cloned().collect()
}

fn span(lo: &BigInt, hi: &BigInt) -> Result<usize, AtomError> {
    (hi - lo)
        .to_usize()
        .filter(|&s| s < STATE_LIMIT)
        .ok_or(AtomError::TooLarge)
}

/// `η(q_I, b) = t[σ(b)]` with the letter given in the term's variable order.
pub fn eta_init(t: &LinearTerm, letter: &[u32]) -> BigInt {
    t.iter()
        .zip(letter)
        .filter(|(_, &d)| d != 0)
        .map(|((_, k), _)| -k)
        .sum()
}

/// `η(q, b) = ρq + t[b]`.
pub fn eta_step(t: &LinearTerm, base: Base, q: &BigInt, letter: &[u32]) -> BigInt {
    let tb: BigInt = t.iter().zip(letter).map(|((_, k), &d)| k * d).sum();
    BigInt::from(base.get()) * q + tb
}

/// State of the clamped automaton that stands for the value `v`; the
/// initial state is 0.
pub fn bounded_state(m: &BigInt, v: &BigInt) -> StateId {
    (v - m + 1u32).to_u32().expect("value within bounds")
}

/// The clamped automaton `A^{t⋈c}_{(m,n)}` over the atom's own variables.
/// States are `q_I` and the integers of `[m, n]`, numbered by
/// [`bounded_state`].
pub fn build_bounded(atom: &Atom, base: Base, m: &BigInt, n: &BigInt) -> Result<Dwa, AtomError> {
    build_bounded_over(atom, base, m, n, &own_vars(atom))
}

/// [`build_bounded`] with the default bounds of [`AtomAutomatonSpec`].
pub fn build_bounded_default(atom: &Atom, base: Base) -> Result<Dwa, AtomError> {
    let spec = AtomAutomatonSpec::new(atom, base);
    build_bounded(atom, base, &spec.small_max, &spec.large_min)
}

pub fn build_bounded_over(
    atom: &Atom,
    base: Base,
    m: &BigInt,
    n: &BigInt,
    vars: &[VarId],
) -> Result<Dwa, AtomError> {
    let Atom::Cmp {
        term,
        rel,
        constant: c,
    } = atom
    else {
        return Err(AtomError::WrongShape {
            expected: "a comparison",
            atom: atom.to_string(),
        });
    };
    let spec = AtomAutomatonSpec::new(atom, base);
    let m_small = *m < c.clone().min(-&spec.norm_pos);
    let n_large = *n > c.clone().max(spec.norm_neg.clone());
    if m >= n || !m_small || !n_large {
        return Err(AtomError::InvalidBounds {
            m: m.clone(),
            n: n.clone(),
            atom: atom.to_string(),
        });
    }
    let table = TermTable::new(&coeffs_over(term, vars)?, base);
    let states = span(m, n)? + 2;
    let clamp = |v: BigInt| bounded_state(m, &v.clamp(m.clone(), n.clone()));
    let value = |q: StateId| m + BigInt::from(q) - 1;
    let accepting = (0..states as StateId)
        .map(|q| q != 0 && rel.holds(&value(q), c))
        .collect();
    Ok(Dwa::from_fn(table.arity, base, states, 0, accepting, |q, a| {
        if q == 0 {
            clamp(table.sign[a].clone())
        } else {
            clamp(table.step(&value(q), a))
        }
    }))
}

/// Divides out `gcd(t)`: an equivalent atom whose term has coprime
/// coefficients, or a literal when the atom becomes trivial.
pub fn gcd_reduce(atom: &Atom) -> Formula {
    let Atom::Cmp {
        term,
        rel,
        constant: c,
    } = atom
    else {
        return Formula::Atom(atom.clone());
    };
    let g = term.gcd();
    if g.is_one() {
        return Formula::Atom(atom.clone());
    }
    let t = LinearTerm::from_pairs(term.iter().map(|(v, k)| (v.clone(), k / &g)));
    let exact = c.is_multiple_of(&g);
    match rel {
        Rel::Lt | Rel::Ge => cmp(t, *rel, c.div_ceil(&g)),
        Rel::Gt | Rel::Le => cmp(t, *rel, c.div_floor(&g)),
        Rel::Eq if exact => cmp(t, Rel::Eq, c / &g),
        Rel::Eq => Formula::False,
        Rel::Ne if exact => cmp(t, Rel::Ne, c / &g),
        Rel::Ne => Formula::True,
    }
}

/// The block boundaries `d_1 > d_2 > … > d_ℓ = ‖t‖⁻` for `t > c` (with
/// `d_0 = ∞` left implicit). Values in `[d_i, d_{i-1})` have equivalent
/// states in the clamped automaton.
pub fn merge_sequence(term: &LinearTerm, c: &BigInt, base: Base) -> Result<Vec<BigInt>, AtomError> {
    if c.is_negative() || !term.gcd().is_one() || term.is_zero() {
        return Err(AtomError::Precondition(format!(
            "merge sequence needs c >= 0 and coprime coefficients, got {term} > {c}"
        )));
    }
    let coeffs: Vec<BigInt> = term.iter().map(|(_, k)| k.clone()).collect();
    Ok(merge_sequence_table(&TermTable::new(&coeffs, base), c))
}

fn merge_sequence_table(table: &TermTable, c: &BigInt) -> Vec<BigInt> {
    let floor = &table.norm_neg;
    let mut d = vec![(c + 1u32).max(floor.clone())];
    while d.last().expect("nonempty") > floor {
        let di = d.last().expect("nonempty").clone();
        let top = &di - 1u32;
        let mut x = floor.clone();
        for tb in &table.letter {
            let v = &table.rho * &top + tb;
            if v < di {
                x = top.clone();
                break;
            }
            let j = d.partition_point(|dj| *dj > v);
            x = x.max((&d[j] - tb).div_ceil(&table.rho));
        }
        d.push(x);
    }
    d
}

/// Minimal automaton for `t > c` with `c ≥ 0` and coprime coefficients.
fn ineq_gt_optimal(table: &TermTable, c: &BigInt) -> Result<Dwa, AtomError> {
    let d = merge_sequence_table(table, c);
    let neg_pos = -&table.norm_pos;
    let singles = span(&neg_pos, &table.norm_neg)?.saturating_sub(1);
    let states = 2 + singles + d.len();
    if states >= STATE_LIMIT {
        return Err(AtomError::TooLarge);
    }
    // 0: q_I, 1: values ≤ -‖t‖⁺, then -‖t‖⁺ < v < ‖t‖⁻, then the blocks.
    let classify = |v: &BigInt| -> StateId {
        if *v <= neg_pos {
            1
        } else if *v < table.norm_neg {
            bounded_state(&neg_pos, v)
        } else {
            (2 + singles + d.partition_point(|dj| dj > v)) as StateId
        }
    };
    let rep = |q: StateId| -> BigInt {
        let q = q as usize;
        if q == 1 {
            neg_pos.clone()
        } else if q < 2 + singles {
            &neg_pos + BigInt::from(q - 1)
        } else {
            d[q - 2 - singles].clone()
        }
    };
    let accepting = (0..states as StateId)
        .map(|q| q != 0 && rep(q) > *c)
        .collect();
    Ok(Dwa::from_fn(table.arity, table.base, states, 0, accepting, |q, a| {
        if q == 0 {
            classify(&table.sign[a])
        } else {
            classify(&table.step(&rep(q), a))
        }
    }))
}

/// `t ⋈ c` for a strict inequality, reduced to the case `t' > c'` with
/// `c' ≥ 0` by negating the term and complementing.
fn ineq_table(table: &TermTable, rel: Rel, c: &BigInt) -> Result<Dwa, AtomError> {
    match rel {
        Rel::Gt if !c.is_negative() => ineq_gt_optimal(table, c),
        Rel::Gt => Ok(ineq_gt_optimal(&table.negated(), &(-c - 1u32))?.complement_set()),
        Rel::Lt if !c.is_positive() => ineq_gt_optimal(&table.negated(), &-c),
        Rel::Lt => Ok(ineq_gt_optimal(table, &(c - 1u32))?.complement_set()),
        Rel::Le => Ok(ineq_table(table, Rel::Gt, c)?.complement_set()),
        Rel::Ge => Ok(ineq_table(table, Rel::Lt, c)?.complement_set()),
        Rel::Eq | Rel::Ne => unreachable!("equations are handled separately"),
    }
}

/// Minimal automaton for a strict inequation.
pub fn build_ineq_optimal(atom: &Atom, base: Base) -> Result<Dwa, AtomError> {
    match atom {
        Atom::Cmp {
            rel: Rel::Lt | Rel::Gt,
            ..
        } => build_atom(atom, base),
        _ => Err(AtomError::WrongShape {
            expected: "a strict inequation",
            atom: atom.to_string(),
        }),
    }
}

/// Minimal automaton for `t = c` with coprime coefficients: the clamped
/// automaton restricted to the values from which `c` is reachable, plus
/// one rejecting sink.
fn eq_table(table: &TermTable, c: &BigInt) -> Result<Dwa, AtomError> {
    let m = c.clone().min(-&table.norm_pos) - 1;
    let n = c.clone().max(table.norm_neg.clone()) + 1;
    let mut live: HashMap<BigInt, ()> = HashMap::from([(c.clone(), ())]);
    let mut queue = VecDeque::from([c.clone()]);
    while let Some(v) = queue.pop_front() {
        for tb in &table.letter {
            let (q, r) = (&v - tb).div_rem(&table.rho);
            if r.is_zero() && q > m && q < n && !live.contains_key(&q) {
                live.insert(q.clone(), ());
                queue.push_back(q);
                if live.len() >= STATE_LIMIT {
                    return Err(AtomError::TooLarge);
                }
            }
        }
    }

    const SINK: StateId = StateId::MAX;
    let mut ids: HashMap<BigInt, StateId> = HashMap::new();
    let mut values: Vec<Option<BigInt>> = vec![None];
    let mut sink = None;
    let mut delta: Vec<StateId> = Vec::new();
    let mut i = 0;
    while i < values.len() {
        for a in 0..table.alphabet() {
            let target = match &values[i] {
                None if i == 0 => Some(table.sign[a].clone()),
                None => None,
                Some(v) => Some(table.step(v, a)),
            };
            let id = match target.filter(|v| live.contains_key(v)) {
                Some(v) => *ids.entry(v.clone()).or_insert_with(|| {
                    values.push(Some(v));
                    (values.len() - 1) as StateId
                }),
                None => SINK,
            };
            if id == SINK && sink.is_none() {
                values.push(None);
                sink = Some((values.len() - 1) as StateId);
            }
            delta.push(if id == SINK { sink.expect("sink allocated") } else { id });
        }
        i += 1;
    }
    let accepting = values.iter().map(|v| v.as_ref() == Some(c)).collect();
    Ok(Dwa::from_table(table.arity, table.base, delta, 0, accepting)?)
}

/// Minimal automaton for an equation.
pub fn build_eq_optimal(atom: &Atom, base: Base) -> Result<Dwa, AtomError> {
    match atom {
        Atom::Cmp { rel: Rel::Eq, .. } => build_atom(atom, base),
        _ => Err(AtomError::WrongShape {
            expected: "an equation",
            atom: atom.to_string(),
        }),
    }
}

/// Residue automaton for `d | t + c` over the atom's own variables. With
/// `filter`, residues that are not multiples of `gcd(gcd(t), d)` (and thus
/// unreachable) are left out.
pub fn build_div(atom: &Atom, base: Base, filter: bool) -> Result<Dwa, AtomError> {
    build_div_over(atom, base, filter, &own_vars(atom))
}

pub fn build_div_over(
    atom: &Atom,
    base: Base,
    filter: bool,
    vars: &[VarId],
) -> Result<Dwa, AtomError> {
    let Atom::Div {
        divisor,
        term,
        constant: c,
    } = atom
    else {
        return Err(AtomError::WrongShape {
            expected: "a divisibility atom",
            atom: atom.to_string(),
        });
    };
    if *divisor < BigInt::from(2) {
        return Err(AtomError::Precondition(format!("divisor {divisor} < 2")));
    }
    let table = TermTable::new(&coeffs_over(term, vars)?, base);
    let d = span(&BigInt::zero(), divisor)?;
    let g = if filter {
        term.gcd()
            .gcd(divisor)
            .to_usize()
            .expect("gcd bounded by the divisor")
    } else {
        1
    };
    let residues = d / g;
    let id = |r: BigInt| -> StateId {
        let r = r.mod_floor(divisor).to_usize().expect("residue below divisor");
        debug_assert_eq!(r % g, 0);
        (r / g + 1) as StateId
    };
    let accepting = (0..=residues)
        .map(|q| q > 0 && (BigInt::from((q - 1) * g) + c).is_multiple_of(divisor))
        .collect();
    Ok(Dwa::from_fn(table.arity, base, residues + 1, 0, accepting, |q, a| {
        if q == 0 {
            id(table.sign[a].clone())
        } else {
            let r = BigInt::from((q as usize - 1) * g);
            id(table.step(&r, a))
        }
    }))
}

/// The automaton of an atom over its own variables, in variable order.
pub fn build_atom(atom: &Atom, base: Base) -> Result<Dwa, AtomError> {
    build_atom_over(atom, base, &own_vars(atom))
}

/// The automaton of an atom over the tracks `vars`. Comparisons are
/// gcd-reduced first; `≠`, `≤`, `≥` are complements of the dual atoms.
pub fn build_atom_over(atom: &Atom, base: Base, vars: &[VarId]) -> Result<Dwa, AtomError> {
    let reduced = match gcd_reduce(atom) {
        Formula::Atom(a) => a,
        Formula::True => return Ok(Dwa::constant(vars.len(), base, true)),
        _ => return Ok(Dwa::constant(vars.len(), base, false)),
    };
    match &reduced {
        Atom::Div { .. } => build_div_over(&reduced, base, true, vars),
        Atom::Cmp { term, .. } if term.is_zero() => Ok(Dwa::constant(
            vars.len(),
            base,
            reduced.holds_at(&BigInt::zero()),
        )),
        Atom::Cmp {
            term,
            rel,
            constant,
        } => {
            let table = TermTable::new(&coeffs_over(term, vars)?, base);
            match rel {
                Rel::Eq => eq_table(&table, constant),
                Rel::Ne => Ok(eq_table(&table, constant)?.complement_set()),
                _ => ineq_table(&table, *rel, constant),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::testutil::{all_words, assert_represents};
    use crate::encoding::{decode_int, decode_nat, TupleWord};
    use crate::formula::parse;

    fn b(rho: u32) -> Base {
        Base::new(rho).unwrap()
    }

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn atom(text: &str) -> Atom {
        match parse(text).unwrap() {
            Formula::Atom(a) => a,
            other => panic!("not an atom: {other}"),
        }
    }

    fn holds(a: &Atom, z: &[BigInt]) -> bool {
        let value: BigInt = a.term().iter().zip(z).map(|((_, k), x)| k * x).sum();
        a.holds_at(&value)
    }

    #[test]
    fn eta_examples() {
        let t = atom("x - y > 0").term().clone();
        assert_eq!(eta_init(&t, &[1, 0]), int(-1));
        assert_eq!(eta_step(&t, b(2), &int(5), &[1, 0]), int(11));
    }

    #[test]
    fn eta_closed_form() {
        // η̂(q, u) = ρ^|u| q + t[⟨u⟩_N] and η̂(q_I, bu) = t[⟨bu⟩].
        let t = atom("3*x - 2*y + z > 0").term().clone();
        let base = b(3);
        for w in all_words(base, 3, 3) {
            let nat = decode_nat(base, &w);
            let t_nat: BigInt = t.iter().zip(&nat).map(|((_, k), v)| k * v).sum();
            for q in [-4i64, 0, 7] {
                let run = w
                    .letters()
                    .iter()
                    .fold(int(q), |acc, l| eta_step(&t, base, &acc, l));
                assert_eq!(run, int(3).pow(w.len() as u32) * q + &t_nat);
            }
            let (first, rest) = w.letters().split_first().unwrap();
            let from_init = rest
                .iter()
                .fold(eta_init(&t, first), |acc, l| eta_step(&t, base, &acc, l));
            let z = decode_int(base, &w).unwrap();
            let t_int: BigInt = t.iter().zip(&z).map(|((_, k), v)| k * v).sum();
            assert_eq!(from_init, t_int);
        }
    }

    #[test]
    fn bounded_sizes() {
        let a = atom("x - y > 32");
        let spec = AtomAutomatonSpec::new(&a, b(2));
        assert_eq!((spec.small_max.clone(), spec.large_min.clone()), (int(-2), int(33)));
        let dwa = build_bounded_default(&a, b(2)).unwrap();
        assert_eq!(dwa.num_states(), 37);
        assert_eq!(dwa.minimize().num_states(), 13);

        let zero = atom("x = 0");
        let dwa = build_bounded_default(&zero, b(2)).unwrap();
        // m = min{0, -1} - 1 = -2 and n = max{0, 0} + 1 = 1
        assert_eq!(dwa.num_states(), 5);
        assert_represents(&dwa, 8, |z| z[0].is_zero());
    }

    #[test]
    fn bounded_rejects_bad_bounds() {
        let a = atom("x - y > 32");
        assert!(build_bounded(&a, b(2), &int(-1), &int(33)).is_err());
        assert!(build_bounded(&a, b(2), &int(-2), &int(32)).is_err());
        assert!(build_bounded(&a, b(2), &int(-5), &int(40)).is_ok());
        assert!(build_bounded(&atom("2 divides x"), b(2), &int(-5), &int(40)).is_err());
    }

    #[test]
    fn bounded_matches_oracle() {
        for text in ["x - y > 3", "2*x + y < -1", "x - 2*y = 1", "x + y != 0", "3*x <= 4"] {
            let a = atom(text);
            for rho in [2, 3] {
                let dwa = build_bounded_default(&a, b(rho)).unwrap();
                assert_represents(&dwa, if rho == 2 { 6 } else { 4 }, |z| holds(&a, z));
            }
        }
    }

    #[test]
    fn gcd_reduce_examples() {
        assert_eq!(gcd_reduce(&atom("2*x - 4*y < 5")), parse("x - 2*y < 3").unwrap());
        assert_eq!(gcd_reduce(&atom("2*x = 5")), Formula::False);
        assert_eq!(gcd_reduce(&atom("3*x + 6*y = 9")), parse("x + 2*y = 3").unwrap());
        assert_eq!(gcd_reduce(&atom("2*x > 5")), parse("x > 2").unwrap());
        assert_eq!(gcd_reduce(&atom("2*x != 5")), Formula::True);
    }

    #[test]
    fn merge_sequence_examples() {
        let a = atom("x - y > 32");
        let d = merge_sequence(a.term(), &int(32), b(2)).unwrap();
        let expected: Vec<BigInt> = [33, 17, 16, 9, 8, 5, 4, 3, 2, 1].map(int).to_vec();
        assert_eq!(d, expected);

        let x = atom("x > 0");
        assert_eq!(merge_sequence(x.term(), &int(0), b(2)).unwrap(), vec![int(1), int(0)]);

        // c + 1 = ‖t‖⁻: the sequence stops immediately.
        let t = atom("x - 3*y > 2");
        assert_eq!(merge_sequence(t.term(), &int(2), b(2)).unwrap(), vec![int(3)]);

        assert!(merge_sequence(x.term(), &int(-1), b(2)).is_err());
        assert!(merge_sequence(atom("2*x > 0").term(), &int(0), b(2)).is_err());
    }

    #[test]
    fn optimal_inequation_example() {
        let a = atom("x - y > 32");
        let dwa = build_ineq_optimal(&a, b(2)).unwrap();
        assert_eq!(dwa.num_states(), 13);
        assert!(dwa.is_set_normal());
        assert_represents(&dwa, 8, |z| holds(&a, z));
        let bounded = build_bounded_default(&a, b(2)).unwrap().minimize();
        assert!(dwa.equivalent(&bounded).unwrap());
    }

    #[test]
    fn optimal_inequation_lower_bound_instance() {
        let a = atom("1025*x - 1024*y > 0");
        let dwa = build_ineq_optimal(&a, b(2)).unwrap();
        assert!(dwa.num_states() >= 2049);
        let bounded = build_bounded_default(&a, b(2)).unwrap().minimize();
        assert_eq!(dwa.num_states(), bounded.num_states());
    }

    #[test]
    fn x_positive_is_minimal() {
        let a = atom("x > 0");
        let dwa = build_ineq_optimal(&a, b(2)).unwrap();
        let min = build_bounded_default(&a, b(2)).unwrap().minimize();
        assert_eq!(dwa.num_states(), min.num_states());
        assert!(dwa.equivalent(&min).unwrap());
    }

    #[test]
    fn optimal_inequations_cover_all_sign_cases() {
        for text in [
            "x - y > 3",
            "x - y > -3",
            "2*x + y < 4",
            "2*x + y < -4",
            "x - y < 0",
            "x + 2*y <= 5",
            "x + 2*y >= -5",
        ] {
            let a = atom(text);
            for rho in [2, 3] {
                let dwa = build_atom(&a, b(rho)).unwrap();
                assert!(dwa.is_set_normal(), "{text}");
                assert_represents(&dwa, if rho == 2 { 6 } else { 4 }, |z| holds(&a, z));
                let min = build_bounded_default(&a, b(rho)).unwrap().minimize();
                assert!(dwa.equivalent(&min).unwrap(), "{text}");
            }
        }
        assert!(build_ineq_optimal(&atom("x = 1"), b(2)).is_err());
    }

    #[test]
    fn optimal_equation_examples() {
        let a = atom("2*x - 3*y = 1");
        let dwa = build_eq_optimal(&a, b(2)).unwrap();
        let min = build_bounded_default(&a, b(2)).unwrap().minimize();
        assert!(dwa.num_states() >= 4);
        assert!(dwa.equivalent(&min).unwrap());
        assert_represents(&dwa, 6, |z| holds(&a, z));

        let zero = build_eq_optimal(&atom("x = 0"), b(2)).unwrap();
        assert_represents(&zero, 8, |z| z[0].is_zero());

        // y = 2x over tracks (x, y).
        let (x, y) = (VarId::new("x", 0), VarId::new("y", 1));
        let t = LinearTerm::from_pairs([(x, int(-2)), (y, int(1))]);
        let Formula::Atom(y2x) = cmp(t, Rel::Eq, int(0)) else { unreachable!() };
        let fig1 = build_eq_optimal(&y2x, b(2)).unwrap();
        assert_represents(&fig1, 6, |z| z[1] == &z[0] * 2);
        let w = TupleWord::new(b(2), 2, vec![vec![0, 0], vec![0, 1], vec![1, 1], vec![1, 0]]).unwrap();
        assert_eq!(decode_int(b(2), &w).unwrap(), vec![int(3), int(6)]);
        assert!(fig1.membership(&w).unwrap());
        assert!(build_eq_optimal(&atom("x > 1"), b(2)).is_err());
    }

    #[test]
    fn equation_with_large_constant_stays_small() {
        let a = atom("x - y = 1000000000000000000000");
        let dwa = build_atom(&a, b(2)).unwrap();
        assert!(dwa.num_states() < 200);
        let z = [int(10).pow(21) + 5, int(5)];
        assert!(dwa.accepts_tuple(&z).unwrap());
        assert!(!dwa.accepts_tuple(&[int(5), int(5)]).unwrap());
    }

    #[test]
    fn divisibility_examples() {
        let three = build_div(&atom("3 divides x"), b(2), false).unwrap();
        assert_eq!(three.num_states(), 4);
        let word = |d: &[u32]| TupleWord::from_digits(b(2), d).unwrap();
        assert!(three.membership(&word(&[0, 1, 1, 0])).unwrap());
        // 110 denotes -2, which 3 does not divide.
        assert!(!three.membership(&word(&[1, 1, 0])).unwrap());

        let a = atom("4 divides 2*x");
        assert_eq!(build_div(&a, b(2), false).unwrap().num_states(), 5);
        let filtered = build_div(&a, b(2), true).unwrap();
        assert_eq!(filtered.num_states(), 3);
        assert_represents(&filtered, 6, |z| holds(&a, z));

        let odd = atom("2 divides x + 1");
        let dwa = build_div(&odd, b(2), true).unwrap();
        assert!(dwa.membership(&TupleWord::from_digits(b(2), &[0, 1]).unwrap()).unwrap());
        assert!(dwa.accepting()[2]);
        assert!(build_div(&atom("x > 1"), b(2), true).is_err());
    }

    #[test]
    fn divisibility_run_is_remainder() {
        let a = atom("5 divides 2*x - 3*y + 1");
        let base = b(2);
        let dwa = build_div(&a, base, false).unwrap();
        for w in all_words(base, 2, 5) {
            let z = decode_int(base, &w).unwrap();
            let t: BigInt = a.term().iter().zip(&z).map(|((_, k), v)| k * v).sum();
            let q = dwa.run(0, w.letters().iter().map(|l| base.letter_index(l)));
            assert_eq!(BigInt::from(q - 1), t.mod_floor(&int(5)));
        }
    }

    #[test]
    fn build_atom_dispatch() {
        let base = b(2);
        let le = build_atom(&atom("x <= 0"), base).unwrap();
        let gt = build_atom(&atom("x > 0"), base).unwrap();
        assert!(le.equivalent(&gt.complement_set()).unwrap());
        let ne = build_atom(&atom("x != 0"), base).unwrap();
        assert_represents(&ne, 8, |z| !z[0].is_zero());
        let f = build_atom(&atom("2*x = 1"), base).unwrap();
        assert!(f.is_empty_nonlambda());
    }

    #[test]
    fn build_atom_over_extra_tracks() {
        let a = atom("x > 2");
        let y = VarId::new("y", 7);
        let vars = vec![y, a.term().vars().next().unwrap().clone()];
        let dwa = build_atom_over(&a, b(2), &vars).unwrap();
        assert_eq!(dwa.arity(), 2);
        assert_represents(&dwa, 5, |z| z[1] > int(2));
        assert!(matches!(
            build_atom_over(&a, b(2), &vars[..1]),
            Err(AtomError::MissingTrack(_))
        ));
    }

    #[test]
    fn equation_states_form_one_component() {
        for text in ["2*x - 3*y = 1", "x - y = 0", "3*x - y + 2*z = 2"] {
            let a = atom(text);
            let spec = AtomAutomatonSpec::new(&a, b(2));
            let dwa = build_bounded_default(&a, b(2)).unwrap();
            let lo = -&spec.norm_pos + 1;
            let hi = spec.norm_neg.clone();
            let s: Vec<StateId> = num_iter(&lo, &hi)
                .map(|v| bounded_state(&spec.small_max, &v))
                .collect();
            for &p in &s {
                let reach = dwa.reachable_from(p);
                assert!(s.iter().all(|&q| reach[q as usize]), "{text}");
            }
        }
    }

    fn num_iter(lo: &BigInt, hi: &BigInt) -> impl Iterator<Item = BigInt> {
        let lo = lo.to_i64().unwrap();
        let hi = hi.to_i64().unwrap();
        (lo..hi).map(BigInt::from)
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn atom_strategy(rel: Rel) -> impl Strategy<Value = Atom> {
            (prop::collection::vec(-5i64..=5, 1..=3), -64i64..=64).prop_filter_map(
                "nonzero term",
                move |(coeffs, c)| {
                    let term = LinearTerm::from_pairs(
                        coeffs
                            .iter()
                            .enumerate()
                            .map(|(i, &k)| (VarId::new(format!("v{i}"), i), BigInt::from(k))),
                    );
                    match cmp(term, rel, BigInt::from(c)) {
                        Formula::Atom(a) => Some(a),
                        _ => None,
                    }
                },
            )
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn inequation_optimal_is_minimal(a in prop_oneof![atom_strategy(Rel::Gt), atom_strategy(Rel::Lt)],
                                             rho in 2u32..=3) {
                let base = b(rho);
                let reduced = match gcd_reduce(&a) { Formula::Atom(r) => r, _ => return Ok(()) };
                let opt = build_ineq_optimal(&reduced, base).unwrap();
                let min = build_bounded_default(&reduced, base).unwrap().minimize();
                prop_assert_eq!(opt.num_states(), min.num_states());
                prop_assert!(opt.equivalent(&min).unwrap());
            }

            #[test]
            fn equation_optimal_is_minimal(a in atom_strategy(Rel::Eq), rho in 2u32..=3) {
                let base = b(rho);
                let reduced = match gcd_reduce(&a) { Formula::Atom(r) => r, _ => return Ok(()) };
                let opt = build_eq_optimal(&reduced, base).unwrap();
                let min = build_bounded_default(&reduced, base).unwrap().minimize();
                prop_assert_eq!(opt.num_states(), min.num_states());
                prop_assert!(opt.equivalent(&min).unwrap());
            }

            #[test]
            fn atoms_match_oracle(a in prop_oneof![atom_strategy(Rel::Le), atom_strategy(Rel::Ne),
                                                   atom_strategy(Rel::Eq), atom_strategy(Rel::Gt)]) {
                let base = b(2);
                let dwa = build_atom(&a, base).unwrap();
                prop_assert!(dwa.is_set_normal());
                let arity = a.term().num_vars();
                let len = if arity == 3 { 3 } else { 5 };
                for w in all_words(base, arity, len) {
                    let z = decode_int(base, &w).unwrap();
                    prop_assert_eq!(dwa.membership(&w).unwrap(), holds(&a, &z));
                }
            }

            #[test]
            fn divisibility_sizes(coeffs in prop::collection::vec(-6i64..=6, 1..=2),
                                  c in -20i64..=20, d in 2i64..=12) {
                let term = LinearTerm::from_pairs(coeffs.iter().enumerate()
                    .map(|(i, &k)| (VarId::new(format!("v{i}"), i), BigInt::from(k))));
                prop_assume!(!term.is_zero());
                let g = term.gcd().gcd(&BigInt::from(d)).to_usize().unwrap();
                let a = Atom::Div { divisor: BigInt::from(d), term, constant: BigInt::from(c) };
                prop_assert_eq!(build_div(&a, b(2), false).unwrap().num_states(), d as usize + 1);
                let f = build_div(&a, b(2), true).unwrap();
                prop_assert_eq!(f.num_states(), d as usize / g + 1);
                for w in all_words(b(2), a.term().num_vars(), 4) {
                    let z = decode_int(b(2), &w).unwrap();
                    prop_assert_eq!(f.membership(&w).unwrap(), holds(&a, &z));
                }
            }
        }
    }
}
