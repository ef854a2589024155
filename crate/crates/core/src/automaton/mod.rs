//! Deterministic and nondeterministic word automata over `Σ^r` together
//! with the closure operations used to compile formulas.
//!
//! Letters are addressed by their index (see [`Base::letter_index`]); the
//! transition table of a [`Dwa`] is total and stored row-major by state.
//! An automaton *represents* a set `U ⊆ Z^r` when it accepts exactly the
//! nonempty words whose ρ's-complement value lies in `U`.

mod export;
mod minimize;
mod ops;
mod search;

use thiserror::Error;

use crate::encoding::{Base, EncodingError, TupleWord};

pub use export::{DwaJson, TransitionJson};
pub use ops::BoolOp;

pub type StateId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("base mismatch: {0} vs {1}")]
    BaseMismatch(Base, Base),
    #[error("track {track} out of range for arity {arity}")]
    TrackOutOfRange { track: usize, arity: usize },
    #[error("malformed automaton: {0}")]
    Malformed(String),
    #[error("automaton would exceed {limit} states")]
    TooLarge { limit: usize },
    #[error(transparent)]
    Encoding(#[from] EncodingError),
}

/// Deterministic word automaton with a total transition function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dwa {
    arity: usize,
    base: Base,
    alphabet: usize,
    delta: Vec<StateId>,
    initial: StateId,
    accepting: Vec<bool>,
}

impl Dwa {
    /// Builds an automaton from a transition function over letter indices.
    pub fn from_fn<F>(
        arity: usize,
        base: Base,
        num_states: usize,
        initial: StateId,
        accepting: Vec<bool>,
        mut step: F,
    ) -> Dwa
    where
        F: FnMut(StateId, usize) -> StateId,
    {
        assert_eq!(accepting.len(), num_states);
        assert!((initial as usize) < num_states);
        let alphabet = base.alphabet_size(arity);
        let mut delta = Vec::with_capacity(num_states * alphabet);
        for q in 0..num_states as StateId {
            for a in 0..alphabet {
                let t = step(q, a);
                assert!((t as usize) < num_states, "transition target out of range");
                delta.push(t);
            }
        }
        Dwa {
            arity,
            base,
            alphabet,
            delta,
            initial,
            accepting,
        }
    }

    /// Builds an automaton from a complete transition table.
    pub fn from_table(
        arity: usize,
        base: Base,
        delta: Vec<StateId>,
        initial: StateId,
        accepting: Vec<bool>,
    ) -> Result<Dwa, AutomatonError> {
        let alphabet = base.alphabet_size(arity);
        let n = accepting.len();
        if n == 0 || delta.len() != n * alphabet {
            return Err(AutomatonError::Malformed(format!(
                "expected {} transitions for {n} states, found {}",
                n * alphabet,
                delta.len()
            )));
        }
        if initial as usize >= n || delta.iter().any(|&t| t as usize >= n) {
            return Err(AutomatonError::Malformed("state id out of range".into()));
        }
        Ok(Dwa {
            arity,
            base,
            alphabet,
            delta,
            initial,
            accepting,
        })
    }

    /// The automaton with a fresh initial state that accepts every nonempty
    /// word (`true`) or no word (`false`).
    pub fn constant(arity: usize, base: Base, value: bool) -> Dwa {
        Dwa::from_fn(arity, base, 2, 0, vec![false, value], |_, _| 1)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q as usize]
    }

    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    #[inline]
    pub fn step(&self, q: StateId, letter: usize) -> StateId {
        self.delta[q as usize * self.alphabet + letter]
    }

    pub fn row(&self, q: StateId) -> &[StateId] {
        let start = q as usize * self.alphabet;
        &self.delta[start..start + self.alphabet]
    }

    /// Extended transition function from `q` over letter indices.
    pub fn run<I: IntoIterator<Item = usize>>(&self, q: StateId, letters: I) -> StateId {
        letters.into_iter().fold(q, |q, a| self.step(q, a))
    }

    pub fn membership(&self, w: &TupleWord) -> Result<bool, AutomatonError> {
        if w.arity() != self.arity {
            return Err(AutomatonError::ArityMismatch(self.arity, w.arity()));
        }
        let q = self.run(
            self.initial,
            w.letters().iter().map(|l| self.base.letter_index(l)),
        );
        Ok(self.is_accepting(q))
    }

    /// `true` when some transition enters the initial state.
    pub fn initial_has_incoming(&self) -> bool {
        self.delta.contains(&self.initial)
    }

    /// The structural conditions every set-representing automaton built here
    /// satisfies: the initial state is non-accepting and never re-entered.
    pub fn is_set_normal(&self) -> bool {
        !self.is_accepting(self.initial) && !self.initial_has_incoming()
    }

    /// Copies the initial state when it has incoming transitions so that the
    /// result has an isolated initial state, then makes it non-accepting.
    /// Nonempty words are treated exactly as before; λ is rejected.
    pub fn reject_empty_word(&self) -> Dwa {
        let mut out = self.clone();
        if out.initial_has_incoming() {
            let row = out.row(out.initial).to_vec();
            out.delta.extend(row);
            out.accepting.push(false);
            out.initial = (out.accepting.len() - 1) as StateId;
        }
        out.accepting[out.initial as usize] = false;
        out
    }

    pub(crate) fn check_compatible(&self, other: &Dwa) -> Result<(), AutomatonError> {
        if self.arity != other.arity {
            return Err(AutomatonError::ArityMismatch(self.arity, other.arity));
        }
        if self.base != other.base {
            return Err(AutomatonError::BaseMismatch(self.base, other.base));
        }
        Ok(())
    }
}

/// Nondeterministic word automaton; produced by projection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    arity: usize,
    base: Base,
    alphabet: usize,
    delta: Vec<Vec<StateId>>,
    initial: Vec<StateId>,
    accepting: Vec<bool>,
}

impl Nfa {
    pub fn new(
        arity: usize,
        base: Base,
        delta: Vec<Vec<StateId>>,
        initial: Vec<StateId>,
        accepting: Vec<bool>,
    ) -> Result<Nfa, AutomatonError> {
        let alphabet = base.alphabet_size(arity);
        let n = accepting.len();
        if delta.len() != n * alphabet {
            return Err(AutomatonError::Malformed(format!(
                "expected {} transition sets, found {}",
                n * alphabet,
                delta.len()
            )));
        }
        let in_range = |q: &StateId| (*q as usize) < n;
        if !initial.iter().all(in_range) || !delta.iter().flatten().all(in_range) {
            return Err(AutomatonError::Malformed("state id out of range".into()));
        }
        Ok(Nfa {
            arity,
            base,
            alphabet,
            delta,
            initial,
            accepting,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn successors(&self, q: StateId, letter: usize) -> &[StateId] {
        &self.delta[q as usize * self.alphabet + letter]
    }

    pub fn membership(&self, w: &TupleWord) -> Result<bool, AutomatonError> {
        if w.arity() != self.arity {
            return Err(AutomatonError::ArityMismatch(self.arity, w.arity()));
        }
        let mut current: Vec<StateId> = self.initial.clone();
        for l in w.letters() {
            let a = self.base.letter_index(l);
            let mut next: Vec<StateId> = current
                .iter()
                .flat_map(|&q| self.successors(q, a).iter().copied())
                .collect();
            next.sort_unstable();
            next.dedup();
            current = next;
        }
        Ok(current.iter().any(|&q| self.accepting[q as usize]))
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use num_bigint::BigInt;

    use super::*;
    use crate::encoding::decode_int;

    /// Every word of length `1..=max_len` over `Σ^arity`.
    pub fn all_words(base: Base, arity: usize, max_len: usize) -> Vec<TupleWord> {
        let alphabet = base.alphabet_size(arity);
        let mut out = Vec::new();
        let mut layer = vec![TupleWord::empty(arity)];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(layer.len() * alphabet);
            for w in &layer {
                for a in 0..alphabet {
                    let mut v = w.clone();
                    v.push(base.letter_digits(a, arity));
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// Checks that `a` accepts exactly the words whose value satisfies `pred`.
    pub fn assert_represents<P>(a: &Dwa, max_len: usize, pred: P)
    where
        P: Fn(&[BigInt]) -> bool,
    {
        for w in all_words(a.base(), a.arity(), max_len) {
            let z = decode_int(a.base(), &w).unwrap();
            assert_eq!(
                a.membership(&w).unwrap(),
                pred(&z),
                "word {w} (value {z:?})"
            );
        }
        assert!(!a.membership(&TupleWord::empty(a.arity())).unwrap());
    }

    /// x > lower and x < upper on a single track, built by hand.
    pub fn interval(base: Base, lower: i64, upper: i64) -> Dwa {
        // Tiny brute-force construction through value tracking with clamping.
        let lo = lower.min(-1) - 1;
        let hi = upper.max(1) + 1;
        let span = (hi - lo + 1) as usize;
        let rho = base.get() as i64;
        let clamp = |v: i64| v.clamp(lo, hi);
        let id = |v: i64| (v - lo) as StateId + 1;
        Dwa::from_fn(
            1,
            base,
            span + 1,
            0,
            (0..=span)
                .map(|s| s > 0 && {
                    let v = s as i64 - 1 + lo;
                    v > lower && v < upper && v != lo && v != hi
                })
                .collect(),
            |q, a| {
                let d = a as i64;
                if q == 0 {
                    id(if d == 0 { 0 } else { -1 })
                } else {
                    let v = q as i64 - 1 + lo;
                    if v == lo || v == hi {
                        q
                    } else {
                        id(clamp(rho * v + d))
                    }
                }
            },
        )
    }
}

#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;
    use num_bigint::BigInt;

    fn b2() -> Base {
        Base::new(2).unwrap()
    }

    #[test]
    fn constant_automata() {
        let t = Dwa::constant(2, b2(), true);
        assert!(t.is_set_normal());
        assert_represents(&t, 4, |_| true);
        let f = Dwa::constant(0, b2(), false);
        assert_represents(&f, 4, |_| false);
    }

    #[test]
    fn single_state_loop_accepts_everything() {
        let a = Dwa::from_fn(1, b2(), 1, 0, vec![true], |_, _| 0);
        for w in all_words(b2(), 1, 5) {
            assert!(a.membership(&w).unwrap());
        }
    }

    #[test]
    fn interval_helper_is_correct() {
        let a = interval(b2(), 0, 5);
        assert_represents(&a, 7, |z| z[0] > BigInt::from(0) && z[0] < BigInt::from(5));
    }

    #[test]
    fn membership_checks_arity() {
        let a = Dwa::constant(2, b2(), true);
        let w = TupleWord::from_digits(b2(), &[0]).unwrap();
        assert_eq!(
            a.membership(&w),
            Err(AutomatonError::ArityMismatch(2, 1))
        );
    }

    #[test]
    fn reject_empty_word_splits_reentered_initial() {
        let a = Dwa::from_fn(1, b2(), 1, 0, vec![true], |_, _| 0);
        let b = a.reject_empty_word();
        assert!(b.is_set_normal());
        assert_eq!(b.num_states(), 2);
        assert!(!b.membership(&TupleWord::empty(1)).unwrap());
        for w in all_words(b2(), 1, 4) {
            assert!(b.membership(&w).unwrap());
        }
    }

    #[test]
    fn from_table_validates() {
        assert!(Dwa::from_table(1, b2(), vec![0, 1], 0, vec![false]).is_err());
        assert!(Dwa::from_table(1, b2(), vec![0, 0], 0, vec![false]).is_ok());
    }
}
