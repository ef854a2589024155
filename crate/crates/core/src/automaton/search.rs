use std::collections::VecDeque;

use num_bigint::BigInt;

use super::{AutomatonError, BoolOp, Dwa, StateId};
use crate::encoding::{encode_int, TupleWord};

impl Dwa {
    /// States reachable from `q` by a word of length at least one.
    pub fn reachable_from(&self, q: StateId) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([q]);
        while let Some(p) = queue.pop_front() {
            for &t in self.row(p) {
                if !std::mem::replace(&mut seen[t as usize], true) {
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// `true` when no nonempty word is accepted.
    pub fn is_empty_nonlambda(&self) -> bool {
        let seen = self.reachable_from(self.initial);
        !seen
            .iter()
            .zip(&self.accepting)
            .any(|(&s, &a)| s && a)
    }

    /// A shortest accepted nonempty word. Among the first letters, those
    /// whose digits are all `0` or `ρ-1` are tried first so the witness is a
    /// canonical encoding whenever one of minimal length exists.
    pub fn find_witness(&self) -> Option<TupleWord> {
        let n = self.num_states();
        let top = self.base.top_digit();
        let mut first: Vec<usize> = (0..self.alphabet).collect();
        first.sort_by_key(|&a| {
            let canonical = self
                .base
                .letter_digits(a, self.arity)
                .iter()
                .all(|&d| d == 0 || d == top);
            (!canonical, a)
        });

        // parent[q] = (previous state or None for the first letter, letter)
        let mut parent: Vec<Option<(Option<StateId>, usize)>> = vec![None; n];
        let mut queue = VecDeque::new();
        for &a in &first {
            let t = self.step(self.initial, a);
            if parent[t as usize].is_none() {
                parent[t as usize] = Some((None, a));
                queue.push_back(t);
            }
        }
        while let Some(q) = queue.pop_front() {
            if self.is_accepting(q) {
                let mut letters = Vec::new();
                let mut cur = q;
                loop {
                    let (prev, a) = parent[cur as usize].expect("visited state has a parent");
                    letters.push(self.base.letter_digits(a, self.arity));
                    match prev {
                        Some(p) => cur = p,
                        None => break,
                    }
                }
                letters.reverse();
                return Some(
                    TupleWord::new(self.base, self.arity, letters).expect("digits in range"),
                );
            }
            for a in 0..self.alphabet {
                let t = self.step(q, a);
                if parent[t as usize].is_none() {
                    parent[t as usize] = Some((Some(q), a));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// `true` when both automata accept the same nonempty words.
    pub fn equivalent(&self, other: &Dwa) -> Result<bool, AutomatonError> {
        Ok(self.product(other, BoolOp::Xor)?.is_empty_nonlambda())
    }

    /// A shortest nonempty word accepted by exactly one of the automata.
    pub fn distinguishing_word(&self, other: &Dwa) -> Result<Option<TupleWord>, AutomatonError> {
        Ok(self.product(other, BoolOp::Xor)?.find_witness())
    }

    /// Membership of the tuple `z` through its canonical encoding.
    pub fn accepts_tuple(&self, z: &[BigInt]) -> Result<bool, AutomatonError> {
        self.membership(&encode_int(self.base, z))
    }
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;
    use crate::encoding::{decode_int, Base};

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn emptiness() {
        let base = Base::new(2).unwrap();
        assert!(Dwa::constant(1, base, false).is_empty_nonlambda());
        assert!(!Dwa::constant(1, base, true).is_empty_nonlambda());
        assert!(interval(base, 3, 4).is_empty_nonlambda());
        assert!(!interval(base, 3, 5).is_empty_nonlambda());
    }

    #[test]
    fn empty_word_acceptance_is_ignored() {
        let base = Base::new(2).unwrap();
        let a = Dwa::from_fn(1, base, 2, 0, vec![true, false], |_, _| 1);
        assert!(a.is_empty_nonlambda());
        assert_eq!(a.find_witness(), None);
    }

    #[test]
    fn witness_is_shortest_and_canonical() {
        let base = Base::new(3).unwrap();
        let a = interval(base, -2, 0);
        let w = a.find_witness().unwrap();
        assert_eq!(w.to_string(), "2");
        assert_eq!(decode_int(base, &w).unwrap(), vec![int(-1)]);

        let far = interval(base, 20, 22);
        let w = far.find_witness().unwrap();
        assert_eq!(decode_int(base, &w).unwrap(), vec![int(21)]);
        assert_eq!(w.len(), 4);
    }

    #[test]
    fn equivalence_and_distinguishing_words() {
        let base = Base::new(2).unwrap();
        let a = interval(base, 0, 6);
        let c = interval(base, -3, 6)
            .product(&interval(base, 0, 100), BoolOp::And)
            .unwrap();
        assert!(a.equivalent(&c).unwrap());
        let d = interval(base, 0, 7);
        assert!(!a.equivalent(&d).unwrap());
        let w = a.distinguishing_word(&d).unwrap().unwrap();
        assert_eq!(decode_int(base, &w).unwrap(), vec![int(6)]);
    }

    #[test]
    fn accepts_tuple_uses_canonical_encoding() {
        let base = Base::new(2).unwrap();
        let a = interval(base, -4, 4);
        assert!(a.accepts_tuple(&[int(-3)]).unwrap());
        assert!(!a.accepts_tuple(&[int(4)]).unwrap());
    }
}
