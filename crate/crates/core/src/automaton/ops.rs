use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{AutomatonError, Dwa, Nfa, StateId};
use crate::encoding::Base;

/// Binary Boolean connective applied pointwise by [`Dwa::product`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoolOp {
    And,
    Or,
    Implies,
    Iff,
    Xor,
    Diff,
}

impl BoolOp {
    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            BoolOp::And => a && b,
            BoolOp::Or => a || b,
            BoolOp::Implies => !a || b,
            BoolOp::Iff => a == b,
            BoolOp::Xor => a != b,
            BoolOp::Diff => a && !b,
        }
    }
}

/// For each letter of arity `arity + 1`, the index of the letter obtained by
/// deleting the digit at `track`.
fn drop_track_map(base: Base, arity: usize, track: usize) -> Vec<usize> {
    (0..base.alphabet_size(arity + 1))
        .map(|a| {
            let mut digits = base.letter_digits(a, arity + 1);
            digits.remove(track);
            base.letter_index(&digits)
        })
        .collect()
}

impl Dwa {
    /// Synchronous product; only pairs reachable from the initial pair are
    /// materialized.
    pub fn product(&self, other: &Dwa, op: BoolOp) -> Result<Dwa, AutomatonError> {
        self.check_compatible(other)?;
        let alphabet = self.alphabet;
        let mut ids: HashMap<(StateId, StateId), StateId> = HashMap::new();
        let mut pairs = vec![(self.initial, other.initial)];
        ids.insert(pairs[0], 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for a in 0..alphabet {
                let next = (self.step(p, a), other.step(q, a));
                let id = *ids.entry(next).or_insert_with(|| {
                    pairs.push(next);
                    (pairs.len() - 1) as StateId
                });
                delta.push(id);
            }
            i += 1;
        }
        let accepting = pairs
            .iter()
            .map(|&(p, q)| op.apply(self.is_accepting(p), other.is_accepting(q)))
            .collect();
        Ok(Dwa {
            arity: self.arity,
            base: self.base,
            alphabet,
            delta,
            initial: 0,
            accepting,
        })
    }

    /// Represents `Z^r \ U` when `self` represents `U`.
    pub fn complement_set(&self) -> Dwa {
        let mut out = self.clone();
        for acc in out.accepting.iter_mut() {
            *acc = !*acc;
        }
        out.reject_empty_word()
    }

    /// Inserts a new unconstrained track at position `track`.
    pub fn cylindrify(&self, track: usize) -> Result<Dwa, AutomatonError> {
        if track > self.arity {
            return Err(AutomatonError::TrackOutOfRange {
                track,
                arity: self.arity + 1,
            });
        }
        let map = drop_track_map(self.base, self.arity, track);
        let alphabet = map.len();
        let mut delta = Vec::with_capacity(self.num_states() * alphabet);
        for q in 0..self.num_states() as StateId {
            delta.extend(map.iter().map(|&a| self.step(q, a)));
        }
        Ok(Dwa {
            arity: self.arity + 1,
            base: self.base,
            alphabet,
            delta,
            initial: self.initial,
            accepting: self.accepting.clone(),
        })
    }

    /// Reorders tracks: track `i` of the result reads track `perm[i]` of
    /// `self`.
    pub fn permute_tracks(&self, perm: &[usize]) -> Result<Dwa, AutomatonError> {
        let r = self.arity;
        let mut seen = vec![false; r];
        if perm.len() != r {
            return Err(AutomatonError::ArityMismatch(r, perm.len()));
        }
        for &p in perm {
            if p >= r || std::mem::replace(&mut seen[p], true) {
                return Err(AutomatonError::Malformed(format!(
                    "{perm:?} is not a permutation"
                )));
            }
        }
        let map: Vec<usize> = (0..self.alphabet)
            .map(|a| {
                let new = self.base.letter_digits(a, r);
                let mut old = vec![0; r];
                for (i, &p) in perm.iter().enumerate() {
                    old[p] = new[i];
                }
                self.base.letter_index(&old)
            })
            .collect();
        let mut delta = Vec::with_capacity(self.delta.len());
        for q in 0..self.num_states() as StateId {
            delta.extend(map.iter().map(|&a| self.step(q, a)));
        }
        Ok(Dwa {
            delta,
            ..self.clone()
        })
    }

    /// States reachable from the initial state after at least one letter
    /// whose kept tracks all read `sign` and whose dropped track is free.
    fn saturation_set(&self, track: usize, sign: &[u32]) -> Vec<bool> {
        let rho = self.base.get();
        let letters: Vec<usize> = (0..rho)
            .map(|d| {
                let mut l = sign.to_vec();
                l.insert(track, d);
                self.base.letter_index(&l)
            })
            .collect();
        let mut reached = vec![false; self.num_states()];
        let mut queue = VecDeque::new();
        let visit = |q: StateId, reached: &mut Vec<bool>, queue: &mut VecDeque<StateId>| {
            for &a in &letters {
                let t = self.step(q, a);
                if !reached[t as usize] {
                    reached[t as usize] = true;
                    queue.push_back(t);
                }
            }
        };
        visit(self.initial, &mut reached, &mut queue);
        while let Some(q) = queue.pop_front() {
            visit(q, &mut reached, &mut queue);
        }
        reached
    }

    /// Existential projection of `track`. The fresh initial state also
    /// follows every sign-extended run, so words that are too short to hold
    /// a witness for the dropped track are still accepted.
    pub fn project_exists(&self, track: usize) -> Result<Nfa, AutomatonError> {
        if track >= self.arity {
            return Err(AutomatonError::TrackOutOfRange {
                track,
                arity: self.arity,
            });
        }
        let base = self.base;
        let r = self.arity - 1;
        let rho = base.get();
        let alphabet = base.alphabet_size(r);
        let n = self.num_states();
        let fresh = n as StateId;
        let with_digit = |letter: &[u32], d: u32| {
            let mut l = letter.to_vec();
            l.insert(track, d);
            base.letter_index(&l)
        };

        let mut delta: Vec<Vec<StateId>> = Vec::with_capacity((n + 1) * alphabet);
        for q in 0..n as StateId {
            for a in 0..alphabet {
                let letter = base.letter_digits(a, r);
                let mut succ: Vec<StateId> =
                    (0..rho).map(|d| self.step(q, with_digit(&letter, d))).collect();
                succ.sort_unstable();
                succ.dedup();
                delta.push(succ);
            }
        }

        let mut saturation: HashMap<Vec<u32>, Vec<bool>> = HashMap::new();
        for a in 0..alphabet {
            let letter = base.letter_digits(a, r);
            let canon = base.canonical_sign(&letter);
            let sat = saturation
                .entry(canon.clone())
                .or_insert_with(|| self.saturation_set(track, &canon));
            let mut succ: Vec<StateId> = (0..rho)
                .map(|d| self.step(self.initial, with_digit(&letter, d)))
                .collect();
            let canon_letters: Vec<usize> = (0..rho).map(|d| with_digit(&canon, d)).collect();
            for (q, _) in sat.iter().enumerate().filter(|(_, &s)| s) {
                succ.extend(canon_letters.iter().map(|&l| self.step(q as StateId, l)));
            }
            succ.sort_unstable();
            succ.dedup();
            delta.push(succ);
        }

        let mut accepting = self.accepting.clone();
        accepting.push(false);
        Nfa::new(r, base, delta, vec![fresh], accepting)
    }

    /// `∃x` on `track`, determinized and minimized.
    pub fn exists(&self, track: usize) -> Result<Dwa, AutomatonError> {
        Ok(self.project_exists(track)?.determinize(None)?.minimize())
    }

    /// `∀x` on `track` as `¬∃x¬`.
    pub fn forall(&self, track: usize) -> Result<Dwa, AutomatonError> {
        Ok(self.complement_set().exists(track)?.complement_set().minimize())
    }
}

impl Nfa {
    /// Subset construction restricted to reachable subsets. Fails when more
    /// than `limit` subsets would be created.
    pub fn determinize(&self, limit: Option<usize>) -> Result<Dwa, AutomatonError> {
        let alphabet = self.alphabet;
        let mut start = self.initial.clone();
        start.sort_unstable();
        start.dedup();
        let mut ids: HashMap<Vec<StateId>, StateId> = HashMap::new();
        let mut subsets = vec![start.clone()];
        ids.insert(start, 0);
        let mut delta = Vec::new();
        let mut i = 0;
        let mut scratch = Vec::new();
        while i < subsets.len() {
            for a in 0..alphabet {
                scratch.clear();
                for &q in &subsets[i] {
                    scratch.extend_from_slice(self.successors(q, a));
                }
                scratch.sort_unstable();
                scratch.dedup();
                let id = match ids.get(&scratch) {
                    Some(&id) => id,
                    None => {
                        if limit.is_some_and(|l| subsets.len() >= l) {
                            return Err(AutomatonError::TooLarge {
                                limit: limit.unwrap_or_default(),
                            });
                        }
                        let id = subsets.len() as StateId;
                        ids.insert(scratch.clone(), id);
                        subsets.push(scratch.clone());
                        id
                    }
                };
                delta.push(id);
            }
            i += 1;
        }
        let accepting = subsets
            .iter()
            .map(|s| s.iter().any(|&q| self.accepting[q as usize]))
            .collect();
        Ok(Dwa {
            arity: self.arity,
            base: self.base,
            alphabet,
            delta,
            initial: 0,
            accepting,
        })
    }
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;
    use num_traits::Zero;

    use super::super::testutil::*;
    use super::*;

    fn b(rho: u32) -> Base {
        Base::new(rho).unwrap()
    }

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn bool_op_truth_tables() {
        let cases = [(false, false), (false, true), (true, false), (true, true)];
        let table = |op: BoolOp| cases.map(|(a, b)| op.apply(a, b));
        assert_eq!(table(BoolOp::And), [false, false, false, true]);
        assert_eq!(table(BoolOp::Or), [false, true, true, true]);
        assert_eq!(table(BoolOp::Implies), [true, true, false, true]);
        assert_eq!(table(BoolOp::Iff), [true, false, false, true]);
        assert_eq!(table(BoolOp::Xor), [false, true, true, false]);
        assert_eq!(table(BoolOp::Diff), [false, false, true, false]);
    }

    #[test]
    fn product_of_intervals() {
        for rho in [2, 3] {
            let a = interval(b(rho), -3, 6);
            let c = interval(b(rho), 1, 10);
            let and = a.product(&c, BoolOp::And).unwrap();
            assert_represents(&and, 5, |z| z[0] > int(1) && z[0] < int(6));
            let xor = a.product(&c, BoolOp::Xor).unwrap();
            let in_a = |v: &BigInt| *v > int(-3) && *v < int(6);
            let in_c = |v: &BigInt| *v > int(1) && *v < int(10);
            assert_represents(&xor, 5, |z| in_a(&z[0]) != in_c(&z[0]));
        }
    }

    #[test]
    fn product_rejects_mismatched_operands() {
        let a = Dwa::constant(1, b(2), true);
        assert!(a.product(&Dwa::constant(2, b(2), true), BoolOp::And).is_err());
        assert!(a.product(&Dwa::constant(1, b(3), true), BoolOp::And).is_err());
    }

    #[test]
    fn complement_of_interval() {
        let a = interval(b(2), -2, 3);
        let c = a.complement_set();
        assert!(c.is_set_normal());
        assert_represents(&c, 6, |z| !(z[0] > int(-2) && z[0] < int(3)));
    }

    #[test]
    fn cylindrify_adds_free_track() {
        let a = interval(b(2), 0, 4);
        for track in 0..=1 {
            let c = a.cylindrify(track).unwrap();
            assert_eq!(c.arity(), 2);
            let kept = 1 - track;
            assert_represents(&c, 4, |z| z[kept] > int(0) && z[kept] < int(4));
        }
        assert!(a.cylindrify(2).is_err());
    }

    #[test]
    fn permute_swaps_tracks() {
        let a = interval(b(2), 0, 4).cylindrify(1).unwrap();
        let p = a.permute_tracks(&[1, 0]).unwrap();
        assert_represents(&p, 4, |z| z[1] > int(0) && z[1] < int(4));
        assert!(a.permute_tracks(&[0, 0]).is_err());
    }

    #[test]
    fn projection_needs_sign_extension() {
        // {(x, y) : x ∈ (0, 9), y = 0}: projecting x must still accept the
        // one-letter word for y = 0 even though x needs more digits.
        let base = b(2);
        let x = interval(base, 0, 9).cylindrify(1).unwrap();
        let y = interval(base, -1, 1).cylindrify(0).unwrap();
        let both = x.product(&y, BoolOp::And).unwrap();
        let proj = both.exists(0).unwrap();
        assert_represents(&proj, 5, |z| z[0].is_zero());
        let nfa = both.project_exists(0).unwrap();
        let w = crate::encoding::TupleWord::from_digits(base, &[0]).unwrap();
        assert!(nfa.membership(&w).unwrap());
    }

    #[test]
    fn projection_to_arity_zero() {
        let base = b(3);
        let a = interval(base, 4, 7);
        let t = a.exists(0).unwrap();
        assert_eq!(t.arity(), 0);
        assert_represents(&t, 3, |_| true);
        let f = interval(base, 4, 5).exists(0).unwrap();
        assert_represents(&f, 3, |_| false);
    }

    #[test]
    fn forall_is_dual() {
        let base = b(2);
        // ∀y. (x ∈ (0, 5) ∨ y ≠ y) on x-track 0, y-track 1.
        let a = interval(base, 0, 5).cylindrify(1).unwrap();
        let all = a.forall(1).unwrap();
        assert_represents(&all, 5, |z| z[0] > int(0) && z[0] < int(5));
    }

    #[test]
    fn determinize_respects_limit() {
        let base = b(2);
        let x = interval(base, -20, 20).cylindrify(1).unwrap();
        let nfa = x.project_exists(0).unwrap();
        assert!(matches!(
            nfa.determinize(Some(1)),
            Err(AutomatonError::TooLarge { limit: 1 })
        ));
        assert!(nfa.determinize(None).is_ok());
    }
}
