use std::collections::{HashMap, VecDeque};

use super::{Dwa, StateId};

impl Dwa {
    /// Removes unreachable states and numbers the rest in breadth-first
    /// order from the initial state, scanning letters by index.
    pub fn canonical_renumbering(&self) -> Dwa {
        let n = self.num_states();
        let mut order = Vec::with_capacity(n);
        let mut id = vec![StateId::MAX; n];
        let mut queue = VecDeque::from([self.initial]);
        id[self.initial as usize] = 0;
        order.push(self.initial);
        while let Some(q) = queue.pop_front() {
            for &t in self.row(q) {
                if id[t as usize] == StateId::MAX {
                    id[t as usize] = order.len() as StateId;
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
        let mut delta = Vec::with_capacity(order.len() * self.alphabet);
        for &q in &order {
            delta.extend(self.row(q).iter().map(|&t| id[t as usize]));
        }
        Dwa {
            arity: self.arity,
            base: self.base,
            alphabet: self.alphabet,
            delta,
            initial: 0,
            accepting: order.iter().map(|&q| self.is_accepting(q)).collect(),
        }
    }

    /// The minimal automaton for the same word language, in canonical
    /// numbering. Two minimal automata for one language are therefore equal.
    pub fn minimize(&self) -> Dwa {
        let trimmed = self.canonical_renumbering();
        let n = trimmed.num_states();
        let mut class: Vec<u32> = trimmed.accepting.iter().map(|&a| a as u32).collect();
        let mut count = {
            let mut c = class.clone();
            c.sort_unstable();
            c.dedup();
            c.len()
        };
        loop {
            let mut ids: HashMap<Vec<u32>, u32> = HashMap::with_capacity(count * 2);
            let mut next = Vec::with_capacity(n);
            let mut signature = Vec::with_capacity(trimmed.alphabet + 1);
            for q in 0..n {
                signature.clear();
                signature.push(class[q]);
                signature.extend(trimmed.row(q as StateId).iter().map(|&t| class[t as usize]));
                let fresh = ids.len() as u32;
                let id = *ids.entry(signature.clone()).or_insert(fresh);
                next.push(id);
            }
            let new_count = ids.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        let mut delta = vec![0; count * trimmed.alphabet];
        let mut accepting = vec![false; count];
        for q in 0..n {
            let c = class[q] as usize;
            accepting[c] = trimmed.accepting[q];
            for (a, &t) in trimmed.row(q as StateId).iter().enumerate() {
                delta[c * trimmed.alphabet + a] = class[t as usize];
            }
        }
        Dwa {
            arity: trimmed.arity,
            base: trimmed.base,
            alphabet: trimmed.alphabet,
            delta,
            initial: class[0],
            accepting,
        }
        .canonical_renumbering()
    }
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;

    use super::super::testutil::*;
    use super::super::BoolOp;
    use super::*;
    use crate::encoding::Base;

    #[test]
    fn minimize_preserves_language_and_is_idempotent() {
        for rho in [2, 3] {
            let base = Base::new(rho).unwrap();
            let a = interval(base, -5, 7);
            let m = a.minimize();
            assert!(m.num_states() <= a.num_states());
            assert_represents(&m, 5, |z| z[0] > BigInt::from(-5) && z[0] < BigInt::from(7));
            assert_eq!(m.minimize(), m);
        }
    }

    #[test]
    fn minimal_automata_of_equal_languages_coincide() {
        let base = Base::new(2).unwrap();
        let a = interval(base, 0, 6);
        let c = interval(base, -3, 6)
            .product(&interval(base, 0, 100), BoolOp::And)
            .unwrap();
        assert_ne!(a.num_states(), c.num_states());
        assert_eq!(a.minimize(), c.minimize());
    }

    #[test]
    fn constant_true_minimizes_to_two_states() {
        let base = Base::new(2).unwrap();
        let t = Dwa::constant(2, base, true);
        assert_eq!(t.minimize().num_states(), 2);
        let f = Dwa::constant(2, base, false);
        assert_eq!(f.minimize().num_states(), 1);
    }

    #[test]
    fn renumbering_drops_unreachable_states() {
        let base = Base::new(2).unwrap();
        let a = Dwa::from_fn(1, base, 3, 2, vec![false, true, false], |q, _| {
            if q == 2 {
                1
            } else {
                q
            }
        });
        let r = a.canonical_renumbering();
        assert_eq!(r.num_states(), 2);
        assert_eq!(r.initial(), 0);
    }
}
