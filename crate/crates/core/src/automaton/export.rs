use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{AutomatonError, Dwa, StateId};
use crate::encoding::Base;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionJson {
    pub from: StateId,
    pub letter: Vec<u32>,
    pub to: StateId,
}

/// Serialized form of a [`Dwa`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DwaJson {
    pub arity: usize,
    pub base: Base,
    pub states: usize,
    pub initial: StateId,
    pub accepting: Vec<StateId>,
    pub transitions: Vec<TransitionJson>,
}

impl Dwa {
    pub fn to_json(&self) -> DwaJson {
        let mut transitions = Vec::with_capacity(self.delta.len());
        for q in 0..self.num_states() as StateId {
            for (a, &to) in self.row(q).iter().enumerate() {
                transitions.push(TransitionJson {
                    from: q,
                    letter: self.base.letter_digits(a, self.arity),
                    to,
                });
            }
        }
        DwaJson {
            arity: self.arity,
            base: self.base,
            states: self.num_states(),
            initial: self.initial,
            accepting: (0..self.num_states() as StateId)
                .filter(|&q| self.is_accepting(q))
                .collect(),
            transitions,
        }
    }

    pub fn from_json(json: &DwaJson) -> Result<Dwa, AutomatonError> {
        let alphabet = json.base.alphabet_size(json.arity);
        let unset = StateId::MAX;
        let mut delta = vec![unset; json.states * alphabet];
        for t in &json.transitions {
            if t.letter.len() != json.arity || t.letter.iter().any(|&d| d >= json.base.get()) {
                return Err(AutomatonError::Malformed(format!(
                    "bad letter {:?}",
                    t.letter
                )));
            }
            if t.from as usize >= json.states {
                return Err(AutomatonError::Malformed(format!("bad state {}", t.from)));
            }
            delta[t.from as usize * alphabet + json.base.letter_index(&t.letter)] = t.to;
        }
        if delta.contains(&unset) {
            return Err(AutomatonError::Malformed("transition table is not total".into()));
        }
        let mut accepting = vec![false; json.states];
        for &q in &json.accepting {
            *accepting
                .get_mut(q as usize)
                .ok_or_else(|| AutomatonError::Malformed(format!("bad state {q}")))? = true;
        }
        Dwa::from_table(json.arity, json.base, delta, json.initial, accepting)
    }

    /// Graphviz rendering. Edges between the same pair of states are merged
    /// and labelled with letter patterns, `-` standing for any digit.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dwa {\n");
        for q in 0..self.num_states() as StateId {
            let shape = if self.is_accepting(q) {
                "doublecircle"
            } else {
                "circle"
            };
            let initial = if q == self.initial { ", style=bold" } else { "" };
            let _ = writeln!(out, "  {q} [shape={shape}{initial}];");
        }
        for q in 0..self.num_states() as StateId {
            let mut by_target: BTreeMap<StateId, Vec<usize>> = BTreeMap::new();
            for (a, &t) in self.row(q).iter().enumerate() {
                by_target.entry(t).or_default().push(a);
            }
            for (t, letters) in by_target {
                let label = self.letter_patterns(&letters).join("\\n");
                let _ = writeln!(out, "  {q} -> {t} [label=\"{label}\"];");
            }
        }
        out.push('}');
        out.push('\n');
        out
    }

    /// Covers a set of letters by patterns in which a track may be `-`.
    fn letter_patterns(&self, letters: &[usize]) -> Vec<String> {
        let rho = self.base.get();
        let mut patterns: Vec<Vec<Option<u32>>> = letters
            .iter()
            .map(|&a| {
                self.base
                    .letter_digits(a, self.arity)
                    .into_iter()
                    .map(Some)
                    .collect()
            })
            .collect();
        for track in 0..self.arity {
            let mut groups: BTreeMap<Vec<Option<u32>>, Vec<u32>> = BTreeMap::new();
            let mut rest = Vec::new();
            for p in patterns {
                match p[track] {
                    Some(d) => {
                        let mut key = p.clone();
                        key[track] = None;
                        groups.entry(key).or_default().push(d);
                    }
                    None => rest.push(p),
                }
            }
            for (key, digits) in groups {
                if digits.len() == rho as usize {
                    rest.push(key);
                } else {
                    for d in digits {
                        let mut p = key.clone();
                        p[track] = Some(d);
                        rest.push(p);
                    }
                }
            }
            rest.sort();
            patterns = rest;
        }
        if self.arity == 0 {
            return vec!["()".into()];
        }
        patterns
            .iter()
            .map(|p| {
                p.iter()
                    .map(|d| d.map_or("-".to_string(), |d| d.to_string()))
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;

    #[test]
    fn json_round_trip() {
        for rho in [2, 3] {
            let a = interval(Base::new(rho).unwrap(), -3, 5).cylindrify(1).unwrap();
            let json = a.to_json();
            let text = serde_json::to_string(&json).unwrap();
            let back: DwaJson = serde_json::from_str(&text).unwrap();
            assert_eq!(Dwa::from_json(&back).unwrap(), a);
        }
    }

    #[test]
    fn json_rejects_partial_tables() {
        let a = Dwa::constant(1, Base::BINARY, true);
        let mut json = a.to_json();
        json.transitions.pop();
        assert!(Dwa::from_json(&json).is_err());
    }

    #[test]
    fn dot_of_single_state() {
        let a = Dwa::from_fn(2, Base::BINARY, 1, 0, vec![true], |_, _| 0);
        let dot = a.to_dot();
        assert_eq!(dot.lines().count(), 4);
        assert!(dot.contains("0 -> 0 [label=\"-,-\"]"));
        assert!(dot.contains("style=bold"));
    }

    #[test]
    fn dot_patterns_cover_exactly() {
        let base = Base::new(3).unwrap();
        let a = Dwa::from_fn(2, base, 2, 0, vec![false, true], |_, a| {
            // letters with first digit 0 or (1, 2) go to state 1
            let d = base.letter_digits(a, 2);
            (d[0] == 0 || d == [1, 2]) as StateId
        });
        let dot = a.to_dot();
        assert!(dot.contains("0 -> 1 [label=\"0,-\\n1,2\"]"), "{dot}");
    }

    #[test]
    fn dot_arity_zero() {
        let a = Dwa::constant(0, Base::BINARY, true);
        assert!(a.to_dot().contains("[label=\"()\"]"));
    }
}
