use std::collections::HashMap;

use super::EngineError;
use crate::automaton::{Dwa, StateId};
use crate::encoding::Base;

/// Largest `ρ^(4m)` accepted by [`build_mult`].
pub const MULT_STATE_CAP: u128 = 1 << 22;

/// `MULT_m = {(a, b, c) : 0 ≤ a, b < ρ^m, ab = c}` before minimization.
/// States track the values read so far; leaving the ranges, or a nonzero
/// sign digit, leads to a dead state.
pub fn mult_raw(m: u32, base: Base) -> Result<Dwa, EngineError> {
    let rho = u128::from(base.get());
    let states = rho.saturating_pow(4 * m);
    if states > MULT_STATE_CAP {
        return Err(EngineError::MultTooLarge {
            m,
            states,
            cap: MULT_STATE_CAP,
        });
    }
    let limit_ab = rho.pow(m);
    let limit_c = rho.pow(2 * m);
    let alphabet = base.alphabet_size(3);

    // state 0: initial, 1: dead, then one state per reachable (a, b, c)
    let mut ids: HashMap<(u128, u128, u128), StateId> = HashMap::new();
    let mut values: Vec<(u128, u128, u128)> = Vec::new();
    let mut delta: Vec<StateId> = Vec::new();
    let mut id = |v: (u128, u128, u128), values: &mut Vec<_>| {
        *ids.entry(v).or_insert_with(|| {
            values.push(v);
            (values.len() + 1) as StateId
        })
    };
    let step = |(a, b, c): (u128, u128, u128), digits: &[u32]| {
        let next = (
            a * rho + u128::from(digits[0]),
            b * rho + u128::from(digits[1]),
            c * rho + u128::from(digits[2]),
        );
        (next.0 < limit_ab && next.1 < limit_ab && next.2 < limit_c).then_some(next)
    };

    for l in 0..alphabet {
        let digits = base.letter_digits(l, 3);
        let t = if digits.iter().all(|&d| d == 0) {
            id((0, 0, 0), &mut values)
        } else {
            1
        };
        delta.push(t);
    }
    delta.extend(std::iter::repeat_n(1, alphabet));
    let mut i = 0;
    while i < values.len() {
        let v = values[i];
        for l in 0..alphabet {
            let t = match step(v, &base.letter_digits(l, 3)) {
                Some(next) => id(next, &mut values),
                None => 1,
            };
            delta.push(t);
        }
        i += 1;
    }
    let mut accepting = vec![false, false];
    accepting.extend(values.iter().map(|&(a, b, c)| a * b == c));
    Ok(Dwa::from_table(3, base, delta, 0, accepting)?)
}

/// The minimal automaton for `MULT_m`.
pub fn build_mult(m: u32, base: Base) -> Result<Dwa, EngineError> {
    Ok(mult_raw(m, base)?.minimize())
}
