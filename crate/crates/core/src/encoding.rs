//! Most-significant-digit-first ρ's-complement encoding of integer tuples.
//!
//! A word `b_n b_{n-1} … b_0` over `Σ = {0, …, ρ-1}` denotes
//! `Σ_{i<n} ρ^i b_i` minus `ρ^n` when the sign letter `b_n` is nonzero.
//! Tuples are encoded track-wise over the alphabet `Σ^r`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodingError {
    #[error("base must be at least 2, got {0}")]
    InvalidBase(u32),
    #[error("the empty word does not represent an integer tuple")]
    EmptyWord,
    #[error("digit {digit} out of range for base {base}")]
    DigitOutOfRange { digit: u32, base: u32 },
    #[error("expected letters of arity {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("malformed word: {0}")]
    Syntax(String),
}

/// Numeration base `ρ ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Base(u32);

impl Base {
    pub const BINARY: Base = Base(2);

    pub fn new(rho: u32) -> Result<Base, EncodingError> {
        if rho >= 2 {
            Ok(Base(rho))
        } else {
            Err(EncodingError::InvalidBase(rho))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// The digit a nonzero sign digit is canonicalized to.
    pub fn top_digit(self) -> u32 {
        self.0 - 1
    }

    /// Number of letters of `Σ^arity`.
    pub fn alphabet_size(self, arity: usize) -> usize {
        (self.0 as usize).pow(arity as u32)
    }

    /// Index of a letter; the first track is the most significant position,
    /// so index order coincides with lexicographic order of digit tuples.
    pub fn letter_index(self, digits: &[u32]) -> usize {
        digits
            .iter()
            .fold(0usize, |acc, &d| acc * self.0 as usize + d as usize)
    }

    /// Digits of the letter with the given index.
    pub fn letter_digits(self, mut index: usize, arity: usize) -> Vec<u32> {
        let rho = self.0 as usize;
        let mut out = vec![0; arity];
        for slot in out.iter_mut().rev() {
            *slot = (index % rho) as u32;
            index /= rho;
        }
        out
    }

    /// Maps every nonzero digit of a sign letter to `ρ-1`.
    pub fn canonical_sign(self, digits: &[u32]) -> Vec<u32> {
        digits
            .iter()
            .map(|&d| if d == 0 { 0 } else { self.top_digit() })
            .collect()
    }
}

impl TryFrom<u32> for Base {
    type Error = EncodingError;
    fn try_from(rho: u32) -> Result<Self, Self::Error> {
        Base::new(rho)
    }
}

impl From<Base> for u32 {
    fn from(b: Base) -> u32 {
        b.0
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A word over `Σ^r`, stored letter by letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TupleWord {
    arity: usize,
    letters: Vec<Vec<u32>>,
}

impl TupleWord {
    pub fn empty(arity: usize) -> Self {
        TupleWord {
            arity,
            letters: Vec::new(),
        }
    }

    pub fn new(base: Base, arity: usize, letters: Vec<Vec<u32>>) -> Result<Self, EncodingError> {
        for l in &letters {
            if l.len() != arity {
                return Err(EncodingError::ArityMismatch {
                    expected: arity,
                    found: l.len(),
                });
            }
            if let Some(&digit) = l.iter().find(|&&d| d >= base.get()) {
                return Err(EncodingError::DigitOutOfRange {
                    digit,
                    base: base.get(),
                });
            }
        }
        Ok(TupleWord { arity, letters })
    }

    /// A single-track word from its digits.
    pub fn from_digits(base: Base, digits: &[u32]) -> Result<Self, EncodingError> {
        Self::new(base, 1, digits.iter().map(|&d| vec![d]).collect())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Vec<u32>] {
        &self.letters
    }

    pub fn push(&mut self, letter: Vec<u32>) {
        debug_assert_eq!(letter.len(), self.arity);
        self.letters.push(letter);
    }

    /// Parses the `0,1;1,1` syntax (digits of a letter joined by `,`,
    /// letters joined by `;`). Arity-0 letters are written `()`.
    pub fn parse(base: Base, text: &str) -> Result<Self, EncodingError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(EncodingError::Syntax("no letters".into()));
        }
        let mut letters = Vec::new();
        for chunk in text.split(';') {
            let chunk = chunk.trim();
            if chunk == "()" {
                letters.push(Vec::new());
                continue;
            }
            let letter = chunk
                .split(',')
                .map(|d| {
                    d.trim()
                        .parse::<u32>()
                        .map_err(|_| EncodingError::Syntax(format!("bad digit `{d}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            letters.push(letter);
        }
        let arity = letters[0].len();
        Self::new(base, arity, letters)
    }
}

impl fmt::Display for TupleWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            if l.is_empty() {
                f.write_str("()")?;
            }
            for (j, d) in l.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{d}")?;
            }
        }
        Ok(())
    }
}

/// Per-track base-ρ value of the word read as natural numbers.
pub fn decode_nat(base: Base, w: &TupleWord) -> Vec<BigInt> {
    let rho = BigInt::from(base.get());
    let mut acc = vec![BigInt::zero(); w.arity];
    for letter in &w.letters {
        for (a, &d) in acc.iter_mut().zip(letter) {
            *a = &*a * &rho + d;
        }
    }
    acc
}

/// Per-track ρ's-complement value; the first letter is the sign letter.
pub fn decode_int(base: Base, w: &TupleWord) -> Result<Vec<BigInt>, EncodingError> {
    let (sign, rest) = w.letters.split_first().ok_or(EncodingError::EmptyWord)?;
    let tail = TupleWord {
        arity: w.arity,
        letters: rest.to_vec(),
    };
    let weight = BigInt::from(base.get()).pow(rest.len() as u32);
    Ok(decode_nat(base, &tail)
        .into_iter()
        .zip(sign)
        .map(|(v, &s)| if s == 0 { v } else { v - &weight })
        .collect())
}

/// `σ(b)`: 0 for a zero coordinate, -1 otherwise.
pub fn sign_vector(letter: &[u32]) -> Vec<i64> {
    letter.iter().map(|&d| if d == 0 { 0 } else { -1 }).collect()
}

/// Number of digits `n` after the sign letter needed for `z`:
/// `0 ≤ z < ρ^n` or `-ρ^n ≤ z < 0`.
fn digits_needed(base: Base, z: &BigInt) -> usize {
    let rho = BigInt::from(base.get());
    let mut n = 0;
    let mut bound = BigInt::one();
    if z.is_negative() {
        while *z < -&bound {
            bound *= &rho;
            n += 1;
        }
    } else {
        while *z >= bound {
            bound *= &rho;
            n += 1;
        }
    }
    n
}

/// The shortest word with a sign letter in `{0, ρ-1}^r` denoting `z`.
pub fn encode_int(base: Base, z: &[BigInt]) -> TupleWord {
    let n = z.iter().map(|v| digits_needed(base, v)).max().unwrap_or(0);
    let rho = BigInt::from(base.get());
    let weight = rho.pow(n as u32);
    let mut letters = vec![vec![0u32; z.len()]; n + 1];
    for (track, v) in z.iter().enumerate() {
        let (sign, mut rest) = if v.is_negative() {
            (base.top_digit(), v + &weight)
        } else {
            (0, v.clone())
        };
        letters[0][track] = sign;
        for i in (1..=n).rev() {
            let (q, r) = rest.div_mod_floor(&rho);
            letters[i][track] = u32::try_from(&r).expect("digit fits");
            rest = q;
        }
    }
    TupleWord {
        arity: z.len(),
        letters,
    }
}

/// Canonicalizes the sign letter and prepends `k` copies of it.
pub fn sign_extend(base: Base, w: &TupleWord, k: usize) -> Result<TupleWord, EncodingError> {
    let (sign, rest) = w.letters.split_first().ok_or(EncodingError::EmptyWord)?;
    let canon = base.canonical_sign(sign);
    let mut letters = vec![canon; k + 1];
    letters.extend(rest.iter().cloned());
    Ok(TupleWord {
        arity: w.arity,
        letters,
    })
}
