//! Seeded random formulas for cross-checking the two engines.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{crosscheck, CompileOptions, CrosscheckReport, EngineError, Fault};
use crate::encoding::Base;
use crate::formula::{cmp, div, metrics, Formula, LinearTerm, Rel, VarId};
use crate::qelim::is_prenex;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusConfig {
    pub seed: u64,
    pub count: usize,
    pub grid_radius: i64,
    pub max_grid_vars: usize,
    pub fault: Fault,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            seed: 0x5eed,
            count: 60,
            grid_radius: 16,
            max_grid_vars: 3,
            fault: Fault::None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusEntry {
    pub id: usize,
    pub base: Base,
    pub prenex: bool,
    pub qa: u32,
    pub report: CrosscheckReport,
}

impl CorpusEntry {
    pub fn pass(&self) -> bool {
        self.report.all_pass()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusSummary {
    pub seed: u64,
    pub total: usize,
    pub passed: usize,
    pub entries: Vec<CorpusEntry>,
}

impl CorpusSummary {
    pub fn all_pass(&self) -> bool {
        self.passed == self.total
    }
}

const NAMES: [&str; 3] = ["x", "y", "z"];
const RELS: [Rel; 6] = [Rel::Eq, Rel::Ne, Rel::Lt, Rel::Le, Rel::Gt, Rel::Ge];

struct Gen {
    rng: ChaCha8Rng,
    vars: Vec<VarId>,
}

impl Gen {
    /// A random atom over a nonempty subset of `scope` that includes `must`
    /// when given.
    fn atom(&mut self, scope: &[usize], must: Option<usize>) -> Formula {
        let mut chosen: Vec<usize> = scope
            .iter()
            .copied()
            .filter(|_| self.rng.gen_bool(0.5))
            .collect();
        if let Some(m) = must {
            if !chosen.contains(&m) {
                chosen.push(m);
            }
        }
        if chosen.is_empty() {
            chosen.push(*scope.choose(&mut self.rng).expect("nonempty scope"));
        }
        let term = LinearTerm::from_pairs(chosen.iter().map(|&i| {
            let mut k = 0;
            while k == 0 {
                k = self.rng.gen_range(-5..=5);
            }
            (self.vars[i].clone(), BigInt::from(k))
        }));
        if self.rng.gen_bool(0.2) {
            let d = self.rng.gen_range(2..=4);
            let c = self.rng.gen_range(0..d);
            div(BigInt::from(d), term, BigInt::from(c))
        } else {
            let rel = *RELS.choose(&mut self.rng).expect("nonempty");
            cmp(term, rel, BigInt::from(self.rng.gen_range(-8..=8)))
        }
    }

    fn matrix(&mut self, scope: &[usize], must: Option<usize>, depth: u32) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return self.atom(scope, must);
        }
        match self.rng.gen_range(0..5) {
            0 => Formula::not(self.matrix(scope, must, depth - 1)),
            1 => Formula::or(
                self.matrix(scope, must, depth - 1),
                self.matrix(scope, None, depth - 1),
            ),
            2 => Formula::implies(
                self.matrix(scope, None, depth - 1),
                self.matrix(scope, must, depth - 1),
            ),
            _ => Formula::and(
                self.matrix(scope, must, depth - 1),
                self.matrix(scope, None, depth - 1),
            ),
        }
    }

    fn quantify(&mut self, v: usize, body: Formula) -> Formula {
        if self.rng.gen_bool(0.5) {
            Formula::exists(self.vars[v].clone(), body)
        } else {
            Formula::forall(self.vars[v].clone(), body)
        }
    }

    /// `Q1 v1. Q2 v2. matrix`.
    fn prenex(&mut self, free: &[usize], bound: &[usize]) -> Formula {
        let mut scope = free.to_vec();
        scope.extend_from_slice(bound);
        let mut f = self.matrix(&scope, bound.last().copied(), 2);
        for &v in bound.iter().rev() {
            f = self.quantify(v, f);
        }
        f
    }

    /// Quantifiers nested below connectives, each binder used once.
    fn nested(&mut self, scope: &[usize], binders: &[usize], depth: u32) -> Formula {
        if binders.is_empty() || depth == 0 {
            return self.matrix(scope, None, depth.min(1));
        }
        match self.rng.gen_range(0..3) {
            0 => {
                let v = binders[0];
                let mut inner = scope.to_vec();
                inner.push(v);
                let body = Formula::and(
                    self.atom(&inner, Some(v)),
                    self.nested(&inner, &binders[1..], depth - 1),
                );
                let body = if self.rng.gen_bool(0.5) {
                    body
                } else {
                    Formula::or(self.atom(&inner, Some(v)), body)
                };
                self.quantify(v, body)
            }
            1 => Formula::and(
                self.atom(scope, None),
                self.nested(scope, binders, depth - 1),
            ),
            _ => Formula::or(
                self.nested(scope, &binders[..1], depth - 1),
                self.nested(scope, &binders[1..], depth - 1),
            ),
        }
    }
}

/// `count` random formulas over at most three variables with at most two
/// quantifier alternations, `|coefficient| ≤ 5`, `|constant| ≤ 8` and
/// divisors at most 4, each paired with a base in {2, 3}. Every fifth
/// formula is quantifier-free.
pub fn generate_corpus(seed: u64, count: usize) -> Vec<(Formula, Base)> {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
        vars: NAMES
            .iter()
            .enumerate()
            .map(|(i, n)| VarId::new(*n, i))
            .collect(),
    };
    (0..count)
        .map(|i| {
            let mut order = vec![0, 1, 2];
            order.shuffle(&mut g.rng);
            let n_free = g.rng.gen_range(1..=2);
            let (free, rest) = order.split_at(n_free);
            let n_bound = g.rng.gen_range(1..=rest.len());
            let bound = &rest[..n_bound];
            let phi = if i % 5 == 4 {
                g.matrix(&order, None, 3)
            } else if i % 3 == 0 {
                g.nested(free, bound, 3)
            } else {
                g.prenex(free, bound)
            };
            let base = Base::new(2 + (i % 2) as u32).expect("valid base");
            (phi, base)
        })
        .collect()
}

fn check_one(
    id: usize,
    phi: &Formula,
    base: Base,
    config: &CorpusConfig,
) -> Result<CorpusEntry, EngineError> {
    let m = metrics(phi);
    let report = crosscheck(
        phi,
        &CompileOptions::with_base(base),
        config.grid_radius,
        config.max_grid_vars,
        config.fault,
    )?;
    Ok(CorpusEntry {
        id,
        base,
        prenex: is_prenex(phi) && m.qn > 0,
        qa: m.qa,
        report,
    })
}

/// Cross-checks every corpus formula; entries come back in corpus order.
pub fn run_corpus(config: &CorpusConfig) -> Result<CorpusSummary, EngineError> {
    let corpus = generate_corpus(config.seed, config.count);
    let indexed: Vec<(usize, &(Formula, Base))> = corpus.iter().enumerate().collect();
    #[cfg(feature = "parallel")]
    let results: Vec<Result<CorpusEntry, EngineError>> = {
        use rayon::prelude::*;
        indexed
            .par_iter()
            .map(|(i, (phi, base))| check_one(*i, phi, *base, config))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<CorpusEntry, EngineError>> = indexed
        .iter()
        .map(|(i, (phi, base))| check_one(*i, phi, *base, config))
        .collect();
    let entries = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let passed = entries.iter().filter(|e| e.pass()).count();
    Ok(CorpusSummary {
        seed: config.seed,
        total: entries.len(),
        passed,
        entries,
    })
}
