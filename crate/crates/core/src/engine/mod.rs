//! Compilation of formulas into automata, decision and witness search.

mod corpus;
mod mult;
mod report;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atoms::{build_atom_over, AtomError};
use crate::automaton::{AutomatonError, BoolOp, Dwa};
use crate::encoding::{decode_int, Base, EncodingError};
use crate::formula::{Formula, VarId};
use crate::qelim::{eliminate_all, eval_qf};

pub use corpus::{generate_corpus, run_corpus, CorpusConfig, CorpusEntry, CorpusSummary};
pub use mult::{build_mult, mult_raw, MULT_STATE_CAP};
pub use report::{crosscheck, size_report, CrosscheckReport, Fault, SizeLedger, StepSize, Verdict};

/// Subset construction gives up beyond this many states.
pub const DETERMINIZE_LIMIT: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Atom(#[from] AtomError),
    #[error(transparent)]
    Encoding(#[from] EncodingError),
    #[error("not a sentence: free variables {0:?}")]
    FreeVariables(Vec<String>),
    #[error("variable order does not cover free variable `{0}`")]
    VariableOrder(String),
    #[error("MULT_{m} needs up to {states} states, more than the cap {cap}")]
    MultTooLarge { m: u32, states: u128, cap: u128 },
    #[error("witness {0} does not satisfy the formula")]
    BadWitness(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineKind {
    /// Compile the formula directly.
    #[default]
    Automata,
    /// Eliminate quantifiers first, then compile the quantifier-free result.
    QeThenAutomata,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompileOptions {
    pub base: Base,
    pub minimize_each_step: bool,
    pub engine: EngineKind,
    /// Track order; defaults to the free variables in order of occurrence.
    pub variable_order: Option<Vec<VarId>>,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            base: Base::BINARY,
            minimize_each_step: true,
            engine: EngineKind::Automata,
            variable_order: None,
        }
    }
}

impl CompileOptions {
    pub fn with_base(base: Base) -> Self {
        CompileOptions {
            base,
            ..CompileOptions::default()
        }
    }

    pub fn with_engine(&self, engine: EngineKind) -> Self {
        CompileOptions {
            engine,
            ..self.clone()
        }
    }

    /// The tracks of the result for `phi`.
    pub fn tracks_for(&self, phi: &Formula) -> Result<Vec<VarId>, EngineError> {
        let free = phi.free_vars();
        match &self.variable_order {
            None => Ok(free.into_iter().collect()),
            Some(order) => {
                if let Some(v) = free.iter().find(|v| !order.contains(v)) {
                    return Err(EngineError::VariableOrder(v.name.clone()));
                }
                Ok(order.clone())
            }
        }
    }
}

/// The automaton for `phi` together with the sizes seen while building it.
#[derive(Debug, Clone)]
pub struct Compiled {
    pub dwa: Dwa,
    pub tracks: Vec<VarId>,
    pub steps: Vec<StepSize>,
}

struct Compiler<'a> {
    opts: &'a CompileOptions,
    steps: Vec<StepSize>,
}

impl Compiler<'_> {
    fn finish(&mut self, kind: &str, f: &Formula, raw: Dwa) -> Dwa {
        let raw_states = raw.num_states();
        let out = if self.opts.minimize_each_step {
            raw.minimize()
        } else {
            raw
        };
        self.steps.push(StepSize {
            kind: kind.to_string(),
            subformula: f.to_string(),
            raw_states,
            states: out.num_states(),
        });
        out
    }

    /// Compiles `f` over exactly `tracks`, which lists the free variables
    /// of `f`.
    fn go(&mut self, f: &Formula, tracks: &[VarId]) -> Result<Dwa, EngineError> {
        let base = self.opts.base;
        match f {
            Formula::True | Formula::False => Ok(Dwa::constant(
                tracks.len(),
                base,
                matches!(f, Formula::True),
            )),
            Formula::Atom(a) => {
                let raw = build_atom_over(a, base, tracks)?;
                Ok(self.finish("atom", f, raw))
            }
            Formula::Not(a) => {
                let inner = self.go(a, tracks)?;
                Ok(self.finish("not", f, inner.complement_set()))
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                let op = match f {
                    Formula::And(..) => BoolOp::And,
                    Formula::Or(..) => BoolOp::Or,
                    Formula::Implies(..) => BoolOp::Implies,
                    _ => BoolOp::Iff,
                };
                let left = self.operand(a, tracks)?;
                let right = self.operand(b, tracks)?;
                let raw = left.product(&right, op)?.reject_empty_word();
                Ok(self.finish(op_name(op), f, raw))
            }
            Formula::Exists(x, body) | Formula::Forall(x, body) => {
                if !body.free_vars().contains(x) {
                    return self.go(body, tracks);
                }
                let mut inner = tracks.to_vec();
                inner.push(x.clone());
                let track = tracks.len();
                let body = self.go(body, &inner)?;
                let (kind, raw) = if matches!(f, Formula::Exists(..)) {
                    ("exists", self.project(&body, track)?)
                } else {
                    let negated = self.project(&body.complement_set(), track)?;
                    ("forall", negated.complement_set())
                };
                Ok(self.finish(kind, f, raw))
            }
        }
    }

    fn project(&self, a: &Dwa, track: usize) -> Result<Dwa, EngineError> {
        let d = a.project_exists(track)?.determinize(Some(DETERMINIZE_LIMIT))?;
        Ok(if self.opts.minimize_each_step {
            d.minimize()
        } else {
            d
        })
    }

    /// Compiles a subformula over its own free variables and cylindrifies
    /// it to `tracks`.
    fn operand(&mut self, f: &Formula, tracks: &[VarId]) -> Result<Dwa, EngineError> {
        let free = f.free_vars();
        let own: Vec<VarId> = tracks.iter().filter(|v| free.contains(v)).cloned().collect();
        let a = self.go(f, &own)?;
        cylindrify_to(a, &own, tracks)
    }
}

fn op_name(op: BoolOp) -> &'static str {
    match op {
        BoolOp::And => "and",
        BoolOp::Or => "or",
        BoolOp::Implies => "implies",
        BoolOp::Iff => "iff",
        BoolOp::Xor => "xor",
        BoolOp::Diff => "diff",
    }
}

/// Adds ignored tracks so an automaton over `own` (a subsequence of
/// `tracks`) reads `tracks`.
fn cylindrify_to(mut a: Dwa, own: &[VarId], tracks: &[VarId]) -> Result<Dwa, EngineError> {
    for (i, v) in tracks.iter().enumerate() {
        if !own.contains(v) {
            a = a.cylindrify(i)?;
        }
    }
    Ok(a)
}

/// Compiles `phi` with the selected engine and records intermediate sizes.
pub fn compile_traced(phi: &Formula, opts: &CompileOptions) -> Result<Compiled, EngineError> {
    let tracks = opts.tracks_for(phi)?;
    let target = match opts.engine {
        EngineKind::Automata => phi.rename_apart(),
        EngineKind::QeThenAutomata => eliminate_all(&phi.rename_apart()),
    };
    let free = target.free_vars();
    let own: Vec<VarId> = tracks.iter().filter(|v| free.contains(v)).cloned().collect();
    let mut compiler = Compiler {
        opts,
        steps: Vec::new(),
    };
    let dwa = compiler.go(&target, &own)?;
    let dwa = cylindrify_to(dwa, &own, &tracks)?.minimize();
    Ok(Compiled {
        dwa,
        tracks,
        steps: compiler.steps,
    })
}

/// The minimal automaton representing the solutions of `phi` over
/// `opts.tracks_for(phi)`.
pub fn compile(phi: &Formula, opts: &CompileOptions) -> Result<Dwa, EngineError> {
    Ok(compile_traced(phi, opts)?.dwa)
}

/// Truth value of a sentence.
pub fn decide(sentence: &Formula, opts: &CompileOptions) -> Result<bool, EngineError> {
    let free = sentence.free_vars();
    if !free.is_empty() {
        return Err(EngineError::FreeVariables(
            free.into_iter().map(|v| v.name).collect(),
        ));
    }
    let opts = CompileOptions {
        variable_order: None,
        ..opts.clone()
    };
    Ok(!compile(sentence, &opts)?.is_empty_nonlambda())
}

/// A satisfying assignment decoded from a shortest accepted word, or
/// `None` when `phi` is unsatisfiable. Quantifier-free results are
/// re-checked arithmetically.
pub fn solve(
    phi: &Formula,
    opts: &CompileOptions,
) -> Result<Option<BTreeMap<VarId, BigInt>>, EngineError> {
    let compiled = compile_traced(phi, opts)?;
    let Some(word) = compiled.dwa.find_witness() else {
        return Ok(None);
    };
    let values = decode_int(opts.base, &word)?;
    let assignment: BTreeMap<VarId, BigInt> =
        compiled.tracks.iter().cloned().zip(values).collect();
    if phi.is_quantifier_free() && !eval_qf(phi, &assignment).unwrap_or(false) {
        return Err(EngineError::BadWitness(format_assignment(&assignment)));
    }
    Ok(Some(assignment))
}

pub fn format_assignment(assignment: &BTreeMap<VarId, BigInt>) -> String {
    assignment
        .iter()
        .map(|(v, x)| format!("{v} = {x}"))
        .collect::<Vec<_>>()
        .join(", ")
}
