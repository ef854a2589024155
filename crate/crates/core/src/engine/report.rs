use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::Signed;
use serde::Serialize;

use super::{compile_traced, CompileOptions, EngineError, EngineKind};
use crate::automaton::Dwa;
use crate::bounds::{BoundCheck, BoundValue, DEFAULT_CAP_BITS};
use crate::encoding::decode_int;
use crate::formula::{metrics, Atom, Formula, VarId};
use crate::qelim::{check_bounds, eliminate_all_traced, eval_qf, QeTrace};

/// Sizes of the automaton built for one subformula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepSize {
    pub kind: String,
    pub subformula: String,
    pub raw_states: usize,
    pub states: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SizeLedger {
    pub formula: String,
    pub steps: Vec<StepSize>,
    pub final_states: usize,
    /// `2^(n^((qbl+1)^(qa+4)))`.
    pub theorem_bound: BoundValue,
    pub bounds: Vec<BoundCheck>,
}

impl SizeLedger {
    pub fn all_pass(&self) -> bool {
        self.bounds.iter().all(|b| b.pass)
    }
}

/// `2^(n^((qbl+1)^(qa+4)))` for the length `n` of `phi`.
pub fn theorem_bound(phi: &Formula) -> BoundValue {
    let cap = DEFAULT_CAP_BITS;
    let m = metrics(phi);
    let n = BoundValue::from_u64(m.length);
    let exp = BoundValue::from_u64(u64::from(m.qbl) + 1)
        .pow(&BoundValue::from_u64(u64::from(m.qa) + 4), cap);
    BoundValue::from_u64(2).pow(&n.pow(&exp, cap), cap)
}

/// `(2+2ℓ)^|T| · ℓ'^|D|` for quantifier-free `phi`, where `ℓ` exceeds every
/// norm and constant of the comparisons and `ℓ'` every divisor. Without
/// comparisons the first factor counts as `4` so that constant automata
/// are covered.
pub fn qf_bound(phi: &Formula) -> BoundValue {
    let cap = DEFAULT_CAP_BITS;
    let mut terms = std::collections::BTreeSet::new();
    let mut divs = std::collections::BTreeSet::new();
    let mut ell = BigInt::from(0);
    let mut ell_div = BigInt::from(0);
    phi.for_each_atom(&mut |a| match a {
        Atom::Cmp { term, constant, .. } => {
            terms.insert(term.clone());
            ell = ell
                .clone()
                .max(term.norm_neg())
                .max(term.norm_pos())
                .max(constant.abs());
        }
        Atom::Div { divisor, term, .. } => {
            divs.insert((divisor.clone(), term.clone()));
            ell_div = ell_div.clone().max(divisor.clone());
        }
    });
    let value = |v: BigInt| BoundValue::Exact(v.magnitude().clone());
    let t_factor = if terms.is_empty() && divs.is_empty() {
        BoundValue::from_u64(4)
    } else {
        value(2 + 2 * (ell + 1)).pow(&BoundValue::from_u64(terms.len() as u64), cap)
    };
    let d_factor = value(ell_div + 1).pow(&BoundValue::from_u64(divs.len() as u64), cap);
    t_factor.mul(&d_factor, cap)
}

/// Compiles `phi` and compares the minimal size with the applicable bounds.
pub fn size_report(phi: &Formula, opts: &CompileOptions) -> Result<SizeLedger, EngineError> {
    let compiled = compile_traced(phi, opts)?;
    let final_states = compiled.dwa.num_states();
    let measured = BigUint::from(final_states);
    let theorem = theorem_bound(phi);
    let mut bounds = vec![BoundCheck::new(
        "states <= 2^(n^((qbl+1)^(qa+4)))",
        measured.clone(),
        theorem.clone(),
        false,
    )];
    if phi.is_quantifier_free() {
        bounds.push(BoundCheck::new(
            "states <= (2+2l)^|T| * l'^|D|",
            measured,
            qf_bound(phi),
            false,
        ));
    }
    Ok(SizeLedger {
        formula: phi.to_string(),
        steps: compiled.steps,
        final_states,
        theorem_bound: theorem,
        bounds,
    })
}

/// Deliberate corruption of the direct engine's result, for testing that
/// the cross-check notices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Flip acceptance of the first non-initial state.
    FlipAccepting,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    fn new(name: &str, pass: bool, detail: impl Into<String>) -> Verdict {
        Verdict {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrosscheckReport {
    pub formula: String,
    pub qe_formula: String,
    pub engine_sizes: BTreeMap<String, usize>,
    pub bounds: Vec<BoundCheck>,
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<QeTrace>,
}

impl CrosscheckReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }
}

fn corrupt(a: &Dwa) -> Dwa {
    let victim = (0..a.num_states() as u32).find(|&q| q != a.initial());
    let accepting: Vec<bool> = (0..a.num_states() as u32)
        .map(|q| a.is_accepting(q) ^ (Some(q) == victim))
        .collect();
    Dwa::from_fn(a.arity(), a.base(), a.num_states(), a.initial(), accepting, |q, l| {
        a.step(q, l)
    })
}

/// Iterates the integer points of `[-radius, radius]^dim`.
fn for_each_point(dim: usize, radius: i64, mut f: impl FnMut(&[i64]) -> bool) {
    let mut point = vec![-radius; dim];
    loop {
        if !f(&point) {
            return;
        }
        let mut i = 0;
        while i < dim && point[i] == radius {
            point[i] = -radius;
            i += 1;
        }
        if i == dim {
            return;
        }
        point[i] += 1;
    }
}

/// Compiles `phi` with both engines and checks that the automata are
/// equivalent, that the direct automaton agrees with the quantifier-free
/// result on every point of `[-grid_radius, grid_radius]^r` (skipped when
/// `r > max_grid_vars`), and that sizes respect their bounds.
pub fn crosscheck(
    phi: &Formula,
    opts: &CompileOptions,
    grid_radius: i64,
    max_grid_vars: usize,
    fault: Fault,
) -> Result<CrosscheckReport, EngineError> {
    let direct = compile_traced(phi, &opts.with_engine(EngineKind::Automata))?;
    let (psi, trace) = eliminate_all_traced(&phi.rename_apart());
    let via_qe = compile_traced(&psi, &CompileOptions {
        variable_order: Some(direct.tracks.clone()),
        ..opts.with_engine(EngineKind::Automata)
    })?;
    let automata = match fault {
        Fault::None => direct.dwa.clone(),
        Fault::FlipAccepting => corrupt(&direct.dwa),
    };

    let mut engine_sizes = BTreeMap::new();
    engine_sizes.insert("automata".to_string(), automata.num_states());
    engine_sizes.insert("qe_then_automata".to_string(), via_qe.dwa.num_states());

    let mut verdicts = Vec::new();
    match automata.distinguishing_word(&via_qe.dwa)? {
        None => verdicts.push(Verdict::new("engines_equivalent", true, "same language")),
        Some(w) => {
            let values = decode_int(opts.base, &w)
                .map(|v| {
                    v.iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(", ")
                })
                .unwrap_or_default();
            verdicts.push(Verdict::new(
                "engines_equivalent",
                false,
                format!("languages differ on word {w} = ({values})"),
            ));
        }
    }

    let tracks: &[VarId] = &direct.tracks;
    if tracks.len() <= max_grid_vars {
        let mut mismatch = None;
        let mut checked = 0u64;
        let mut failure = None;
        for_each_point(tracks.len(), grid_radius, |p| {
            let values: Vec<BigInt> = p.iter().map(|&v| BigInt::from(v)).collect();
            let env: BTreeMap<VarId, BigInt> =
                tracks.iter().cloned().zip(values.iter().cloned()).collect();
            let expected = match eval_qf(&psi, &env) {
                Ok(b) => b,
                Err(e) => {
                    failure = Some(e.to_string());
                    return false;
                }
            };
            checked += 1;
            match automata.accepts_tuple(&values) {
                Ok(got) if got == expected => true,
                _ => {
                    mismatch = Some(p.to_vec());
                    false
                }
            }
        });
        let verdict = match (failure, mismatch) {
            (Some(e), _) => Verdict::new("grid_agreement", false, e),
            (None, Some(p)) => Verdict::new("grid_agreement", false, format!("disagree at {p:?}")),
            (None, None) => Verdict::new(
                "grid_agreement",
                true,
                format!("{checked} points in [-{grid_radius}, {grid_radius}]^{}", tracks.len()),
            ),
        };
        verdicts.push(verdict);
    }

    let mut bounds = check_bounds(phi, &psi).checks;
    bounds.push(BoundCheck::new(
        "states <= 2^(n^((qbl+1)^(qa+4)))",
        BigUint::from(direct.dwa.num_states()),
        theorem_bound(phi),
        false,
    ));
    let failed: Vec<&str> = bounds.iter().filter(|b| !b.pass).map(|b| b.name.as_str()).collect();
    verdicts.push(Verdict::new(
        "bounds",
        failed.is_empty(),
        if failed.is_empty() {
            format!("{} checks hold", bounds.len())
        } else {
            format!("violated: {}", failed.join("; "))
        },
    ));

    Ok(CrosscheckReport {
        formula: phi.to_string(),
        qe_formula: psi.to_string(),
        engine_sizes,
        bounds,
        verdicts,
        trace: Some(trace),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::Base;
    use crate::formula::parse;

    fn opts() -> CompileOptions {
        CompileOptions::with_base(Base::BINARY)
    }

    #[test]
    fn ledger_for_the_13_state_inequation() {
        let phi = parse("x - y > 32").unwrap();
        let ledger = size_report(&phi, &opts()).unwrap();
        assert_eq!(ledger.final_states, 13);
        let qf = &ledger.bounds[1];
        assert_eq!(qf.bound, BoundValue::from_u64(68));
        assert!(ledger.all_pass());
    }

    #[test]
    fn ledger_for_divisibility() {
        let ledger = size_report(&parse("3 divides x").unwrap(), &opts()).unwrap();
        assert_eq!(ledger.final_states, 4);
        assert_eq!(ledger.bounds[1].bound, BoundValue::from_u64(4));
        assert!(ledger.all_pass());
    }

    #[test]
    fn theorem_bound_is_materialized_when_small() {
        let qf = parse("x - y > 32").unwrap();
        let n = metrics(&qf).length;
        assert_eq!(
            theorem_bound(&qf),
            BoundValue::Exact(BigUint::from(1u32) << n as usize)
        );
        // with a quantifier the exponent is at least n^16
        let phi = parse("E x. 2*x = y").unwrap();
        let ledger = size_report(&phi, &opts()).unwrap();
        assert!(ledger.theorem_bound.is_astronomical());
        assert!(ledger.all_pass());
    }

    #[test]
    fn crosscheck_passes_and_serializes() {
        let phi = parse("E z. x < z & z < y & 3 divides z").unwrap();
        let report = crosscheck(&phi, &opts(), 8, 2, Fault::None).unwrap();
        assert!(report.all_pass(), "{report:?}");
        let json = serde_json::to_value(&report).unwrap();
        for key in ["formula", "engine_sizes", "bounds", "verdicts"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
    }

    #[test]
    fn crosscheck_reports_injected_fault() {
        let phi = parse("x - y > 3").unwrap();
        let report = crosscheck(&phi, &opts(), 8, 2, Fault::FlipAccepting).unwrap();
        assert!(!report.all_pass());
        assert!(!report.verdicts[0].pass);
    }

    #[test]
    fn quantifier_free_formulas_coincide() {
        let phi = parse("x + 2*y = 3 | !(2 divides x)").unwrap();
        let report = crosscheck(&phi, &opts(), 6, 2, Fault::None).unwrap();
        assert_eq!(report.engine_sizes["automata"], report.engine_sizes["qe_then_automata"]);
        assert!(report.all_pass());
    }
}
