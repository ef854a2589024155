use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;

use pdwa_core::encoding::Base;
use pdwa_core::engine::{compile, decide, generate_corpus, solve, CompileOptions, EngineKind};
use pdwa_core::formula::{parse, Formula, VarId};
use pdwa_core::qelim::{eliminate_all, eval_bounded, eval_qf};

fn opts(rho: u32) -> CompileOptions {
    CompileOptions::with_base(Base::new(rho).unwrap())
}

/// Closes a corpus formula by quantifying its free variables.
fn close(phi: &Formula, universal: bool) -> Formula {
    phi.free_vars().into_iter().fold(phi.clone(), |f, v| {
        if universal {
            Formula::forall(v, f)
        } else {
            Formula::exists(v, f)
        }
    })
}

#[test]
fn sentences_have_exactly_one_truth_value() {
    for (i, (phi, base)) in generate_corpus(11, 40).into_iter().enumerate() {
        let o = CompileOptions::with_base(base);
        let sentence = close(&phi, i % 2 == 0);
        let yes = decide(&sentence, &o).unwrap();
        let no = decide(&Formula::not(sentence.clone()), &o).unwrap();
        assert_ne!(yes, no, "{sentence}");
        let lem = Formula::or(sentence.clone(), Formula::not(sentence.clone()));
        assert!(decide(&lem, &o).unwrap());
        let qe = eliminate_all(&sentence);
        assert!(qe.free_vars().is_empty());
        assert_eq!(eval_qf(&qe, &BTreeMap::new()).unwrap(), yes, "{sentence}");
    }
}

#[test]
fn solutions_satisfy_the_formula() {
    for (phi, base) in generate_corpus(12, 40) {
        let o = CompileOptions::with_base(base);
        match solve(&phi, &o).unwrap() {
            Some(assignment) => {
                let psi = eliminate_all(&phi);
                assert!(eval_qf(&psi, &assignment).unwrap(), "{phi}: {assignment:?}");
            }
            None => assert!(compile(&phi, &o).unwrap().is_empty_nonlambda()),
        }
    }
}

#[test]
fn spec_examples_through_both_engines() {
    for (text, expected) in [
        ("E x. E y. x = y + 1 & y = 3", true),
        ("A x. 2 divides x | 2 divides x + 1", true),
        ("E x. 2*x = 6", true),
        ("E x. 2*x = 3", false),
    ] {
        let phi = parse(text).unwrap();
        for engine in [EngineKind::Automata, EngineKind::QeThenAutomata] {
            assert_eq!(decide(&phi, &opts(2).with_engine(engine)).unwrap(), expected, "{text}");
        }
    }
}

fn signed(k: i64, var: &str) -> String {
    let sign = if k < 0 { "-" } else { "+" };
    format!(" {sign} {}{var}", k.abs())
}

fn small_formula() -> impl Strategy<Value = String> {
    let coef = -3i64..=3;
    let atom = (coef.clone(), coef.clone(), -6i64..=6, 0usize..4).prop_map(|(a, b, c, r)| {
        let rel = ["<", "<=", "=", "!="][r];
        format!("{a}*x{} {rel} {c}", signed(b, "*y"))
    });
    let div = (2i64..=4, coef, -3i64..=3).prop_map(|(d, a, c)| format!("{d} divides {a}*x + y{}", signed(c, "")));
    (prop_oneof![atom.clone(), div], atom, 0usize..4).prop_map(|(p, q, shape)| match shape {
        0 => format!("E x. ({p}) & ({q})"),
        1 => format!("A x. ({p}) | ({q})"),
        2 => format!("E x. ({p}) -> !({q})"),
        _ => format!("({p}) <-> ({q})"),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn automata_match_bounded_semantics(text in small_formula(), rho in 2u32..=3) {
        let phi = parse(&text).unwrap();
        let a = compile(&phi, &opts(rho)).unwrap();
        let vars: Vec<VarId> = phi.free_vars().into_iter().collect();
        let b = compile(&phi, &opts(rho).with_engine(EngineKind::QeThenAutomata)).unwrap();
        prop_assert_eq!(&a, &b);
        for v in -6i64..=6 {
            let mut values = vec![BigInt::from(v); vars.len()];
            if let Some(first) = values.first_mut() {
                *first = BigInt::from(-v / 2);
            }
            let env: BTreeMap<VarId, BigInt> = vars.iter().cloned().zip(values.iter().cloned()).collect();
            let expected = eval_bounded(&phi, &env, 40).unwrap();
            prop_assert_eq!(a.accepts_tuple(&values).unwrap(), expected, "{} at {:?}", text, values);
        }
    }

    #[test]
    fn minimization_is_canonical(text in small_formula()) {
        let phi = parse(&text).unwrap();
        let stepwise = compile(&phi, &opts(2)).unwrap();
        let o = CompileOptions { minimize_each_step: false, ..opts(2) };
        let once = compile(&phi, &o).unwrap();
        prop_assert_eq!(&stepwise, &once);
        prop_assert_eq!(stepwise.minimize(), stepwise);
    }
}
