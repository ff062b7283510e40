mod common;

use arbatation::arbator::{arbate, compose_unary, compute_raw, CalcResult, RawResult};
use arbatation::machine::Budget;
use arbatation::numerals::{Nat, Numeral};
use arbatation::stdlib::builtin_corpus;
use arbatation::syntax::classify_number;
use common::{nats, primitive_program, random_numeral};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SMALL: Budget = Budget { max_steps: Some(50_000), max_value_bits: 2048 };

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn calculator_agrees_with_computer_on_primitive_programs(seed in any::<u64>(), x in 0u64..6, y in 0u64..6) {
        let p = primitive_program(seed);
        let xs = nats(&[x, y]);
        match (arbate(&p, &xs, SMALL), compute_raw(&p, &xs, SMALL)) {
            (CalcResult::Value(a), RawResult::Value { value, .. }) => prop_assert_eq!(a, value),
            (CalcResult::BudgetExceeded(a), RawResult::BudgetExceeded(b)) => prop_assert_eq!(a, b),
            (a, b) => prop_assert!(false, "{}: {:?} vs {:?}", p, a, b),
        }
    }

    #[test]
    fn non_primitive_numbers_yield_zero(d in "[1-9][0-9]{0,39}", x in 0u64..5) {
        let n = Numeral::parse(&d).unwrap();
        if !classify_number(&n).is_primitive() {
            prop_assert_eq!(arbate(&n, &nats(&[x]), Budget::default()), CalcResult::Value(Nat::default()));
        }
    }
}

#[test]
fn totality_fuzz() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut primitive = 0;
    for _ in 0..20_000 {
        let n = random_numeral(&mut rng, 40);
        let xs = nats(&[rng.gen_range(0..5), rng.gen_range(0..5)]);
        let out = arbate(&n, &xs, Budget::default());
        if classify_number(&n).is_primitive() {
            primitive += 1;
        } else {
            assert_eq!(out, CalcResult::Value(Nat::default()), "{n}");
        }
    }
    assert!(primitive > 0);
}

#[test]
fn composed_programs_are_primitive() {
    let corpus = builtin_corpus();
    let unary: Vec<&Numeral> = corpus.unary_programs().map(|e| &e.program).collect();
    for f in &unary {
        for g in &unary {
            let c = compose_unary(f, g).unwrap();
            assert!(classify_number(&c).is_primitive(), "{f} after {g}");
        }
    }
    for seed in 0..200 {
        let (f, g) = (primitive_program(seed), primitive_program(seed + 10_000));
        assert!(classify_number(&compose_unary(&f, &g).unwrap()).is_primitive());
    }
}

/// Direct nesting under the default budget; `None` when either call runs out.
fn nested(f: &Numeral, g: &Numeral, x: u64) -> Option<Nat> {
    let inner = arbate(g, &nats(&[x]), Budget::default()).into_value()?;
    arbate(f, &[inner], Budget::default()).into_value()
}

#[test]
fn composition_law_on_corpus_pairs() {
    let corpus = builtin_corpus();
    let unary: Vec<&Numeral> = corpus.unary_programs().map(|e| &e.program).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    for _ in 0..20 {
        let (f, g) = (*unary.choose(&mut rng).unwrap(), *unary.choose(&mut rng).unwrap());
        let c = compose_unary(f, g).unwrap();
        for x in 0..=10 {
            let Some(want) = nested(f, g, x) else { continue };
            // Every value costs at least as many steps, so three default budgets cover the chain.
            let got = arbate(&c, &nats(&[x]), Budget::new(3 * 10_000_000 + 1_000, 1 << 21));
            assert_eq!(got, CalcResult::Value(want), "{f} after {g} at {x}");
            checked += 1;
        }
    }
    assert!(checked >= 150, "{checked}");
}

#[test]
fn composition_law_on_generated_pairs() {
    for seed in 0..300u64 {
        let (f, g) = (primitive_program(seed), primitive_program(seed ^ 0x5555));
        let c = compose_unary(&f, &g).unwrap();
        for x in 0..4 {
            let inner = arbate(&g, &nats(&[x]), SMALL);
            let Some(v) = inner.into_value() else { continue };
            let Some(want) = arbate(&f, &[v], SMALL).into_value() else { continue };
            let got = arbate(&c, &nats(&[x]), Budget::new(200_000, 4096));
            assert_eq!(got, CalcResult::Value(want), "{f} after {g} at {x}");
        }
    }
}
