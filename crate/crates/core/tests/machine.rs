mod common;

use arbatation::machine::{initialize, run, run_small_step, run_traced, Action, Budget, RunOutcome};
use arbatation::numerals::Nat;
use arbatation::syntax::{classify_number, parse_program, FieldId, ProgramItem};
use common::{nats, primitive_program};
use proptest::prelude::*;

const BUDGET: Budget = Budget { max_steps: Some(50_000), max_value_bits: 2048 };

#[test]
fn generator_yields_primitive_programs() {
    for seed in 0..2000 {
        let p = primitive_program(seed);
        assert!(classify_number(&p).is_primitive(), "seed {seed}: {p}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn fast_engine_matches_small_step(seed in any::<u64>(), x in 0u64..6, y in 0u64..6) {
        let p = primitive_program(seed);
        let tree = parse_program(&p).unwrap();
        let xs = nats(&[x, y]);
        let slow = run_small_step(&tree, &xs, BUDGET);
        let fast = run(&tree, &xs, BUDGET);
        match (&slow, &fast) {
            (RunOutcome::Value { .. }, _) => prop_assert_eq!(&fast, &slow, "{}", p),
            (RunOutcome::BudgetExceeded { .. }, f) => prop_assert!(f.exceeded().is_some(), "{}: {:?}", p, f),
        }
    }

    #[test]
    fn runs_are_deterministic_and_steps_are_mutations(seed in any::<u64>(), x in 0u64..5) {
        let p = primitive_program(seed);
        let tree = parse_program(&p).unwrap();
        let watched = [FieldId::output(), FieldId::input(1)];
        let a = run_traced(&tree, &nats(&[x]), BUDGET, &watched);
        let b = run_traced(&tree, &nats(&[x]), BUDGET, &watched);
        prop_assert_eq!(&a, &b);
        if let RunOutcome::Value { steps, .. } = &a.1 {
            let counted = a.0.iter().filter(|r| r.action.is_counted()).count();
            prop_assert_eq!(Nat::from(counted), steps.clone());
        }
    }

    #[test]
    fn loops_exit_with_counter_equal_to_limit(seed in any::<u64>(), x in 0u64..5, y in 0u64..5) {
        let p = primitive_program(seed);
        let tree = parse_program(&p).unwrap();
        let mut st = initialize(&tree, &nats(&[x, y]), BUDGET);
        while let Ok(Some(action)) = st.step() {
            if let Action::Exit(id) = action {
                if let ProgramItem::Accolade { counter, limit, .. } = tree.item(id) {
                    prop_assert_eq!(st.get(counter), st.get(limit), "{}", p);
                }
            }
        }
    }
}

#[test]
fn addition_and_multiplication_grid() {
    let add = parse_program(&"{0,01}{1,0,02}".parse().unwrap()).unwrap();
    let mul = parse_program(&"{2{1,0,01}02}".parse().unwrap()).unwrap();
    for x in 0..=12u64 {
        for y in 0..=12u64 {
            let xs = nats(&[x, y]);
            let b = Budget::default();
            assert_eq!(run_small_step(&add, &xs, b).value(), Some(&Nat::from(x + y)));
            assert_eq!(run(&add, &xs, b).value(), Some(&Nat::from(x + y)));
            assert_eq!(run_small_step(&mul, &xs, b).value(), Some(&Nat::from(x * y)));
            assert_eq!(run(&mul, &xs, b).value(), Some(&Nat::from(x * y)));
        }
    }
}
