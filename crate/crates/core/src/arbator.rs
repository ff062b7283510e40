//! The calculator: classify first, run only primitive programs.
//!
//! Anything that is not a primitive-arbor-number evaluates to 0 without
//! running, so every call halts. Also here: the bare computer, which runs any
//! arbor-number, and two program builders (unary composition and the
//! if-then-else macro).

use std::fmt;

use thiserror::Error;

use crate::machine::{run, Budget, ExceededKind, RunOutcome};
use crate::numerals::{Nat, Numeral};
use crate::syntax::{classify_number, parse_program, Classification, FieldId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CalcResult {
    Value(Nat),
    BudgetExceeded(ExceededKind),
}

impl CalcResult {
    pub fn value(&self) -> Option<&Nat> {
        match self {
            CalcResult::Value(v) => Some(v),
            CalcResult::BudgetExceeded(_) => None,
        }
    }

    pub fn into_value(self) -> Option<Nat> {
        match self {
            CalcResult::Value(v) => Some(v),
            CalcResult::BudgetExceeded(_) => None,
        }
    }
}

impl fmt::Display for CalcResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CalcResult::Value(v) => write!(f, "{v}"),
            CalcResult::BudgetExceeded(k) => write!(f, "budget exceeded ({k})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawResult {
    Value { value: Nat, steps: Nat },
    BudgetExceeded(ExceededKind),
    DivergesByDefinition,
}

/// Step allowance shared by a chain of calculator calls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Meter {
    remaining: Option<u64>,
    max_value_bits: u64,
}

impl Meter {
    pub fn new(budget: Budget) -> Self {
        Meter { remaining: budget.max_steps, max_value_bits: budget.max_value_bits }
    }

    pub fn remaining(&self) -> Option<u64> {
        self.remaining
    }

    fn budget(&self) -> Budget {
        Budget { max_steps: self.remaining, max_value_bits: self.max_value_bits }
    }

    fn spend(&mut self, steps: &Nat) {
        if let Some(r) = self.remaining.as_mut() {
            let used = u64::try_from(steps).unwrap_or(u64::MAX);
            *r = r.saturating_sub(used);
        }
    }
}

/// The calculator. Classification is free; only the run is billed.
pub fn arbate(program: &Numeral, inputs: &[Nat], budget: Budget) -> CalcResult {
    arbate_metered(program, inputs, &mut Meter::new(budget))
}

/// [`arbate`] drawing on a shared meter.
pub fn arbate_metered(program: &Numeral, inputs: &[Nat], meter: &mut Meter) -> CalcResult {
    let tree = match parse_program(program) {
        Ok(t) => t,
        Err(_) => return CalcResult::Value(Nat::default()),
    };
    if !crate::syntax::classify_tree(&tree).is_primitive() {
        return CalcResult::Value(Nat::default());
    }
    match run(&tree, inputs, meter.budget()) {
        RunOutcome::Value { value, steps } => {
            meter.spend(&steps);
            CalcResult::Value(value)
        }
        RunOutcome::BudgetExceeded { kind, .. } => {
            meter.remaining = meter.remaining.map(|_| 0);
            CalcResult::BudgetExceeded(kind)
        }
    }
}

/// The bare computer: herbum numbers never halt by definition, every
/// arbor-number runs under the budget.
pub fn compute_raw(program: &Numeral, inputs: &[Nat], budget: Budget) -> RawResult {
    let tree = match parse_program(program) {
        Ok(t) => t,
        Err(_) => return RawResult::DivergesByDefinition,
    };
    match run(&tree, inputs, budget) {
        RunOutcome::Value { value, steps } => RawResult::Value { value, steps },
        RunOutcome::BudgetExceeded { kind, .. } => RawResult::BudgetExceeded(kind),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("{role} program {program} is not primitive ({class})")]
    NotPrimitive { role: &'static str, program: String, class: String },
    #[error("{role} branch uses field {field}, which the macro reserves")]
    ScratchCollision { role: &'static str, field: String },
}

fn require_primitive(role: &'static str, n: &Numeral) -> Result<crate::syntax::ProgramTree, BuildError> {
    let class = classify_number(n);
    if !class.is_primitive() {
        return Err(BuildError::NotPrimitive {
            role,
            program: n.render(Default::default()),
            class: class.to_string(),
        });
    }
    Ok(parse_program(n).expect("primitive numbers parse"))
}

fn numeral_of(digits: String) -> Numeral {
    Numeral::from_canonical(digits)
}

/// A program computing `outer(inner(x))`.
///
/// Inner runs first; every field it writes other than 0 and 01 is deleted,
/// its output is copied into 01, field 0 is cleared, and outer runs on that.
pub fn compose_unary(outer: &Numeral, inner: &Numeral) -> Result<Numeral, BuildError> {
    require_primitive("outer", outer)?;
    let inner_tree = require_primitive("inner", inner)?;
    let (out, first_input) = (FieldId::output(), FieldId::input(1));
    let mut s = String::new();
    // A bare leading 0 would make the result start with a zero digit.
    if inner.digits().starts_with('0') {
        s.push_str("89");
    }
    s.push_str(inner.digits());
    for f in inner_tree.written_fields() {
        if f != out && f != first_input {
            s.push('8');
            s.push_str(f.as_str());
            s.push('9');
        }
    }
    s.push_str("801890989");
    s.push_str("809");
    s.push_str(outer.digits());
    Ok(numeral_of(s))
}

fn ends_with_field(d: &str) -> bool {
    d.bytes().last().is_some_and(|b| b < b'8')
}

fn starts_with_field(d: &str) -> bool {
    d.bytes().next().is_some_and(|b| b < b'8')
}

/// `{3}3{2 Nb {3}{2,1} 1}{2 Na 3}`: runs `na` when field 1 holds 0 and `nb`
/// when it holds 1. An empty accolade is inserted wherever a branch would
/// otherwise fuse with an adjacent field.
pub fn build_if_then_else(na: &Numeral, nb: &Numeral) -> Result<Numeral, BuildError> {
    for (role, n) in [("then", na), ("else", nb)] {
        let tree = parse_program(n).map_err(|r| BuildError::NotPrimitive {
            role,
            program: n.render(Default::default()),
            class: Classification::Herbum(r).to_string(),
        })?;
        for field in ["2", "3"] {
            if tree.fields().iter().any(|f| f.as_str() == field) {
                return Err(BuildError::ScratchCollision { role, field: field.into() });
            }
        }
        if role == "else" && tree.written_fields().iter().any(|f| f.as_str() == "1") {
            return Err(BuildError::ScratchCollision { role, field: "1".into() });
        }
    }
    let (a, b) = (na.digits(), nb.digits());
    let mut s = String::from("839382");
    if starts_with_field(b) {
        s.push_str("89");
    }
    s.push_str(b);
    s.push_str("8398289191982");
    if starts_with_field(a) {
        s.push_str("89");
    }
    s.push_str(a);
    if ends_with_field(a) {
        s.push_str("89");
    }
    s.push_str("39");
    Ok(numeral_of(s))
}
