//! Number strings as loop programs.
//!
//! Every decimal numeral can be read as a program: `8` and `9` act as
//! braces, octal runs name memory fields. This crate parses and classifies
//! such numerals, runs them on a small-step loop machine, wraps the machine in
//! a total calculator, and builds schemes, program generators and a diagonal
//! function over an enumeration of unary schemes.

pub mod arbator;
pub mod machine;
pub mod numerals;
pub mod schemes;
pub mod snark;
pub mod stdlib;
pub mod syntax;

pub use arbator::{arbate, compose_unary, compute_raw, CalcResult, RawResult};
pub use machine::{run, Budget, ExceededKind, RunOutcome};
pub use numerals::{Nat, Numeral, NumeralError, RenderMode, TrigNumeral};
pub use schemes::{evaluate, parse_pattern, Pattern};
pub use snark::snark;
pub use syntax::{classify_number, parse_program, Classification, FieldId, ProgramTree};
