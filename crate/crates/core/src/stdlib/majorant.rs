//! Bounded check of the eventual majorant: the hyperincrementation program
//! one degree above a program's depth should dominate it.

use crate::arbator::{arbate, BuildError, CalcResult};
use crate::machine::{Budget, ExceededKind};
use crate::numerals::Numeral;
use crate::syntax::{classify_number, parse_program, program_metrics};

use super::generators::gen_hicg;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Dominated,
    NotDominated,
    /// The majorant outgrew the value cap while the program did not. Every
    /// field of a hyperincrementation program is bounded by its output, so
    /// the output itself is past the cap.
    MajorantOverflow,
    /// One side ran out of budget in a way that says nothing about order.
    Unknown,
}

impl Verdict {
    pub fn dominated(self) -> bool {
        matches!(self, Verdict::Dominated | Verdict::MajorantOverflow)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MajorantPoint {
    pub x: u64,
    pub program: CalcResult,
    pub majorant: CalcResult,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MajorantReport {
    pub degree: u64,
    pub majorant: Numeral,
    pub points: Vec<MajorantPoint>,
}

impl MajorantReport {
    /// Every scanned point is decided and dominated.
    pub fn all_dominated(&self) -> bool {
        self.points.iter().all(|p| p.verdict.dominated())
    }

    /// Least `x` from which every decided point is dominated.
    pub fn threshold(&self) -> Option<u64> {
        let mut from = None;
        for p in self.points.iter().rev() {
            match p.verdict {
                Verdict::NotDominated => break,
                Verdict::Unknown => {}
                _ => from = Some(p.x),
            }
        }
        from
    }
}

pub fn majorant_check(p: &Numeral, x_lo: u64, x_hi: u64, budget: Budget) -> Result<MajorantReport, BuildError> {
    let class = classify_number(p);
    if !class.is_primitive() {
        return Err(BuildError::NotPrimitive {
            role: "checked",
            program: p.render(Default::default()),
            class: class.to_string(),
        });
    }
    let depth = program_metrics(&parse_program(p).expect("primitive numbers parse")).depth as u64;
    let degree = depth + 1;
    let majorant = gen_hicg(degree);
    let points = (x_lo..=x_hi)
        .map(|x| {
            let xs = [x.into()];
            let program = arbate(p, &xs, budget);
            let major = arbate(&majorant, &xs, budget);
            let verdict = match (&program, &major) {
                (CalcResult::Value(a), CalcResult::Value(b)) if b >= a => Verdict::Dominated,
                (CalcResult::Value(_), CalcResult::Value(_)) => Verdict::NotDominated,
                (CalcResult::Value(_), CalcResult::BudgetExceeded(ExceededKind::ValueSize)) => {
                    Verdict::MajorantOverflow
                }
                _ => Verdict::Unknown,
            };
            MajorantPoint { x, program, majorant: major, verdict }
        })
        .collect();
    Ok(MajorantReport { degree, majorant, points })
}
