//! Big-step engine with loop acceleration.
//!
//! Control follows the tree recursively. When a loop's body leaves the
//! counter and limit untouched, its iteration is summarized (see
//! [`super::summary`]) and the whole loop is applied in closed form after the
//! budget has been checked against the exact step count. Loops that do not
//! summarize are iterated, with their inner loops still accelerated.
//!
//! When a budget runs out inside an accelerated loop the reported snapshot is
//! the memory at that loop's entry, not at the exact failing step.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::poly::{to_nat, Poly};
use super::summary::{classify, Code, Form, Forms, Op, SymCtx};
use super::{Budget, ExceededKind, Layout, RunOutcome};
use crate::numerals::Nat;
use crate::syntax::ProgramTree;

/// Deeper programs run on the small-step interpreter.
pub const FAST_NESTING_LIMIT: usize = 256;

const CACHE_LIMIT: usize = 1 << 14;

pub(crate) fn run_fast(tree: &ProgramTree, inputs: &[Nat], budget: Budget) -> Option<RunOutcome> {
    let layout = Layout::new(tree);
    let code = Code::build(tree, &layout, FAST_NESTING_LIMIT)?;
    let (mem, extra) = layout.load(inputs);
    let mut engine = Engine {
        code: &code,
        mem,
        steps: Nat::zero(),
        max_steps: budget.max_steps.map(Nat::from),
        max_bits: budget.max_value_bits,
        max_input_bits: inputs.iter().map(|v| v.bits()).max().unwrap_or(0),
        cache: HashMap::new(),
    };
    let code_top = &code.top;
    Some(match engine.exec_seq(code_top) {
        Ok(()) => RunOutcome::Value { value: layout.output(&engine.mem), steps: engine.steps },
        Err(kind) => RunOutcome::BudgetExceeded {
            kind,
            snapshot: layout.snapshot(&engine.mem, &extra, engine.steps.clone()),
        },
    })
}

type CacheKey = (usize, Vec<Nat>);

struct Engine<'a> {
    code: &'a Code,
    mem: Vec<Nat>,
    steps: Nat,
    max_steps: Option<Nat>,
    max_bits: u64,
    max_input_bits: u64,
    cache: HashMap<CacheKey, Option<Rc<Forms>>>,
}

/// A field's closed form with the loop-start values plugged in.
enum NumForm<'f> {
    Const(Nat),
    Affine { a: Nat, f1: Nat, bc: Nat },
    Dependent(&'f Poly),
}

impl Engine<'_> {
    /// Adds one to a field as a billed action.
    fn bump(&mut self, slot: u32) -> Result<(), ExceededKind> {
        self.check_step()?;
        let v = &self.mem[slot as usize] + 1u32;
        if v.bits() > self.max_bits {
            return Err(ExceededKind::ValueSize);
        }
        self.mem[slot as usize] = v;
        self.steps += 1u32;
        Ok(())
    }

    fn check_step(&self) -> Result<(), ExceededKind> {
        match &self.max_steps {
            Some(max) if &self.steps >= max => Err(ExceededKind::Steps),
            _ => Ok(()),
        }
    }

    fn exec_seq(&mut self, ops: &[usize]) -> Result<(), ExceededKind> {
        let code = self.code;
        for &op in ops {
            match code.ops[op] {
                Op::Empty => {}
                Op::Succ(f) => self.bump(f)?,
                Op::Loop(li) => self.exec_loop(li)?,
            }
        }
        Ok(())
    }

    fn exec_loop(&mut self, li: usize) -> Result<(), ExceededKind> {
        let info = &self.code.loops[li];
        let (c, l) = (info.counter as usize, info.limit as usize);
        self.check_step()?;
        self.mem[c] = Nat::zero();
        self.steps += 1u32;
        if info.summarizable && !self.mem[l].is_zero() {
            let n = self.mem[l].clone();
            if self.accelerate(li, &n)? {
                return Ok(());
            }
        }
        while self.mem[c] < self.mem[l] {
            self.bump(info.counter)?;
            self.exec_seq(&info.body)?;
        }
        Ok(())
    }

    fn forms(&mut self, li: usize) -> Option<Rc<Forms>> {
        let info = &self.code.loops[li];
        let key = (li, info.invariants.iter().map(|&s| self.mem[s as usize].clone()).collect());
        if let Some(hit) = self.cache.get(&key) {
            return hit.clone();
        }
        let ctx = SymCtx { code: self.code, mem: &self.mem, vars: &info.writes, max_value_bits: self.max_bits };
        let forms = ctx.iteration(info).and_then(|it| classify(&it, &info.writes)).map(Rc::new);
        if self.cache.len() >= CACHE_LIMIT {
            self.cache.clear();
        }
        self.cache.insert(key, forms.clone());
        forms
    }

    /// Applies `n` iterations of loop `li` at once. `Ok(false)` means the
    /// loop has no summary and must be iterated.
    fn accelerate(&mut self, li: usize, n: &Nat) -> Result<bool, ExceededKind> {
        let Some(forms) = self.forms(li) else { return Ok(false) };
        let mem = &self.mem;
        let start = |g: u32| mem[g as usize].clone();
        let eval = |p: &Poly| to_nat(&p.eval(&start));

        let mut nums: BTreeMap<u32, NumForm> = BTreeMap::new();
        for (&f, form) in &forms.fields {
            let num = match form {
                Form::Const { e } => NumForm::Const(match eval(e) {
                    Some(v) => v,
                    None => return Ok(false),
                }),
                Form::Affine { a, b0, bc } => {
                    let (Some(b0v), Some(bcv)) = (eval(b0), eval(bc)) else { return Ok(false) };
                    NumForm::Affine { a: a.clone(), f1: a * &mem[f as usize] + b0v, bc: bcv }
                }
                Form::Dependent { p } => NumForm::Dependent(p),
            };
            nums.insert(f, num);
        }

        if let Some(max) = &self.max_steps {
            if n > &(max - &self.steps) {
                return Err(ExceededKind::Steps);
            }
        }
        let one = BigUint::one();
        let nm1 = n - &one;
        for num in nums.values() {
            let NumForm::Affine { a, f1, bc } = num else { continue };
            if a.is_one() || (f1.is_zero() && bc.is_zero()) || nm1.is_zero() {
                continue;
            }
            // At least a^(n−2) once anything is non-zero.
            let growth = (&nm1 - &one) * BigUint::from(a.bits() - 1);
            match self.max_steps {
                // Values never exceed the largest input plus the steps taken.
                Some(_) if growth >= BigUint::from(self.max_input_bits + 66) => {
                    return Err(ExceededKind::Steps)
                }
                None if growth > BigUint::from(self.max_bits) => return Err(ExceededKind::ValueSize),
                _ => {}
            }
        }

        let pow = |a: &Nat, e: &Nat| -> Nat {
            let e: usize = e.try_into().expect("exponent bounded by the growth check");
            num_traits::pow(a.clone(), e)
        };
        let value_at = |f: u32, j: &Nat| -> Nat {
            if j.is_zero() {
                return mem[f as usize].clone();
            }
            let jm1 = j - &one;
            match &nums[&f] {
                NumForm::Const(e) => e.clone(),
                NumForm::Affine { a, f1, bc } => {
                    if a.is_one() {
                        f1 + &jm1 * bc
                    } else if f1.is_zero() && bc.is_zero() {
                        Nat::zero()
                    } else {
                        let ap = pow(a, &jm1);
                        let geo = (&ap - &one) / (a - &one);
                        ap * f1 + geo * bc
                    }
                }
                NumForm::Dependent(_) => unreachable!("dependent fields are evaluated last"),
            }
        };

        let mut total = match eval(&forms.alpha) {
            Some(alpha) => alpha * n,
            None => return Ok(false),
        };
        for (&g, beta) in &forms.betas {
            let Some(beta) = eval(beta) else { return Ok(false) };
            if beta.is_zero() {
                continue;
            }
            let g0 = &mem[g as usize];
            let sum = match &nums[&g] {
                NumForm::Const(e) => g0 + &nm1 * e,
                NumForm::Affine { a, f1, bc } if a.is_one() => {
                    let tri = if nm1.is_zero() { Nat::zero() } else { &nm1 * (&nm1 - &one) / 2u32 };
                    n * g0 + &nm1 * (f1 - g0) + bc * tri
                }
                NumForm::Affine { a, f1, bc } => {
                    if f1.is_zero() && bc.is_zero() {
                        g0.clone()
                    } else {
                        let geo = (pow(a, &nm1) - &one) / (a - &one);
                        let inner = (&geo - &nm1) / (a - &one);
                        g0 + f1 * geo + bc * inner
                    }
                }
                NumForm::Dependent(_) => unreachable!("classification keeps steps off dependent fields"),
            };
            total += beta * sum;
        }
        if let Some(max) = &self.max_steps {
            if &self.steps + &total > *max {
                return Err(ExceededKind::Steps);
            }
        }

        let mut finals: Vec<(u32, Nat)> = Vec::with_capacity(nums.len());
        for (&f, num) in &nums {
            let v = match num {
                NumForm::Dependent(p) => {
                    let prev = |g: u32| if nums.contains_key(&g) { value_at(g, &nm1) } else { start(g) };
                    match to_nat(&p.eval(&prev)) {
                        Some(v) => v,
                        None => return Ok(false),
                    }
                }
                _ => value_at(f, n),
            };
            if v.bits() > self.max_bits {
                return Err(ExceededKind::ValueSize);
            }
            finals.push((f, v));
        }
        for (f, v) in finals {
            self.mem[f as usize] = v;
        }
        self.steps += total;
        Ok(true)
    }
}
