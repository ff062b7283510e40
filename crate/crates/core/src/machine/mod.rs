//! The loop machine.
//!
//! Memory is a map from field names to naturals, all zero at start. Three
//! actions mutate memory and cost one step each: succeeding a field, resetting
//! an accolade's counter on entry, and incrementing the counter at each loop
//! check that finds it below the (re-read) limit. Exits and empty accolades
//! are free.
//!
//! [`MachineState`] is the reference small-step interpreter. [`run`] uses an
//! accelerated big-step engine that produces the same value and step count.

mod fast;
mod poly;
mod summary;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;

use crate::numerals::Nat;
use crate::syntax::{FieldId, ItemId, ProgramItem, ProgramTree};

pub use fast::FAST_NESTING_LIMIT;

/// Resource limits for one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// `None` lifts the step limit; the value guard still applies.
    pub max_steps: Option<u64>,
    pub max_value_bits: u64,
}

impl Budget {
    pub const DEFAULT_STEPS: u64 = 10_000_000;
    pub const DEFAULT_VALUE_BITS: u64 = 1 << 20;

    pub fn new(max_steps: u64, max_value_bits: u64) -> Self {
        Budget { max_steps: Some(max_steps), max_value_bits }
    }

    pub fn steps(max_steps: u64) -> Self {
        Budget { max_steps: Some(max_steps), ..Budget::default() }
    }

    pub fn unlimited_steps() -> Self {
        Budget { max_steps: None, ..Budget::default() }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_steps: Some(Self::DEFAULT_STEPS), max_value_bits: Self::DEFAULT_VALUE_BITS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExceededKind {
    Steps,
    ValueSize,
}

impl fmt::Display for ExceededKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExceededKind::Steps => "steps",
            ExceededKind::ValueSize => "value-size",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    Init,
    Succeed(FieldId),
    Reset(FieldId),
    Increment(FieldId),
    Exit(ItemId),
    Nop,
}

impl Action {
    pub fn label(&self) -> &'static str {
        match self {
            Action::Init => "INIT",
            Action::Succeed(_) => "SUC",
            Action::Reset(_) => "RST",
            Action::Increment(_) => "INC",
            Action::Exit(_) => "EXIT",
            Action::Nop => "NOP",
        }
    }

    pub fn field(&self) -> Option<&FieldId> {
        match self {
            Action::Succeed(f) | Action::Reset(f) | Action::Increment(f) => Some(f),
            _ => None,
        }
    }

    /// Whether the action mutates memory and is billed a step.
    pub fn is_counted(&self) -> bool {
        self.field().is_some()
    }
}

/// Memory and step count at the moment a budget ran out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    /// Non-zero fields only.
    pub memory: BTreeMap<FieldId, Nat>,
    pub steps: Nat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    Value { value: Nat, steps: Nat },
    BudgetExceeded { kind: ExceededKind, snapshot: Snapshot },
}

impl RunOutcome {
    pub fn value(&self) -> Option<&Nat> {
        match self {
            RunOutcome::Value { value, .. } => Some(value),
            RunOutcome::BudgetExceeded { .. } => None,
        }
    }

    pub fn exceeded(&self) -> Option<ExceededKind> {
        match self {
            RunOutcome::Value { .. } => None,
            RunOutcome::BudgetExceeded { kind, .. } => Some(*kind),
        }
    }
}

/// Slot numbering for the fields a program names. Inputs that the program
/// never names are kept aside so that snapshots still show them.
#[derive(Debug, Clone)]
pub(crate) struct Layout {
    pub fields: Vec<FieldId>,
    pub slot_of: HashMap<FieldId, u32>,
}

impl Layout {
    pub fn new(tree: &ProgramTree) -> Self {
        let fields: Vec<FieldId> = tree.fields().into_iter().collect();
        let slot_of = fields.iter().enumerate().map(|(i, f)| (f.clone(), i as u32)).collect();
        Layout { fields, slot_of }
    }

    pub fn slot(&self, f: &FieldId) -> Option<u32> {
        self.slot_of.get(f).copied()
    }

    /// Zeroed memory with inputs loaded; unnamed inputs go to the side map.
    pub fn load(&self, inputs: &[Nat]) -> (Vec<Nat>, BTreeMap<FieldId, Nat>) {
        let mut mem = vec![Nat::zero(); self.fields.len()];
        let mut extra = BTreeMap::new();
        for (i, v) in inputs.iter().enumerate() {
            let f = FieldId::input(i + 1);
            match self.slot(&f) {
                Some(s) => mem[s as usize] = v.clone(),
                None => {
                    if !v.is_zero() {
                        extra.insert(f, v.clone());
                    }
                }
            }
        }
        (mem, extra)
    }

    pub fn snapshot(&self, mem: &[Nat], extra: &BTreeMap<FieldId, Nat>, steps: Nat) -> Snapshot {
        let mut memory = extra.clone();
        for (f, v) in self.fields.iter().zip(mem) {
            if !v.is_zero() {
                memory.insert(f.clone(), v.clone());
            }
        }
        Snapshot { memory, steps }
    }

    pub fn output(&self, mem: &[Nat]) -> Nat {
        self.slot(&FieldId::output()).map(|s| mem[s as usize].clone()).unwrap_or_default()
    }
}

#[derive(Debug, Clone, Copy)]
enum Slots {
    None,
    Field(u32),
    Loop { counter: u32, limit: u32 },
}

#[derive(Debug, Clone)]
struct Frame {
    accolade: Option<ItemId>,
    pos: usize,
}

/// Small-step machine state over a borrowed program.
#[derive(Debug, Clone)]
pub struct MachineState<'t> {
    tree: &'t ProgramTree,
    layout: Layout,
    slots: Vec<Slots>,
    mem: Vec<Nat>,
    extra: BTreeMap<FieldId, Nat>,
    frames: Vec<Frame>,
    steps: u64,
    budget: Budget,
}

/// Zeroes memory, loads input `i` into field `0`+octal(i), and points control
/// at the first item. This is step 0.
pub fn initialize<'t>(tree: &'t ProgramTree, inputs: &[Nat], budget: Budget) -> MachineState<'t> {
    let layout = Layout::new(tree);
    let slots = (0..tree.node_count())
        .map(|i| match tree.item(ItemId(i)) {
            ProgramItem::Succeed(f) => Slots::Field(layout.slot(f).expect("named field")),
            ProgramItem::Empty => Slots::None,
            ProgramItem::Accolade { counter, limit, .. } => Slots::Loop {
                counter: layout.slot(counter).expect("named field"),
                limit: layout.slot(limit).expect("named field"),
            },
        })
        .collect();
    let (mem, extra) = layout.load(inputs);
    MachineState {
        tree,
        layout,
        slots,
        mem,
        extra,
        frames: vec![Frame { accolade: None, pos: 0 }],
        steps: 0,
        budget,
    }
}

impl<'t> MachineState<'t> {
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn get(&self, f: &FieldId) -> Nat {
        match self.layout.slot(f) {
            Some(s) => self.mem[s as usize].clone(),
            None => self.extra.get(f).cloned().unwrap_or_default(),
        }
    }

    /// Non-zero fields.
    pub fn memory(&self) -> BTreeMap<FieldId, Nat> {
        self.snapshot().memory
    }

    pub fn snapshot(&self) -> Snapshot {
        self.layout.snapshot(&self.mem, &self.extra, Nat::from(self.steps))
    }

    pub fn output(&self) -> Nat {
        self.layout.output(&self.mem)
    }

    pub fn is_halted(&self) -> bool {
        self.frames.len() == 1 && self.frames[0].pos >= self.tree.top().len()
    }

    fn check(&self, new_value: &Nat) -> Result<(), ExceededKind> {
        if let Some(max) = self.budget.max_steps {
            if self.steps >= max {
                return Err(ExceededKind::Steps);
            }
        }
        if new_value.bits() > self.budget.max_value_bits {
            return Err(ExceededKind::ValueSize);
        }
        Ok(())
    }

    fn field_of(&self, slot: u32) -> FieldId {
        self.layout.fields[slot as usize].clone()
    }

    /// Performs one action. `Ok(None)` means the program has halted. On a
    /// budget error the state is left unchanged.
    pub fn step(&mut self) -> Result<Option<Action>, ExceededKind> {
        let frame = self.frames.last().expect("top frame").clone();
        let items: &[ItemId] = match frame.accolade {
            None => self.tree.top(),
            Some(id) => match self.tree.item(id) {
                ProgramItem::Accolade { body, .. } => body,
                _ => unreachable!("frames belong to accolades"),
            },
        };
        if frame.pos < items.len() {
            let id = items[frame.pos];
            match self.slots[id.0] {
                Slots::None => {
                    self.frames.last_mut().unwrap().pos += 1;
                    Ok(Some(Action::Nop))
                }
                Slots::Field(s) => {
                    let v = &self.mem[s as usize] + 1u32;
                    self.check(&v)?;
                    self.mem[s as usize] = v;
                    self.steps += 1;
                    self.frames.last_mut().unwrap().pos += 1;
                    Ok(Some(Action::Succeed(self.field_of(s))))
                }
                Slots::Loop { counter, .. } => {
                    self.check(&Nat::zero())?;
                    self.mem[counter as usize] = Nat::zero();
                    self.steps += 1;
                    self.frames.last_mut().unwrap().pos += 1;
                    let at_lade = match self.tree.item(id) {
                        ProgramItem::Accolade { body, .. } => body.len(),
                        _ => unreachable!(),
                    };
                    self.frames.push(Frame { accolade: Some(id), pos: at_lade });
                    Ok(Some(Action::Reset(self.field_of(counter))))
                }
            }
        } else if let Some(id) = frame.accolade {
            let Slots::Loop { counter, limit } = self.slots[id.0] else {
                unreachable!("accolade slots")
            };
            if self.mem[counter as usize] < self.mem[limit as usize] {
                let v = &self.mem[counter as usize] + 1u32;
                self.check(&v)?;
                self.mem[counter as usize] = v;
                self.steps += 1;
                self.frames.last_mut().unwrap().pos = 0;
                Ok(Some(Action::Increment(self.field_of(counter))))
            } else {
                self.frames.pop();
                Ok(Some(Action::Exit(id)))
            }
        } else {
            Ok(None)
        }
    }
}

/// Runs the small-step interpreter to completion or budget exhaustion.
pub fn run_small_step(tree: &ProgramTree, inputs: &[Nat], budget: Budget) -> RunOutcome {
    let mut st = initialize(tree, inputs, budget);
    loop {
        match st.step() {
            Ok(Some(_)) => {}
            Ok(None) => {
                return RunOutcome::Value { value: st.output(), steps: Nat::from(st.steps) };
            }
            Err(kind) => return RunOutcome::BudgetExceeded { kind, snapshot: st.snapshot() },
        }
    }
}

/// Runs a program and returns the value of field 0 and the step count.
///
/// Programs nested deeper than [`FAST_NESTING_LIMIT`] go through the
/// small-step interpreter; everything else through the accelerated engine.
pub fn run(tree: &ProgramTree, inputs: &[Nat], budget: Budget) -> RunOutcome {
    match fast::run_fast(tree, inputs, budget) {
        Some(outcome) => outcome,
        None => run_small_step(tree, inputs, budget),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRow {
    pub step: u64,
    pub action: Action,
    pub value_after: Option<Nat>,
    pub watched: Vec<Nat>,
}

/// Runs with the small-step interpreter and records the INIT row plus one
/// row per counted action.
pub fn run_traced(
    tree: &ProgramTree,
    inputs: &[Nat],
    budget: Budget,
    watched: &[FieldId],
) -> (Vec<TraceRow>, RunOutcome) {
    let mut st = initialize(tree, inputs, budget);
    let watch = |st: &MachineState| watched.iter().map(|f| st.get(f)).collect::<Vec<_>>();
    let mut rows = vec![TraceRow { step: 0, action: Action::Init, value_after: None, watched: watch(&st) }];
    loop {
        match st.step() {
            Ok(Some(action)) => {
                if let Some(f) = action.field() {
                    let value_after = Some(st.get(f));
                    rows.push(TraceRow { step: st.steps, action, value_after, watched: watch(&st) });
                }
            }
            Ok(None) => {
                let value = st.output();
                return (rows, RunOutcome::Value { value, steps: Nat::from(st.steps) });
            }
            Err(kind) => return (rows, RunOutcome::BudgetExceeded { kind, snapshot: st.snapshot() }),
        }
    }
}

/// Tab-separated trace with a header line.
pub fn format_trace(rows: &[TraceRow], watched: &[FieldId]) -> String {
    let mut out = String::from("step\taction\tfield\tvalue_after");
    for f in watched {
        out.push('\t');
        out.push_str(f.as_str());
    }
    out.push('\n');
    for r in rows {
        let field = r.action.field().map(|f| f.to_string()).unwrap_or_else(|| "-".into());
        let value = r.value_after.as_ref().map(|v| v.to_string()).unwrap_or_else(|| "-".into());
        out.push_str(&format!("{}\t{}\t{}\t{}", r.step, r.action.label(), field, value));
        for v in &r.watched {
            out.push('\t');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}
