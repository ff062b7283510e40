//! Program trees parsed from number strings.
//!
//! Digit 8 opens an accolade, digit 9 closes it, and every maximal run of
//! octal digits is one field token. The first field inside an accolade is its
//! counter and the last one its limit; whatever lies between is the body.

use std::collections::BTreeSet;
use std::fmt;

use crate::numerals::{render_digits, Numeral, RenderMode};

/// Name of a memory field: a non-empty octal digit string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldId(String);

impl FieldId {
    pub fn output() -> Self {
        FieldId("0".into())
    }

    /// Field holding the `i`-th input (1-based): `"0"` followed by `i` in octal.
    pub fn input(i: usize) -> Self {
        assert!(i >= 1, "inputs are numbered from 1");
        FieldId(format!("0{i:o}"))
    }

    /// Scratch field with octal value `v` (v ≥ 1).
    pub fn scratch(v: u64) -> Self {
        assert!(v >= 1, "scratch fields are positive");
        FieldId(format!("{v:o}"))
    }

    /// Accepts "0", a positive octal string, or "0" followed by one.
    pub fn parse(s: &str) -> Option<Self> {
        let ok = !s.is_empty()
            && s.bytes().all(|b| (b'0'..=b'7').contains(&b))
            && !s.starts_with("00");
        ok.then(|| FieldId(s.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_output(&self) -> bool {
        self.0 == "0"
    }

    /// Input index when this is an input field.
    pub fn input_index(&self) -> Option<u64> {
        let rest = self.0.strip_prefix('0')?;
        if rest.is_empty() {
            return None;
        }
        u64::from_str_radix(rest, 8).ok()
    }
}

impl fmt::Display for FieldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ItemId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProgramItem {
    Succeed(FieldId),
    Empty,
    Accolade {
        counter: FieldId,
        body: Vec<ItemId>,
        limit: FieldId,
        /// Written as `{f}`: one token serving as both counter and limit.
        single: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HerbumReason {
    UnmatchedClose { position: usize },
    UnclosedOpen { count: usize },
    DoubleOpen { position: usize },
    DoubleClose { position: usize },
    MultiplyPreNulled { field: String },
}

impl fmt::Display for HerbumReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HerbumReason::UnmatchedClose { position } => {
                write!(f, "unmatched closing brace at digit {position}")
            }
            HerbumReason::UnclosedOpen { count } => write!(f, "{count} unclosed opening brace(s)"),
            HerbumReason::DoubleOpen { position } => write!(f, "digit pair 88 at digit {position}"),
            HerbumReason::DoubleClose { position } => write!(f, "digit pair 99 at digit {position}"),
            HerbumReason::MultiplyPreNulled { field } => {
                write!(f, "field {field} has more than one leading zero")
            }
        }
    }
}

/// A parsed arbor-number. Nodes live in a flat arena so that very deep
/// programs never need recursion to build, walk or drop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgramTree {
    nodes: Vec<ProgramItem>,
    top: Vec<ItemId>,
    source: Numeral,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    Herbum(HerbumReason),
    PrimitiveArbor,
    ComplexArbor(String),
}

impl Classification {
    pub fn is_primitive(&self) -> bool {
        matches!(self, Classification::PrimitiveArbor)
    }

    pub fn is_arbor(&self) -> bool {
        !matches!(self, Classification::Herbum(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Classification::Herbum(_) => "herbum",
            Classification::PrimitiveArbor => "primitive",
            Classification::ComplexArbor(_) => "complex",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Herbum(r) => write!(f, "herbum: {r}"),
            Classification::PrimitiveArbor => f.write_str("primitive"),
            Classification::ComplexArbor(why) => write!(f, "complex: {why}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Metrics {
    pub size: usize,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token<'a> {
    Open,
    Close,
    Field(&'a str),
}

fn tokenize(digits: &str) -> Vec<Token<'_>> {
    let bytes = digits.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'8' => {
                out.push(Token::Open);
                i += 1;
            }
            b'9' => {
                out.push(Token::Close);
                i += 1;
            }
            _ => {
                let start = i;
                while i < bytes.len() && bytes[i] < b'8' {
                    i += 1;
                }
                out.push(Token::Field(&digits[start..i]));
            }
        }
    }
    out
}

fn herbum_check(digits: &str) -> Option<HerbumReason> {
    if let Some(p) = digits.find("88") {
        return Some(HerbumReason::DoubleOpen { position: p });
    }
    if let Some(p) = digits.find("99") {
        return Some(HerbumReason::DoubleClose { position: p });
    }
    let mut depth = 0usize;
    for (position, b) in digits.bytes().enumerate() {
        match b {
            b'8' => depth += 1,
            b'9' => {
                if depth == 0 {
                    return Some(HerbumReason::UnmatchedClose { position });
                }
                depth -= 1;
            }
            _ => {}
        }
    }
    if depth > 0 {
        return Some(HerbumReason::UnclosedOpen { count: depth });
    }
    for tok in tokenize(digits) {
        if let Token::Field(f) = tok {
            if f.starts_with("00") {
                return Some(HerbumReason::MultiplyPreNulled { field: f.to_string() });
            }
        }
    }
    None
}

enum Entry {
    Field(FieldId),
    Node(ItemId),
}

/// Parses a numeral into a program tree, or explains why it is herbum.
pub fn parse_program(n: &Numeral) -> Result<ProgramTree, HerbumReason> {
    let digits = n.digits();
    if let Some(reason) = herbum_check(digits) {
        return Err(reason);
    }
    let mut nodes: Vec<ProgramItem> = Vec::new();
    let mut stack: Vec<Vec<Entry>> = vec![Vec::new()];
    let mut push_node = |nodes: &mut Vec<ProgramItem>, item: ProgramItem| {
        nodes.push(item);
        ItemId(nodes.len() - 1)
    };
    for tok in tokenize(digits) {
        match tok {
            Token::Open => stack.push(Vec::new()),
            Token::Field(f) => stack
                .last_mut()
                .expect("stack never empty")
                .push(Entry::Field(FieldId(f.to_string()))),
            Token::Close => {
                let entries = stack.pop().expect("balanced");
                let item = close_accolade(&mut nodes, entries, &mut push_node);
                let id = push_node(&mut nodes, item);
                stack.last_mut().expect("balanced").push(Entry::Node(id));
            }
        }
    }
    let top_entries = stack.pop().expect("top frame");
    debug_assert!(stack.is_empty());
    let top = top_entries
        .into_iter()
        .map(|e| entry_to_item(&mut nodes, e, &mut push_node))
        .collect();
    Ok(ProgramTree { nodes, top, source: n.clone() })
}

fn entry_to_item(
    nodes: &mut Vec<ProgramItem>,
    e: Entry,
    push: &mut impl FnMut(&mut Vec<ProgramItem>, ProgramItem) -> ItemId,
) -> ItemId {
    match e {
        Entry::Node(id) => id,
        Entry::Field(f) => push(nodes, ProgramItem::Succeed(f)),
    }
}

fn close_accolade(
    nodes: &mut Vec<ProgramItem>,
    mut entries: Vec<Entry>,
    push: &mut impl FnMut(&mut Vec<ProgramItem>, ProgramItem) -> ItemId,
) -> ProgramItem {
    if entries.is_empty() {
        return ProgramItem::Empty;
    }
    // 88 and 99 are excluded, so a non-empty accolade starts and ends with a field.
    let Some(Entry::Field(limit)) = entries.pop() else {
        unreachable!("accolade ends with a field")
    };
    if entries.is_empty() {
        return ProgramItem::Accolade {
            counter: limit.clone(),
            body: Vec::new(),
            limit,
            single: true,
        };
    }
    let mut it = entries.into_iter();
    let Some(Entry::Field(counter)) = it.next() else {
        unreachable!("accolade starts with a field")
    };
    let body = it.map(|e| entry_to_item(nodes, e, push)).collect();
    ProgramItem::Accolade { counter, body, limit, single: false }
}

impl ProgramTree {
    pub fn parse(n: &Numeral) -> Result<Self, HerbumReason> {
        parse_program(n)
    }

    pub fn top(&self) -> &[ItemId] {
        &self.top
    }

    pub fn item(&self, id: ItemId) -> &ProgramItem {
        &self.nodes[id.0]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn source(&self) -> &Numeral {
        &self.source
    }

    /// Pre-order walk: calls `visit(id, nesting)` where `nesting` is the number
    /// of accolades strictly enclosing the item.
    pub fn walk(&self, mut visit: impl FnMut(ItemId, usize)) {
        let mut stack: Vec<(ItemId, usize)> = self.top.iter().rev().map(|&id| (id, 0)).collect();
        while let Some((id, nesting)) = stack.pop() {
            visit(id, nesting);
            if let ProgramItem::Accolade { body, .. } = self.item(id) {
                stack.extend(body.iter().rev().map(|&c| (c, nesting + 1)));
            }
        }
    }

    /// Every field named anywhere in the program.
    pub fn fields(&self) -> BTreeSet<FieldId> {
        let mut out = BTreeSet::new();
        for item in &self.nodes {
            match item {
                ProgramItem::Succeed(f) => {
                    out.insert(f.clone());
                }
                ProgramItem::Accolade { counter, limit, .. } => {
                    out.insert(counter.clone());
                    out.insert(limit.clone());
                }
                ProgramItem::Empty => {}
            }
        }
        out
    }

    /// Fields the program can write: succeed targets and accolade counters.
    pub fn written_fields(&self) -> BTreeSet<FieldId> {
        let mut out = BTreeSet::new();
        for item in &self.nodes {
            match item {
                ProgramItem::Succeed(f) => {
                    out.insert(f.clone());
                }
                ProgramItem::Accolade { counter, .. } => {
                    out.insert(counter.clone());
                }
                ProgramItem::Empty => {}
            }
        }
        out
    }

    pub fn metrics(&self) -> Metrics {
        program_metrics(self)
    }

    pub fn render(&self, mode: RenderMode) -> String {
        render_program(self, mode)
    }

    /// Renders the tree back to plain digits.
    pub fn to_digits(&self) -> String {
        enum Op {
            Item(ItemId),
            Text(&'static str),
            Field(ItemId, bool),
        }
        let mut out = String::with_capacity(self.source.len());
        let mut stack: Vec<Op> = self.top.iter().rev().map(|&id| Op::Item(id)).collect();
        while let Some(op) = stack.pop() {
            match op {
                Op::Text(t) => out.push_str(t),
                Op::Field(id, is_limit) => {
                    if let ProgramItem::Accolade { counter, limit, .. } = self.item(id) {
                        out.push_str(if is_limit { limit.as_str() } else { counter.as_str() });
                    }
                }
                Op::Item(id) => match self.item(id) {
                    ProgramItem::Succeed(f) => out.push_str(f.as_str()),
                    ProgramItem::Empty => out.push_str("89"),
                    ProgramItem::Accolade { body, single, .. } => {
                        out.push('8');
                        stack.push(Op::Text("9"));
                        if !*single {
                            stack.push(Op::Field(id, true));
                            stack.extend(body.iter().rev().map(|&c| Op::Item(c)));
                        }
                        stack.push(Op::Field(id, false));
                    }
                },
            }
        }
        out
    }
}

/// Sorts a numeral into herbum, primitive-arbor or complex-arbor.
pub fn classify_number(n: &Numeral) -> Classification {
    match parse_program(n) {
        Err(reason) => Classification::Herbum(reason),
        Ok(tree) => classify_tree(&tree),
    }
}

/// Checks that every accolade keeps its counter and limit unwritten inside
/// its body, except through the fast-finish form `{c{}l}`.
pub fn classify_tree(tree: &ProgramTree) -> Classification {
    match primitive_violation(tree) {
        None => Classification::PrimitiveArbor,
        Some(why) => Classification::ComplexArbor(why),
    }
}

fn is_fast_finish(tree: &ProgramTree, id: ItemId, c: &FieldId, l: &FieldId) -> bool {
    match tree.item(id) {
        ProgramItem::Accolade { counter, body, limit, single: false } => {
            counter == c
                && limit == l
                && body.len() == 1
                && matches!(tree.item(body[0]), ProgramItem::Empty)
        }
        _ => false,
    }
}

fn primitive_violation(tree: &ProgramTree) -> Option<String> {
    enum Op {
        Enter(ItemId),
        Leave,
    }
    // Enclosing accolades as (counter, limit).
    let mut enclosing: Vec<(&FieldId, &FieldId)> = Vec::new();
    let mut stack: Vec<Op> = tree.top.iter().rev().map(|&id| Op::Enter(id)).collect();
    while let Some(op) = stack.pop() {
        let id = match op {
            Op::Leave => {
                enclosing.pop();
                continue;
            }
            Op::Enter(id) => id,
        };
        match tree.item(id) {
            ProgramItem::Empty => {}
            ProgramItem::Succeed(f) => {
                if let Some((c, l)) = enclosing.iter().find(|(c, l)| *c == f || *l == f) {
                    return Some(format!("field {f} is succeeded inside the accolade {{{c}..{l}}}"));
                }
            }
            ProgramItem::Accolade { counter, body, limit, single } => {
                for (c, l) in enclosing.iter() {
                    if counter != *c && counter != *l {
                        continue;
                    }
                    if *single {
                        return Some(format!("field {counter} is deleted inside the accolade {{{c}..{l}}}"));
                    }
                    if !is_fast_finish(tree, id, c, l) {
                        return Some(format!(
                            "field {counter} is used as a counter inside the accolade {{{c}..{l}}}"
                        ));
                    }
                }
                if !*single {
                    enclosing.push((counter, limit));
                    stack.push(Op::Leave);
                    stack.extend(body.iter().rev().map(|&c| Op::Enter(c)));
                }
            }
        }
    }
    None
}

/// Field-token count and the deepest accolade nesting of any field token.
pub fn program_metrics(t: &ProgramTree) -> Metrics {
    let mut size = 0;
    let mut depth = 0;
    t.walk(|id, nesting| match t.item(id) {
        ProgramItem::Succeed(_) => {
            size += 1;
            depth = depth.max(nesting);
        }
        ProgramItem::Accolade { single, .. } => {
            size += if *single { 1 } else { 2 };
            depth = depth.max(nesting + 1);
        }
        ProgramItem::Empty => {}
    });
    Metrics { size, depth }
}

pub fn render_program(t: &ProgramTree, mode: RenderMode) -> String {
    render_digits(&t.to_digits(), mode)
}
