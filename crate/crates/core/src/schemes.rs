//! Patterns: numerals, constants and number-variables combined by
//! application. `(A;B)P` applies the program value of `P` to the values of
//! `A` and `B`; `(A)(B)C` reads as `(A)((B)C)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::arbator::{arbate_metered, CalcResult, Meter};
use crate::machine::Budget;
use crate::numerals::{Nat, Numeral, RenderMode};
use crate::stdlib::corpus::Corpus;

/// Deepest parenthesis nesting the parser accepts.
pub const MAX_PATTERN_NESTING: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pattern {
    Num(Numeral),
    Const { name: String, value: Numeral },
    Var(u32),
    Apply { args: Vec<Pattern>, program: Box<Pattern> },
}

impl Pattern {
    pub fn apply(args: Vec<Pattern>, program: Pattern) -> Self {
        Pattern::Apply { args, program: Box::new(program) }
    }

    fn is_leaf(&self) -> bool {
        !matches!(self, Pattern::Apply { .. })
    }

    /// Visits every node with a flag telling whether it sits in a program
    /// position.
    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Pattern, bool)) {
        let mut stack = vec![(self, false)];
        while let Some((p, in_program)) = stack.pop() {
            f(p, in_program);
            if let Pattern::Apply { args, program } = p {
                stack.push((program, true));
                stack.extend(args.iter().rev().map(|a| (a, false)));
            }
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Num(n) => f.write_str(&n.render(RenderMode::BracesComma)),
            Pattern::Const { name, .. } => write!(f, "${name}"),
            Pattern::Var(i) => write!(f, "N{i}"),
            Pattern::Apply { args, program } => {
                f.write_str("(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(";")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, "){program}")
            }
        }
    }
}

/// Named numerals usable as `$name`.
#[derive(Debug, Clone, Default)]
pub struct Constants {
    table: HashMap<String, Numeral>,
}

impl Constants {
    pub fn new() -> Self {
        Constants::default()
    }

    /// Every corpus entry by name, plus the aliases `N+` for add, `N×` and
    /// `Nx` for mul, and `N'` for succ.
    pub fn from_corpus(corpus: &Corpus) -> Self {
        let mut c = Constants::new();
        for e in corpus.entries() {
            c.insert(&e.name, e.program.clone());
        }
        for (alias, name) in [("N+", "add"), ("N×", "mul"), ("Nx", "mul"), ("N'", "succ")] {
            if let Some(e) = corpus.get(name) {
                c.insert(alias, e.program.clone());
            }
        }
        c
    }

    pub fn insert(&mut self, name: &str, value: Numeral) {
        self.table.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<&Numeral> {
        self.table.get(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("syntax error at character {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown constant `${0}`")]
    UnknownConstant(String),
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    constants: &'a Constants,
}

fn is_numeral_char(c: char) -> bool {
    c.is_ascii_digit() || matches!(c, '{' | '}' | ',')
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.' | '\'' | '+' | '×')
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or_else(|| self.chars.last().map_or(0, |&(i, c)| i + c.len_utf8()), |&(i, _)| i)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, PatternError> {
        Err(PatternError::Syntax { position: self.offset(), message: message.into() })
    }

    fn pattern(&mut self, depth: usize) -> Result<Pattern, PatternError> {
        match self.peek() {
            Some('(') => {
                if depth >= MAX_PATTERN_NESTING {
                    return self.error("patterns nest too deeply");
                }
                self.pos += 1;
                let mut args = Vec::new();
                if self.peek() != Some(')') {
                    loop {
                        args.push(self.pattern(depth + 1)?);
                        match self.peek() {
                            Some(';') => self.pos += 1,
                            Some(')') => break,
                            _ => return self.error("expected `;` or `)`"),
                        }
                    }
                }
                self.pos += 1;
                let program = self.pattern(depth + 1)?;
                Ok(Pattern::apply(args, program))
            }
            Some('N') => {
                let start = self.pos;
                self.pos += 1;
                let mut digits = String::new();
                while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                    digits.push(c);
                    self.pos += 1;
                }
                match digits.parse::<u32>() {
                    Ok(i @ 1..=99) if !digits.starts_with('0') => Ok(Pattern::Var(i)),
                    _ => {
                        self.pos = start;
                        self.error("variables are N1 to N99")
                    }
                }
            }
            Some('$') => {
                self.pos += 1;
                let mut name = String::new();
                while let Some(c) = self.peek().filter(|&c| is_name_char(c)) {
                    name.push(c);
                    self.pos += 1;
                }
                if name.is_empty() {
                    return self.error("expected a constant name after `$`");
                }
                match self.constants.get(&name) {
                    Some(v) => Ok(Pattern::Const { name, value: v.clone() }),
                    None => Err(PatternError::UnknownConstant(name)),
                }
            }
            Some(c) if is_numeral_char(c) => {
                let start = self.offset();
                let mut text = String::new();
                while let Some(c) = self.peek().filter(|&c| is_numeral_char(c)) {
                    text.push(c);
                    self.pos += 1;
                }
                Numeral::parse(&text)
                    .map(Pattern::Num)
                    .map_err(|e| PatternError::Syntax { position: start, message: e.to_string() })
            }
            Some(_) => self.error("expected a numeral, variable, constant or `(`"),
            None => self.error("unexpected end of pattern"),
        }
    }
}

/// Parses pattern text. Whitespace is ignored.
pub fn parse_pattern(text: &str, constants: &Constants) -> Result<Pattern, PatternError> {
    let chars = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let mut p = Parser { chars, pos: 0, constants };
    let pattern = p.pattern(0)?;
    if p.peek().is_some() {
        return p.error("trailing input");
    }
    Ok(pattern)
}

/// `(free arity, parametric arity)`: the highest variable index, and the
/// number of distinct numeral values among the leaves.
pub fn arity_of(p: &Pattern) -> (u32, usize) {
    let mut free = 0;
    let mut values: BTreeSet<&str> = BTreeSet::new();
    p.visit(&mut |node, _| match node {
        Pattern::Var(i) => free = free.max(*i),
        Pattern::Num(n) | Pattern::Const { value: n, .. } => {
            values.insert(n.digits());
        }
        Pattern::Apply { .. } => {}
    });
    (free, values.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternClass {
    pub is_term: bool,
    pub free_arity: u32,
    pub parametric_arity: usize,
    pub primitive: bool,
    pub paradox: bool,
    pub processive: bool,
    pub conventional: bool,
    pub exotic: bool,
    pub ex_nihilo: bool,
}

impl PatternClass {
    pub fn orthodox(&self) -> bool {
        !self.paradox
    }

    pub fn complex(&self) -> bool {
        !self.primitive
    }

    pub fn labels(&self) -> Vec<&'static str> {
        let mut out = vec![if self.is_term { "term" } else { "scheme" }];
        out.push(if self.primitive { "primitive" } else { "complex" });
        out.push(if self.paradox { "paradox" } else { "orthodox" });
        if self.processive {
            out.push("processive");
        }
        out.push(if self.conventional { "conventional" } else { "exotic" });
        if self.ex_nihilo {
            out.push("ex-nihilo");
        }
        out
    }
}

impl fmt::Display for PatternClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (free arity {}, parametric arity {})", self.labels().join(", "), self.free_arity, self.parametric_arity)
    }
}

pub fn classify_pattern(p: &Pattern) -> PatternClass {
    let (free_arity, parametric_arity) = arity_of(p);
    let primitive = match p {
        Pattern::Apply { args, program } => {
            args.iter().all(Pattern::is_leaf) && matches!(**program, Pattern::Num(_) | Pattern::Const { .. })
        }
        _ => false,
    };
    let (mut paradox, mut processive, mut has_number) = (false, false, false);
    p.visit(&mut |node, in_program| match node {
        Pattern::Var(_) if in_program => paradox = true,
        Pattern::Apply { .. } if in_program => processive = true,
        Pattern::Num(_) | Pattern::Const { .. } => has_number = true,
        _ => {}
    });
    let conventional = primitive && !paradox;
    PatternClass {
        is_term: free_arity == 0,
        free_arity,
        parametric_arity,
        primitive,
        paradox,
        processive,
        conventional,
        exotic: !conventional,
        ex_nihilo: !has_number,
    }
}

/// Values for number-variables by index.
pub type Binding = BTreeMap<u32, Nat>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("variable N{0} is not bound")]
pub struct UnboundVariable(pub u32);

pub fn substitute(p: &Pattern, b: &Binding) -> Result<Pattern, UnboundVariable> {
    Ok(match p {
        Pattern::Var(i) => Pattern::Num(Numeral::from_nat(b.get(i).ok_or(UnboundVariable(*i))?)),
        Pattern::Apply { args, program } => Pattern::apply(
            args.iter().map(|a| substitute(a, b)).collect::<Result<_, _>>()?,
            substitute(program, b)?,
        ),
        leaf => leaf.clone(),
    })
}

/// Evaluates a pattern, the program of each application before its
/// arguments, all drawing on one budget.
pub fn evaluate(p: &Pattern, b: &Binding, budget: Budget) -> Result<CalcResult, UnboundVariable> {
    evaluate_metered(p, b, &mut Meter::new(budget))
}

pub fn evaluate_metered(p: &Pattern, b: &Binding, meter: &mut Meter) -> Result<CalcResult, UnboundVariable> {
    Ok(match p {
        Pattern::Num(n) | Pattern::Const { value: n, .. } => CalcResult::Value(n.to_nat()),
        Pattern::Var(i) => CalcResult::Value(b.get(i).ok_or(UnboundVariable(*i))?.clone()),
        Pattern::Apply { args, program } => {
            let prog = match evaluate_metered(program, b, meter)? {
                CalcResult::Value(v) => Numeral::from_nat(&v),
                exceeded => return Ok(exceeded),
            };
            let mut xs = Vec::with_capacity(args.len());
            for a in args {
                match evaluate_metered(a, b, meter)? {
                    CalcResult::Value(v) => xs.push(v),
                    exceeded => return Ok(exceeded),
                }
            }
            arbate_metered(&prog, &xs, meter)
        }
    })
}
