//! A diagonal function over the enumeration of unary-scheme strings.
//!
//! Base-35 numerals are read as strings over the reduced alphabet. Those
//! that spell a scheme whose only variable is `N₁` (written `Nb`, the index
//! digit `b` standing for 1) form the series; every other string stands for
//! nullification. [`boojum`] feeds each string its own index and adds one to
//! the result, so [`snark`] differs from every scheme in the series.

use std::fmt;

use crate::machine::{Budget, ExceededKind};
use crate::numerals::{convert_dec_trig, convert_trig_dec, is_reduced_char, trig_successor, Nat, Numeral, TrigNumeral};
use crate::schemes::{arity_of, evaluate, parse_pattern, Binding, Constants, Pattern};
use crate::arbator::CalcResult;

/// A string over the fifteen reduced characters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReducedString(String);

impl ReducedString {
    /// Accepts only reduced characters; reports the first offending one.
    pub fn new(s: &str) -> Result<Self, char> {
        match s.chars().find(|&c| !is_reduced_char(c)) {
            Some(c) => Err(c),
            None => Ok(ReducedString(s.to_string())),
        }
    }

    fn zero() -> Self {
        ReducedString("0".into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ReducedString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Rewrites variable index letters as decimal digits and parses the result
/// as a constant-free pattern. A variable is `N` followed by one or more
/// `b`, and must end where a pattern ends.
fn reduced_pattern(s: &str) -> Option<Pattern> {
    let mut text = String::with_capacity(s.len());
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            'N' => {
                text.push('N');
                let mut index = 0;
                while chars.next_if_eq(&'b').is_some() {
                    text.push('1');
                    index += 1;
                }
                if index == 0 || chars.peek().is_some_and(|&n| n != ';' && n != ')') {
                    return None;
                }
            }
            c if is_reduced_char(c) && c != 'b' => text.push(c),
            _ => return None,
        }
    }
    parse_pattern(&text, &Constants::new()).ok()
}

fn is_unary(p: &Pattern) -> bool {
    arity_of(p).0 == 1
}

pub fn is_unary_scheme(t: &TrigNumeral) -> bool {
    reduced_pattern(t.as_str()).is_some_and(|p| is_unary(&p))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumRecord {
    pub index: Nat,
    pub trig: TrigNumeral,
    pub is_unary_scheme: bool,
}

/// Records for indices `start, start+1, ...` in ascending order.
pub fn enumerate_from(start: &Nat) -> impl Iterator<Item = EnumRecord> {
    let mut index = start.clone();
    let mut trig = TrigNumeral::from_nat(start);
    std::iter::from_fn(move || {
        let rec = EnumRecord { index: index.clone(), is_unary_scheme: is_unary_scheme(&trig), trig: trig.clone() };
        index += 1u32;
        trig = trig.successor();
        Some(rec)
    })
}

/// Records for indices `0..limit`.
pub fn enumerate_unary_schemes(limit: u64) -> impl Iterator<Item = EnumRecord> {
    enumerate_from(&Nat::default()).take(usize::try_from(limit).unwrap_or(usize::MAX))
}

/// Replaces every `Nb` in a unary scheme by the numeral's digits, with 8 and
/// 9 written as braces. Anything else yields `"0"`.
pub fn insert_unary_scheme(s: &ReducedString, n: &Numeral) -> ReducedString {
    if !reduced_pattern(s.as_str()).is_some_and(|p| is_unary(&p)) {
        return ReducedString::zero();
    }
    let digits: String = n.digits().chars().map(|c| match c {
        '8' => '{',
        '9' => '}',
        c => c,
    }).collect();
    ReducedString(s.as_str().replace("Nb", &digits))
}

/// Value of a term string; `"0"` when the string is not a term.
pub fn evaluate_reduced_term(t: &ReducedString, budget: Budget) -> Result<Numeral, ExceededKind> {
    let Some(p) = reduced_pattern(t.as_str()).filter(|p| arity_of(p).0 == 0) else {
        return Ok(Numeral::zero());
    };
    match evaluate(&p, &Binding::new(), budget).expect("terms have no variables") {
        CalcResult::Value(v) => Ok(Numeral::from_nat(&v)),
        CalcResult::BudgetExceeded(k) => Err(k),
    }
}

/// The diagonal metascheme: one more than the string applied to its own
/// index.
pub fn boojum(t: &TrigNumeral, budget: Budget) -> Result<TrigNumeral, ExceededKind> {
    let s = ReducedString::new(t.as_str()).unwrap_or_else(|_| ReducedString::zero());
    let term = insert_unary_scheme(&s, &convert_trig_dec(t));
    let value = evaluate_reduced_term(&term, budget)?;
    Ok(trig_successor(&convert_dec_trig(&value)))
}

pub fn snark(n: &Nat, budget: Budget) -> Result<Nat, ExceededKind> {
    let t = convert_dec_trig(&Numeral::from_nat(n));
    Ok(convert_trig_dec(&boojum(&t, budget)?).to_nat())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trig(s: &str) -> TrigNumeral {
        TrigNumeral::parse(s).unwrap()
    }

    fn red(s: &str) -> ReducedString {
        ReducedString::new(s).unwrap()
    }

    #[test]
    fn scheme_recognition() {
        assert!(is_unary_scheme(&trig("Nb")));
        assert!(is_unary_scheme(&trig("(0)Nb")));
        assert!(is_unary_scheme(&trig("(Nb;Nb)1")));
        assert!(!is_unary_scheme(&trig("0")));
        assert!(!is_unary_scheme(&trig("Nbb")));
        assert!(!is_unary_scheme(&trig("Nc")));
        assert!(!is_unary_scheme(&trig("N")));
        assert!(!is_unary_scheme(&trig("b")));
        assert!(!is_unary_scheme(&trig("(Nb)0{")));
        assert!(!is_unary_scheme(&trig("(Nb)00")));
        assert!(!is_unary_scheme(&trig("N1")));
        assert!(!is_unary_scheme(&trig("(Nb0)1")));
        assert!(!is_unary_scheme(&trig("(1)Nb{")));
    }

    #[test]
    fn enumeration() {
        assert_eq!(enumerate_unary_schemes(0).count(), 0);
        let recs: Vec<EnumRecord> = enumerate_unary_schemes(712).collect();
        assert!(recs[..35].iter().all(|r| !r.is_unary_scheme));
        let first = recs.iter().find(|r| r.is_unary_scheme).unwrap();
        assert_eq!(first.index, Nat::from(711u32));
        assert_eq!(first.trig.as_str(), "Nb");
        for (i, r) in recs.iter().enumerate() {
            assert_eq!(r.index, Nat::from(i));
            assert_eq!(r.trig.to_nat(), r.index);
        }
        let resumed: Vec<EnumRecord> = enumerate_from(&Nat::from(700u32)).take(12).collect();
        assert_eq!(resumed[..], recs[700..712]);
    }

    #[test]
    fn insertion() {
        assert_eq!(insert_unary_scheme(&red("Nb"), &Numeral::from_u64(711)), red("711"));
        assert_eq!(insert_unary_scheme(&red("(0)Nb"), &Numeral::from_u64(5)), red("(0)5"));
        assert_eq!(insert_unary_scheme(&red("0"), &Numeral::from_u64(9)), red("0"));
        assert_eq!(insert_unary_scheme(&red("(Nb;Nb)1"), &Numeral::from_u64(89)), red("({};{})1"));
        assert_eq!(insert_unary_scheme(&red("Nbb"), &Numeral::from_u64(3)), red("0"));
    }

    #[test]
    fn term_evaluation() {
        let b = Budget::default();
        assert_eq!(evaluate_reduced_term(&red("711"), b), Ok(Numeral::from_u64(711)));
        assert_eq!(evaluate_reduced_term(&red("(3;4){0{}01}{1{}0{}02}"), b), Ok(Numeral::from_u64(7)));
        assert_eq!(evaluate_reduced_term(&red("Nb"), b), Ok(Numeral::zero()));
        assert_eq!(evaluate_reduced_term(&red("(("), b), Ok(Numeral::zero()));
        assert_eq!(evaluate_reduced_term(&red("(1{0{0}1})"), b), Ok(Numeral::zero()));
    }

    #[test]
    fn diagonal() {
        let b = Budget::default();
        assert_eq!(boojum(&trig("0"), b), Ok(trig("1")));
        assert_eq!(boojum(&trig("Nb"), b), Ok(trig("Nc")));
        assert_eq!(boojum(&trig("Ah"), b), Ok(trig("1")));
        assert_eq!(snark(&Nat::from(0u32), b), Ok(Nat::from(1u32)));
        assert_eq!(snark(&Nat::from(711u32), b), Ok(Nat::from(712u32)));
        assert_eq!(snark(&Nat::from(712u32), b), Ok(Nat::from(1u32)));
    }

    #[test]
    fn budget_failures_are_reported() {
        // (Nb){0,01}: the identity costs about x steps on its own index.
        let s = trig("(Nb){0{}01}");
        assert!(is_unary_scheme(&s));
        let index = s.to_nat();
        assert_eq!(snark(&index, Budget::steps(10)), Err(ExceededKind::Steps));
        assert_eq!(snark(&index, Budget::unlimited_steps()), Ok(index + 1u32));
    }
}
