//! Decimal number strings with the brace reading, and base-35 numerals.
//!
//! A [`Numeral`] is a canonical decimal digit string. The digits `8` and `9`
//! may be written as `{` and `}`, and a comma stands for the pair `89`
//! (an empty accolade). Spaces are ignored on input.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

/// Unbounded natural number.
pub type Nat = BigUint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumeralError {
    #[error("empty input")]
    EmptyInput,
    #[error("invalid character {ch:?} at position {position}")]
    InvalidCharacter { ch: char, position: usize },
    #[error("leading zero in {0:?}")]
    LeadingZero(String),
}

/// How to spell the digits 8 and 9 when rendering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RenderMode {
    /// Digits `0`–`9` only.
    Plain,
    /// `{` and `}` for 8 and 9.
    Braces,
    /// Braces, with every adjacent `{}` collapsed into `,`.
    #[default]
    BracesComma,
}

impl FromStr for RenderMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plain" => Ok(RenderMode::Plain),
            "braces" => Ok(RenderMode::Braces),
            "braces-comma" => Ok(RenderMode::BracesComma),
            other => Err(format!("unknown render mode {other:?}")),
        }
    }
}

/// Canonical decimal number string (most significant digit first, no
/// leading zero unless the numeral is exactly `0`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Numeral(String);

impl Numeral {
    /// Parses a number string, accepting `{`/`}` for 8/9 and `,` for 89.
    pub fn parse(text: &str) -> Result<Self, NumeralError> {
        let mut digits = String::with_capacity(text.len());
        for (position, ch) in text.chars().enumerate() {
            match ch {
                '0'..='9' => digits.push(ch),
                '{' => digits.push('8'),
                '}' => digits.push('9'),
                ',' => digits.push_str("89"),
                c if c.is_whitespace() => {}
                ch => return Err(NumeralError::InvalidCharacter { ch, position }),
            }
        }
        if digits.is_empty() {
            return Err(NumeralError::EmptyInput);
        }
        if digits.len() > 1 && digits.starts_with('0') {
            return Err(NumeralError::LeadingZero(text.to_string()));
        }
        Ok(Numeral(digits))
    }

    pub fn zero() -> Self {
        Numeral("0".to_string())
    }

    pub fn from_nat(n: &Nat) -> Self {
        Numeral(n.to_str_radix(10))
    }

    pub fn from_u64(n: u64) -> Self {
        Numeral(n.to_string())
    }

    pub fn to_nat(&self) -> Nat {
        BigUint::parse_bytes(self.0.as_bytes(), 10).expect("canonical digits")
    }

    /// The plain digit string.
    pub fn digits(&self) -> &str {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn render(&self, mode: RenderMode) -> String {
        render_digits(&self.0, mode)
    }

    /// Builds a numeral from a digit string that is already canonical.
    pub(crate) fn from_canonical(digits: String) -> Self {
        debug_assert!(!digits.is_empty());
        debug_assert!(digits.bytes().all(|b| b.is_ascii_digit()));
        debug_assert!(digits.len() == 1 || !digits.starts_with('0'));
        Numeral(digits)
    }
}

impl fmt::Display for Numeral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Numeral {
    type Err = NumeralError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Numeral::parse(s)
    }
}

impl From<&Nat> for Numeral {
    fn from(n: &Nat) -> Self {
        Numeral::from_nat(n)
    }
}

pub(crate) fn render_digits(digits: &str, mode: RenderMode) -> String {
    match mode {
        RenderMode::Plain => digits.to_string(),
        RenderMode::Braces => digits.chars().map(brace_char).collect(),
        RenderMode::BracesComma => {
            // "89" pairs never overlap, so a single left-to-right pass suffices.
            let bytes = digits.as_bytes();
            let mut out = String::with_capacity(digits.len());
            let mut i = 0;
            while i < bytes.len() {
                if bytes[i] == b'8' && bytes.get(i + 1) == Some(&b'9') {
                    out.push(',');
                    i += 2;
                } else {
                    out.push(brace_char(bytes[i] as char));
                    i += 1;
                }
            }
            out
        }
    }
}

fn brace_char(c: char) -> char {
    match c {
        '8' => '{',
        '9' => '}',
        c => c,
    }
}

/// The 35-character alphabet in ASCII transliteration. Position = digit value.
///
/// `0`–`7`, `{`, `}` are the octal digits and braces; `a`–`j` are the index
/// digits 0–9; then `N = # ! | & > ~ ( ; ) E A [ ]` stand for the variable
/// letter, `=`, `≠`, `¬`, `∨`, `∧`, `→`, `↔`, the punctuation, `∃`, `∀`
/// and the square brackets.
pub const ALPHABET35: [char; 35] = [
    '0', '1', '2', '3', '4', '5', '6', '7', '{', '}', 'a', 'b', 'c', 'd', 'e', 'f', 'g', 'h', 'i',
    'j', 'N', '=', '#', '!', '|', '&', '>', '~', '(', ';', ')', 'E', 'A', '[', ']',
];

/// The fifteen characters available to unary-scheme strings.
pub const REDUCED_ALPHABET: [char; 15] = [
    '0', '1', '2', '3', '4', '5', '6', '7', '{', '}', 'b', 'N', '(', ';', ')',
];

/// Digit value of a character of [`ALPHABET35`].
pub fn trig_digit_value(c: char) -> Option<u8> {
    ALPHABET35.iter().position(|&a| a == c).map(|p| p as u8)
}

pub fn is_reduced_char(c: char) -> bool {
    REDUCED_ALPHABET.contains(&c)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrigError {
    #[error("empty input")]
    EmptyInput,
    #[error("character {0:?} is not in the 35-character alphabet")]
    InvalidCharacter(char),
    #[error("leading zero character in {0:?}")]
    LeadingZero(String),
}

/// Base-35 numeral over [`ALPHABET35`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TrigNumeral(String);

impl TrigNumeral {
    pub fn parse(text: &str) -> Result<Self, TrigError> {
        if text.is_empty() {
            return Err(TrigError::EmptyInput);
        }
        if let Some(bad) = text.chars().find(|&c| trig_digit_value(c).is_none()) {
            return Err(TrigError::InvalidCharacter(bad));
        }
        if text.len() > 1 && text.starts_with('0') {
            return Err(TrigError::LeadingZero(text.to_string()));
        }
        Ok(TrigNumeral(text.to_string()))
    }

    pub fn zero() -> Self {
        TrigNumeral("0".to_string())
    }

    pub fn from_nat(n: &Nat) -> Self {
        if n.is_zero() {
            return Self::zero();
        }
        let s = n
            .to_radix_be(35)
            .into_iter()
            .map(|d| ALPHABET35[d as usize])
            .collect();
        TrigNumeral(s)
    }

    pub fn to_nat(&self) -> Nat {
        let digits: Vec<u8> = self
            .0
            .chars()
            .map(|c| trig_digit_value(c).expect("validated alphabet"))
            .collect();
        BigUint::from_radix_be(&digits, 35).expect("digits below radix")
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The next base-35 numeral, computed by carrying over the characters.
    pub fn successor(&self) -> Self {
        let mut chars: Vec<char> = self.0.chars().collect();
        let mut i = chars.len();
        loop {
            if i == 0 {
                chars.insert(0, ALPHABET35[1]);
                break;
            }
            i -= 1;
            let v = trig_digit_value(chars[i]).expect("validated alphabet") as usize;
            if v + 1 < ALPHABET35.len() {
                chars[i] = ALPHABET35[v + 1];
                break;
            }
            chars[i] = ALPHABET35[0];
        }
        TrigNumeral(chars.into_iter().collect())
    }
}

impl fmt::Display for TrigNumeral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for TrigNumeral {
    type Err = TrigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TrigNumeral::parse(s)
    }
}

pub fn convert_dec_trig(n: &Numeral) -> TrigNumeral {
    TrigNumeral::from_nat(&n.to_nat())
}

pub fn convert_trig_dec(t: &TrigNumeral) -> Numeral {
    Numeral::from_nat(&t.to_nat())
}

pub fn trig_successor(t: &TrigNumeral) -> TrigNumeral {
    t.successor()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn num(s: &str) -> Numeral {
        Numeral::parse(s).unwrap()
    }

    #[test]
    fn brace_spelling_parses() {
        assert_eq!(num("1}41").digits(), "1941");
        assert_eq!(num("0").digits(), "0");
        assert_eq!(
            num("{2,02}{0}{3{1,0,01}2}").digits(),
            "828902980983818908901929"
        );
        assert_eq!(num("{1 {0} 0,01}").digits(), "81809089019");
    }

    #[test]
    fn parse_errors() {
        assert_eq!(Numeral::parse(""), Err(NumeralError::EmptyInput));
        assert_eq!(Numeral::parse("  "), Err(NumeralError::EmptyInput));
        assert!(matches!(
            Numeral::parse("12a"),
            Err(NumeralError::InvalidCharacter { ch: 'a', position: 2 })
        ));
        assert!(matches!(Numeral::parse("012"), Err(NumeralError::LeadingZero(_))));
        assert!(matches!(Numeral::parse("0,"), Err(NumeralError::LeadingZero(_))));
    }

    #[test]
    fn rendering_modes() {
        assert_eq!(num("1941").render(RenderMode::Braces), "1}41");
        assert_eq!(num("7").render(RenderMode::Plain), "7");
        assert_eq!(
            num("828902980983818908901929").render(RenderMode::BracesComma),
            "{2,02}{0}{3{1,0,01}2}"
        );
        assert_eq!(num("89").render(RenderMode::BracesComma), ",");
        assert_eq!(num("889").render(RenderMode::BracesComma), "{,");
    }

    #[test]
    fn trig_fixtures() {
        assert_eq!(convert_dec_trig(&num("0")).as_str(), "0");
        assert_eq!(convert_dec_trig(&num("711")).as_str(), "Nb");
        assert_eq!(convert_trig_dec(&TrigNumeral::parse("Nc").unwrap()).digits(), "712");
        let t = |s: &str| TrigNumeral::parse(s).unwrap();
        assert_eq!(t("0").successor().as_str(), "1");
        assert_eq!(t("Nb").successor().as_str(), "Nc");
        assert_eq!(t("]").successor().as_str(), "10");
        assert_eq!(t("1]]").successor().as_str(), "200");
    }

    #[test]
    fn alphabet_shape() {
        assert_eq!(ALPHABET35.len(), 35);
        let mut sorted = ALPHABET35.to_vec();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 35);
        assert!(REDUCED_ALPHABET.iter().all(|c| ALPHABET35.contains(c)));
        assert_eq!(trig_digit_value('N'), Some(20));
        assert_eq!(trig_digit_value('b'), Some(11));
        assert_eq!(trig_digit_value(']'), Some(34));
    }

    #[test]
    fn trig_parse_rejects() {
        assert_eq!(TrigNumeral::parse(""), Err(TrigError::EmptyInput));
        assert_eq!(TrigNumeral::parse("N8"), Err(TrigError::InvalidCharacter('8')));
        assert!(matches!(TrigNumeral::parse("0N"), Err(TrigError::LeadingZero(_))));
    }

    /// Base conversion by repeated division on machine integers.
    fn u64_to_trig(mut v: u64) -> String {
        if v == 0 {
            return "0".into();
        }
        let mut out = Vec::new();
        while v > 0 {
            out.push(ALPHABET35[(v % 35) as usize]);
            v /= 35;
        }
        out.iter().rev().collect()
    }

    #[test]
    fn round_trip_first_million() {
        for v in (0..=1_000_000u64).step_by(7).chain(999_990..=1_000_000) {
            let n = Numeral::from_u64(v);
            let t = convert_dec_trig(&n);
            assert_eq!(t.as_str(), u64_to_trig(v));
            assert_eq!(convert_trig_dec(&t), n);
        }
    }

    proptest! {
        #[test]
        fn synonym_spellings_agree(v in 0u64..u64::MAX) {
            let plain = v.to_string();
            let braces = render_digits(&plain, RenderMode::Braces);
            let comma = render_digits(&plain, RenderMode::BracesComma);
            let spaced: String = comma.chars().flat_map(|c| [c, ' ']).collect();
            let p = Numeral::parse(&plain).unwrap();
            prop_assert_eq!(&Numeral::parse(&braces).unwrap(), &p);
            prop_assert_eq!(&Numeral::parse(&comma).unwrap(), &p);
            prop_assert_eq!(&Numeral::parse(&spaced).unwrap(), &p);
        }

        #[test]
        fn successor_matches_value_plus_one(v in 0u64..(1u64 << 50)) {
            let t = TrigNumeral::parse(&u64_to_trig(v)).unwrap();
            let next = t.successor();
            prop_assert_eq!(next.as_str(), u64_to_trig(v + 1));
        }

        #[test]
        fn trig_order_preserved(a in 0u64..(1u64 << 40), b in 0u64..(1u64 << 40)) {
            let ta = TrigNumeral::from_nat(&Nat::from(a));
            let tb = TrigNumeral::from_nat(&Nat::from(b));
            let shortlex = |t: &TrigNumeral| {
                let s: Vec<u8> = t.as_str().chars().map(|c| trig_digit_value(c).unwrap()).collect();
                (s.len(), s)
            };
            prop_assert_eq!(a.cmp(&b), shortlex(&ta).cmp(&shortlex(&tb)));
        }
    }
}
