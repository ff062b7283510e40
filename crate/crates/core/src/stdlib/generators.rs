//! Program generators for the hyperexponentiation and hyperincrementation
//! families, built as strings.

use crate::numerals::Numeral;

fn oct(n: u64) -> String {
    format!("{n:o}")
}

/// Expands commas and drops braces into digits.
fn digits(text: &str) -> Numeral {
    Numeral::parse(text).expect("generator text is a canonical numeral")
}

/// Text of the hyperexponentiation program of the given degree.
///
/// Degree 0 multiplies, degree 1 exponentiates, and each further degree
/// iterates the previous one.
pub fn hxpg_text(degree: u64) -> String {
    let mut text = String::from("{2,02}{0}{3{1,0,01}2}");
    for d in 1..=degree {
        let inner = text.replacen(",02}", ",0}", 1);
        text = format!("{{{},02}}{{0}}0{{{}{}{}}}", oct(2 * d + 2), oct(2 * d + 3), inner, oct(2 * d + 2));
    }
    text
}

pub fn gen_hxpg(degree: u64) -> Numeral {
    digits(&hxpg_text(degree))
}

/// Text of the hyperincrementation program of the given degree. Degree 0
/// doubles, degree 1 computes `x·2^x`.
pub fn hicg_text(degree: u64) -> String {
    if degree == 0 {
        return "{0,01}{1,0,01}".into();
    }
    let mut block = format!("{{{},0}}{{{},0,{}}}", oct(2 * degree), oct(2 * degree + 1), oct(2 * degree));
    for j in (1..degree).rev() {
        block = format!("{{{},0}}{{{}{}{}}}", oct(2 * j), oct(2 * j + 1), block, oct(2 * j));
    }
    format!("{{0,01}}{{1{block}01}}")
}

pub fn gen_hicg(degree: u64) -> Numeral {
    digits(&hicg_text(degree))
}
