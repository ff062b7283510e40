//! Host reference functions for the program corpus.
//!
//! Characteristic functions answer 0 for true and 1 for false. Missing
//! arguments read as 0. An oracle returns `None` when its value would need
//! more than the given number of bits.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, ToPrimitive, Zero};

use super::pairing::pair_decode;
use crate::numerals::Nat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OracleId {
    Add,
    Mul,
    Xp,
    Suxp,
    Fac,
    Prd,
    Tst,
    Adi,
    Sig,
    Neg,
    And,
    Lor,
    Evy,
    Ody,
    Div,
    Dir,
    Rt,
    Lg,
    Eqy,
    Iey,
    Miny,
    Emiy,
    Id,
    Dpj,
    Tpj,
    Succ,
    Const(u64),
    Decc,
    Pry,
    Npr,
    Pair,
    Row,
    Col,
    Dup,
    Ic,
    Sic,
}

const NAMED: &[(&str, OracleId)] = &[
    ("add", OracleId::Add),
    ("mul", OracleId::Mul),
    ("xp", OracleId::Xp),
    ("suxp", OracleId::Suxp),
    ("fac", OracleId::Fac),
    ("prd", OracleId::Prd),
    ("tst", OracleId::Tst),
    ("adi", OracleId::Adi),
    ("sig", OracleId::Sig),
    ("neg", OracleId::Neg),
    ("and", OracleId::And),
    ("lor", OracleId::Lor),
    ("evy", OracleId::Evy),
    ("ody", OracleId::Ody),
    ("div", OracleId::Div),
    ("dir", OracleId::Dir),
    ("rt", OracleId::Rt),
    ("lg", OracleId::Lg),
    ("eqy", OracleId::Eqy),
    ("iey", OracleId::Iey),
    ("miny", OracleId::Miny),
    ("emiy", OracleId::Emiy),
    ("id", OracleId::Id),
    ("dpj", OracleId::Dpj),
    ("tpj", OracleId::Tpj),
    ("succ", OracleId::Succ),
    ("decc", OracleId::Decc),
    ("pry", OracleId::Pry),
    ("npr", OracleId::Npr),
    ("pair", OracleId::Pair),
    ("row", OracleId::Row),
    ("col", OracleId::Col),
    ("dup", OracleId::Dup),
    ("ic", OracleId::Ic),
    ("sic", OracleId::Sic),
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown oracle `{0}`")]
pub struct UnknownOracle(pub String);

impl FromStr for OracleId {
    type Err = UnknownOracle;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(&(_, id)) = NAMED.iter().find(|(n, _)| *n == s) {
            return Ok(id);
        }
        s.strip_prefix("const")
            .and_then(|v| v.parse().ok())
            .map(OracleId::Const)
            .ok_or_else(|| UnknownOracle(s.to_string()))
    }
}

impl fmt::Display for OracleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleId::Const(v) => write!(f, "const{v}"),
            id => {
                let name = NAMED.iter().find(|(_, i)| i == id).map(|(n, _)| *n).unwrap_or("?");
                f.write_str(name)
            }
        }
    }
}

fn truth(b: bool) -> Nat {
    if b {
        Nat::zero()
    } else {
        Nat::one()
    }
}

fn fits(v: Nat, max_bits: u64) -> Option<Nat> {
    (v.bits() <= max_bits).then_some(v)
}

/// `x^e` with `0^0 = 1`, or `None` past the bit cap.
pub fn pow_capped(x: &Nat, e: &Nat, max_bits: u64) -> Option<Nat> {
    if e.is_zero() || x.is_one() {
        return Some(Nat::one());
    }
    if x.is_zero() {
        return Some(Nat::zero());
    }
    let e = e.to_u64().filter(|&e| e.saturating_mul(x.bits() - 1) < max_bits)?;
    fits(x.pow(u32::try_from(e).ok()?), max_bits)
}

/// Iterated exponentiation `x↑↑y` with `x↑↑0 = 1`.
pub fn tetration(x: &Nat, y: &Nat, max_bits: u64) -> Option<Nat> {
    let mut v = Nat::one();
    let mut i = Nat::zero();
    while &i < y {
        let next = pow_capped(x, &v, max_bits)?;
        // 0 and 1 cycle with period two, so the rest is determined.
        if x.is_zero() {
            let left = y - &i;
            return Some(if (&left % 2u32).is_zero() { v } else { next });
        }
        if next == v {
            return Some(v);
        }
        v = next;
        i += 1u32;
    }
    Some(v)
}

/// The function computed by the hyperincrementation program of degree `d`:
/// `2x` for degree 0 and `s_d^x(x)` above, with `s_1(v) = 2v` and
/// `s_{k+1}(v) = s_k^v(v)`.
pub fn hyperincrement(d: u64, x: &Nat, max_bits: u64) -> Option<Nat> {
    fn step(k: u64, v: Nat, max_bits: u64) -> Option<Nat> {
        if k == 1 {
            return fits(v << 1u32, max_bits);
        }
        if v.is_zero() {
            return Some(v);
        }
        if k == 2 {
            let shift = v.to_u64().filter(|&s| s < max_bits)?;
            return fits(v << shift, max_bits);
        }
        let mut count = v.clone();
        let mut out = v;
        while !count.is_zero() {
            out = step(k - 1, out, max_bits)?;
            count -= 1u32;
        }
        Some(out)
    }
    if d == 0 {
        return fits(x << 1u32, max_bits);
    }
    let mut out = x.clone();
    let mut count = x.clone();
    while !count.is_zero() {
        out = step(d, out, max_bits)?;
        count -= 1u32;
    }
    Some(out)
}

fn is_prime(n: &Nat) -> Option<bool> {
    let n = n.to_u64()?;
    if n < 2 {
        return Some(false);
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return Some(false);
        }
        d += 1;
    }
    Some(true)
}

fn factorial(x: &Nat, max_bits: u64) -> Option<Nat> {
    let mut acc = Nat::one();
    let mut i = Nat::one();
    while &i <= x {
        acc = fits(acc * &i, max_bits)?;
        i += 1u32;
    }
    Some(acc)
}

/// Integer part of the `x`-th root of `y`, counted as `#{r ∈ 1..=y : r^x ≤ y}`.
fn entire_root(x: &Nat, y: &Nat) -> Nat {
    if y.is_zero() || x.is_zero() {
        return y.clone();
    }
    match x.to_u32() {
        Some(k) if u64::from(k) <= y.bits() => y.nth_root(k),
        _ => Nat::one(),
    }
}

/// `#{e ∈ 1..=y : x^e ≤ y}`.
fn entire_log(x: &Nat, y: &Nat) -> Nat {
    if y.is_zero() || x <= &Nat::one() {
        return y.clone();
    }
    let mut e = Nat::zero();
    let mut p = x.clone();
    while &p <= y {
        e += 1u32;
        p *= x;
    }
    e
}

fn decimal_concat(a: &Nat, b: &Nat) -> Nat {
    format!("{a}{b}").parse().expect("decimal digits")
}

impl OracleId {
    /// Number of inputs the function takes.
    pub fn arity(self) -> usize {
        use OracleId::*;
        match self {
            Const(_) => 0,
            Fac | Prd | Sig | Neg | Evy | Ody | Id | Succ | Pry | Npr | Row | Col | Dup | Ic | Sic => 1,
            Tpj => 3,
            _ => 2,
        }
    }

    pub fn eval(self, xs: &[Nat], max_bits: u64) -> Option<Nat> {
        use OracleId::*;
        let zero = Nat::zero();
        let arg = |i: usize| xs.get(i).unwrap_or(&zero);
        let (x, y) = (arg(0), arg(1));
        let v = match self {
            Add => x + y,
            Mul => x * y,
            Xp => return pow_capped(x, y, max_bits),
            Suxp => return tetration(x, y, max_bits),
            Fac => return factorial(x, max_bits),
            Prd => {
                if x.is_zero() {
                    zero.clone()
                } else {
                    x - 1u32
                }
            }
            Tst => {
                if x > y {
                    x - y
                } else {
                    zero.clone()
                }
            }
            Adi => {
                if x > y {
                    x - y
                } else {
                    y - x
                }
            }
            Sig => truth(x.is_zero()),
            Neg => truth(!x.is_zero()),
            And => truth(x.is_zero() && y.is_zero()),
            Lor => truth(x.is_zero() || y.is_zero()),
            Evy => x % 2u32,
            Ody => Nat::one() - (x % 2u32),
            Div => {
                if y.is_zero() {
                    x + 1u32
                } else {
                    x / y
                }
            }
            Dir => {
                if y.is_zero() {
                    x.clone()
                } else {
                    x % y
                }
            }
            Rt => entire_root(x, y),
            Lg => entire_log(x, y),
            Eqy => truth(x == y),
            Iey => truth(x != y),
            Miny => truth(x < y),
            Emiy => truth(x <= y),
            Id => x.clone(),
            Dpj => y.clone(),
            Tpj => arg(2).clone(),
            Succ => x + 1u32,
            Const(c) => Nat::from(c),
            Decc => decimal_concat(x, y),
            Pry => truth(is_prime(x)?),
            Npr => truth(!is_prime(x)?),
            Pair => super::pairing::pair_encode(x, y),
            Row => pair_decode(x).0,
            Col => pair_decode(x).1,
            Dup => return hyperincrement(0, x, max_bits),
            Ic => return hyperincrement(1, x, max_bits),
            Sic => return hyperincrement(2, x, max_bits),
        };
        fits(v, max_bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BITS: u64 = 1 << 20;

    fn ev(id: &str, xs: &[u64]) -> Option<u64> {
        let xs: Vec<Nat> = xs.iter().map(|&x| Nat::from(x)).collect();
        id.parse::<OracleId>().unwrap().eval(&xs, BITS).map(|v| v.to_u64().unwrap())
    }

    #[test]
    fn names_round_trip() {
        for &(name, id) in NAMED {
            assert_eq!(name.parse::<OracleId>().unwrap(), id);
            assert_eq!(id.to_string(), name);
        }
        assert_eq!("const10".parse::<OracleId>().unwrap(), OracleId::Const(10));
        assert!("constx".parse::<OracleId>().is_err());
        assert!("nope".parse::<OracleId>().is_err());
    }

    #[test]
    fn arithmetic() {
        assert_eq!(ev("add", &[3, 4]), Some(7));
        assert_eq!(ev("xp", &[0, 0]), Some(1));
        assert_eq!(ev("xp", &[3, 4]), Some(81));
        assert_eq!(ev("suxp", &[2, 3]), Some(16));
        assert_eq!(ev("suxp", &[2, 4]), Some(65536));
        assert_eq!((0..6).map(|y| ev("suxp", &[0, y]).unwrap()).collect::<Vec<_>>(), [1, 0, 1, 0, 1, 0]);
        assert_eq!(ev("suxp", &[1, 9]), Some(1));
        assert_eq!(ev("suxp", &[3, 4]), None);
        assert_eq!(ev("fac", &[4]), Some(24));
        assert_eq!(ev("prd", &[0]), Some(0));
        assert_eq!(ev("tst", &[2, 5]), Some(0));
        assert_eq!(ev("adi", &[2, 5]), Some(3));
        assert_eq!(ev("div", &[7, 0]), Some(8));
        assert_eq!(ev("dir", &[7, 0]), Some(7));
        assert_eq!(ev("dir", &[7, 3]), Some(1));
        assert_eq!(ev("decc", &[10, 7]), Some(107));
        assert_eq!(ev("decc", &[3, 0]), Some(30));
    }

    #[test]
    fn roots_and_logs() {
        assert_eq!(ev("rt", &[2, 17]), Some(4));
        assert_eq!(ev("rt", &[3, 27]), Some(3));
        assert_eq!(ev("rt", &[0, 5]), Some(5));
        assert_eq!(ev("rt", &[5, 0]), Some(0));
        assert_eq!(ev("rt", &[100, 9]), Some(1));
        assert_eq!(ev("lg", &[2, 17]), Some(4));
        assert_eq!(ev("lg", &[10, 9]), Some(0));
        assert_eq!(ev("lg", &[0, 6]), Some(6));
        assert_eq!(ev("lg", &[1, 6]), Some(6));
        for x in 0..12u64 {
            for y in 0..12u64 {
                let r = (1..=y).filter(|&r| r.pow(x as u32) <= y).count() as u64;
                assert_eq!(ev("rt", &[x, y]), Some(r));
                let l = (1..=y).filter(|&e| x.checked_pow(e as u32).is_some_and(|p| p <= y)).count() as u64;
                assert_eq!(ev("lg", &[x, y]), Some(l));
            }
        }
    }

    #[test]
    fn characteristics_use_zero_for_true() {
        assert_eq!(ev("eqy", &[3, 3]), Some(0));
        assert_eq!(ev("iey", &[3, 3]), Some(1));
        assert_eq!(ev("miny", &[2, 3]), Some(0));
        assert_eq!(ev("emiy", &[3, 3]), Some(0));
        assert_eq!(ev("emiy", &[4, 3]), Some(1));
        assert_eq!(ev("and", &[0, 0]), Some(0));
        assert_eq!(ev("and", &[0, 1]), Some(1));
        assert_eq!(ev("lor", &[0, 1]), Some(0));
        assert_eq!(ev("neg", &[0]), Some(1));
        assert_eq!(ev("sig", &[0]), Some(0));
        assert_eq!(ev("sig", &[5]), Some(1));
        assert_eq!(ev("evy", &[4]), Some(0));
        assert_eq!(ev("ody", &[4]), Some(1));
        let primes: Vec<u64> = (0..20).filter(|&x| ev("pry", &[x]) == Some(0)).collect();
        assert_eq!(primes, [2, 3, 5, 7, 11, 13, 17, 19]);
        let non: Vec<u64> = (0..8).filter(|&x| ev("npr", &[x]) == Some(0)).collect();
        assert_eq!(non, [0, 1, 4, 6]);
    }

    #[test]
    fn hyperincrements() {
        assert_eq!(ev("dup", &[7]), Some(14));
        assert_eq!(ev("ic", &[3]), Some(24));
        assert_eq!(ev("sic", &[2]), Some(2048));
        assert_eq!(ev("sic", &[3]), None);
        assert_eq!(ev("row", &[8]), Some(2));
        assert_eq!(ev("col", &[8]), Some(1));
        assert_eq!(ev("pair", &[1, 2]), Some(7));
    }
}
