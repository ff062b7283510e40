//! Sparse multivariate polynomials over memory slots with rational
//! coefficients. Every operation that could grow without bound returns
//! `None` once a size cap is hit.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub const MAX_TERMS: usize = 64;
pub const MAX_DEGREE: u32 = 8;

/// Sorted `(slot, exponent)` pairs with positive exponents.
pub type Mono = Vec<(u32, u32)>;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, BigRational>,
}

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn degree(m: &Mono) -> u32 {
    m.iter().map(|&(_, e)| e).sum()
}

pub fn rat(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

/// Integer value of a non-negative rational with denominator 1.
pub fn to_nat(r: &BigRational) -> Option<BigUint> {
    if r.is_integer() && !r.is_negative() {
        r.to_integer().to_biguint()
    } else {
        None
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Poly { terms }
    }

    pub fn nat(n: &BigUint) -> Self {
        Poly::constant(rat(n))
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var(slot: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![(slot, 1)], BigRational::one());
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        self.terms.keys().flat_map(|m| m.iter().map(|&(s, _)| s)).collect()
    }

    pub fn mentions_any(&self, set: &BTreeSet<u32>) -> bool {
        self.terms.keys().any(|m| m.iter().any(|(s, _)| set.contains(s)))
    }

    fn checked(self) -> Option<Self> {
        (self.terms.len() <= MAX_TERMS).then_some(self)
    }

    pub fn add(&self, other: &Poly) -> Option<Poly> {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(m);
            }
        }
        Poly { terms }.checked()
    }

    pub fn sub(&self, other: &Poly) -> Option<Poly> {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Option<Poly> {
        let mut terms: BTreeMap<Mono, BigRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = mono_mul(ma, mb);
                if degree(&m) > MAX_DEGREE {
                    return None;
                }
                let entry = terms.entry(m).or_insert_with(BigRational::zero);
                *entry += ca * cb;
            }
            if terms.len() > MAX_TERMS * 4 {
                return None;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Poly { terms }.checked()
    }

    fn pow(&self, e: u32) -> Option<Poly> {
        let mut acc = Poly::int(1);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Some(acc)
    }

    /// Replaces each listed variable by a polynomial.
    pub fn substitute(&self, map: &dyn Fn(u32) -> Option<Poly>) -> Option<Poly> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            for &(s, e) in m {
                let factor = match map(s) {
                    Some(p) => p.pow(e)?,
                    None => {
                        let mut t = BTreeMap::new();
                        t.insert(vec![(s, e)], BigRational::one());
                        Poly { terms: t }
                    }
                };
                term = term.mul(&factor)?;
            }
            out = out.add(&term)?;
        }
        Some(out)
    }

    /// Evaluates with every variable bound.
    pub fn eval(&self, value: &dyn Fn(u32) -> BigUint) -> BigRational {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut prod = BigInt::one();
            for &(s, e) in m {
                let v = BigInt::from(value(s));
                prod *= num_traits::pow(v, e as usize);
            }
            total += c * BigRational::from_integer(prod);
        }
        total
    }

    /// Splits `self = a·var + rest` when `var` occurs at most linearly.
    pub fn linear_in(&self, var: u32) -> Option<(Poly, Poly)> {
        let mut a = Poly::zero();
        let mut rest = Poly::zero();
        for (m, c) in &self.terms {
            match m.iter().find(|&&(s, _)| s == var) {
                None => {
                    rest.terms.insert(m.clone(), c.clone());
                }
                Some(&(_, 1)) => {
                    let reduced: Mono = m.iter().copied().filter(|&(s, _)| s != var).collect();
                    a.terms.insert(reduced, c.clone());
                }
                Some(_) => return None,
            }
        }
        Some((a, rest))
    }

    /// Writes `self = α + Σ β_g·g` over the variables in `set`, failing when
    /// any monomial has degree above one in them.
    pub fn linear_over(&self, set: &BTreeSet<u32>) -> Option<(Poly, BTreeMap<u32, Poly>)> {
        let mut alpha = Poly::zero();
        let mut betas: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let hits: Vec<&(u32, u32)> = m.iter().filter(|(s, _)| set.contains(s)).collect();
            match hits.as_slice() {
                [] => {
                    alpha.terms.insert(m.clone(), c.clone());
                }
                [&(g, 1)] => {
                    let reduced: Mono = m.iter().copied().filter(|&(s, _)| s != g).collect();
                    betas.entry(g).or_default().terms.insert(reduced, c.clone());
                }
                _ => return None,
            }
        }
        Some((alpha, betas))
    }
}
