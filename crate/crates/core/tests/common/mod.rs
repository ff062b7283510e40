#![allow(dead_code)]

use arbatation::numerals::{Nat, Numeral};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TARGETS: [&str; 6] = ["0", "0", "0", "1", "2", "3"];
const COUNTERS: [&str; 6] = ["2", "3", "4", "5", "6", "7"];
const LIMITS: [&str; 8] = ["01", "01", "02", "0", "0", "1", "2", "3"];

struct Gen {
    rng: ChaCha8Rng,
    out: String,
}

impl Gen {
    /// Appends a field, separating it from a preceding field with an empty
    /// accolade so the two do not fuse.
    fn field(&mut self, f: &str) {
        if self.out.ends_with(|c: char| c.is_ascii_digit() && c < '8') {
            self.out.push_str("89");
        }
        self.out.push_str(f);
    }

    fn pick_writable(&mut self, pool: &[&'static str], forbidden: &[&str]) -> Option<&'static str> {
        let ok: Vec<&'static str> = pool.iter().copied().filter(|f| !forbidden.contains(f)).collect();
        ok.choose(&mut self.rng).copied()
    }

    fn seq(&mut self, depth: u32, forbidden: &[&'static str], enclosing: Option<(&str, &str)>) {
        let n = if enclosing.is_none() { self.rng.gen_range(2..=5) } else { self.rng.gen_range(1..=3) };
        for _ in 0..n {
            let kind = self.rng.gen_range(0..20);
            match kind {
                0..=6 => {
                    if let Some(f) = self.pick_writable(&TARGETS, forbidden) {
                        self.field(f);
                    }
                }
                7 => self.out.push_str("89"),
                8 | 9 => {
                    if let Some(f) = self.pick_writable(&TARGETS, forbidden) {
                        self.out.push('8');
                        self.out.push_str(f);
                        self.out.push('9');
                    }
                }
                10 if enclosing.is_some() => {
                    let (c, l) = enclosing.unwrap();
                    self.out.push('8');
                    self.out.push_str(c);
                    self.out.push_str("89");
                    self.out.push_str(l);
                    self.out.push('9');
                }
                _ if depth > 0 => {
                    let Some(c) = self.pick_writable(&COUNTERS, forbidden) else { continue };
                    let l = *LIMITS.choose(&mut self.rng).unwrap();
                    self.out.push('8');
                    self.out.push_str(c);
                    let mut inner: Vec<&'static str> = forbidden.to_vec();
                    inner.push(c);
                    inner.push(l);
                    self.out.push_str("89");
                    self.seq(depth - 1, &inner, Some((c, l)));
                    self.field(l);
                    self.out.push('9');
                }
                _ => {}
            }
        }
    }
}

/// A random primitive program, reproducible from its seed.
pub fn primitive_program(seed: u64) -> Numeral {
    let mut g = Gen { rng: ChaCha8Rng::seed_from_u64(seed), out: String::new() };
    g.seq(3, &[], None);
    if g.out.is_empty() || g.out.starts_with('0') {
        g.out.insert_str(0, "89");
    }
    Numeral::parse(&g.out).expect("generated digits")
}

/// A random digit string of length 1..=max_len without a leading zero.
pub fn random_numeral(rng: &mut impl Rng, max_len: usize) -> Numeral {
    let len = rng.gen_range(1..=max_len);
    let mut s = String::with_capacity(len);
    for i in 0..len {
        let lo = if i == 0 && len > 1 { b'1' } else { b'0' };
        s.push(rng.gen_range(lo..=b'9') as char);
    }
    Numeral::parse(&s).unwrap()
}

pub fn nats(xs: &[u64]) -> Vec<Nat> {
    xs.iter().map(|&x| Nat::from(x)).collect()
}
