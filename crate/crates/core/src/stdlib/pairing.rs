//! Antidiagonal pairing of naturals.


use crate::numerals::Nat;

/// `((j+k)² + 3j + k) / 2`.
pub fn pair_encode(j: &Nat, k: &Nat) -> Nat {
    let s: Nat = j + k;
    (&s * &s + 3u32 * j + k) >> 1
}

/// Inverse of [`pair_encode`]: `(row, column)`.
pub fn pair_decode(n: &Nat) -> (Nat, Nat) {
    let d: Nat = (Nat::from(1u32) + (Nat::from(1u32) + 8u32 * n).sqrt()) >> 1;
    let tri = (&d * (&d - 1u32)) >> 1;
    let row = n - tri;
    let col = &d - 1u32 - &row;
    (row, col)
}
