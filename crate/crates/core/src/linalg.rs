//! Exact matrix ranks over the supported coefficient fields.
//!
//! Boundary matrices arrive with small integer entries. Over the rationals
//! the rank is computed by fraction-free (Bareiss) elimination on big
//! integers, so no rational arithmetic and no rounding ever occurs; over a
//! prime field by ordinary elimination on residues.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::ring::field::Field;

/// Rank of an integer matrix over the rationals, by Bareiss elimination.
pub fn rank_over_rationals(mat: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = mat
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut prev = BigInt::from(1);
    let mut rank = 0usize;
    let mut pivot_row = 0usize;
    for col in 0..cols {
        if pivot_row >= rows {
            break;
        }
        // choose the smallest nonzero entry as pivot to keep numbers small
        let mut best: Option<usize> = None;
        for r in pivot_row..rows {
            if !a[r][col].is_zero()
                && best.is_none_or(|b| a[r][col].abs() < a[b][col].abs())
            {
                best = Some(r);
            }
        }
        let Some(p) = best else { continue };
        a.swap(pivot_row, p);
        for r in (pivot_row + 1)..rows {
            for c in (col + 1)..cols {
                let num = &a[pivot_row][col] * &a[r][c] - &a[r][col] * &a[pivot_row][c];
                let (q, rem) = num_integer::Integer::div_rem(&num, &prev);
                debug_assert!(rem.is_zero(), "Bareiss division is exact");
                a[r][c] = q;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[pivot_row][col].clone();
        pivot_row += 1;
        rank += 1;
    }
    rank
}

/// Rank of an integer matrix over `GF(p)`.
pub fn rank_mod_p(mat: &[Vec<i64>], p: u64) -> usize {
    let pi = p as i128;
    let mut a: Vec<Vec<u64>> = mat
        .iter()
        .map(|row| row.iter().map(|&x| (x as i128).rem_euclid(pi) as u64).collect())
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let field = Field::new(p).expect("caller supplies a prime");
    let mut rank = 0usize;
    let mut pivot_row = 0usize;
    for col in 0..cols {
        if pivot_row >= rows {
            break;
        }
        let Some(pr) = (pivot_row..rows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(pivot_row, pr);
        let inv = match field.inv(&crate::ring::field::Coeff::Mod(a[pivot_row][col])) {
            Ok(crate::ring::field::Coeff::Mod(v)) => v,
            _ => unreachable!("pivot is nonzero"),
        };
        let pivot_vals = a[pivot_row].clone();
        for row in a.iter_mut().skip(pivot_row + 1) {
            if row[col] == 0 {
                continue;
            }
            let factor = (row[col] as u128 * inv as u128 % p as u128) as u64;
            for (c, cell) in row.iter_mut().enumerate().skip(col) {
                let sub = (factor as u128 * pivot_vals[c] as u128 % p as u128) as u64;
                *cell = ((*cell as u128 + p as u128 - sub as u128) % p as u128) as u64;
            }
        }
        pivot_row += 1;
        rank += 1;
    }
    rank
}

/// Rank of an integer matrix over the given field.
pub fn rank(mat: &[Vec<i64>], field: &Field) -> usize {
    match field.characteristic() {
        0 => rank_over_rationals(mat),
        p => rank_mod_p(mat, p),
    }
}
