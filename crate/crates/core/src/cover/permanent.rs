use num_bigint::{BigInt, BigUint};

use crate::error::{Error, Result};

const MAX_N: usize = 24;

/// Permanent of a square 0/1 matrix by Ryser's formula, visiting column
/// subsets in Gray-code order. Exact for every supported size.
pub fn permanent_ryser(m: &[Vec<u8>]) -> Result<BigUint> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::Domain("permanent needs a square matrix".into()));
    }
    if m.iter().flatten().any(|&x| x > 1) {
        return Err(Error::Domain("permanent_ryser expects a 0/1 matrix".into()));
    }
    if n > MAX_N {
        return Err(Error::Resource(format!(
            "matrix order {n} exceeds the limit of {MAX_N}"
        )));
    }
    if n == 0 {
        return Ok(BigUint::from(1u8));
    }
    // perm = (-1)^n Σ_S (-1)^|S| Π_i Σ_{j∈S} m_ij
    let mut row_sums = vec![0i64; n];
    let mut acc: i128 = 0;
    let mut big: Option<BigInt> = None;
    let mut subset_size = 0usize;
    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        let adding = ((k ^ (k >> 1)) >> j) & 1 == 1;
        let sign_add: i64 = if adding { 1 } else { -1 };
        if adding {
            subset_size += 1;
        } else {
            subset_size -= 1;
        }
        for (i, row) in m.iter().enumerate() {
            row_sums[i] += sign_add * row[j] as i64;
        }
        // row sums are at most 24, so the product fits in i128
        let mut prod: i128 = 1;
        for &s in &row_sums {
            prod *= s as i128;
            if prod == 0 {
                break;
            }
        }
        if prod == 0 {
            continue;
        }
        let term = if subset_size.is_multiple_of(2) {
            prod
        } else {
            -prod
        };
        match acc.checked_add(term) {
            Some(v) => acc = v,
            None => {
                let b = big.get_or_insert_with(|| BigInt::from(0));
                *b += acc;
                acc = term;
            }
        }
    }
    let mut total = big.unwrap_or_default() + BigInt::from(acc);
    if n % 2 == 1 {
        total = -total;
    }
    total
        .to_biguint()
        .ok_or_else(|| Error::Internal("negative permanent".into()))
}
