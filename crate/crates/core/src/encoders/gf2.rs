//! Linear algebra over GF(2) on packed rows.
//!
//! A coding vector over at most 64 flows is packed into a `u64`, bit `p`
//! standing for flow `p`. Solving `Ψ^T θ = target` means finding a subset of
//! rows whose XOR equals the target.

use crate::{Error, Result};

/// Rows of equal width (at most 64 columns), packed least-significant bit
/// first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    width: usize,
    rows: Vec<u64>,
}

impl BitMatrix {
    pub fn new(width: usize, rows: Vec<u64>) -> Result<Self> {
        if width == 0 || width > 64 {
            return Err(Error::usage("bit matrix width must be in 1..=64"));
        }
        let mask = column_mask(width);
        if rows.iter().any(|r| r & !mask != 0) {
            return Err(Error::usage("row has bits beyond the matrix width"));
        }
        Ok(BitMatrix { width, rows })
    }

    pub fn from_bools(rows: &[Vec<bool>]) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::usage("rows have differing lengths"));
        }
        BitMatrix::new(width, rows.iter().map(|r| pack(r)).collect())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }
}

fn column_mask(width: usize) -> u64 {
    if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

pub fn pack(bits: &[bool]) -> u64 {
    bits.iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | (u64::from(b) << i))
}

pub fn unpack(word: u64, width: usize) -> Vec<bool> {
    (0..width).map(|i| word >> i & 1 == 1).collect()
}

/// True when `target` is the XOR of some subset of `rows` (the empty subset
/// reaches zero).
pub fn in_span(rows: &[u64], target: u64) -> bool {
    // basis indexed by leading bit
    let mut basis = [0u64; 64];
    for &r in rows {
        let mut v = r;
        while v != 0 {
            let lead = 63 - v.leading_zeros() as usize;
            if basis[lead] == 0 {
                basis[lead] = v;
                break;
            }
            v ^= basis[lead];
        }
    }
    let mut t = target;
    while t != 0 {
        let lead = 63 - t.leading_zeros() as usize;
        if basis[lead] == 0 {
            return false;
        }
        t ^= basis[lead];
    }
    true
}

/// Gaussian elimination over GF(2). Returns a selector `θ` (one bit per row)
/// whose selected rows XOR to `target`, or `None` when no such selector
/// exists.
pub fn solve(matrix: &BitMatrix, target: &[bool]) -> Result<Option<Vec<bool>>> {
    if target.len() != matrix.width {
        return Err(Error::usage(format!(
            "target has {} entries, rows have {}",
            target.len(),
            matrix.width
        )));
    }
    Ok(solve_packed(&matrix.rows, pack(target)))
}

/// Packed variant of [`solve`]; the caller guarantees consistent widths.
pub fn solve_packed(rows: &[u64], target: u64) -> Option<Vec<bool>> {
    let words = rows.len().div_ceil(64).max(1);
    // (reduced vector, combination of original rows producing it)
    let mut basis: Vec<Option<(u64, Vec<u64>)>> = vec![None; 64];
    for (i, &r) in rows.iter().enumerate() {
        let mut v = r;
        let mut combo = vec![0u64; words];
        combo[i / 64] |= 1 << (i % 64);
        while v != 0 {
            let lead = 63 - v.leading_zeros() as usize;
            match &basis[lead] {
                Some((bv, bc)) => {
                    v ^= bv;
                    for (c, b) in combo.iter_mut().zip(bc) {
                        *c ^= b;
                    }
                }
                None => {
                    basis[lead] = Some((v, combo));
                    break;
                }
            }
        }
    }
    let mut t = target;
    let mut theta = vec![0u64; words];
    while t != 0 {
        let lead = 63 - t.leading_zeros() as usize;
        let (bv, bc) = basis[lead].as_ref()?;
        t ^= bv;
        for (c, b) in theta.iter_mut().zip(bc) {
            *c ^= b;
        }
    }
    Some(
        (0..rows.len())
            .map(|i| theta[i / 64] >> (i % 64) & 1 == 1)
            .collect(),
    )
}

/// XOR of the rows selected by `theta`.
pub fn combine(rows: &[u64], theta: &[bool]) -> u64 {
    rows.iter()
        .zip(theta)
        .filter(|(_, &s)| s)
        .fold(0, |acc, (&r, _)| acc ^ r)
}
