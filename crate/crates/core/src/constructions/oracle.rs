//! Counts predicted for curve cosets by residue arithmetic alone.
//!
//! Coset point `j` sits at parameter `2 pi (j + l/(d+2)) / n`. Six (in
//! general `d+2`) points are cospherical iff their indices satisfy
//! `sum + l = 0 (mod n)`. The hypersphere through a `(d+1)`-subset `S`
//! meets the curve a last time at index `-sum(S) - l (mod n)`; when that
//! index is already in `S` the contact is tangential and the hypersphere
//! holds only `d+1` points of the set.

use serde::{Deserialize, Serialize};

use crate::combinatorics::fold_subsets;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCounts {
    pub n: usize,
    pub d: usize,
    pub l: i64,
    pub ordinary: u64,
    pub dplus2: u64,
}

fn check(n: usize, d: usize) -> Result<()> {
    if d < 4 || d % 2 != 0 {
        return Err(Error::Domain(format!(
            "the residue oracle needs even d >= 4, got {d}"
        )));
    }
    if n < d + 3 {
        return Err(Error::Domain(format!(
            "need n >= d + 3 = {}, got {n}",
            d + 3
        )));
    }
    Ok(())
}

pub fn integer_oracle(n: usize, d: usize, l: i64, threads: Option<usize>) -> Result<OracleCounts> {
    check(n, d)?;
    let nn = n as i64;
    let shift = l.rem_euclid(nn) as usize;
    let dplus2 = fold_subsets(
        n,
        d + 2,
        threads,
        || 0u64,
        |acc, _, s| {
            if (s.iter().sum::<usize>() + shift) % n == 0 {
                *acc += 1;
            }
        },
        |a, b| a + b,
    )?;
    let ordinary = fold_subsets(
        n,
        d + 1,
        threads,
        || 0u64,
        |acc, _, s| {
            let last = (-((s.iter().sum::<usize>() + shift) as i64)).rem_euclid(nn) as usize;
            if s.binary_search(&last).is_ok() {
                *acc += 1;
            }
        },
        |a, b| a + b,
    )?;
    Ok(OracleCounts {
        n,
        d,
        l,
        ordinary,
        dplus2,
    })
}

/// Oracle values for every offset class and the one maximizing `dplus2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleScan {
    /// Indexed by `l` in `0..n`; offsets only matter modulo `n`.
    pub per_offset: Vec<OracleCounts>,
    pub best: OracleCounts,
}

pub fn oracle_scan(n: usize, d: usize, threads: Option<usize>) -> Result<OracleScan> {
    check(n, d)?;
    let per_offset = (0..n as i64)
        .map(|l| integer_oracle(n, d, l, threads))
        .collect::<Result<Vec<_>>>()?;
    let best = *per_offset
        .iter()
        .rev()
        .max_by_key(|c| c.dplus2)
        .expect("n >= 1");
    Ok(OracleScan { per_offset, best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::binomial;

    #[test]
    fn seven_points() {
        // the only 6-subsets of Z_7 omit one index; sum = 21 - j = 0 mod 7 iff j = 0
        let c = integer_oracle(7, 4, 0, None).unwrap();
        assert_eq!(c.dplus2, 1);
        assert_eq!(c.ordinary + 6 * c.dplus2, binomial(7, 5) as u64);
    }

    #[test]
    fn offsets_only_matter_mod_n() {
        for l in 0..3 {
            assert_eq!(
                integer_oracle(9, 4, l, None).unwrap().dplus2,
                integer_oracle(9, 4, l + 9, None).unwrap().dplus2
            );
        }
    }

    #[test]
    fn scan_of_twelve() {
        let s = oracle_scan(12, 4, Some(2)).unwrap();
        assert_eq!(s.best.dplus2, 80);
        assert_eq!(s.best.ordinary, 312);
        assert_eq!(s.best.l, 3);
    }

    #[test]
    fn rejects_odd_dimension() {
        assert!(integer_oracle(10, 3, 0, None).is_err());
    }
}
