//! Closed-form extremal values: the minimum number of ordinary hyperspheres
//! and, for d = 4, the maximum number of 6-point hyperspheres. Both are
//! only guaranteed for n large compared with d^3 2^d.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::numeric::format_rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaValues {
    pub d: usize,
    pub n: usize,
    pub min_ordinary: BigRational,
    /// `None` where no closed form is known (odd d).
    pub max_dplus2: Option<BigRational>,
}

fn value_json(q: &BigRational) -> Value {
    match (q.is_integer(), q.to_integer().to_u64()) {
        (true, Some(v)) => json!(v),
        _ => json!(format_rational(q)),
    }
}

impl FormulaValues {
    pub fn min_ordinary_u64(&self) -> Option<u64> {
        self.min_ordinary
            .is_integer()
            .then(|| self.min_ordinary.to_integer().to_u64())
            .flatten()
    }

    pub fn max_dplus2_u64(&self) -> Option<u64> {
        let q = self.max_dplus2.as_ref()?;
        q.is_integer().then(|| q.to_integer().to_u64()).flatten()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d,
            "n": self.n,
            "ordinary": value_json(&self.min_ordinary),
            "dplus2": self.max_dplus2.as_ref().map(value_json),
        })
    }
}

fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn binom_q(n: usize, k: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(binomial(n as u64, k as u64)))
}

pub fn formula_tables(d: usize, n: usize) -> Result<FormulaValues> {
    if n < d + 2 {
        return Err(Error::Domain(format!(
            "need n >= d + 2 = {}, got {n}",
            d + 2
        )));
    }
    if d >= 3 && d % 2 == 1 {
        return Ok(FormulaValues {
            d,
            n,
            min_ordinary: binom_q(n - 1, d),
            max_dplus2: None,
        });
    }
    if d != 4 {
        return Err(Error::Unsupported(format!(
            "no closed form for d = {d}; available for odd d >= 3 and d = 4"
        )));
    }
    let ni = n as i64;
    let nn = q(ni * ni, 1);
    let nq = q(ni, 1);
    let base_min = binom_q(n - 1, 4);
    let base_max = binom_q(n - 1, 5) * q(1, 6);
    let (min, max) = match n % 6 {
        0 => (
            base_min - &nn * q(1, 8) + &nq * q(1, 12) - q(1, 1),
            base_max + &nn * q(1, 48) - &nq * q(1, 72) + q(1, 6),
        ),
        1 | 5 => (base_min, base_max),
        2 | 4 => (
            base_min - &nn * q(1, 8) + &nq * q(3, 4) - q(1, 1),
            base_max + &nn * q(1, 48) - &nq * q(1, 8) + q(1, 6),
        ),
        _ => (
            base_min - &nq * q(2, 3) + q(2, 1),
            base_max + &nq * q(1, 9) - q(1, 3),
        ),
    };
    Ok(FormulaValues {
        d,
        n,
        min_ordinary: min,
        max_dplus2: Some(max),
    })
}
