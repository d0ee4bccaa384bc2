//! Certified interval arithmetic over dyadic bounds.
//!
//! Each bound is `mantissa * 2^exponent` with an arbitrary-precision
//! mantissa. Results are rounded outward to the working precision, so every
//! operation returns an interval that contains the exact result of applying
//! the operation to any points of the operand intervals.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, Sign as BigSign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// `mant * 2^exp`, normalized so that `mant` is odd (or zero with `exp == 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Self::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        Dyadic {
            mant: mant >> tz,
            exp: exp + tz as i64,
        }
    }

    pub fn from_int(v: i64) -> Self {
        Self::new(BigInt::from(v), 0)
    }

    /// Round `mant * 2^exp` to at most `bits` significant bits.
    pub fn rounded(mant: BigInt, exp: i64, bits: u32, dir: Round) -> Self {
        let len = mant.bits();
        if len <= bits as u64 {
            return Self::new(mant, exp);
        }
        let shift = len - bits as u64;
        let floor = &mant >> shift;
        let m = match dir {
            Round::Down => floor,
            Round::Up => {
                if (&floor << shift) == mant {
                    floor
                } else {
                    floor + 1
                }
            }
        };
        Self::new(m, exp + shift as i64)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            BigSign::Minus => -1,
            BigSign::NoSign => 0,
            BigSign::Plus => 1,
        }
    }

    /// Position one past the most significant bit: |self| < 2^top.
    fn top(&self) -> i64 {
        self.mant.bits() as i64 + self.exp
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let len = self.mant.bits() as i64;
        let keep = 60.min(len);
        let m = (&self.mant >> (len - keep) as u64).to_f64().unwrap_or(0.0);
        let e = self.exp + len - keep;
        m * 2f64.powi(e.clamp(-2000, 2000) as i32)
    }

    /// Exact sum, rounded in `dir`. Terms far below the rounding unit of the
    /// larger one are replaced by a safe one-sided bound.
    pub fn add_round(&self, other: &Self, bits: u32, dir: Round) -> Self {
        if self.is_zero() {
            return Self::rounded(other.mant.clone(), other.exp, bits, dir);
        }
        if other.is_zero() {
            return Self::rounded(self.mant.clone(), self.exp, bits, dir);
        }
        let (big, small) = if self.top() >= other.top() {
            (self, other)
        } else {
            (other, self)
        };
        let cutoff = big.top() - bits as i64 - 4;
        if small.top() < cutoff {
            // |small| < 2^cutoff, replace it by 0 or by ±2^cutoff on the safe side.
            let replacement = match (dir, small.signum() > 0) {
                (Round::Down, true) | (Round::Up, false) => Dyadic::zero(),
                (Round::Down, false) => Dyadic::new(BigInt::from(-1), cutoff),
                (Round::Up, true) => Dyadic::new(BigInt::one(), cutoff),
            };
            return big.add_round(&replacement, bits, dir);
        }
        let e = big.exp.min(small.exp);
        let m = (&big.mant << (big.exp - e) as u64) + (&small.mant << (small.exp - e) as u64);
        Self::rounded(m, e, bits, dir)
    }

    pub fn mul_round(&self, other: &Self, bits: u32, dir: Round) -> Self {
        Self::rounded(&self.mant * &other.mant, self.exp + other.exp, bits, dir)
    }

    /// Quotient rounded in `dir`; `other` must be nonzero.
    pub fn div_round(&self, other: &Self, bits: u32, dir: Round) -> Self {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        // Scale the numerator so the integer quotient carries bits + 2 bits.
        let s = (bits as i64 + 2 + other.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let num = &self.mant << s as u64;
        let (q, r) = num.div_mod_floor(&other.mant);
        let q = match dir {
            Round::Down => q,
            Round::Up if r.is_zero() => q,
            Round::Up => q + 1,
        };
        Self::rounded(q, self.exp - other.exp - s, bits, dir)
    }

    pub fn from_rational(q: &BigRational, bits: u32, dir: Round) -> Self {
        Self::new(q.numer().clone(), 0).div_round(&Self::new(q.denom().clone(), 0), bits, dir)
    }

    /// Decimal string with `sig` significant digits, rounded in `dir`.
    pub fn to_decimal(&self, sig: usize, dir: Round) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let q = self.to_rational();
        // Choose k so that |q| * 10^k has about `sig` integer digits.
        let approx = self.to_f64().abs();
        let mag = if approx > 0.0 && approx.is_finite() {
            approx.log10().floor() as i64
        } else {
            (self.top() as f64 * std::f64::consts::LOG10_2).floor() as i64
        };
        let k = sig as i64 - 1 - mag;
        let scaled = if k >= 0 {
            q * BigRational::from_integer(BigInt::from(10).pow(k as u32))
        } else {
            q / BigRational::from_integer(BigInt::from(10).pow((-k) as u32))
        };
        let digits = match dir {
            Round::Down => scaled.floor().to_integer(),
            Round::Up => scaled.ceil().to_integer(),
        };
        if digits.is_zero() {
            return "0".to_string();
        }
        let neg = digits.is_negative();
        let s = digits.abs().to_string();
        let exp10 = s.len() as i64 - 1 - k;
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(&s[..1]);
        let rest = s[1..].trim_end_matches('0');
        if !rest.is_empty() {
            out.push('.');
            out.push_str(rest);
        }
        if exp10 != 0 {
            out.push_str(&format!("e{exp10}"));
        }
        out
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let (ta, tb) = (self.top(), other.top());
        if ta != tb {
            let by_mag = ta.cmp(&tb);
            return if sa > 0 { by_mag } else { by_mag.reverse() };
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        a.cmp(&b)
    }
}

/// Parse a decimal literal such as `-12.5e-3` into an exact rational.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let e = exp - frac.len() as i64;
    let ten = BigInt::from(10);
    let mut q = if e >= 0 {
        BigRational::from_integer(digits * ten.pow(e as u32))
    } else {
        BigRational::new(digits, ten.pow((-e) as u32))
    };
    if neg {
        q = -q;
    }
    Some(q)
}

/// Closed interval `[lo, hi]` with a working precision in bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    bits: u32,
}

/// Outcome of a certified sign query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntervalSign {
    Negative,
    Positive,
    /// The interval contains zero; intervals never certify equality.
    Straddles,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic, bits: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::Domain(
                "interval lower bound exceeds upper bound".into(),
            ));
        }
        Ok(Interval { lo, hi, bits })
    }

    pub fn point(x: Dyadic, bits: u32) -> Self {
        Interval {
            lo: Dyadic::rounded(x.mant.clone(), x.exp, bits, Round::Down),
            hi: Dyadic::rounded(x.mant, x.exp, bits, Round::Up),
            bits,
        }
    }

    pub fn from_int(v: i64, bits: u32) -> Self {
        Self::point(Dyadic::from_int(v), bits)
    }

    pub fn from_rational(q: &BigRational, bits: u32) -> Self {
        Interval {
            lo: Dyadic::from_rational(q, bits, Round::Down),
            hi: Dyadic::from_rational(q, bits, Round::Up),
            bits,
        }
    }

    pub fn from_f64(v: f64, bits: u32) -> Self {
        let q = BigRational::from_float(v).expect("finite f64");
        Self::from_rational(&q, bits)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn with_bits(&self, bits: u32) -> Self {
        Interval {
            lo: Dyadic::rounded(self.lo.mant.clone(), self.lo.exp, bits, Round::Down),
            hi: Dyadic::rounded(self.hi.mant.clone(), self.hi.exp, bits, Round::Up),
            bits,
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        &self.lo.to_rational() <= q && q <= &self.hi.to_rational()
    }

    pub fn sign(&self) -> IntervalSign {
        if self.lo.signum() > 0 {
            IntervalSign::Positive
        } else if self.hi.signum() < 0 {
            IntervalSign::Negative
        } else {
            IntervalSign::Straddles
        }
    }

    /// True when the two intervals share no point.
    pub fn disjoint(&self, other: &Self) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }

    pub fn midpoint(&self) -> Dyadic {
        let sum = self.lo.add_round(&self.hi, self.bits + 2, Round::Down);
        Dyadic::new(sum.mant, sum.exp - 1)
    }

    /// Upper bound on the half-width.
    pub fn radius(&self) -> Dyadic {
        let w = self.hi.add_round(&self.lo.neg(), self.bits, Round::Up);
        Dyadic::new(w.mant, w.exp - 1)
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64()
    }

    fn prec(&self, other: &Self) -> u32 {
        self.bits.max(other.bits)
    }

    pub fn neg(&self) -> Self {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            bits: self.bits,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.prec(other);
        Interval {
            lo: self.lo.add_round(&other.lo, p, Round::Down),
            hi: self.hi.add_round(&other.hi, p, Round::Up),
            bits: p,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.prec(other);
        let exact = |a: &Dyadic, b: &Dyadic| Dyadic::new(&a.mant * &b.mant, a.exp + b.exp);
        let cands = [
            exact(&self.lo, &other.lo),
            exact(&self.lo, &other.hi),
            exact(&self.hi, &other.lo),
            exact(&self.hi, &other.hi),
        ];
        let min = cands.iter().min().unwrap().clone();
        let max = cands.iter().max().unwrap().clone();
        Interval {
            lo: Dyadic::rounded(min.mant, min.exp, p, Round::Down),
            hi: Dyadic::rounded(max.mant, max.exp, p, Round::Up),
            bits: p,
        }
    }

    pub fn square(&self) -> Self {
        if self.contains_zero() {
            let a = self.lo.mul_round(&self.lo, self.bits, Round::Up);
            let b = self.hi.mul_round(&self.hi, self.bits, Round::Up);
            Interval {
                lo: Dyadic::zero(),
                hi: a.max(b),
                bits: self.bits,
            }
        } else {
            self.mul(self)
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.contains_zero() {
            return Err(Error::Indeterminate(
                "interval divisor contains zero".into(),
            ));
        }
        let p = self.prec(other);
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&other.lo, &other.hi] {
                let d = a.div_round(b, p, Round::Down);
                let u = a.div_round(b, p, Round::Up);
                lo = Some(lo.map_or(d.clone(), |x| x.min(d)));
                hi = Some(hi.map_or(u.clone(), |x| x.max(u)));
            }
        }
        Ok(Interval {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
            bits: p,
        })
    }

    pub fn mul_rational(&self, q: &BigRational) -> Self {
        self.mul(&Interval::from_rational(q, self.bits))
    }

    /// Widen symmetrically by `r >= 0`.
    fn widen(&self, r: &Dyadic) -> Self {
        Interval {
            lo: self.lo.add_round(&r.neg(), self.bits, Round::Down),
            hi: self.hi.add_round(r, self.bits, Round::Up),
            bits: self.bits,
        }
    }

    fn clamp_unit(self) -> Self {
        let one = Dyadic::from_int(1);
        let m_one = Dyadic::from_int(-1);
        Interval {
            lo: self.lo.max(m_one.clone()).min(one.clone()),
            hi: self.hi.min(one).max(m_one),
            bits: self.bits,
        }
    }

    /// Enclosures of `(cos x, sin x)` for every `x` in the interval.
    pub fn cos_sin(&self) -> (Interval, Interval) {
        let mid = self.midpoint();
        let rad = self.radius();
        let (c, s) = cos_sin_point(&mid, self.bits);
        // Both functions are 1-Lipschitz.
        (c.widen(&rad).clamp_unit(), s.widen(&rad).clamp_unit())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            self.lo.to_decimal(20, Round::Down),
            self.hi.to_decimal(20, Round::Up)
        )
    }
}

/// Number of significant decimal digits that carry `bits` binary digits.
pub fn decimal_digits(bits: u32) -> usize {
    (bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2
}

fn atan_inv(k: u64, bits: u32) -> Interval {
    // sum_{j>=0} (-1)^j / ((2j+1) k^(2j+1)); alternating with decreasing terms,
    // so the truncation error is bounded by the first omitted term.
    let kk = BigInt::from(k) * BigInt::from(k);
    let mut pow = BigInt::from(k);
    let mut sum = Interval::from_int(0, bits);
    let mut j: u64 = 0;
    loop {
        let den = BigInt::from(2 * j + 1) * &pow;
        let term = Interval::from_rational(&BigRational::new(BigInt::one(), den.clone()), bits);
        if den.bits() > bits as u64 + 8 {
            let bound = term.hi.clone();
            return sum.widen(&bound);
        }
        sum = if j % 2 == 0 {
            sum.add(&term)
        } else {
            sum.sub(&term)
        };
        pow *= &kk;
        j += 1;
    }
}

/// Enclosure of pi at `bits` of precision (cached).
pub fn pi(bits: u32) -> Interval {
    static CACHE: OnceLock<Mutex<HashMap<u32, Interval>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&bits) {
        return v.clone();
    }
    let work = bits + 32;
    let a = atan_inv(5, work).mul(&Interval::from_int(16, work));
    let b = atan_inv(239, work).mul(&Interval::from_int(4, work));
    let v = a.sub(&b).with_bits(bits);
    cache.lock().unwrap().insert(bits, v.clone());
    v
}

fn cos_sin_point(x: &Dyadic, bits: u32) -> (Interval, Interval) {
    let approx = x.to_f64();
    let turns = (approx / (2.0 * std::f64::consts::PI)).round();
    let extra = if turns.abs() > 1.0 {
        turns.abs().log2().ceil() as u32
    } else {
        0
    };
    let work = bits + 64 + extra;
    let mut xi = Interval::point(x.clone(), work);
    if turns != 0.0 {
        let two_pi = pi(work).mul(&Interval::from_int(2, work));
        let k = Interval::from_rational(&BigRational::from_float(turns).unwrap(), work);
        xi = xi.sub(&two_pi.mul(&k));
    }
    let x2 = xi.square();
    let threshold = -(work as i64) - 4;

    let series = |first: Interval, start: u64| -> Interval {
        let mut term = first;
        let mut sum = Interval::from_int(0, work);
        let mut j = start;
        loop {
            let mag = term.lo.abs().max(term.hi.abs());
            // Stop once past the peak and the next term is negligible; the
            // Lagrange remainder is bounded by that term's magnitude.
            if mag.is_zero() {
                return sum;
            }
            if j > 8 && mag.top() < threshold {
                return sum.widen(&mag);
            }
            sum = sum.add(&term);
            let den = Interval::from_int(((j + 1) * (j + 2)) as i64, work);
            term = term.mul(&x2).div(&den).expect("positive divisor").neg();
            j += 2;
        }
    };
    let c = series(Interval::from_int(1, work), 0);
    let s = series(xi.clone(), 1);
    (c.with_bits(bits), s.with_bits(bits))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rounding_is_directed() {
        let third = q(1, 3);
        let i = Interval::from_rational(&third, 64);
        assert!(i.contains_rational(&third));
        assert!(i.lo() < i.hi());
        let exact = Interval::from_rational(&q(3, 8), 64);
        assert_eq!(exact.lo(), exact.hi());
    }

    #[test]
    fn pi_digits() {
        let p = pi(256);
        let lo = p.lo().to_decimal(40, Round::Down);
        assert!(
            lo.starts_with("3.14159265358979323846264338327950288419"),
            "{lo}"
        );
        let below = parse_decimal("3.14159265358979323846264338327950288419716939937510").unwrap();
        let above = parse_decimal("3.14159265358979323846264338327950288419716939937511").unwrap();
        assert!(below < p.lo().to_rational() && p.hi().to_rational() < above);
    }

    #[test]
    fn cos_sin_known_values() {
        let (c, s) = Interval::from_int(0, 128).cos_sin();
        assert!(c.contains_rational(&q(1, 1)));
        assert!(s.contains_zero());
        // cos(pi/3) = 1/2
        let third_pi = pi(256).mul_rational(&q(1, 3));
        let (c, s) = third_pi.cos_sin();
        assert!(c.contains_rational(&q(1, 2)));
        assert!(s.square().contains_rational(&q(3, 4)));
        // large argument: cos(100) ~ 0.8623188722876839
        let (c, _) = Interval::from_int(100, 128).cos_sin();
        assert!((c.to_f64() - 100f64.cos()).abs() < 1e-12);
    }

    #[test]
    fn decimal_round_trip_is_outward() {
        let third = Interval::from_rational(&q(-1, 3), 128);
        let lo = parse_decimal(&third.lo().to_decimal(10, Round::Down)).unwrap();
        let hi = parse_decimal(&third.hi().to_decimal(10, Round::Up)).unwrap();
        assert!(lo <= q(-1, 3) && q(-1, 3) <= hi);
        assert_eq!(parse_decimal("1.25e2"), Some(q(125, 1)));
        assert_eq!(parse_decimal("-0.5"), Some(q(-1, 2)));
        assert_eq!(parse_decimal("abc"), None);
    }

    #[test]
    fn division_by_interval_with_zero_is_indeterminate() {
        let a = Interval::from_int(1, 64);
        let z = Interval::new(Dyadic::from_int(-1), Dyadic::from_int(1), 64).unwrap();
        assert!(matches!(a.div(&z), Err(Error::Indeterminate(_))));
    }

    #[test]
    fn far_apart_addition_stays_enclosing() {
        let big = Interval::from_int(1, 64);
        let tiny = Interval::point(Dyadic::new(BigInt::from(-3), -500), 64);
        let s = big.add(&tiny);
        let exact = q(1, 1) - Dyadic::new(BigInt::from(3), -500).to_rational();
        assert!(s.contains_rational(&exact));
    }
}
