//! Exact arithmetic in the cyclotomic field Q(zeta_N) = Q[x] / Phi_N(x).
//!
//! Elements are kept fully reduced modulo the N-th cyclotomic polynomial, so
//! an element is zero exactly when its coefficient vector is zero. Each
//! context also fixes a complex embedding `zeta -> exp(2 pi i k / N)`, which is
//! what gives elements a numeric value (and a sign, for real elements).

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::interval::{Interval, IntervalSign};
use crate::error::{Error, Result};

pub const DEFAULT_START_BITS: u32 = 128;
pub const DEFAULT_MAX_BITS: u32 = 4096;

/// Integer coefficients of Phi_n, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    // x^n - 1 divided by Phi_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = exact_div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(n as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(n as i128) as u64)
}

/// The field Q(zeta_N) together with a chosen complex embedding.
pub struct CyclotomicContext {
    conductor: u64,
    embedding: u64,
    embedding_inv: u64,
    phi: Vec<i64>,
    degree: usize,
    /// `x^s mod Phi_N` for `s` in `0..N`.
    powers: Vec<Vec<i64>>,
    start_bits: u32,
    max_bits: u32,
    trig_cache: Mutex<HashMap<u32, Arc<Vec<(Interval, Interval)>>>>,
}

impl fmt::Debug for CyclotomicContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CyclotomicContext")
            .field("conductor", &self.conductor)
            .field("embedding", &self.embedding)
            .field("degree", &self.degree)
            .finish()
    }
}

impl CyclotomicContext {
    /// Context for conductor `n` (a positive multiple of 4) with the standard
    /// embedding `zeta -> exp(2 pi i / n)`.
    pub fn new(n: u64) -> Result<Arc<Self>> {
        Self::with_embedding(n, 1)
    }

    pub fn with_embedding(n: u64, k: u64) -> Result<Arc<Self>> {
        Self::build(n, k, DEFAULT_MAX_BITS)
    }

    pub fn build(n: u64, k: u64, max_bits: u32) -> Result<Arc<Self>> {
        if n == 0 || n % 4 != 0 {
            return Err(Error::Context(format!(
                "conductor {n} is not a positive multiple of 4"
            )));
        }
        if n > 20_000 {
            return Err(Error::Resource(format!(
                "conductor {n} exceeds the supported limit"
            )));
        }
        let embedding_inv = mod_inverse(k % n, n)
            .ok_or_else(|| Error::Context(format!("embedding index {k} is not a unit mod {n}")))?;
        let phi = cyclotomic_polynomial(n);
        let degree = phi.len() - 1;
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by x and reduce the x^degree term
            let top = cur[degree - 1];
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..degree {
                    cur[i] -= top * phi[i];
                }
            }
        }
        Ok(Arc::new(CyclotomicContext {
            conductor: n,
            embedding: k % n,
            embedding_inv,
            phi,
            degree,
            powers,
            start_bits: DEFAULT_START_BITS,
            max_bits: max_bits.max(DEFAULT_START_BITS),
            trig_cache: Mutex::new(HashMap::new()),
        }))
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn embedding(&self) -> u64 {
        self.embedding
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn phi(&self) -> &[i64] {
        &self.phi
    }

    pub fn max_bits(&self) -> u32 {
        self.max_bits
    }

    /// Reduction of `x^s` modulo Phi_N.
    pub fn power(&self, s: i64) -> &[i64] {
        &self.powers[s.rem_euclid(self.conductor as i64) as usize]
    }

    pub fn same_field(&self, other: &Self) -> bool {
        self.conductor == other.conductor && self.embedding == other.embedding
    }

    pub fn zero(self: &Arc<Self>) -> CycloElem {
        CycloElem {
            ctx: Arc::clone(self),
            coeffs: vec![BigRational::zero(); self.degree],
        }
    }

    pub fn from_rational(self: &Arc<Self>, q: BigRational) -> CycloElem {
        let mut e = self.zero();
        e.coeffs[0] = q;
        e
    }

    pub fn from_int(self: &Arc<Self>, v: i64) -> CycloElem {
        self.from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    /// The element zeta^s.
    pub fn monomial(self: &Arc<Self>, s: i64) -> CycloElem {
        let coeffs = self
            .power(s)
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        CycloElem {
            ctx: Arc::clone(self),
            coeffs,
        }
    }

    /// Exponent `s` with `embed(zeta^s) = exp(2 pi i j / n)`.
    fn root_exponent(&self, j: i64, n: u64) -> i64 {
        let base = j.rem_euclid(n as i64) as u128 * (self.conductor / n) as u128;
        (base * self.embedding_inv as u128 % self.conductor as u128) as i64
    }

    /// Exact `(cos(2 pi j / n), sin(2 pi j / n))` in this field.
    pub fn trig_pair(self: &Arc<Self>, j: i64, n: u64) -> Result<(CycloElem, CycloElem)> {
        if n == 0 || self.conductor % n != 0 {
            return Err(Error::Context(format!(
                "{n} does not divide the conductor {}",
                self.conductor
            )));
        }
        let s = self.root_exponent(j, n);
        let quarter = self.root_exponent(1, 4);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let z = self.monomial(s);
        let zi = self.monomial(-s);
        let cos = (&z + &zi).scale(&half);
        // sin = (z - z^-1) / (2i) and 1/i = zeta^-quarter
        let sin = (&(&z - &zi) * &self.monomial(-quarter)).scale(&half);
        Ok((cos, sin))
    }

    fn trig_table(&self, bits: u32) -> Arc<Vec<(Interval, Interval)>> {
        if let Some(t) = self.trig_cache.lock().unwrap().get(&bits) {
            return Arc::clone(t);
        }
        let pi = super::interval::pi(bits + 16);
        let table: Vec<_> = (0..self.degree as u64)
            .map(|m| {
                let r = BigRational::new(
                    BigInt::from(2 * (m * self.embedding % self.conductor)),
                    BigInt::from(self.conductor),
                );
                let (c, s) = pi.mul_rational(&r).cos_sin();
                (c.with_bits(bits), s.with_bits(bits))
            })
            .collect();
        let table = Arc::new(table);
        self.trig_cache
            .lock()
            .unwrap()
            .insert(bits, Arc::clone(&table));
        table
    }
}

/// An element of Q(zeta_N), stored as its reduced coefficient vector.
#[derive(Clone)]
pub struct CycloElem {
    ctx: Arc<CyclotomicContext>,
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloElem(N={}, [", self.ctx.conductor)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "])")
    }
}

impl PartialEq for CycloElem {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_field(&other.ctx) && self.coeffs == other.coeffs
    }
}

impl Eq for CycloElem {}

impl CycloElem {
    /// Build from raw coefficients, reducing modulo Phi_N.
    pub fn from_coeffs(ctx: &Arc<CyclotomicContext>, coeffs: Vec<BigRational>) -> Self {
        let mut out = ctx.zero();
        for (s, c) in coeffs.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (acc, &p) in out.coeffs.iter_mut().zip(ctx.power(s as i64)) {
                if p != 0 {
                    *acc += &c * BigInt::from(p);
                }
            }
        }
        out
    }

    pub fn context(&self) -> &Arc<CyclotomicContext> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Returns the rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        CycloElem {
            ctx: Arc::clone(&self.ctx),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    fn check(&self, other: &Self) {
        assert!(
            self.ctx.same_field(&other.ctx),
            "mixing elements of Q(zeta_{}) and Q(zeta_{})",
            self.ctx.conductor,
            other.ctx.conductor
        );
    }

    /// Complex conjugate: zeta -> zeta^-1.
    pub fn conj(&self) -> Self {
        let mut out = self.ctx.zero();
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (acc, &p) in out.coeffs.iter_mut().zip(self.ctx.power(-(m as i64))) {
                if p != 0 {
                    *acc += c * BigInt::from(p);
                }
            }
        }
        out
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[x].
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Pole("inverse of zero in a cyclotomic field".into()));
        }
        if let Some(q) = self.as_rational() {
            return Ok(self.ctx.from_rational(q.recip()));
        }
        let phi: Vec<BigRational> = self
            .ctx
            .phi
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        let mut r0 = phi;
        let mut r1 = trim(self.coeffs.clone());
        let mut s0: Vec<BigRational> = vec![];
        let mut s1 = vec![BigRational::one()];
        while !r1.is_empty() {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant because Phi_N is irreducible
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].recip();
        let inv: Vec<BigRational> = s0.into_iter().map(|x| x * &c).collect();
        Ok(CycloElem::from_coeffs(&self.ctx, inv))
    }

    /// Interval enclosures of the real and imaginary parts of the embedded value.
    pub fn embed(&self, bits: u32) -> (Interval, Interval) {
        let table = self.ctx.trig_table(bits);
        let mut re = Interval::from_int(0, bits);
        let mut im = Interval::from_int(0, bits);
        for (c, (cs, sn)) in self.coeffs.iter().zip(table.iter()) {
            if c.is_zero() {
                continue;
            }
            re = re.add(&cs.mul_rational(c));
            im = im.add(&sn.mul_rational(c));
        }
        (re, im)
    }

    /// Exact sign of a real element: zero test first, then embedding with
    /// precision doubling until the enclosure excludes zero.
    pub fn sign(&self) -> Result<i32> {
        if !self.is_real() {
            return Err(Error::Domain(
                "sign of a non-real cyclotomic element".into(),
            ));
        }
        if self.is_zero() {
            return Ok(0);
        }
        let mut bits = self.ctx.start_bits;
        loop {
            match self.embed(bits).0.sign() {
                IntervalSign::Positive => return Ok(1),
                IntervalSign::Negative => return Ok(-1),
                IntervalSign::Straddles if bits >= self.ctx.max_bits => {
                    return Err(Error::PrecisionExhausted { bits })
                }
                IntervalSign::Straddles => bits = (bits * 2).min(self.ctx.max_bits),
            }
        }
    }

    /// Numerators and a positive common denominator: `self = nums / den`.
    pub fn integral_parts(&self) -> (Vec<BigInt>, BigInt) {
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        (nums, den)
    }
}

impl Add for &CycloElem {
    type Output = CycloElem;
    fn add(self, rhs: &CycloElem) -> CycloElem {
        self.check(rhs);
        CycloElem {
            ctx: Arc::clone(&self.ctx),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CycloElem {
    type Output = CycloElem;
    fn sub(self, rhs: &CycloElem) -> CycloElem {
        self.check(rhs);
        CycloElem {
            ctx: Arc::clone(&self.ctx),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &CycloElem {
    type Output = CycloElem;
    fn neg(self) -> CycloElem {
        CycloElem {
            ctx: Arc::clone(&self.ctx),
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &CycloElem {
    type Output = CycloElem;
    fn mul(self, rhs: &CycloElem) -> CycloElem {
        self.check(rhs);
        let deg = self.ctx.degree;
        let mut prod = vec![BigRational::zero(); 2 * deg - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        CycloElem::from_coeffs(&self.ctx, prod)
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            match b.get(i) {
                Some(y) => x - y,
                None => x,
            }
        })
        .collect();
    trim(out)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = trim(a.to_vec());
    let db = b.len() - 1;
    let lead = b[db].recip();
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut q = vec![BigRational::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() * &lead;
        for (j, bj) in b.iter().enumerate() {
            rem[shift + j] -= &c * bj;
        }
        q[shift] = c;
        rem.pop();
        rem = trim(rem);
    }
    (trim(q), rem)
}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match m {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{m}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Absolute value of the largest numerator, used for size diagnostics.
pub fn coefficient_height(e: &CycloElem) -> BigInt {
    e.coeffs
        .iter()
        .map(|c| c.numer().abs())
        .max()
        .unwrap_or_else(BigInt::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        // Phi_105 is the first with a coefficient outside {-1, 0, 1}
        assert!(cyclotomic_polynomial(105).iter().any(|&c| c == -2));
        for n in [4u64, 12, 20, 24, 36, 60, 84, 156] {
            assert_eq!(cyclotomic_polynomial(n).len() - 1, euler_phi(n) as usize);
        }
    }

    #[test]
    fn conductor_must_be_multiple_of_four() {
        assert!(matches!(CyclotomicContext::new(6), Err(Error::Context(_))));
        assert!(matches!(
            CyclotomicContext::with_embedding(12, 2),
            Err(Error::Context(_))
        ));
    }

    #[test]
    fn trig_pair_examples() {
        let ctx = CyclotomicContext::new(12).unwrap();
        let (c, s) = ctx.trig_pair(0, 12).unwrap();
        assert_eq!(c.as_rational(), Some(q(1, 1)));
        assert!(s.is_zero());
        let (c, s) = ctx.trig_pair(3, 12).unwrap();
        assert!(c.is_zero());
        assert_eq!(s.as_rational(), Some(q(1, 1)));
        let (c, s) = ctx.trig_pair(1, 12).unwrap();
        assert_eq!(s.as_rational(), Some(q(1, 2)));
        // cos^2 = 3/4 exactly
        assert_eq!((&c * &c).as_rational(), Some(q(3, 4)));
        assert!(matches!(ctx.trig_pair(1, 5), Err(Error::Context(_))));
    }

    #[test]
    fn sqrt3_identity_has_sign_zero() {
        let ctx = CyclotomicContext::new(12).unwrap();
        let (c, _) = ctx.trig_pair(1, 12).unwrap();
        let two_cos = c.scale(&q(2, 1));
        // sqrt(3) = 2 sin(pi/3) = 2 sin(2 pi * 2 / 12)
        let (_, s60) = ctx.trig_pair(2, 12).unwrap();
        let sqrt3 = s60.scale(&q(2, 1));
        assert_eq!((&sqrt3 * &sqrt3).as_rational(), Some(q(3, 1)));
        let diff = &two_cos - &sqrt3;
        assert_eq!(diff.sign().unwrap(), 0);
        assert_eq!(sqrt3.sign().unwrap(), 1);
        assert_eq!((-&sqrt3).sign().unwrap(), -1);
    }

    #[test]
    fn non_real_sign_is_domain_error() {
        let ctx = CyclotomicContext::new(8).unwrap();
        let z = ctx.monomial(1);
        assert!(matches!(z.sign(), Err(Error::Domain(_))));
    }

    #[test]
    fn inverse_round_trip() {
        let ctx = CyclotomicContext::new(20).unwrap();
        let (c, s) = ctx.trig_pair(3, 20).unwrap();
        let x = &(&c + &s.scale(&q(3, 7))) + &ctx.from_int(2);
        let inv = x.inverse().unwrap();
        assert_eq!((&x * &inv).as_rational(), Some(q(1, 1)));
        assert!(matches!(ctx.zero().inverse(), Err(Error::Pole(_))));
    }

    #[test]
    fn other_embedding_changes_values_not_identities() {
        let ctx = CyclotomicContext::with_embedding(12, 5).unwrap();
        let (c, s) = ctx.trig_pair(1, 12).unwrap();
        let one = &(&c * &c) + &(&s * &s);
        assert_eq!(one.as_rational(), Some(q(1, 1)));
        let (re, _) = c.embed(128);
        assert!((re.to_f64() - (std::f64::consts::PI / 6.0).cos()).abs() < 1e-15);
    }
}
