//! Division-free rings that predicate kernels evaluate determinants in.
//!
//! Exact kernels come in pairs: a fixed-width `i128` ring whose operations
//! report overflow, and an arbitrary-precision ring used as the fallback.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::cyclotomic::CyclotomicContext;
use super::interval::{Interval, IntervalSign};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroTest {
    Zero,
    NonZero,
    /// Only produced by interval rings.
    Unknown,
}

/// Commutative ring operations for predicate kernels. `None` means the
/// fixed-width representation overflowed.
pub trait KernelRing: Clone + Send + Sync {
    fn zero_like(&self) -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn zero_test(&self) -> ZeroTest;
}

impl KernelRing for i128 {
    fn zero_like(&self) -> Self {
        0
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn zero_test(&self) -> ZeroTest {
        if *self == 0 {
            ZeroTest::Zero
        } else {
            ZeroTest::NonZero
        }
    }
}

impl KernelRing for BigInt {
    fn zero_like(&self) -> Self {
        <BigInt as Zero>::zero()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn zero_test(&self) -> ZeroTest {
        if Zero::is_zero(self) {
            ZeroTest::Zero
        } else {
            ZeroTest::NonZero
        }
    }
}

impl KernelRing for Interval {
    fn zero_like(&self) -> Self {
        Interval::from_int(0, self.bits())
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(Interval::add(self, o))
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(Interval::sub(self, o))
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(Interval::mul(self, o))
    }
    fn zero_test(&self) -> ZeroTest {
        match self.sign() {
            IntervalSign::Straddles => ZeroTest::Unknown,
            _ => ZeroTest::NonZero,
        }
    }
}

/// Coefficients for [`ZZeta`].
pub trait Coeff: Clone + Send + Sync + PartialEq {
    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    /// `acc += a * b`; false on overflow.
    fn fma(acc: &mut Self, a: &Self, b: &Self) -> bool;
    /// `acc -= a * k`; false on overflow.
    fn fms_small(acc: &mut Self, a: &Self, k: i64) -> bool;
}

impl Coeff for i128 {
    fn zero() -> Self {
        0
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn fma(acc: &mut Self, a: &Self, b: &Self) -> bool {
        match a.checked_mul(*b).and_then(|p| acc.checked_add(p)) {
            Some(v) => {
                *acc = v;
                true
            }
            None => false,
        }
    }
    fn fms_small(acc: &mut Self, a: &Self, k: i64) -> bool {
        match a.checked_mul(k as i128).and_then(|p| acc.checked_sub(p)) {
            Some(v) => {
                *acc = v;
                true
            }
            None => false,
        }
    }
}

impl Coeff for BigInt {
    fn zero() -> Self {
        <BigInt as Zero>::zero()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn fma(acc: &mut Self, a: &Self, b: &Self) -> bool {
        *acc += a * b;
        true
    }
    fn fms_small(acc: &mut Self, a: &Self, k: i64) -> bool {
        *acc -= a * k;
        true
    }
}

/// Sparse description of the monic modulus Phi_N.
#[derive(Debug)]
pub struct PhiModulus {
    degree: usize,
    /// Nonzero non-leading coefficients `(index, value)`.
    tail: Vec<(usize, i64)>,
}

impl PhiModulus {
    pub fn from_context(ctx: &CyclotomicContext) -> Arc<Self> {
        let phi = ctx.phi();
        let degree = phi.len() - 1;
        let tail = phi[..degree]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, c))
            .collect();
        Arc::new(PhiModulus { degree, tail })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
}

/// Element of Z[zeta_N] = Z[x] / Phi_N(x) with reduced coefficients.
#[derive(Clone, Debug)]
pub struct ZZeta<C: Coeff> {
    modulus: Arc<PhiModulus>,
    coeffs: Vec<C>,
}

impl<C: Coeff> ZZeta<C> {
    /// `coeffs` must already be reduced (length = degree).
    pub fn new(modulus: Arc<PhiModulus>, coeffs: Vec<C>) -> Self {
        assert_eq!(coeffs.len(), modulus.degree);
        ZZeta { modulus, coeffs }
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn modulus(&self) -> &Arc<PhiModulus> {
        &self.modulus
    }

    fn zip_with(&self, o: &Self, f: impl Fn(&C, &C) -> Option<C>) -> Option<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| f(a, b))
            .collect::<Option<Vec<_>>>()?;
        Some(ZZeta {
            modulus: Arc::clone(&self.modulus),
            coeffs,
        })
    }
}

impl ZZeta<BigInt> {
    pub fn to_i128(&self) -> Option<ZZeta<i128>> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.to_i128())
            .collect::<Option<Vec<_>>>()?;
        Some(ZZeta {
            modulus: Arc::clone(&self.modulus),
            coeffs,
        })
    }
}

impl<C: Coeff> KernelRing for ZZeta<C> {
    fn zero_like(&self) -> Self {
        ZZeta {
            modulus: Arc::clone(&self.modulus),
            coeffs: vec![C::zero(); self.modulus.degree],
        }
    }

    fn add(&self, o: &Self) -> Option<Self> {
        self.zip_with(o, C::add)
    }

    fn sub(&self, o: &Self) -> Option<Self> {
        self.zip_with(o, C::sub)
    }

    fn mul(&self, o: &Self) -> Option<Self> {
        let deg = self.modulus.degree;
        let mut acc = vec![C::zero(); 2 * deg - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() && !C::fma(&mut acc[i + j], a, b) {
                    return None;
                }
            }
        }
        // long division by the monic modulus, top coefficient first
        for k in (deg..2 * deg - 1).rev() {
            let t = std::mem::replace(&mut acc[k], C::zero());
            if t.is_zero() {
                continue;
            }
            for &(j, p) in &self.modulus.tail {
                if !C::fms_small(&mut acc[k - deg + j], &t, p) {
                    return None;
                }
            }
        }
        acc.truncate(deg);
        Some(ZZeta {
            modulus: Arc::clone(&self.modulus),
            coeffs: acc,
        })
    }

    fn zero_test(&self) -> ZeroTest {
        if self.coeffs.iter().all(C::is_zero) {
            ZeroTest::Zero
        } else {
            ZeroTest::NonZero
        }
    }
}
