use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numeric::ring::ZZeta;
use crate::numeric::{CycloElem, Scalar, ScalarDecoder, ZeroTest};

use super::kernel::{Kernel, Lifting};
use super::point::Point;
use super::Tri;

/// `w |x|^2 + a . x + u = 0`; `w = 0` is a hyperplane.
#[derive(Clone, Debug, PartialEq)]
pub struct Hypersphere {
    w: Scalar,
    a: Vec<Scalar>,
    u: Scalar,
}

impl Hypersphere {
    pub fn new(w: Scalar, a: Vec<Scalar>, u: Scalar) -> Result<Self> {
        if a.len() < 2 {
            return Err(Error::Domain("hypersphere needs dimension >= 2".into()));
        }
        for s in a.iter().chain([&u]) {
            w.add(s)?;
        }
        let h = Hypersphere { w, a, u };
        if h.coefficients()
            .iter()
            .all(|c| c.zero_test() == ZeroTest::Zero)
        {
            return Err(Error::Degenerate("all coefficients are zero".into()));
        }
        Ok(h)
    }

    pub fn from_ints(w: i64, a: &[i64], u: i64) -> Result<Self> {
        Self::new(
            Scalar::int(w),
            a.iter().map(|&v| Scalar::int(v)).collect(),
            Scalar::int(u),
        )
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn w(&self) -> &Scalar {
        &self.w
    }

    pub fn a(&self) -> &[Scalar] {
        &self.a
    }

    pub fn u(&self) -> &Scalar {
        &self.u
    }

    /// Coefficients in the order `(w, a_1, .., a_d, u)`.
    pub fn coefficients(&self) -> Vec<Scalar> {
        let mut v = vec![self.w.clone()];
        v.extend(self.a.iter().cloned());
        v.push(self.u.clone());
        v
    }

    fn from_coefficients(mut c: Vec<Scalar>) -> Self {
        let u = c.pop().expect("length >= 4");
        let w = c.remove(0);
        Hypersphere { w, a: c, u }
    }

    pub fn is_hyperplane(&self) -> Tri {
        Tri::from_zero_test(self.w.zero_test())
    }

    pub fn evaluate(&self, x: &Point) -> Result<Scalar> {
        if x.dim() != self.dim() {
            return Err(Error::Domain(format!(
                "point of dimension {} against hypersphere of dimension {}",
                x.dim(),
                self.dim()
            )));
        }
        let mut acc = self.w.mul(&x.norm_sq())?.add(&self.u)?;
        for (a, c) in self.a.iter().zip(x.coords()) {
            acc = acc.add(&a.mul(c)?)?;
        }
        Ok(acc)
    }

    /// Exact canonical form. Rational coefficients become coprime integers
    /// with the first nonzero one positive. Cyclotomic coefficients that are
    /// not all rational are scaled so the first nonzero one equals 1.
    /// Interval coefficients are returned unchanged.
    pub fn canonical(&self) -> Hypersphere {
        let c = self.coefficients();
        let rationals: Option<Vec<BigRational>> = c
            .iter()
            .map(|s| match s {
                Scalar::Rational(q) => Some(q.clone()),
                Scalar::Cyclotomic(e) => e.as_rational(),
                Scalar::Interval(_) => None,
            })
            .collect();
        if let Some(qs) = rationals {
            let ints = primitive_integers(&qs);
            let scaled = c
                .iter()
                .zip(ints)
                .map(|(s, v)| s.constant_like(&BigRational::from_integer(v)))
                .collect();
            return Self::from_coefficients(scaled);
        }
        if matches!(c[0], Scalar::Interval(_)) {
            return self.clone();
        }
        let lead = c
            .iter()
            .find(|s| s.zero_test() == ZeroTest::NonZero)
            .expect("nonzero hypersphere")
            .clone();
        let scaled = c
            .iter()
            .map(|s| s.div(&lead).expect("nonzero leading coefficient"))
            .collect();
        Self::from_coefficients(scaled)
    }

    pub fn incident(&self, x: &Point) -> Result<Tri> {
        Ok(Tri::from_zero_test(self.evaluate(x)?.zero_test()))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "w": self.w.to_json(),
            "a": self.a.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "u": self.u.to_json(),
        })
    }

    pub fn from_json(v: &Value, decoder: &mut ScalarDecoder) -> Result<Self> {
        let get = |k: &str| v.get(k).ok_or_else(|| Error::parse(k, "missing"));
        let w = decoder.decode(get("w")?, "w")?;
        let u = decoder.decode(get("u")?, "u")?;
        let a = get("a")?
            .as_array()
            .ok_or_else(|| Error::parse("a", "expected an array"))?
            .iter()
            .enumerate()
            .map(|(i, s)| decoder.decode(s, &format!("a[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        Self::new(w, a, u)
    }
}

impl fmt::Display for Hypersphere {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

/// Coprime integers proportional to `qs` with the first nonzero one positive.
pub fn primitive_integers(qs: &[BigRational]) -> Vec<BigInt> {
    let den = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut ints: Vec<BigInt> = qs.iter().map(|q| q.numer() * (&den / q.denom())).collect();
    primitive_in_place(&mut ints);
    ints
}

pub(crate) fn primitive_in_place(ints: &mut [BigInt]) {
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        return;
    }
    let flip = ints
        .iter()
        .find(|v| !v.is_zero())
        .is_some_and(|v| v.is_negative());
    for v in ints.iter_mut() {
        *v = &*v / &g;
        if flip {
            *v = -&*v;
        }
    }
}

/// Reorder kernel cofactors `(u, a, w)` into `(w, a, u)`.
fn reorder<T>(mut c: Vec<T>) -> Vec<T> {
    let w = c.pop().expect("nonempty");
    let u = c.remove(0);
    let mut out = vec![w];
    out.extend(c);
    out.push(u);
    out
}

fn zzeta_to_cyclo(z: &ZZeta<BigInt>, like: &CycloElem) -> CycloElem {
    let coeffs = z
        .coeffs()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    CycloElem::from_coeffs(like.context(), coeffs)
}

/// The unique hypersphere-or-hyperplane through `d+1` points of R^d, in
/// canonical form.
pub fn hypersphere_through(points: &[Point]) -> Result<Hypersphere> {
    let d = points
        .first()
        .ok_or_else(|| Error::Domain("no points".into()))?
        .dim();
    if points.len() != d + 1 || points.iter().any(|p| p.dim() != d) {
        return Err(Error::Domain(format!(
            "need exactly {} points of dimension {d}, got {}",
            d + 1,
            points.len()
        )));
    }
    let kernel = Kernel::build(points, Lifting::Sphere)?;
    let idx: Vec<usize> = (0..=d).collect();
    let coeffs: Vec<Scalar> = match &points[0].coords()[0] {
        Scalar::Rational(_) => {
            let c = kernel.rational_cofactors(&idx).expect("rational kernel");
            if c.iter().all(Zero::is_zero) {
                return Err(Error::Degenerate(
                    "points do not determine a unique hypersphere".into(),
                ));
            }
            reorder(c)
                .into_iter()
                .map(|v| Scalar::Rational(BigRational::from_integer(v)))
                .collect()
        }
        Scalar::Cyclotomic(like) => {
            let c = kernel
                .cyclotomic_cofactors(&idx)
                .expect("cyclotomic kernel");
            let c: Vec<CycloElem> = c.iter().map(|z| zzeta_to_cyclo(z, like)).collect();
            if c.iter().all(CycloElem::is_zero) {
                return Err(Error::Degenerate(
                    "points do not determine a unique hypersphere".into(),
                ));
            }
            reorder(c).into_iter().map(Scalar::Cyclotomic).collect()
        }
        Scalar::Interval(_) => {
            let c = kernel.interval_cofactors(&idx).expect("interval kernel");
            if c.iter().all(|i| i.contains_zero()) {
                return Err(Error::Indeterminate(
                    "full rank of the lifted points is not certified".into(),
                ));
            }
            reorder(c).into_iter().map(Scalar::Interval).collect()
        }
    };
    Ok(Hypersphere::from_coefficients(coeffs).canonical())
}
