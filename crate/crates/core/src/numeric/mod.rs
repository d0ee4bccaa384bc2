//! Scalar backends and the sign/zero decision contract.
//!
//! Three backends share one [`Scalar`] type: exact rationals, exact
//! cyclotomic-field elements, and certified multiprecision intervals. Exact
//! backends decide every sign; intervals decide strict signs only and never
//! certify zero.

pub mod cyclotomic;
pub mod interval;
pub mod ring;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

pub use cyclotomic::{CycloElem, CyclotomicContext};
pub use interval::{Dyadic, Interval, IntervalSign};
pub use ring::ZeroTest;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Rational,
    Cyclotomic,
    Interval,
}

impl Backend {
    pub fn is_exact(self) -> bool {
        !matches!(self, Backend::Interval)
    }

    pub fn name(self) -> &'static str {
        match self {
            Backend::Rational => "rational",
            Backend::Cyclotomic => "cyclotomic",
            Backend::Interval => "interval",
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(Backend::Rational),
            "cyclotomic" => Ok(Backend::Cyclotomic),
            "interval" => Ok(Backend::Interval),
            other => Err(Error::parse(
                "backend",
                format!("unknown backend `{other}`"),
            )),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
    Indeterminate,
}

impl Sign {
    pub fn as_i32(self) -> Option<i32> {
        match self {
            Sign::Negative => Some(-1),
            Sign::Zero => Some(0),
            Sign::Positive => Some(1),
            Sign::Indeterminate => None,
        }
    }
}

/// A coordinate value tagged with its backend.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Rational(BigRational),
    Cyclotomic(CycloElem),
    Interval(Interval),
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parse `p/q`, `p`, or a decimal literal into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Ok(p) = s.parse::<BigInt>() {
        return Some(BigRational::from_integer(p));
    }
    interval::parse_decimal(s)
}

pub fn format_rational(q: &BigRational) -> String {
    q.to_string()
}

impl Scalar {
    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Rational(_) => Backend::Rational,
            Scalar::Cyclotomic(_) => Backend::Cyclotomic,
            Scalar::Interval(_) => Backend::Interval,
        }
    }

    pub fn int(v: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(BigInt::from(v)))
    }

    /// A rational constant in the same backend (and field/precision) as `self`.
    pub fn constant_like(&self, q: &BigRational) -> Scalar {
        match self {
            Scalar::Rational(_) => Scalar::Rational(q.clone()),
            Scalar::Cyclotomic(e) => Scalar::Cyclotomic(e.context().from_rational(q.clone())),
            Scalar::Interval(i) => Scalar::Interval(Interval::from_rational(q, i.bits())),
        }
    }

    pub fn int_like(&self, v: i64) -> Scalar {
        self.constant_like(&BigRational::from_integer(BigInt::from(v)))
    }

    fn mismatch(&self, other: &Scalar) -> Error {
        Error::BackendMismatch(format!("{} vs {}", self.backend(), other.backend()))
    }

    fn same_field(a: &CycloElem, b: &CycloElem) -> Result<()> {
        if a.context().same_field(b.context()) {
            Ok(())
        } else {
            Err(Error::BackendMismatch(format!(
                "Q(zeta_{}) vs Q(zeta_{})",
                a.context().conductor(),
                b.context().conductor()
            )))
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a + b)),
            (Scalar::Cyclotomic(a), Scalar::Cyclotomic(b)) => {
                Self::same_field(a, b)?;
                Ok(Scalar::Cyclotomic(a + b))
            }
            (Scalar::Interval(a), Scalar::Interval(b)) => Ok(Scalar::Interval(a.add(b))),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Cyclotomic(a) => Scalar::Cyclotomic(-a),
            Scalar::Interval(a) => Scalar::Interval(a.neg()),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a * b)),
            (Scalar::Cyclotomic(a), Scalar::Cyclotomic(b)) => {
                Self::same_field(a, b)?;
                Ok(Scalar::Cyclotomic(a * b))
            }
            (Scalar::Interval(a), Scalar::Interval(b)) => Ok(Scalar::Interval(a.mul(b))),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn square(&self) -> Scalar {
        match self {
            Scalar::Interval(a) => Scalar::Interval(a.square()),
            _ => self.mul(self).expect("same backend"),
        }
    }

    /// Division; a zero (or possibly zero) divisor is a pole.
    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => {
                if b.is_zero() {
                    return Err(Error::Pole("division by zero".into()));
                }
                Ok(Scalar::Rational(a / b))
            }
            (Scalar::Cyclotomic(a), Scalar::Cyclotomic(b)) => {
                Self::same_field(a, b)?;
                Ok(Scalar::Cyclotomic(a * &b.inverse()?))
            }
            (Scalar::Interval(a), Scalar::Interval(b)) => a
                .div(b)
                .map(Scalar::Interval)
                .map_err(|_| Error::Pole("interval divisor contains zero".into())),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn zero_test(&self) -> ZeroTest {
        match self {
            Scalar::Rational(a) if a.is_zero() => ZeroTest::Zero,
            Scalar::Rational(_) => ZeroTest::NonZero,
            Scalar::Cyclotomic(a) if a.is_zero() => ZeroTest::Zero,
            Scalar::Cyclotomic(_) => ZeroTest::NonZero,
            Scalar::Interval(a) if a.contains_zero() => ZeroTest::Unknown,
            Scalar::Interval(_) => ZeroTest::NonZero,
        }
    }

    /// Interval enclosure of the value (real part for cyclotomic elements).
    pub fn to_interval(&self, bits: u32) -> Interval {
        match self {
            Scalar::Rational(q) => Interval::from_rational(q, bits),
            Scalar::Cyclotomic(e) => e.embed(bits).0,
            Scalar::Interval(i) => i.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(q) => Dyadic::from_rational(q, 64, interval::Round::Down).to_f64(),
            Scalar::Cyclotomic(e) => e.embed(64).0.to_f64(),
            Scalar::Interval(i) => i.to_f64(),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Scalar::Rational(q) => Value::String(format_rational(q)),
            Scalar::Cyclotomic(e) => {
                let coeffs: Vec<Value> = e
                    .coeffs()
                    .iter()
                    .map(|c| Value::String(format_rational(c)))
                    .collect();
                let mut v = json!({
                    "conductor": e.context().conductor(),
                    "coeffs": coeffs,
                });
                if e.context().embedding() != 1 {
                    v["embedding"] = json!(e.context().embedding());
                }
                v
            }
            Scalar::Interval(i) => {
                let digits = interval::decimal_digits(i.bits());
                json!({
                    "lo": i.lo().to_decimal(digits, interval::Round::Down),
                    "hi": i.hi().to_decimal(digits, interval::Round::Up),
                    "bits": i.bits(),
                })
            }
        }
    }
}

/// Sign of a real scalar. Exact backends never return `Indeterminate`.
pub fn sign_of(s: &Scalar) -> Result<Sign> {
    match s {
        Scalar::Rational(q) => Ok(if q.is_zero() {
            Sign::Zero
        } else if q.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }),
        Scalar::Cyclotomic(e) => Ok(match e.sign()? {
            0 => Sign::Zero,
            1 => Sign::Positive,
            _ => Sign::Negative,
        }),
        Scalar::Interval(i) => Ok(match i.sign() {
            IntervalSign::Positive => Sign::Positive,
            IntervalSign::Negative => Sign::Negative,
            IntervalSign::Straddles => Sign::Indeterminate,
        }),
    }
}

/// Decodes serialized scalars, sharing one context per cyclotomic field.
#[derive(Default)]
pub struct ScalarDecoder {
    contexts: HashMap<(u64, u64), Arc<CyclotomicContext>>,
    max_bits: Option<u32>,
}

impl ScalarDecoder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_max_bits(max_bits: u32) -> Self {
        ScalarDecoder {
            contexts: HashMap::new(),
            max_bits: Some(max_bits),
        }
    }

    pub fn context(&mut self, conductor: u64, embedding: u64) -> Result<Arc<CyclotomicContext>> {
        if let Some(c) = self.contexts.get(&(conductor, embedding)) {
            return Ok(Arc::clone(c));
        }
        let bits = self.max_bits.unwrap_or(cyclotomic::DEFAULT_MAX_BITS);
        let ctx = CyclotomicContext::build(conductor, embedding, bits)?;
        self.contexts
            .insert((conductor, embedding), Arc::clone(&ctx));
        Ok(ctx)
    }

    pub fn decode(&mut self, v: &Value, field: &str) -> Result<Scalar> {
        match v {
            Value::String(s) => parse_rational(s)
                .map(Scalar::Rational)
                .ok_or_else(|| Error::parse(field, format!("`{s}` is not a rational"))),
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Scalar::int(i))
                } else {
                    Err(Error::parse(
                        field,
                        "non-integer JSON numbers are ambiguous; use a \"p/q\" string",
                    ))
                }
            }
            Value::Object(map) if map.contains_key("conductor") => {
                let conductor = map["conductor"].as_u64().ok_or_else(|| {
                    Error::parse(format!("{field}.conductor"), "expected integer")
                })?;
                let embedding = match map.get("embedding") {
                    Some(e) => e.as_u64().ok_or_else(|| {
                        Error::parse(format!("{field}.embedding"), "expected integer")
                    })?,
                    None => 1,
                };
                let ctx = self.context(conductor, embedding)?;
                let raw = map
                    .get("coeffs")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::parse(format!("{field}.coeffs"), "expected array"))?;
                let coeffs = raw
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        c.as_str().and_then(parse_rational).ok_or_else(|| {
                            Error::parse(format!("{field}.coeffs[{i}]"), "expected \"p/q\" string")
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Scalar::Cyclotomic(CycloElem::from_coeffs(&ctx, coeffs)))
            }
            Value::Object(map) if map.contains_key("lo") => {
                let bits = map
                    .get("bits")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::parse(format!("{field}.bits"), "expected integer"))?
                    as u32;
                let bound = |key: &str| -> Result<BigRational> {
                    let raw = map
                        .get(key)
                        .ok_or_else(|| Error::parse(format!("{field}.{key}"), "missing"))?;
                    let s = match raw {
                        Value::String(s) => s.clone(),
                        Value::Number(n) => n.to_string(),
                        _ => {
                            return Err(Error::parse(format!("{field}.{key}"), "expected decimal"))
                        }
                    };
                    interval::parse_decimal(&s)
                        .ok_or_else(|| Error::parse(format!("{field}.{key}"), "expected decimal"))
                };
                let lo = Interval::from_rational(&bound("lo")?, bits);
                let hi = Interval::from_rational(&bound("hi")?, bits);
                Interval::new(lo.lo().clone(), hi.hi().clone(), bits)
                    .map(Scalar::Interval)
                    .map_err(|e| Error::parse(field, e.to_string()))
            }
            _ => Err(Error::parse(field, "unrecognized scalar encoding")),
        }
    }
}
