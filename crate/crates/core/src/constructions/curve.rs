//! Bounded rational normal curves of even degree `d = 2k` on which `d+2`
//! points are cospherical exactly when their parameters sum to 0 mod 2pi.
//!
//! gamma(t) = (a cos t, b sin t, a_2 cos 2t, a_2 sin 2t, ..,
//!             e cos t + a_k cos kt, a_k sin kt)
//!
//! Each coordinate has frequency <= k while |gamma|^2 reaches frequency k+1
//! through the single term `a_k e cos t cos kt`. A hypersphere section is a
//! real trigonometric polynomial of degree k+1, so its 2k+2 roots
//! `z = e^{it}` multiply to `conj(c)/c = 1` for the real top coefficient.
//! Hyperplane sections have degree k and meet the curve in at most d points.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::kernel::{cofactors, dot};
use crate::geometry::{general_position_check, GeneralPosition, Metadata, Point, PointSet};
use crate::numeric::cyclotomic::euler_phi;
use crate::numeric::interval::pi;
use crate::numeric::{format_rational, CyclotomicContext, Interval, IntervalSign, Scalar};

/// Largest cyclotomic field degree a coset configuration may use.
pub const MAX_FIELD_DEGREE: u64 = 256;

#[derive(Clone, Debug, PartialEq)]
pub struct CurveParams {
    d: usize,
    a: BigRational,
    b: BigRational,
    /// Amplitudes for frequencies 2..=k.
    amps: Vec<BigRational>,
    e: BigRational,
}

impl CurveParams {
    pub fn new(
        d: usize,
        a: BigRational,
        b: BigRational,
        amps: Vec<BigRational>,
        e: BigRational,
    ) -> Result<Self> {
        if d < 4 || d % 2 != 0 {
            return Err(Error::Domain(format!(
                "curve family needs even d >= 4, got {d}"
            )));
        }
        if amps.len() != d / 2 - 1 {
            return Err(Error::Domain(format!(
                "expected {} amplitudes for d = {d}, got {}",
                d / 2 - 1,
                amps.len()
            )));
        }
        if [&a, &b, &e].into_iter().chain(&amps).any(Zero::is_zero) {
            return Err(Error::Domain("curve coefficients must be nonzero".into()));
        }
        Ok(CurveParams { d, a, b, amps, e })
    }

    /// a = 2, b = 1, a_m = 1, e = 1.
    pub fn default_for(d: usize) -> Result<Self> {
        let one = BigRational::one();
        Self::new(
            d,
            BigRational::from_integer(BigInt::from(2)),
            one.clone(),
            vec![one.clone(); d.saturating_sub(2) / 2],
            one,
        )
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn to_json(&self) -> Value {
        json!({
            "a": format_rational(&self.a),
            "b": format_rational(&self.b),
            "amplitudes": self.amps.iter().map(format_rational).collect::<Vec<_>>(),
            "e": format_rational(&self.e),
        })
    }

    /// Coordinates from `trig(m) = (cos mt, sin mt)`.
    fn assemble(&self, trig: impl Fn(usize) -> (Scalar, Scalar)) -> Vec<Scalar> {
        let k = self.d / 2;
        let scale = |s: &Scalar, q: &BigRational| s.mul(&s.constant_like(q)).expect("same backend");
        let (c1, s1) = trig(1);
        let mut coords = vec![scale(&c1, &self.a), scale(&s1, &self.b)];
        for m in 2..=k {
            let (cm, sm) = trig(m);
            let amp = &self.amps[m - 2];
            coords.push(scale(&cm, amp));
            coords.push(scale(&sm, amp));
        }
        coords[2 * k - 2] = coords[2 * k - 2]
            .add(&scale(&c1, &self.e))
            .expect("same backend");
        coords
    }

    /// Interval enclosure of gamma(t).
    pub fn point_at(&self, t: &BigRational, bits: u32) -> Point {
        let t = Interval::from_rational(t, bits);
        self.point_at_interval(&t)
    }

    pub fn point_at_interval(&self, t: &Interval) -> Point {
        let coords = self.assemble(|m| {
            let (c, s) = t
                .mul_rational(&BigRational::from_integer(BigInt::from(m)))
                .cos_sin();
            (Scalar::Interval(c), Scalar::Interval(s))
        });
        Point::new(coords).expect("dimension >= 4")
    }
}

/// Field for the coset of order `n` in dimension `d`: conductor lcm(4, n(d+2)).
pub fn coset_context(d: usize, n: usize) -> Result<Arc<CyclotomicContext>> {
    let m = (n * (d + 2)) as u64;
    let conductor = m.lcm(&4);
    let degree = euler_phi(conductor);
    if degree > MAX_FIELD_DEGREE {
        return Err(Error::Resource(format!(
            "coset needs Q(zeta_{conductor}) of degree {degree}, above the cap of {MAX_FIELD_DEGREE}"
        )));
    }
    CyclotomicContext::new(conductor)
}

/// gamma(2 pi (j + l/(d+2)) / n) with exact cyclotomic coordinates.
pub fn curve_point(
    params: &CurveParams,
    ctx: &Arc<CyclotomicContext>,
    j: usize,
    n: usize,
    l: i64,
) -> Result<Point> {
    if j >= n {
        return Err(Error::Domain(format!("index {j} out of range for n = {n}")));
    }
    let m = (n * (params.d + 2)) as i64;
    let idx = (j as i64 * (params.d as i64 + 2) + l).rem_euclid(m);
    let mut pairs = Vec::with_capacity(params.d / 2);
    for f in 1..=params.d / 2 {
        pairs.push(ctx.trig_pair((f as i64 * idx) % m, m as u64)?);
    }
    let coords = params.assemble(|f| {
        let (c, s) = &pairs[f - 1];
        (Scalar::Cyclotomic(c.clone()), Scalar::Cyclotomic(s.clone()))
    });
    Point::new(coords)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CosetSpec {
    pub params: CurveParams,
    pub n: usize,
    pub l: i64,
}

impl CosetSpec {
    pub fn new(d: usize, n: usize, l: i64) -> Result<Self> {
        Ok(CosetSpec {
            params: CurveParams::default_for(d)?,
            n,
            l,
        })
    }
}

/// The `n` points of the coset, checked for general position.
pub fn coset_config(spec: &CosetSpec) -> Result<PointSet> {
    coset_config_with(spec, true)
}

/// As [`coset_config`], optionally skipping the general-position scan
/// (counting repeats it anyway).
pub fn coset_config_with(spec: &CosetSpec, validate: bool) -> Result<PointSet> {
    let d = spec.params.d;
    if spec.n < d + 3 {
        return Err(Error::Domain(format!(
            "need n >= d + 3 = {}, got {}",
            d + 3,
            spec.n
        )));
    }
    let ctx = coset_context(d, spec.n)?;
    let pts = (0..spec.n)
        .map(|j| curve_point(&spec.params, &ctx, j, spec.n, spec.l))
        .collect::<Result<Vec<_>>>()?;
    let mut meta = Metadata {
        generator: Some("coset".into()),
        n: Some(spec.n),
        d: Some(d),
        l: Some(spec.l),
        ..Metadata::default()
    };
    meta.extra.insert("curve".into(), spec.params.to_json());
    let set = PointSet::new(d, pts, meta)?;
    if validate {
        if let GeneralPosition::Violation(w) = general_position_check(&set, None)? {
            return Err(Error::Generation(format!(
                "points {w:?} violate general position; choose different curve parameters"
            )));
        }
    }
    Ok(set)
}

/// `-(t_1 + .. + t_{d+1})` reduced into `[0, 2 pi)`.
pub fn completing_parameter(ts: &[BigRational], bits: u32) -> Interval {
    let s: BigRational = -ts.iter().sum::<BigRational>();
    let tau = pi(bits).mul_rational(&BigRational::from_integer(BigInt::from(2)));
    let exact = Interval::from_rational(&s, bits);
    let turns = (s.to_f64().unwrap_or(0.0) / std::f64::consts::TAU).floor() as i64;
    let mut r = exact.sub(&tau.mul_rational(&BigRational::from_integer(BigInt::from(turns))));
    // guard against f64 misjudging a value right at a multiple of 2 pi
    if r.sign() == IntervalSign::Negative {
        r = r.add(&tau);
    }
    r
}

/// Certified enclosure of the normalized equation value of
/// `hypersphere_through(gamma(t_1), .., gamma(t_{d+1}))` at the completing
/// point `gamma(-sum t)`. Contains 0 when the group law holds.
pub fn completion_residual(
    params: &CurveParams,
    ts: &[BigRational],
    bits: u32,
) -> Result<Interval> {
    let t_star: BigRational = -ts.iter().sum::<BigRational>();
    residual_at(params, ts, &t_star, bits)
}

/// Normalized equation value at `gamma(t_star)` of the hypersphere through
/// `gamma(t_1), .., gamma(t_{d+1})`.
pub fn residual_at(
    params: &CurveParams,
    ts: &[BigRational],
    t_star: &BigRational,
    bits: u32,
) -> Result<Interval> {
    if ts.len() != params.d + 1 {
        return Err(Error::Domain(format!(
            "need {} parameters, got {}",
            params.d + 1,
            ts.len()
        )));
    }
    let row = |p: &Point| -> Vec<Interval> {
        let xs: Vec<Interval> = p.coords().iter().map(|c| c.to_interval(bits)).collect();
        let mut r = vec![Interval::from_int(1, bits)];
        let mut sq = Interval::from_int(0, bits);
        for x in &xs {
            sq = sq.add(&x.square());
        }
        r.extend(xs);
        r.push(sq);
        r
    };
    let rows: Vec<Vec<Interval>> = ts.iter().map(|t| row(&params.point_at(t, bits))).collect();
    let refs: Vec<&[Interval]> = rows.iter().map(Vec::as_slice).collect();
    let c = cofactors(&refs).expect("interval ops are total");
    let lead = c
        .iter()
        .max_by(|x, y| x.midpoint().abs().cmp(&y.midpoint().abs()))
        .expect("nonempty")
        .clone();
    let target = row(&params.point_at(t_star, bits));
    let value = dot(&c, &target).expect("interval ops are total");
    value
        .div(&lead)
        .map_err(|_| Error::Indeterminate("hypersphere coefficients not certified nonzero".into()))
}
