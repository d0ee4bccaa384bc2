use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::numeric::{Backend, Scalar, ScalarDecoder, ZeroTest};

/// A point of R^d; all coordinates share one backend.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    coords: Vec<Scalar>,
}

impl Point {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::Domain(format!(
                "points need dimension >= 2, got {}",
                coords.len()
            )));
        }
        let first = &coords[0];
        for c in &coords[1..] {
            // cheap compatibility probe: catches backend and field mismatches
            first.add(c)?;
        }
        Ok(Point { coords })
    }

    pub fn from_rationals(coords: Vec<BigRational>) -> Result<Self> {
        Self::new(coords.into_iter().map(Scalar::Rational).collect())
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point {
            coords: coords.iter().map(|&v| Scalar::int(v)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn backend(&self) -> Backend {
        self.coords[0].backend()
    }

    pub fn norm_sq(&self) -> Scalar {
        let mut acc = self.coords[0].square();
        for c in &self.coords[1..] {
            acc = acc.add(&c.square()).expect("uniform backend");
        }
        acc
    }

    fn check_dim(&self, other: &Point) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::Domain(format!(
                "dimension mismatch: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }

    pub fn sub(&self, other: &Point) -> Result<Point> {
        self.check_dim(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<_>>()?;
        Ok(Point { coords })
    }

    pub fn add(&self, other: &Point) -> Result<Point> {
        self.check_dim(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(Point { coords })
    }

    pub fn dot(&self, other: &Point) -> Result<Scalar> {
        self.check_dim(other)?;
        let mut acc = self.coords[0].mul(&other.coords[0])?;
        for (a, b) in self.coords[1..].iter().zip(&other.coords[1..]) {
            acc = acc.add(&a.mul(b)?)?;
        }
        Ok(acc)
    }

    /// Divide every coordinate by `s`.
    pub fn div_scalar(&self, s: &Scalar) -> Result<Point> {
        let coords = self
            .coords
            .iter()
            .map(|c| c.div(s))
            .collect::<Result<_>>()?;
        Ok(Point { coords })
    }

    /// Re-express the point in another backend of the same value.
    pub fn to_interval(&self, bits: u32) -> Point {
        Point {
            coords: self
                .coords
                .iter()
                .map(|c| Scalar::Interval(c.to_interval(bits)))
                .collect(),
        }
    }

    /// Exact backends: equality. Intervals: `Unknown` unless some coordinate
    /// pair is certifiably separated.
    pub fn coincidence(&self, other: &Point) -> ZeroTest {
        if self.dim() != other.dim() {
            return ZeroTest::NonZero;
        }
        let mut unknown = false;
        for (a, b) in self.coords.iter().zip(&other.coords) {
            match (a, b) {
                (Scalar::Interval(x), Scalar::Interval(y)) => {
                    if x.disjoint(y) {
                        return ZeroTest::NonZero;
                    }
                    unknown = true;
                }
                _ => {
                    if a != b {
                        return ZeroTest::NonZero;
                    }
                }
            }
        }
        if unknown {
            ZeroTest::Unknown
        } else {
            ZeroTest::Zero
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(Scalar::to_f64).collect()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coords.iter().map(Scalar::to_json).collect())
    }
}

/// Provenance recorded alongside a point set.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

/// A validated set of distinct points of one dimension and backend.
#[derive(Clone, Debug)]
pub struct PointSet {
    dimension: usize,
    points: Vec<Point>,
    metadata: Metadata,
}

impl PointSet {
    pub fn new(dimension: usize, points: Vec<Point>, metadata: Metadata) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::Domain(format!(
                "dimension must be >= 2, got {dimension}"
            )));
        }
        if let Some(first) = points.first() {
            for (i, p) in points.iter().enumerate() {
                if p.dim() != dimension {
                    return Err(Error::Domain(format!(
                        "point {i} has dimension {}, expected {dimension}",
                        p.dim()
                    )));
                }
                first.coords[0].add(&p.coords[0]).map_err(|e| match e {
                    Error::BackendMismatch(m) => Error::BackendMismatch(format!("point {i}: {m}")),
                    other => other,
                })?;
            }
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                match points[i].coincidence(&points[j]) {
                    ZeroTest::NonZero => {}
                    ZeroTest::Zero => {
                        return Err(Error::Domain(format!("points {i} and {j} coincide")))
                    }
                    ZeroTest::Unknown => {
                        return Err(Error::Indeterminate(format!(
                            "points {i} and {j} are not certifiably distinct"
                        )))
                    }
                }
            }
        }
        Ok(PointSet {
            dimension,
            points,
            metadata,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn metadata(&self) -> &Metadata {
        &self.metadata
    }

    pub fn metadata_mut(&mut self) -> &mut Metadata {
        &mut self.metadata
    }

    pub fn backend(&self) -> Option<Backend> {
        self.points.first().map(Point::backend)
    }

    pub fn subset(&self, idx: &[usize]) -> Vec<Point> {
        idx.iter().map(|&i| self.points[i].clone()).collect()
    }

    pub fn to_interval(&self, bits: u32) -> Result<PointSet> {
        let points = self.points.iter().map(|p| p.to_interval(bits)).collect();
        let mut meta = self.metadata.clone();
        meta.extra.insert("bits".into(), json!(bits));
        PointSet::new(self.dimension, points, meta)
    }

    /// Re-express the set in another backend. Rational sets embed into
    /// Q(zeta_4); cyclotomic sets convert back only if every coordinate is
    /// rational; intervals cannot become exact.
    pub fn convert(&self, backend: Backend, bits: u32) -> Result<PointSet> {
        let from = self.backend().unwrap_or(backend);
        if from == backend {
            return Ok(self.clone());
        }
        let map = |f: &dyn Fn(&Scalar) -> Result<Scalar>| -> Result<PointSet> {
            let points = self
                .points
                .iter()
                .map(|p| Point::new(p.coords.iter().map(f).collect::<Result<_>>()?))
                .collect::<Result<_>>()?;
            PointSet::new(self.dimension, points, self.metadata.clone())
        };
        match (from, backend) {
            (_, Backend::Interval) => self.to_interval(bits),
            (Backend::Rational, Backend::Cyclotomic) => {
                let ctx = crate::numeric::CyclotomicContext::new(4)?;
                map(&|s| {
                    Ok(Scalar::Cyclotomic(
                        ctx.from_rational(s.as_rational().expect("rational").clone()),
                    ))
                })
            }
            (Backend::Cyclotomic, Backend::Rational) => map(&|s| match s {
                Scalar::Cyclotomic(e) => e
                    .as_rational()
                    .map(Scalar::Rational)
                    .ok_or_else(|| Error::Unsupported("coordinate is not rational".into())),
                _ => unreachable!(),
            }),
            _ => Err(Error::Unsupported(format!(
                "cannot convert {from} coordinates to {backend}"
            ))),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dimension": self.dimension,
            "backend": self.backend().unwrap_or(Backend::Rational).name(),
            "points": self.points.iter().map(Point::to_json).collect::<Vec<_>>(),
            "metadata": serde_json::to_value(&self.metadata).expect("metadata serializes"),
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("json") + "\n"
    }

    pub fn from_json(v: &Value) -> Result<PointSet> {
        Self::from_json_with(v, &mut ScalarDecoder::new())
    }

    pub fn from_json_str(s: &str) -> Result<PointSet> {
        Self::from_json(&serde_json::from_str(s)?)
    }

    pub fn from_json_with(v: &Value, decoder: &mut ScalarDecoder) -> Result<PointSet> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::parse("$", "expected a JSON object"))?;
        let dimension = obj
            .get("dimension")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::parse("dimension", "expected a positive integer"))?
            as usize;
        let backend: Backend = obj
            .get("backend")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::parse("backend", "expected a string"))?
            .parse()?;
        let raw = obj
            .get("points")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("points", "expected an array"))?;
        let mut points = Vec::with_capacity(raw.len());
        for (i, p) in raw.iter().enumerate() {
            let coords = p
                .as_array()
                .ok_or_else(|| Error::parse(format!("points[{i}]"), "expected an array"))?;
            if coords.len() != dimension {
                return Err(Error::parse(
                    format!("points[{i}]"),
                    format!("expected {dimension} coordinates, got {}", coords.len()),
                ));
            }
            let scalars = coords
                .iter()
                .enumerate()
                .map(|(j, c)| decoder.decode(c, &format!("points[{i}][{j}]")))
                .collect::<Result<Vec<_>>>()?;
            if let Some(bad) = scalars.iter().position(|s| s.backend() != backend) {
                return Err(Error::parse(
                    format!("points[{i}][{bad}]"),
                    format!("declared backend is {backend}"),
                ));
            }
            points.push(
                Point::new(scalars)
                    .map_err(|e| Error::parse(format!("points[{i}]"), e.to_string()))?,
            );
        }
        let metadata = match obj.get("metadata") {
            None | Some(Value::Null) => Metadata::default(),
            Some(m) => serde_json::from_value(m.clone())
                .map_err(|e| Error::parse("metadata", e.to_string()))?,
        };
        PointSet::new(dimension, points, metadata)
    }
}
