//! Inverse stereographic lift onto the unit sphere, its inverse, and
//! inversion in unit spheres centred anywhere.

use crate::error::{Error, Result};
use crate::numeric::{Scalar, ZeroTest};

use super::point::{Metadata, Point, PointSet};

/// `x -> (2x, |x|^2 - 1) / (|x|^2 + 1)`, a point of the unit sphere in R^(d+1).
pub fn lift(x: &Point) -> Point {
    let s = x.norm_sq();
    let one = s.int_like(1);
    let den = s.add(&one).expect("uniform backend");
    let two = s.int_like(2);
    let mut coords: Vec<Scalar> = x
        .coords()
        .iter()
        .map(|c| two.mul(c).and_then(|v| v.div(&den)))
        .collect::<Result<_>>()
        .expect("|x|^2 + 1 is positive");
    coords.push(
        s.sub(&one)
            .and_then(|v| v.div(&den))
            .expect("|x|^2 + 1 is positive"),
    );
    Point::new(coords).expect("lift keeps the backend")
}

/// Stereographic projection from the north pole `(0, .., 0, 1)`.
pub fn project(y: &Point) -> Result<Point> {
    let d1 = y.dim();
    if d1 < 3 {
        return Err(Error::Domain(format!(
            "projection needs a point of R^(d+1) with d >= 2, got dimension {d1}"
        )));
    }
    let last = &y.coords()[d1 - 1];
    let one = last.int_like(1);
    let off = y.norm_sq().sub(&one)?;
    if off.zero_test() == ZeroTest::NonZero && y.backend().is_exact() {
        return Err(Error::Domain("point is not on the unit sphere".into()));
    }
    let den = one.sub(last)?;
    if den.zero_test() == ZeroTest::Zero {
        return Err(Error::Pole("the north pole has no image".into()));
    }
    let coords = y.coords()[..d1 - 1]
        .iter()
        .map(|c| c.div(&den))
        .collect::<Result<_>>()?;
    Point::new(coords)
}

/// Inversion in the unit sphere centred at `r`: `r + (x - r) / |x - r|^2`.
pub fn invert(x: &Point, r: &Point) -> Result<Point> {
    let v = x.sub(r)?;
    let s = v.norm_sq();
    if s.zero_test() == ZeroTest::Zero {
        return Err(Error::Pole("the centre of inversion has no image".into()));
    }
    r.add(&v.div_scalar(&s)?)
}

pub fn lift_set(p: &PointSet) -> Result<PointSet> {
    let mut meta = p.metadata().clone();
    meta.extra.insert("lifted".into(), true.into());
    PointSet::new(
        p.dimension() + 1,
        p.points().iter().map(lift).collect(),
        meta,
    )
}

pub fn project_set(p: &PointSet) -> Result<PointSet> {
    let pts = p.points().iter().map(project).collect::<Result<_>>()?;
    PointSet::new(p.dimension() - 1, pts, Metadata::default())
}

pub fn invert_set(p: &PointSet, r: &Point) -> Result<PointSet> {
    let pts = p
        .points()
        .iter()
        .map(|x| invert(x, r))
        .collect::<Result<_>>()?;
    let mut meta = p.metadata().clone();
    meta.extra.insert("inversion_center".into(), r.to_json());
    PointSet::new(p.dimension(), pts, meta)
}
