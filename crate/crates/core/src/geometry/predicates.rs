use crate::combinatorics::{fold_subsets, unrank};
use crate::error::{Error, Result};
use crate::numeric::{Backend, ZeroTest};

use super::kernel::{Kernel, Lifting};
use super::point::{Point, PointSet};
use super::Tri;

/// Whether `d+2` points of R^d lie on one hypersphere or hyperplane.
pub fn cospherical(points: &[Point]) -> Result<Tri> {
    let d = points.first().map(Point::dim).unwrap_or(0);
    if points.len() != d + 2 || points.iter().any(|p| p.dim() != d) {
        return Err(Error::Domain(format!(
            "need exactly {} points of dimension {d}, got {}",
            d + 2,
            points.len()
        )));
    }
    let kernel = Kernel::build(points, Lifting::Sphere)?;
    let idx: Vec<usize> = (0..d + 2).collect();
    Ok(Tri::from_zero_test(kernel.det(&idx)))
}

/// Whether `D+1` points of R^D lie on one hyperplane.
pub fn coplanar(points: &[Point]) -> Result<Tri> {
    let d = points.first().map(Point::dim).unwrap_or(0);
    if points.len() != d + 1 || points.iter().any(|p| p.dim() != d) {
        return Err(Error::Domain(format!(
            "need exactly {} points of dimension {d}, got {}",
            d + 1,
            points.len()
        )));
    }
    let kernel = Kernel::build(points, Lifting::Plane)?;
    let idx: Vec<usize> = (0..=d).collect();
    Ok(Tri::from_zero_test(kernel.det(&idx)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneralPosition {
    Ok,
    /// The lexicographically first rank-deficient subset.
    Violation(Vec<usize>),
}

/// Lexicographically first subset whose kernel rows are rank deficient.
pub(crate) fn first_deficient(
    kernel: &Kernel,
    n: usize,
    k: usize,
    threads: Option<usize>,
) -> Result<Option<Vec<usize>>> {
    let first = fold_subsets(
        n,
        k,
        threads,
        || None::<u128>,
        |acc, r, s| {
            if acc.is_none() && kernel.full_rank(s) == ZeroTest::Zero {
                *acc = Some(r);
            }
        },
        |a, b| a.or(b),
    )?;
    Ok(first.map(|r| unrank(r, n, k)))
}

/// Every `d+1` points of `p` determine a unique hypersphere-or-hyperplane:
/// no `d+1` of them lie on a (d-2)-sphere or (d-2)-flat.
pub fn general_position_check(p: &PointSet, threads: Option<usize>) -> Result<GeneralPosition> {
    if p.backend() == Some(Backend::Interval) {
        return Err(Error::Unsupported(
            "general position needs an exact backend".into(),
        ));
    }
    let d = p.dimension();
    if p.len() < d + 1 {
        return Ok(GeneralPosition::Ok);
    }
    let kernel = Kernel::build(p.points(), Lifting::Sphere)?;
    Ok(match first_deficient(&kernel, p.len(), d + 1, threads)? {
        None => GeneralPosition::Ok,
        Some(s) => GeneralPosition::Violation(s),
    })
}

/// Every `D` points of `q` affinely span a hyperplane of R^D.
pub fn span_check(q: &PointSet, threads: Option<usize>) -> Result<GeneralPosition> {
    if q.backend() == Some(Backend::Interval) {
        return Err(Error::Unsupported(
            "span check needs an exact backend".into(),
        ));
    }
    let d = q.dimension();
    if q.len() < d {
        return Ok(GeneralPosition::Ok);
    }
    let kernel = Kernel::build(q.points(), Lifting::Plane)?;
    Ok(match first_deficient(&kernel, q.len(), d, threads)? {
        None => GeneralPosition::Ok,
        Some(s) => GeneralPosition::Violation(s),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point::Metadata;

    fn pts(v: &[&[i64]]) -> Vec<Point> {
        v.iter().map(|c| Point::from_ints(c)).collect()
    }

    #[test]
    fn cospherical_examples() {
        let on = pts(&[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 0, -1]]);
        assert_eq!(cospherical(&on).unwrap(), Tri::True);
        let off = pts(&[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 0, -2]]);
        assert_eq!(cospherical(&off).unwrap(), Tri::False);
        let line = pts(&[&[0, 0], &[1, 0], &[2, 0], &[3, 0]]);
        assert_eq!(cospherical(&line).unwrap(), Tri::True);
    }

    #[test]
    fn cospherical_on_intervals_is_never_true() {
        let on = pts(&[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 0, -1]]);
        let iv: Vec<Point> = on.iter().map(|p| p.to_interval(128)).collect();
        assert_eq!(cospherical(&iv).unwrap(), Tri::Indeterminate);
        let off = pts(&[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 0, -2]]);
        let iv: Vec<Point> = off.iter().map(|p| p.to_interval(128)).collect();
        assert_eq!(cospherical(&iv).unwrap(), Tri::False);
    }

    #[test]
    fn concyclic_quadruple_violates_general_position() {
        let p = PointSet::new(
            3,
            pts(&[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1]]),
            Metadata::default(),
        )
        .unwrap();
        assert_eq!(
            general_position_check(&p, Some(2)).unwrap(),
            GeneralPosition::Violation(vec![0, 1, 2, 3])
        );
    }

    #[test]
    fn generic_sphere_points_plus_origin_pass() {
        // (3,4,0)/5, (0,3,4)/5, (4,0,3)/5, (2,3,6)/7, (-2,6,3)/7 and the origin
        let p = PointSet::new(
            3,
            vec![
                rat(&[(3, 5), (4, 5), (0, 1)]),
                rat(&[(0, 1), (3, 5), (4, 5)]),
                rat(&[(4, 5), (0, 1), (3, 5)]),
                rat(&[(2, 7), (3, 7), (6, 7)]),
                rat(&[(-2, 7), (6, 7), (3, 7)]),
                Point::from_ints(&[0, 0, 0]),
            ],
            Metadata::default(),
        )
        .unwrap();
        assert_eq!(
            general_position_check(&p, None).unwrap(),
            GeneralPosition::Ok
        );
    }

    fn rat(c: &[(i64, i64)]) -> Point {
        Point::from_rationals(
            c.iter()
                .map(|&(n, d)| crate::numeric::rational(n, d))
                .collect(),
        )
        .unwrap()
    }
}
