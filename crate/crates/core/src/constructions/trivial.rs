use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{binomial, Combinations};
use crate::counting::{spectrum, CountOptions};
use crate::error::{Error, Result};
use crate::geometry::kernel::{Kernel, Lifting};
use crate::geometry::{lift, Metadata, Point, PointSet};
use crate::numeric::ZeroTest;

const CANDIDATES_PER_POINT: usize = 200;
const OFF_POINT_ATTEMPTS: usize = 200;

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let p: i64 = rng.random_range(-12..=12);
    let q: i64 = rng.random_range(1..=5);
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn random_point(rng: &mut ChaCha8Rng, dim: usize) -> Point {
    Point::from_rationals((0..dim).map(|_| random_rational(rng)).collect()).expect("dim >= 2")
}

/// Whether `cand` keeps every (d+1)-subset of `pts + [cand]` full rank.
fn keeps_general_position(pts: &[Point], cand: &Point, d: usize) -> bool {
    if pts.iter().any(|p| p == cand) {
        return false;
    }
    if pts.len() < d {
        return true;
    }
    let mut all = pts.to_vec();
    all.push(cand.clone());
    let kernel = Kernel::build(&all, Lifting::Sphere).expect("rational points");
    let last = pts.len();
    Combinations::new(pts.len(), d).all(|mut s| {
        s.push(last);
        kernel.full_rank(&s) != ZeroTest::Zero
    })
}

/// `n - 1` rational points in general position on the unit sphere of R^d
/// and one point off it, such that the spectrum is exactly
/// `{d+1: C(n-1, d), n-1: 1}`.
pub fn trivial_config(d: usize, n: usize, seed: u64) -> Result<PointSet> {
    if d < 3 {
        return Err(Error::Domain(format!(
            "trivial configurations need d >= 3, got {d}"
        )));
    }
    if n < d + 3 {
        return Err(Error::Domain(format!(
            "need n >= d + 3 = {}, got {n}",
            d + 3
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: Vec<Point> = Vec::with_capacity(n);
    while pts.len() < n - 1 {
        let found = (0..CANDIDATES_PER_POINT)
            .map(|_| lift(&random_point(&mut rng, d - 1)))
            .find(|c| keeps_general_position(&pts, c, d));
        match found {
            Some(c) => pts.push(c),
            None => {
                return Err(Error::Generation(format!(
                    "no sphere point in general position after {CANDIDATES_PER_POINT} draws"
                )))
            }
        }
    }
    let target_ordinary = binomial((n - 1) as u64, d as u64) as u64;
    for _ in 0..OFF_POINT_ATTEMPTS {
        let off = random_point(&mut rng, d);
        if off.norm_sq() == off.coords()[0].int_like(1) || !keeps_general_position(&pts, &off, d) {
            continue;
        }
        let mut all = pts.clone();
        all.push(off);
        let meta = Metadata {
            generator: Some("trivial".into()),
            n: Some(n),
            d: Some(d),
            seed: Some(seed),
            ..Metadata::default()
        };
        let set = PointSet::new(d, all, meta)?;
        let s = spectrum(&set, &CountOptions::default())?;
        if s.ordinary() == target_ordinary && s.get(n - 1) == 1 && s.counts.len() == 2 {
            return Ok(set);
        }
    }
    Err(Error::Generation(format!(
        "no admissible off-sphere point after {OFF_POINT_ATTEMPTS} draws"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_trivial_config_has_expected_spectrum() {
        let p = trivial_config(3, 6, 1).unwrap();
        let s = spectrum(&p, &CountOptions::default()).unwrap();
        assert_eq!(s.counts, [(4, 10), (5, 1)].into_iter().collect());
        assert_eq!(p.metadata().generator.as_deref(), Some("trivial"));
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = trivial_config(3, 7, 42).unwrap();
        let b = trivial_config(3, 7, 42).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let c = trivial_config(3, 7, 43).unwrap();
        assert_ne!(a.to_json(), c.to_json());
    }

    #[test]
    fn rejects_small_dimension() {
        assert!(matches!(trivial_config(2, 6, 0), Err(Error::Domain(_))));
        assert!(matches!(trivial_config(3, 5, 0), Err(Error::Domain(_))));
    }
}
