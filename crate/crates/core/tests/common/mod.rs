//! Test-only helpers: random rational configurations and a naive spectrum
//! oracle that shares no code with the engine.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use hypersphere_lab::geometry::{
    general_position_check, GeneralPosition, Metadata, Point, PointSet,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> BigRational {
    q(rng.random_range(-num..=num), rng.random_range(1..=den))
}

pub fn random_point(rng: &mut ChaCha8Rng, d: usize, num: i64, den: i64) -> Vec<BigRational> {
    (0..d).map(|_| random_rational(rng, num, den)).collect()
}

pub fn point(c: &[BigRational]) -> Point {
    Point::from_rationals(c.to_vec()).unwrap()
}

pub fn rationals(p: &Point) -> Vec<BigRational> {
    p.coords()
        .iter()
        .map(|c| c.as_rational().unwrap().clone())
        .collect()
}

/// Random rational points in general position. Small coordinate ranges make
/// accidental cosphericities (extra incidences) likely, which is the point.
pub fn random_config(rng: &mut ChaCha8Rng, d: usize, n: usize, num: i64, den: i64) -> PointSet {
    loop {
        let mut pts: Vec<Vec<BigRational>> = Vec::new();
        while pts.len() < n {
            let c = random_point(rng, d, num, den);
            if !pts.contains(&c) {
                pts.push(c);
            }
        }
        let set = PointSet::new(
            d,
            pts.iter().map(|c| point(c)).collect(),
            Metadata::default(),
        )
        .unwrap();
        if general_position_check(&set, Some(1)).unwrap() == GeneralPosition::Ok {
            return set;
        }
    }
}

/// Null space vector of a (k x (k+1)) rational matrix of full rank by
/// Gauss-Jordan elimination; `None` when the rank is deficient.
fn null_vector(mut m: Vec<Vec<BigRational>>) -> Option<Vec<BigRational>> {
    let rows = m.len();
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].clone().recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let v = &m[r][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if pivots.len() < rows {
        return None;
    }
    let free = (0..cols).find(|c| !pivots.contains(c)).unwrap();
    let mut v = vec![BigRational::zero(); cols];
    v[free] = BigRational::one();
    for (i, &pc) in pivots.iter().enumerate() {
        v[pc] = -m[i][free].clone();
    }
    Some(v)
}

fn sphere_row(x: &[BigRational]) -> Vec<BigRational> {
    let mut r = vec![BigRational::one()];
    r.extend(x.iter().cloned());
    r.push(x.iter().map(|v| v * v).sum());
    r
}

fn plane_row(y: &[BigRational]) -> Vec<BigRational> {
    let mut r = vec![BigRational::one()];
    r.extend(y.iter().cloned());
    r
}

fn all_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Distinct incident sets of the hypersurfaces through each k-subset.
fn naive(
    points: &[Vec<BigRational>],
    k: usize,
    row: fn(&[BigRational]) -> Vec<BigRational>,
) -> Option<BTreeMap<usize, u64>> {
    let rows: Vec<Vec<BigRational>> = points.iter().map(|p| row(p)).collect();
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    for s in all_subsets(points.len(), k) {
        let v = null_vector(s.iter().map(|&i| rows[i].clone()).collect())?;
        let on: Vec<usize> = (0..points.len())
            .filter(|&i| {
                rows[i]
                    .iter()
                    .zip(&v)
                    .map(|(a, b)| a * b)
                    .sum::<BigRational>()
                    .is_zero()
            })
            .collect();
        found.insert(on);
    }
    let mut counts = BTreeMap::new();
    for on in found {
        *counts.entry(on.len()).or_insert(0) += 1;
    }
    Some(counts)
}

/// Hypersphere spectrum by explicit equation solving and set deduplication.
pub fn naive_sphere_spectrum(p: &PointSet) -> Option<BTreeMap<usize, u64>> {
    let pts: Vec<_> = p.points().iter().map(rationals).collect();
    naive(&pts, p.dimension() + 1, sphere_row)
}

pub fn naive_plane_spectrum(p: &PointSet) -> Option<BTreeMap<usize, u64>> {
    let pts: Vec<_> = p.points().iter().map(rationals).collect();
    naive(&pts, p.dimension(), plane_row)
}

pub fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Independent residue-rule enumeration for coset configurations.
pub fn residue_dplus2(n: usize, d: usize, l: i64) -> u64 {
    all_subsets(n, d + 2)
        .iter()
        .filter(|s| (s.iter().sum::<usize>() as i64 + l).rem_euclid(n as i64) == 0)
        .count() as u64
}
