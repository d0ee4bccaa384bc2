//! Division-free predicate kernels on lifted rows.
//!
//! A hypersphere-or-hyperplane `w|x|^2 + a.x + u = 0` is a linear form on the
//! row `(1, x, |x|^2)`; a hyperplane of R^D is a linear form on `(1, y)`.
//! Rows may be scaled by any nonzero constant without changing which forms
//! vanish on them, so exact backends clear denominators per point and work in
//! Z or Z[zeta_N].

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::numeric::ring::{KernelRing, PhiModulus, ZZeta, ZeroTest};
use crate::numeric::{CycloElem, Interval, Scalar};

use super::point::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lifting {
    /// `(1, x, |x|^2)`
    Sphere,
    /// `(1, y)`
    Plane,
}

/// Cofactor vector of a `k x (k+1)` matrix: `c_j = (-1)^j det(M without column j)`,
/// so that `c . row = 0` for every row of `M`.
pub fn cofactors<R: KernelRing>(rows: &[&[R]]) -> Option<Vec<R>> {
    let k = rows.len();
    let cols = k + 1;
    debug_assert!(rows.iter().all(|r| r.len() == cols));
    let full = (1u32 << cols) - 1;
    let minors = leading_minors(rows, cols, k - 1)?;
    let mut out = Vec::with_capacity(cols);
    for j in 0..cols {
        let m = minor_last_row(rows, &minors, full & !(1 << j))?;
        out.push(if j % 2 == 0 { m } else { negate(&m)? });
    }
    Some(out)
}

/// Determinant of a square matrix by Laplace expansion with memoized minors.
pub fn determinant<R: KernelRing>(rows: &[&[R]]) -> Option<R> {
    let k = rows.len();
    debug_assert!(rows.iter().all(|r| r.len() == k));
    let minors = leading_minors(rows, k, k - 1)?;
    minor_last_row(rows, &minors, (1u32 << k) - 1)
}

pub fn dot<R: KernelRing>(a: &[R], b: &[R]) -> Option<R> {
    let mut acc = a[0].mul(&b[0])?;
    for (x, y) in a[1..].iter().zip(&b[1..]) {
        acc = acc.add(&x.mul(y)?)?;
    }
    Some(acc)
}

fn negate<R: KernelRing>(x: &R) -> Option<R> {
    x.zero_like().sub(x)
}

/// Minors of the first `depth` rows for every column set of that size,
/// indexed by column bitmask.
fn leading_minors<R: KernelRing>(
    rows: &[&[R]],
    cols: usize,
    depth: usize,
) -> Option<Vec<Option<R>>> {
    let size = 1usize << cols;
    let mut cur: Vec<Option<R>> = vec![None; size];
    if depth == 0 {
        cur[0] = Some(rows[0][0].zero_like());
        return Some(cur);
    }
    for j in 0..cols {
        cur[1 << j] = Some(rows[0][j].clone());
    }
    for r in 1..depth {
        let mut next: Vec<Option<R>> = vec![None; size];
        for mask in 1..size as u32 {
            if mask.count_ones() as usize != r + 1 {
                continue;
            }
            next[mask as usize] = Some(expand(rows[r], &cur, mask, r)?);
        }
        cur = next;
    }
    Some(cur)
}

/// Expand along row `r` (the last row of an (r+1)x(r+1) minor with columns `mask`).
fn expand<R: KernelRing>(row: &[R], prev: &[Option<R>], mask: u32, r: usize) -> Option<R> {
    let mut acc: Option<R> = None;
    let mut p = 0usize;
    let mut bits = mask;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let sub = prev[(mask & !(1 << j)) as usize]
            .as_ref()
            .expect("minor computed at previous depth");
        let term = row[j].mul(sub)?;
        let negative = (r + p) % 2 == 1;
        acc = Some(match acc {
            None if negative => negate(&term)?,
            None => term,
            Some(a) if negative => a.sub(&term)?,
            Some(a) => a.add(&term)?,
        });
        p += 1;
    }
    acc
}

fn minor_last_row<R: KernelRing>(rows: &[&[R]], minors: &[Option<R>], mask: u32) -> Option<R> {
    let r = rows.len() - 1;
    if r == 0 {
        let j = mask.trailing_zeros() as usize;
        return Some(rows[0][j].clone());
    }
    expand(rows[r], minors, mask, r)
}

/// Outcome of evaluating one defining subset against the whole set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubsetEval {
    /// Exact rank deficiency: the subset does not determine a unique
    /// hypersphere (or hyperplane).
    Degenerate,
    /// Interval kernels only: full rank could not be certified.
    Uncertain,
    /// `incident` points (including the subset itself) lie on the determined
    /// hypersphere; `indeterminate` is set when some point could not be decided.
    Count {
        incident: usize,
        indeterminate: bool,
    },
}

fn eval_subset<R: KernelRing>(rows: &[Vec<R>], subset: &[usize]) -> Option<SubsetEval> {
    let sub: Vec<&[R]> = subset.iter().map(|&i| rows[i].as_slice()).collect();
    let c = cofactors(&sub)?;
    let mut nonzero = false;
    for x in &c {
        if x.zero_test() == ZeroTest::NonZero {
            nonzero = true;
            break;
        }
    }
    if !nonzero {
        let unknown = c.iter().any(|x| x.zero_test() == ZeroTest::Unknown);
        return Some(if unknown {
            SubsetEval::Uncertain
        } else {
            SubsetEval::Degenerate
        });
    }
    let mut incident = subset.len();
    let mut indeterminate = false;
    let mut next_member = subset.iter().peekable();
    for (i, row) in rows.iter().enumerate() {
        if next_member.peek() == Some(&&i) {
            next_member.next();
            continue;
        }
        match dot(&c, row)?.zero_test() {
            ZeroTest::Zero => incident += 1,
            ZeroTest::NonZero => {}
            ZeroTest::Unknown => indeterminate = true,
        }
    }
    Some(SubsetEval::Count {
        incident,
        indeterminate,
    })
}

fn rank_test<R: KernelRing>(rows: &[Vec<R>], subset: &[usize]) -> Option<ZeroTest> {
    let sub: Vec<&[R]> = subset.iter().map(|&i| rows[i].as_slice()).collect();
    let c = cofactors(&sub)?;
    let mut unknown = false;
    for x in &c {
        match x.zero_test() {
            ZeroTest::NonZero => return Some(ZeroTest::NonZero),
            ZeroTest::Unknown => unknown = true,
            ZeroTest::Zero => {}
        }
    }
    Some(if unknown {
        ZeroTest::Unknown
    } else {
        ZeroTest::Zero
    })
}

fn det_test<R: KernelRing>(rows: &[Vec<R>], idx: &[usize]) -> Option<ZeroTest> {
    let sub: Vec<&[R]> = idx.iter().map(|&i| rows[i].as_slice()).collect();
    Some(determinant(&sub)?.zero_test())
}

/// Fixed-width rows when every entry fits, plus arbitrary-precision rows.
pub struct Dual<F, B> {
    fast: Option<Vec<Vec<F>>>,
    big: Vec<Vec<B>>,
}

impl<F: KernelRing, B: KernelRing> Dual<F, B> {
    fn run<T>(&self, f: impl Fn(&[Vec<F>]) -> Option<T>, g: impl Fn(&[Vec<B>]) -> Option<T>) -> T {
        if let Some(fast) = &self.fast {
            if let Some(v) = f(fast) {
                return v;
            }
        }
        g(&self.big).expect("arbitrary-precision kernels do not overflow")
    }
}

pub enum Kernel {
    Rational(Dual<i128, BigInt>),
    Cyclotomic(Dual<ZZeta<i128>, ZZeta<BigInt>>),
    Interval(Vec<Vec<Interval>>),
}

/// Point scaled to integral coordinates: `x = coords / den`.
fn integral_rational(p: &Point) -> (Vec<BigInt>, BigInt) {
    let qs: Vec<_> = p
        .coords()
        .iter()
        .map(|c| c.as_rational().expect("rational backend").clone())
        .collect();
    let den = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let nums = qs.iter().map(|q| q.numer() * (&den / q.denom())).collect();
    (nums, den)
}

fn integral_cyclo(p: &Point, modulus: &Arc<PhiModulus>) -> (Vec<ZZeta<BigInt>>, BigInt) {
    let elems: Vec<&CycloElem> = p
        .coords()
        .iter()
        .map(|c| match c {
            Scalar::Cyclotomic(e) => e,
            _ => unreachable!("cyclotomic backend"),
        })
        .collect();
    let den = elems
        .iter()
        .fold(BigInt::one(), |acc, e| acc.lcm(&e.integral_parts().1));
    let coords = elems
        .iter()
        .map(|e| {
            let (nums, d) = e.integral_parts();
            let f = &den / d;
            ZZeta::new(
                Arc::clone(modulus),
                nums.into_iter().map(|v| v * &f).collect(),
            )
        })
        .collect();
    (coords, den)
}

fn scalar_row<R: KernelRing>(one: R, coords: Vec<R>, lifting: Lifting, den: Option<&R>) -> Vec<R> {
    // Sphere: (D^2, D X, |X|^2) for x = X / D.  Plane: (D, X).
    let mut row = Vec::with_capacity(coords.len() + 2);
    match lifting {
        Lifting::Sphere => {
            let d = den.cloned().unwrap_or(one);
            row.push(d.mul(&d).unwrap());
            for c in &coords {
                row.push(d.mul(c).unwrap());
            }
            let mut sq = coords[0].mul(&coords[0]).unwrap();
            for c in &coords[1..] {
                sq = sq.add(&c.mul(c).unwrap()).unwrap();
            }
            row.push(sq);
        }
        Lifting::Plane => {
            row.push(den.cloned().unwrap_or(one));
            row.extend(coords);
        }
    }
    row
}

fn interval_row(p: &Point, lifting: Lifting) -> Vec<Interval> {
    let xs: Vec<Interval> = p.coords().iter().map(|c| c.to_interval(64)).collect();
    let bits = xs.iter().map(Interval::bits).max().unwrap_or(64);
    let mut row = vec![Interval::from_int(1, bits)];
    row.extend(xs.iter().cloned());
    if lifting == Lifting::Sphere {
        let mut sq = xs[0].square();
        for x in &xs[1..] {
            sq = sq.add(&x.square());
        }
        row.push(sq);
    }
    row
}

impl Kernel {
    pub fn build(points: &[Point], lifting: Lifting) -> Result<Kernel> {
        let first = points
            .first()
            .ok_or_else(|| Error::Domain("empty point list".into()))?;
        match &first.coords()[0] {
            Scalar::Rational(_) => {
                let big: Vec<Vec<BigInt>> = points
                    .iter()
                    .map(|p| {
                        let (nums, den) = integral_rational(p);
                        scalar_row(BigInt::one(), nums, lifting, Some(&den))
                    })
                    .collect();
                let fast = big
                    .iter()
                    .map(|r| r.iter().map(|v| v.to_i128()).collect::<Option<Vec<_>>>())
                    .collect::<Option<Vec<_>>>();
                Ok(Kernel::Rational(Dual { fast, big }))
            }
            Scalar::Cyclotomic(e) => {
                let modulus = PhiModulus::from_context(e.context());
                let deg = modulus.degree();
                let one = {
                    let mut c = vec![BigInt::from(0); deg];
                    c[0] = BigInt::one();
                    ZZeta::new(Arc::clone(&modulus), c)
                };
                let big: Vec<Vec<ZZeta<BigInt>>> = points
                    .iter()
                    .map(|p| {
                        let (coords, den) = integral_cyclo(p, &modulus);
                        let mut dc = vec![BigInt::from(0); deg];
                        dc[0] = den;
                        let den = ZZeta::new(Arc::clone(&modulus), dc);
                        scalar_row(one.clone(), coords, lifting, Some(&den))
                    })
                    .collect();
                let fast = big
                    .iter()
                    .map(|r| r.iter().map(ZZeta::to_i128).collect::<Option<Vec<_>>>())
                    .collect::<Option<Vec<_>>>();
                Ok(Kernel::Cyclotomic(Dual { fast, big }))
            }
            Scalar::Interval(_) => Ok(Kernel::Interval(
                points.iter().map(|p| interval_row(p, lifting)).collect(),
            )),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Kernel::Rational(d) => d.big.len(),
            Kernel::Cyclotomic(d) => d.big.len(),
            Kernel::Interval(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Size of the defining subsets (`row width - 1`).
    pub fn subset_size(&self) -> usize {
        let w = match self {
            Kernel::Rational(d) => d.big[0].len(),
            Kernel::Cyclotomic(d) => d.big[0].len(),
            Kernel::Interval(r) => r[0].len(),
        };
        w - 1
    }

    pub fn eval(&self, subset: &[usize]) -> SubsetEval {
        match self {
            Kernel::Rational(d) => d.run(|r| eval_subset(r, subset), |r| eval_subset(r, subset)),
            Kernel::Cyclotomic(d) => d.run(|r| eval_subset(r, subset), |r| eval_subset(r, subset)),
            Kernel::Interval(r) => eval_subset(r, subset).expect("interval ops are total"),
        }
    }

    /// Whether the subset's rows have full rank.
    pub fn full_rank(&self, subset: &[usize]) -> ZeroTest {
        // NonZero = full rank, Zero = deficient
        match self {
            Kernel::Rational(d) => d.run(|r| rank_test(r, subset), |r| rank_test(r, subset)),
            Kernel::Cyclotomic(d) => d.run(|r| rank_test(r, subset), |r| rank_test(r, subset)),
            Kernel::Interval(r) => rank_test(r, subset).expect("interval ops are total"),
        }
    }

    /// Zero test of the determinant of a square selection of rows.
    pub fn det(&self, idx: &[usize]) -> ZeroTest {
        match self {
            Kernel::Rational(d) => d.run(|r| det_test(r, idx), |r| det_test(r, idx)),
            Kernel::Cyclotomic(d) => d.run(|r| det_test(r, idx), |r| det_test(r, idx)),
            Kernel::Interval(r) => det_test(r, idx).expect("interval ops are total"),
        }
    }

    /// Cofactor vectors of the subset in the arbitrary-precision ring.
    pub fn rational_cofactors(&self, subset: &[usize]) -> Option<Vec<BigInt>> {
        match self {
            Kernel::Rational(d) => {
                let sub: Vec<&[BigInt]> = subset.iter().map(|&i| d.big[i].as_slice()).collect();
                cofactors(&sub)
            }
            _ => None,
        }
    }

    pub fn cyclotomic_cofactors(&self, subset: &[usize]) -> Option<Vec<ZZeta<BigInt>>> {
        match self {
            Kernel::Cyclotomic(d) => {
                let sub: Vec<&[ZZeta<BigInt>]> =
                    subset.iter().map(|&i| d.big[i].as_slice()).collect();
                cofactors(&sub)
            }
            _ => None,
        }
    }

    pub fn interval_cofactors(&self, subset: &[usize]) -> Option<Vec<Interval>> {
        match self {
            Kernel::Interval(rows) => {
                let sub: Vec<&[Interval]> = subset.iter().map(|&i| rows[i].as_slice()).collect();
                cofactors(&sub)
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(m: &[&[i64]]) -> Vec<Vec<BigInt>> {
        m.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn determinant_matches_hand_values() {
        let m = rows(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]]);
        let refs: Vec<&[BigInt]> = m.iter().map(Vec::as_slice).collect();
        // 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(determinant(&refs).unwrap(), BigInt::from(0));
        let m = rows(&[&[4, 3], &[6, 3]]);
        let refs: Vec<&[BigInt]> = m.iter().map(Vec::as_slice).collect();
        assert_eq!(determinant(&refs).unwrap(), BigInt::from(-6));
    }

    #[test]
    fn cofactors_annihilate_rows() {
        let m = rows(&[&[1, 2, 3, 4], &[0, 1, 5, 2], &[3, 1, 0, 7]]);
        let refs: Vec<&[BigInt]> = m.iter().map(Vec::as_slice).collect();
        let c = cofactors(&refs).unwrap();
        for r in &m {
            assert_eq!(dot(&c, r).unwrap(), BigInt::from(0));
        }
        // c . e_0 equals det of [e_0; M]
        let e0 = [1i64, 0, 0, 0].map(BigInt::from);
        let mut full = vec![e0.to_vec()];
        full.extend(m.iter().cloned());
        let frefs: Vec<&[BigInt]> = full.iter().map(Vec::as_slice).collect();
        assert_eq!(dot(&c, &e0).unwrap(), determinant(&frefs).unwrap());
    }
}
