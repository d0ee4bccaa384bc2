//! Incidence spectra: how many distinct hyperspheres (or hyperplanes) pass
//! through exactly `m` points of a set.
//!
//! Each `k`-subset determines one hypersphere; a hypersphere through `m`
//! points is found by exactly `C(m, k)` subsets, so the per-subset tally
//! divided by `C(m, k)` gives `N_m`. A remainder means two predicate calls
//! disagreed about the same hypersphere and aborts the run.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::combinatorics::{binomial, fold_subsets, unrank};
use crate::error::{Error, Result};
use crate::geometry::hypersphere::primitive_in_place;
use crate::geometry::kernel::{Kernel, Lifting, SubsetEval};
use crate::geometry::{lift_set, PointSet};
use crate::numeric::Backend;

#[derive(Clone, Debug, Default)]
pub struct CountOptions {
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl CountOptions {
    pub fn threads(threads: usize) -> Self {
        CountOptions {
            threads: Some(threads),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spectrum {
    pub dimension: usize,
    pub n: usize,
    /// Points needed to determine one hypersphere (`d+1`) or hyperplane (`D`).
    pub subset_size: usize,
    /// `m -> N_m`, only nonzero entries.
    pub counts: BTreeMap<usize, u64>,
    /// Subsets whose rank or incidences could not be certified.
    pub indeterminate_count: u64,
}

impl Spectrum {
    pub fn get(&self, m: usize) -> u64 {
        self.counts.get(&m).copied().unwrap_or(0)
    }

    /// Number of hyperspheres through exactly `subset_size` points.
    pub fn ordinary(&self) -> u64 {
        self.get(self.subset_size)
    }

    /// Number of hyperspheres through exactly `subset_size + 1` points.
    pub fn next(&self) -> u64 {
        self.get(self.subset_size + 1)
    }

    pub fn certified(&self) -> bool {
        self.indeterminate_count == 0
    }

    /// `sum_m C(m, k) N_m`, plus the undecided subsets.
    pub fn subsets_accounted(&self) -> u128 {
        let k = self.subset_size as u64;
        self.counts
            .iter()
            .map(|(&m, &c)| binomial(m as u64, k) * c as u128)
            .sum::<u128>()
            + self.indeterminate_count as u128
    }

    pub fn partition_identity_holds(&self) -> bool {
        self.subsets_accounted() == binomial(self.n as u64, self.subset_size as u64)
    }

    pub fn to_json(&self) -> Value {
        let counts: serde_json::Map<String, Value> = self
            .counts
            .iter()
            .map(|(m, c)| (m.to_string(), Value::from(*c)))
            .collect();
        serde_json::json!({
            "dimension": self.dimension,
            "n": self.n,
            "subset_size": self.subset_size,
            "counts": counts,
            "indeterminate_count": self.indeterminate_count,
            "certified": self.certified(),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,N_m\n");
        for (m, c) in &self.counts {
            writeln!(out, "{m},{c}").unwrap();
        }
        out
    }

    /// First `m` at which two spectra differ.
    pub fn first_difference(&self, other: &Spectrum) -> Option<usize> {
        let keys: std::collections::BTreeSet<usize> = self
            .counts
            .keys()
            .chain(other.counts.keys())
            .copied()
            .collect();
        keys.into_iter().find(|&m| self.get(m) != other.get(m))
    }
}

#[derive(Clone)]
struct Tally {
    hist: Vec<u64>,
    indeterminate: u64,
    first_degenerate: Option<u128>,
}

fn tally(kernel: &Kernel, k: usize, threads: Option<usize>) -> Result<Tally> {
    let n = kernel.len();
    fold_subsets(
        n,
        k,
        threads,
        || Tally {
            hist: vec![0; n + 1],
            indeterminate: 0,
            first_degenerate: None,
        },
        |acc, r, s| match kernel.eval(s) {
            SubsetEval::Degenerate => {
                acc.first_degenerate.get_or_insert(r);
            }
            SubsetEval::Uncertain => acc.indeterminate += 1,
            SubsetEval::Count {
                indeterminate: true,
                ..
            } => acc.indeterminate += 1,
            SubsetEval::Count { incident, .. } => acc.hist[incident] += 1,
        },
        |mut a, b| {
            for (x, y) in a.hist.iter_mut().zip(b.hist) {
                *x += y;
            }
            a.indeterminate += b.indeterminate;
            a.first_degenerate = a.first_degenerate.or(b.first_degenerate);
            a
        },
    )
}

fn divide(hist: &[u64], k: usize) -> Result<BTreeMap<usize, u64>> {
    let mut counts = BTreeMap::new();
    for (m, &subsets) in hist.iter().enumerate() {
        if subsets == 0 {
            continue;
        }
        let binom = binomial(m as u64, k as u64) as u64;
        if binom == 0 || subsets % binom != 0 {
            return Err(Error::InexactDivision { m, subsets, binom });
        }
        counts.insert(m, subsets / binom);
    }
    Ok(counts)
}

fn run(p: &PointSet, lifting: Lifting, opts: &CountOptions) -> Result<Spectrum> {
    let d = p.dimension();
    let k = match lifting {
        Lifting::Sphere => d + 1,
        Lifting::Plane => d,
    };
    let n = p.len();
    if n < k {
        return Err(Error::Domain(format!(
            "need at least {k} points in dimension {d}, got {n}"
        )));
    }
    let kernel = Kernel::build(p.points(), lifting)?;
    let t = tally(&kernel, k, opts.threads)?;
    if let Some(r) = t.first_degenerate {
        let witness = unrank(r, n, k);
        return Err(match lifting {
            Lifting::Sphere => Error::GeneralPosition { witness },
            Lifting::Plane => Error::SpanViolation { witness },
        });
    }
    let counts = divide(&t.hist, k)?;
    let s = Spectrum {
        dimension: d,
        n,
        subset_size: k,
        counts,
        indeterminate_count: t.indeterminate,
    };
    if !s.partition_identity_holds() {
        return Err(Error::Consistency(format!(
            "spectrum accounts for {} of {} subsets",
            s.subsets_accounted(),
            binomial(n as u64, k as u64)
        )));
    }
    Ok(s)
}

/// Hypersphere-or-hyperplane incidence spectrum of a point set in general
/// position. Interval inputs yield only certified ordinary hyperspheres;
/// everything else lands in `indeterminate_count`.
pub fn spectrum(p: &PointSet, opts: &CountOptions) -> Result<Spectrum> {
    run(p, Lifting::Sphere, opts)
}

pub fn count_ordinary(p: &PointSet, opts: &CountOptions) -> Result<u64> {
    Ok(spectrum(p, opts)?.ordinary())
}

pub fn count_dplus2(p: &PointSet, opts: &CountOptions) -> Result<u64> {
    Ok(spectrum(p, opts)?.next())
}

/// Hyperplane incidence spectrum of a point set in R^D. Every `D` points
/// must span a hyperplane, and the set as a whole must not lie in one.
pub fn ordinary_hyperplane_spectrum(q: &PointSet, opts: &CountOptions) -> Result<Spectrum> {
    let s = run(q, Lifting::Plane, opts)?;
    if s.get(q.len()) > 0 && q.len() > q.dimension() {
        return Err(Error::SpanViolation {
            witness: (0..q.len()).collect(),
        });
    }
    Ok(s)
}

/// Exact-mode alternative to [`spectrum`]: group subsets by the primitive
/// integer coefficient vector of their hypersphere, recover `m` from the
/// group size, then confirm each recovered `m` by direct incidence
/// counting on one representative.
pub fn spectrum_hashed(p: &PointSet, opts: &CountOptions) -> Result<Spectrum> {
    if p.backend() != Some(Backend::Rational) {
        return Err(Error::Unsupported(
            "coefficient hashing needs rational coordinates".into(),
        ));
    }
    let d = p.dimension();
    let k = d + 1;
    let n = p.len();
    if n < k {
        return Err(Error::Domain(format!(
            "need at least {k} points in dimension {d}, got {n}"
        )));
    }
    let kernel = Kernel::build(p.points(), Lifting::Sphere)?;
    type Groups = HashMap<Vec<BigInt>, (u64, u128)>;
    let (groups, first_degenerate) = fold_subsets(
        n,
        k,
        opts.threads,
        || (Groups::new(), None::<u128>),
        |acc, r, s| {
            let mut c = kernel.rational_cofactors(s).expect("rational kernel");
            if c.iter().all(|v| v == &BigInt::from(0)) {
                acc.1.get_or_insert(r);
                return;
            }
            primitive_in_place(&mut c);
            let e = acc.0.entry(c).or_insert((0, r));
            e.0 += 1;
            e.1 = e.1.min(r);
        },
        |mut a, b| {
            for (key, (c, r)) in b.0 {
                let e = a.0.entry(key).or_insert((0, r));
                e.0 += c;
                e.1 = e.1.min(r);
            }
            a.1 = match (a.1, b.1) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            };
            a
        },
    )?;
    if let Some(r) = first_degenerate {
        return Err(Error::GeneralPosition {
            witness: unrank(r, n, k),
        });
    }
    let mut counts = BTreeMap::new();
    for (size, rep) in groups.values() {
        let m = (k..=n)
            .find(|&m| binomial(m as u64, k as u64) == *size as u128)
            .ok_or(Error::InexactDivision {
                m: 0,
                subsets: *size,
                binom: 0,
            })?;
        match kernel.eval(&unrank(*rep, n, k)) {
            SubsetEval::Count {
                incident,
                indeterminate: false,
            } if incident == m => {}
            other => {
                return Err(Error::Consistency(format!(
                    "hypersphere found by {size} subsets but direct evaluation gives {other:?}"
                )))
            }
        }
        *counts.entry(m).or_insert(0) += 1;
    }
    Ok(Spectrum {
        dimension: d,
        n,
        subset_size: k,
        counts,
        indeterminate_count: 0,
    })
}

/// Hypersphere spectrum of `P` next to the hyperplane spectrum of its lift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrespondenceReport {
    pub spheres: Spectrum,
    pub planes: Spectrum,
    pub equal: bool,
}

impl CorrespondenceReport {
    pub fn check(&self) -> Result<()> {
        match self.spheres.first_difference(&self.planes) {
            None => Ok(()),
            Some(m) => Err(Error::CorrespondenceMismatch {
                m,
                spheres: self.spheres.get(m),
                planes: self.planes.get(m),
            }),
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "hyperspheres": self.spheres.to_json(),
            "lifted_hyperplanes": self.planes.to_json(),
            "equal": self.equal,
        })
    }
}

pub fn verify_correspondence(p: &PointSet, opts: &CountOptions) -> Result<CorrespondenceReport> {
    if !p.backend().is_some_and(Backend::is_exact) {
        return Err(Error::Unsupported(
            "the correspondence check needs an exact backend".into(),
        ));
    }
    let spheres = spectrum(p, opts)?;
    let planes = ordinary_hyperplane_spectrum(&lift_set(p)?, opts)?;
    // the lifted spectrum lives one dimension up; compare counts only
    let equal = spheres.counts == planes.counts;
    Ok(CorrespondenceReport {
        spheres,
        planes,
        equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Metadata, Point};
    use crate::numeric::rational;

    fn rat(c: &[(i64, i64)]) -> Point {
        Point::from_rationals(c.iter().map(|&(n, d)| rational(n, d)).collect()).unwrap()
    }

    fn sphere_plus_point() -> PointSet {
        PointSet::new(
            3,
            vec![
                rat(&[(3, 5), (4, 5), (0, 1)]),
                rat(&[(0, 1), (3, 5), (4, 5)]),
                rat(&[(4, 5), (0, 1), (3, 5)]),
                rat(&[(2, 7), (3, 7), (6, 7)]),
                rat(&[(-2, 7), (6, 7), (3, 7)]),
                rat(&[(1, 3), (1, 5), (1, 7)]),
            ],
            Metadata::default(),
        )
        .unwrap()
    }

    #[test]
    fn five_on_sphere_plus_one() {
        let p = sphere_plus_point();
        let s = spectrum(&p, &CountOptions::default()).unwrap();
        assert_eq!(s.counts, BTreeMap::from([(4, 10), (5, 1)]));
        assert!(s.partition_identity_holds());
        assert_eq!(spectrum_hashed(&p, &CountOptions::default()).unwrap(), s);
        let r = verify_correspondence(&p, &CountOptions::default()).unwrap();
        assert!(r.equal);
        r.check().unwrap();
    }

    #[test]
    fn interval_backend_certifies_only_ordinary() {
        let p = sphere_plus_point().to_interval(128).unwrap();
        let s = spectrum(&p, &CountOptions::default()).unwrap();
        assert_eq!(s.ordinary(), 10);
        assert_eq!(s.indeterminate_count, 5);
        assert!(!s.certified());
        assert!(s.partition_identity_holds());
    }

    #[test]
    fn set_on_one_sphere_is_a_span_violation_after_lifting() {
        let mut pts = sphere_plus_point().points().to_vec();
        pts.pop();
        let p = PointSet::new(3, pts, Metadata::default()).unwrap();
        assert_eq!(
            spectrum(&p, &CountOptions::default()).unwrap().counts,
            BTreeMap::from([(5, 1)])
        );
        assert!(matches!(
            verify_correspondence(&p, &CountOptions::default()),
            Err(Error::SpanViolation { .. })
        ));
    }

    #[test]
    fn hyperplanes_through_an_apex() {
        // five points in general position on z = 0, apex above
        let mut pts: Vec<Point> = [[0, 0], [1, 0], [0, 1], [3, 5], [7, 2]]
            .iter()
            .map(|&[x, y]| Point::from_ints(&[x, y, 0]))
            .collect();
        pts.push(Point::from_ints(&[1, 1, 1]));
        let q = PointSet::new(3, pts, Metadata::default()).unwrap();
        let s = ordinary_hyperplane_spectrum(&q, &CountOptions::default()).unwrap();
        assert_eq!(s.ordinary(), 10);
        assert_eq!(s.get(5), 1);
    }

    #[test]
    fn degenerate_subset_is_reported_first_in_order() {
        let p = PointSet::new(
            3,
            vec![
                Point::from_ints(&[5, 5, 5]),
                Point::from_ints(&[1, 0, 0]),
                Point::from_ints(&[-1, 0, 0]),
                Point::from_ints(&[0, 1, 0]),
                Point::from_ints(&[0, -1, 0]),
                Point::from_ints(&[0, 0, 1]),
            ],
            Metadata::default(),
        )
        .unwrap();
        assert_eq!(
            spectrum(&p, &CountOptions::threads(4)),
            Err(Error::GeneralPosition {
                witness: vec![1, 2, 3, 4]
            })
        );
    }

    #[test]
    fn csv_lists_nonzero_counts() {
        let s = spectrum(&sphere_plus_point(), &CountOptions::default()).unwrap();
        assert_eq!(s.to_csv(), "m,N_m\n4,10\n5,1\n");
    }
}
