//! A fast, seeded property suite runnable from the command line.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combinatorics::Combinations;
use crate::constructions::{
    completion_residual, coset_config, formula_tables, integer_oracle, oracle_scan, trivial_config,
    CosetSpec, CurveParams,
};
use crate::counting::{spectrum, spectrum_hashed, verify_correspondence, CountOptions};
use crate::error::Result;
use crate::geometry::kernel::{Kernel, Lifting};
use crate::geometry::{invert, lift, project, Point};
use crate::numeric::{sign_of, Interval, IntervalSign, Scalar, Sign, ZeroTest};

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> BigRational {
    BigRational::new(
        BigInt::from(rng.random_range(-num..=num)),
        BigInt::from(rng.random_range(1..=den)),
    )
}

fn point(rng: &mut ChaCha8Rng, d: usize) -> Point {
    Point::from_rationals((0..d).map(|_| rational(rng, 30, 9)).collect()).expect("d >= 2")
}

type Outcome = Result<std::result::Result<String, String>>;

fn transforms(rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..100 {
        let x = point(rng, 3);
        let r = point(rng, 3);
        let y = lift(&x);
        if y.norm_sq() != Scalar::int(1) || project(&y)? != x {
            return Ok(Err(format!("lift/project failed at {:?}", x.to_f64())));
        }
        if x != r && invert(&invert(&x, &r)?, &r)? != x {
            return Ok(Err(format!(
                "inversion is not an involution at {:?}",
                x.to_f64()
            )));
        }
    }
    Ok(Ok("100 lift/project and inversion round trips".into()))
}

fn signs(rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..200 {
        let q = rational(rng, 1000, 997);
        let exact = sign_of(&Scalar::Rational(q.clone()))?;
        let iv = Interval::from_rational(&q, 64);
        let agrees = match iv.sign() {
            IntervalSign::Positive => exact == Sign::Positive,
            IntervalSign::Negative => exact == Sign::Negative,
            IntervalSign::Straddles => exact == Sign::Zero,
        };
        if !agrees || !iv.contains_rational(&q) {
            return Ok(Err(format!("interval disagrees with rational {q}")));
        }
    }
    Ok(Ok("200 rational signs agree with 64-bit enclosures".into()))
}

fn trivial(seed: u64) -> Outcome {
    let p = trivial_config(3, 8, seed)?;
    let s = spectrum(&p, &CountOptions::default())?;
    Ok(if s.ordinary() == 35 && s.partition_identity_holds() {
        Ok("d=3 n=8: 35 ordinary hyperspheres".into())
    } else {
        Err(format!("spectrum {:?}", s.counts))
    })
}

fn correspondence(seed: u64) -> Outcome {
    let p = trivial_config(3, 7, seed)?;
    let r = verify_correspondence(&p, &CountOptions::default())?;
    let h = spectrum_hashed(&p, &CountOptions::default())?;
    Ok(if r.equal && h == r.spheres {
        Ok("lifted hyperplane spectrum and coefficient hashing agree".into())
    } else {
        Err(format!(
            "{:?} / {:?} / {:?}",
            r.spheres.counts, r.planes.counts, h.counts
        ))
    })
}

fn group_law(rng: &mut ChaCha8Rng) -> Outcome {
    let params = CurveParams::default_for(4)?;
    for _ in 0..50 {
        let ts: Vec<BigRational> = (0..5)
            .map(|_| BigRational::new(BigInt::from(rng.random_range(0..6283)), BigInt::from(1000)))
            .collect();
        if !completion_residual(&params, &ts, 256)?.contains_zero() {
            return Ok(Err(format!("completion residual excludes 0 for {ts:?}")));
        }
    }
    let n = 9;
    let p = coset_config(&CosetSpec::new(4, n, 1)?)?;
    let kernel = Kernel::build(p.points(), Lifting::Sphere)?;
    for s in Combinations::new(n, 6) {
        let rule = (s.iter().sum::<usize>() + 1) % n == 0;
        if (kernel.det(&s) == ZeroTest::Zero) != rule {
            return Ok(Err(format!(
                "cosphericity of {s:?} contradicts the residue rule"
            )));
        }
    }
    Ok(Ok(
        "50 completion residuals; residue rule on all 84 6-subsets for n=9".into(),
    ))
}

fn oracle() -> Outcome {
    let p = coset_config(&CosetSpec::new(4, 10, 2)?)?;
    let s = spectrum(&p, &CountOptions::default())?;
    let o = integer_oracle(10, 4, 2, None)?;
    if (s.ordinary(), s.next()) != (o.ordinary, o.dplus2) {
        return Ok(Err(format!(
            "engine ({}, {}) vs oracle ({}, {})",
            s.ordinary(),
            s.next(),
            o.ordinary,
            o.dplus2
        )));
    }
    let scan = oracle_scan(12, 4, None)?;
    let f = formula_tables(4, 12)?;
    Ok(
        if f.max_dplus2_u64() == Some(scan.best.dplus2)
            && f.min_ordinary_u64() == Some(scan.best.ordinary)
        {
            Ok(
                "coset n=10 matches the oracle; n=12 optimum (312, 80) matches the closed forms"
                    .into(),
            )
        } else {
            Err(format!(
                "n=12 optimum {:?} vs formulas {}",
                scan.best,
                f.to_json()
            ))
        },
    )
}

fn determinism(seed: u64) -> Outcome {
    let p = trivial_config(4, 9, seed)?;
    let a = spectrum(&p, &CountOptions::threads(1))?;
    let b = spectrum(&p, &CountOptions::threads(4))?;
    Ok(if a == b {
        Ok("1 and 4 threads agree".into())
    } else {
        Err("thread count changed the spectrum".into())
    })
}

pub fn run(seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut record = |name: &'static str, o: Outcome| {
        let (passed, detail) = match o {
            Ok(Ok(d)) => (true, d),
            Ok(Err(d)) => (false, d),
            Err(e) => (false, e.to_string()),
        };
        out.push(CheckResult {
            name,
            passed,
            detail,
        });
    };
    record("transforms", transforms(&mut rng));
    record("signs", signs(&mut rng));
    record("trivial configuration", trivial(seed));
    record("correspondence", correspondence(seed));
    record("group law", group_law(&mut rng));
    record("residue oracle", oracle());
    record("determinism", determinism(seed));
    out
}

#[cfg(test)]
mod tests {
    #[test]
    fn selftest_passes() {
        for r in super::run(1) {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }
}
