//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits with a
//! nonzero status if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use hypersphere_lab::combinatorics::Combinations;
use hypersphere_lab::constructions::{
    completion_residual, coset_config, formula_tables, integer_oracle, oracle_scan, trivial_config,
    CosetSpec, CurveParams,
};
use hypersphere_lab::counting::{spectrum, verify_correspondence, CountOptions, Spectrum};
use hypersphere_lab::geometry::kernel::{Kernel, Lifting};
use hypersphere_lab::geometry::{
    general_position_check, invert_set, GeneralPosition, Point, PointSet,
};
use hypersphere_lab::numeric::ZeroTest;
use num_rational::BigRational;
use rand::Rng;

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn partition_ok(s: &Spectrum) -> std::result::Result<(), String> {
    ensure(s.certified() && s.partition_identity_holds(), || {
        format!("partition identity fails for {:?}", s.counts)
    })
}

fn criterion_1() -> Check {
    let mut out = Vec::new();
    for (n, expect) in [(6, 10u64), (8, 35), (10, 84)] {
        let p = trivial_config(3, n, 7).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let s = spectrum(&p, &CountOptions::default()).map_err(|e| e.to_string())?;
        let took = start.elapsed();
        partition_ok(&s)?;
        ensure(s.ordinary() == expect, || {
            format!("n = {n}: ordinary {} != {expect}", s.ordinary())
        })?;
        ensure(took < Duration::from_secs(1), || {
            format!("n = {n} took {took:?}")
        })?;
        out.push(format!(
            "n={n}: {} in {:.3}s",
            s.ordinary(),
            took.as_secs_f64()
        ));
    }
    Ok(out.join(", "))
}

fn criterion_2() -> Check {
    let p = trivial_config(4, 12, 7).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let s = spectrum(&p, &CountOptions::default()).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    partition_ok(&s)?;
    ensure(s.ordinary() == 330, || {
        format!("ordinary {} != 330", s.ordinary())
    })?;
    ensure(took < Duration::from_secs(10), || format!("took {took:?}"))?;
    Ok(format!("ordinary = 330 in {:.3}s", took.as_secs_f64()))
}

fn criterion_3() -> Check {
    let mut r = rng(3);
    for trial in 0..20 {
        let p = random_config(&mut r, 3, 8, 6, 4);
        let rep = verify_correspondence(&p, &CountOptions::default()).map_err(|e| e.to_string())?;
        partition_ok(&rep.spheres)?;
        partition_ok(&rep.planes)?;
        ensure(rep.equal, || {
            format!(
                "trial {trial}: {:?} vs {:?}",
                rep.spheres.counts, rep.planes.counts
            )
        })?;
    }
    Ok("20/20 sets have equal hypersphere and lifted hyperplane spectra".into())
}

fn criterion_4() -> Check {
    // criteria 1-3 assert the identity on their own runs; here, fuzzed sets
    // with small coordinates, checked against the naive oracle as well
    let mut r = rng(4);
    let mut extra = 0;
    for trial in 0..50 {
        let d = if trial % 2 == 0 { 2 } else { 3 };
        let n = r.random_range(d + 3..=d + 6);
        let p = random_config(&mut r, d, n, 3, 2);
        let s = spectrum(&p, &CountOptions::default()).map_err(|e| e.to_string())?;
        partition_ok(&s)?;
        let naive = naive_sphere_spectrum(&p).ok_or("naive oracle saw a degenerate subset")?;
        ensure(s.counts == naive, || {
            format!("trial {trial}: engine {:?} vs naive {:?}", s.counts, naive)
        })?;
        extra += s.counts.keys().filter(|&&m| m > d + 1).count();
    }
    Ok(format!(
        "50/50 fuzzed sets satisfy the identity and match the naive oracle ({extra} non-ordinary classes seen)"
    ))
}

fn criterion_5() -> Check {
    let params = CurveParams::default_for(4).map_err(|e| e.to_string())?;
    let mut r = rng(5);
    let mut widest = 0f64;
    for trial in 0..1000 {
        // parameters k / 2^20 in [0, 2 pi)
        let ts: Vec<BigRational> = (0..5)
            .map(|_| q(r.random_range(0..6_588_397), 1 << 20))
            .collect();
        let res = completion_residual(&params, &ts, 256).map_err(|e| e.to_string())?;
        ensure(res.contains_zero(), || {
            format!("trial {trial}: residual {res}")
        })?;
        widest = widest.max(res.radius().to_f64());
    }
    ensure(widest < 1e-40, || {
        format!("residual enclosures too wide: {widest:e}")
    })?;
    let start = Instant::now();
    let mut checked = 0u64;
    for n in 7..=14 {
        for l in 0..3 {
            let p = coset_config(&CosetSpec::new(4, n, l).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let kernel = Kernel::build(p.points(), Lifting::Sphere).map_err(|e| e.to_string())?;
            for s in Combinations::new(n, 6) {
                let cosph = kernel.det(&s) == ZeroTest::Zero;
                let rule = (s.iter().sum::<usize>() as i64 + l).rem_euclid(n as i64) == 0;
                ensure(cosph == rule, || {
                    format!("n={n} l={l} subset {s:?}: {cosph} vs {rule}")
                })?;
                checked += 1;
            }
            let planes = Kernel::build(p.points(), Lifting::Plane).map_err(|e| e.to_string())?;
            for s in Combinations::new(n, 5) {
                ensure(planes.det(&s) != ZeroTest::Zero, || {
                    format!("n={n} l={l}: points {s:?} lie in a hyperplane")
                })?;
            }
        }
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(600), || format!("took {took:?}"))?;
    Ok(format!(
        "1000 residuals contain 0 (max radius {widest:.1e}); {checked} 6-subsets agree with the residue rule; no 5 coplanar; {:.1}s",
        took.as_secs_f64()
    ))
}

fn criterion_6() -> Check {
    let mut cases = 0;
    for n in 7..=14 {
        for l in 0..3 {
            let p = coset_config(&CosetSpec::new(4, n, l).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let s = spectrum(&p, &CountOptions::default()).map_err(|e| e.to_string())?;
            partition_ok(&s)?;
            let o = integer_oracle(n, 4, l, None).map_err(|e| e.to_string())?;
            ensure(s.ordinary() == o.ordinary && s.next() == o.dplus2, || {
                format!(
                    "n={n} l={l}: engine ({}, {}) vs oracle ({}, {})",
                    s.ordinary(),
                    s.next(),
                    o.ordinary,
                    o.dplus2
                )
            })?;
            ensure(o.dplus2 == residue_dplus2(n, 4, l), || {
                format!("n={n} l={l}: oracle disagrees with direct residue enumeration")
            })?;
            cases += 1;
        }
    }
    Ok(format!(
        "{cases}/24 coset configurations match the residue oracle"
    ))
}

fn criterion_7() -> Check {
    let mut findings = Vec::new();
    let mut agree = 0;
    for n in 12..=26 {
        let scan = oracle_scan(n, 4, None).map_err(|e| e.to_string())?;
        let f = formula_tables(4, n).map_err(|e| e.to_string())?;
        let (fmin, fmax) = (f.min_ordinary_u64(), f.max_dplus2_u64());
        if n == 12 {
            ensure(scan.best.dplus2 == 80 && fmax == Some(80), || {
                format!(
                    "n=12: oracle {} formula {:?}, expected 80",
                    scan.best.dplus2, fmax
                )
            })?;
        }
        if fmin == Some(scan.best.ordinary) && fmax == Some(scan.best.dplus2) {
            agree += 1;
        } else {
            findings.push(format!(
                "n={n}: oracle optimum ({}, {}) vs formula ({fmin:?}, {fmax:?})",
                scan.best.ordinary, scan.best.dplus2
            ));
        }
    }
    for f in &findings {
        println!("    finding: {f}");
    }
    Ok(format!(
        "n=12 optimum 80 = formula; {agree}/15 values of n agree, {} findings",
        findings.len()
    ))
}

fn random_center(r: &mut rand_chacha::ChaCha8Rng, p: &PointSet) -> Point {
    loop {
        let c = point(&random_point(r, p.dimension(), 7, 3));
        if !p.points().contains(&c) {
            return c;
        }
    }
}

fn criterion_8() -> Check {
    let mut r = rng(8);
    let mut pairs = 0;
    for cfg in 0..20 {
        let p = match cfg % 4 {
            0 => trivial_config(3, 7, cfg).map_err(|e| e.to_string())?,
            _ => random_config(&mut r, 3, 7, 3, 2),
        };
        let before = spectrum(&p, &CountOptions::default()).map_err(|e| e.to_string())?;
        let mut done = 0;
        while done < 5 {
            let c = random_center(&mut r, &p);
            let image = invert_set(&p, &c).map_err(|e| e.to_string())?;
            if general_position_check(&image, None).map_err(|e| e.to_string())?
                != GeneralPosition::Ok
            {
                continue;
            }
            let after = spectrum(&image, &CountOptions::default()).map_err(|e| e.to_string())?;
            ensure(after == before, || {
                format!("config {cfg}: {:?} -> {:?}", before.counts, after.counts)
            })?;
            done += 1;
            pairs += 1;
        }
    }
    Ok(format!("{pairs}/100 inversions preserve the spectrum"))
}

fn criterion_9() -> Check {
    let mut corpus: Vec<PointSet> = vec![
        trivial_config(3, 10, 9).map_err(|e| e.to_string())?,
        trivial_config(4, 10, 9).map_err(|e| e.to_string())?,
        coset_config(&CosetSpec::new(4, 12, 1).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?,
    ];
    let mut r = rng(9);
    corpus.push(random_config(&mut r, 3, 9, 3, 2));
    for (i, p) in corpus.iter().enumerate() {
        let runs: Vec<String> = [1, 2, 8]
            .iter()
            .map(|&t| {
                spectrum(p, &CountOptions::threads(t))
                    .map(|s| s.to_json().to_string())
                    .map_err(|e| e.to_string())
            })
            .collect::<std::result::Result<_, _>>()?;
        ensure(runs.iter().all(|x| x == &runs[0]), || {
            format!("corpus item {i}: outputs differ across thread counts")
        })?;
    }
    Ok(format!(
        "{} corpus sets give identical output on 1, 2 and 8 threads",
        corpus.len()
    ))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Check)> = vec![
        ("trivial d=3 ordinary counts", criterion_1),
        ("trivial d=4 n=12 ordinary count", criterion_2),
        ("lift correspondence", criterion_3),
        ("partition identity and naive oracle", criterion_4),
        ("group law", criterion_5),
        ("engine equals residue oracle", criterion_6),
        ("formula cross-check", criterion_7),
        ("inversion invariance", criterion_8),
        ("thread-count determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|e| Err(format!("panicked: {:?}", e.downcast_ref::<String>())));
        let took = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} [{name}]: PASS ({detail}) [{took:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL ({why}) [{took:.2}s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
