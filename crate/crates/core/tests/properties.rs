mod common;

use common::*;
use hypersphere_lab::constructions::{coset_config, integer_oracle, trivial_config, CosetSpec};
use hypersphere_lab::counting::{
    ordinary_hyperplane_spectrum, spectrum, spectrum_hashed, CountOptions,
};
use hypersphere_lab::geometry::{
    cospherical, hypersphere_through, invert, invert_set, lift, lift_set, project, Hypersphere,
    Metadata, Point, PointSet, Tri,
};
use hypersphere_lab::numeric::Scalar;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = BigRational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| q(n, d))
}

fn rpoint(d: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec(rat(), d)
}

fn map_set(p: &PointSet, f: impl Fn(&[BigRational]) -> Vec<BigRational>) -> PointSet {
    let pts = p
        .points()
        .iter()
        .map(|x| point(&f(&rationals(x))))
        .collect();
    PointSet::new(p.dimension(), pts, Metadata::default()).unwrap()
}

/// Householder reflection across the hyperplane orthogonal to `v`.
fn reflect(x: &[BigRational], v: &[BigRational]) -> Vec<BigRational> {
    let vv: BigRational = v.iter().map(|a| a * a).sum();
    let xv: BigRational = x.iter().zip(v).map(|(a, b)| a * b).sum();
    let f = q(2, 1) * xv / vv;
    x.iter().zip(v).map(|(a, b)| a - &f * b).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn project_inverts_lift(x in rpoint(3)) {
        let p = point(&x);
        let y = lift(&p);
        prop_assert_eq!(y.norm_sq(), Scalar::int(1));
        prop_assert_eq!(project(&y).unwrap(), p);
    }

    #[test]
    fn inversion_is_an_involution(x in rpoint(3), r in rpoint(3)) {
        prop_assume!(x != r);
        let (x, r) = (point(&x), point(&r));
        prop_assert_eq!(invert(&invert(&x, &r).unwrap(), &r).unwrap(), x);
    }

    #[test]
    fn cospherical_ignores_argument_order(pts in prop::collection::vec(rpoint(3), 5), rot in 0usize..5) {
        let mut a: Vec<Point> = pts.iter().map(|c| point(c)).collect();
        let before = cospherical(&a).unwrap();
        a.rotate_left(rot);
        a.swap(0, 1);
        prop_assert_eq!(cospherical(&a).unwrap(), before);
    }

    #[test]
    fn hypersphere_through_ignores_order(pts in prop::collection::vec(rpoint(3), 4), rot in 1usize..4) {
        let a: Vec<Point> = pts.iter().map(|c| point(c)).collect();
        if let Ok(h) = hypersphere_through(&a) {
            let mut b = a.clone();
            b.rotate_left(rot);
            prop_assert_eq!(hypersphere_through(&b).unwrap(), h.clone());
            for p in &a {
                prop_assert_eq!(h.incident(p).unwrap(), Tri::True);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Points sampled on a random sphere stay cospherical after inversion in
    /// a centre off the sphere.
    #[test]
    fn inversion_maps_spheres_to_spheres(
        centre in rpoint(3),
        radius_sq in 1i64..30,
        dirs in prop::collection::vec(rpoint(2), 20),
        r in rpoint(3),
    ) {
        // points on the sphere |x - c|^2 = rho via the unit-sphere lift
        let rho = q(radius_sq, 1);
        let pts: Vec<Vec<BigRational>> = dirs
            .iter()
            .map(|v| {
                let u = rationals(&lift(&point(v)));
                u.iter().zip(&centre).map(|(a, c)| a * &rho + c).collect()
            })
            .collect();
        let sphere = Hypersphere::new(
            Scalar::int(1),
            centre.iter().map(|c| Scalar::Rational(-q(2, 1) * c)).collect(),
            Scalar::Rational(centre.iter().map(|c| c * c).sum::<BigRational>() - &rho * &rho),
        )
        .unwrap();
        let rp = point(&r);
        prop_assume!(sphere.incident(&rp).unwrap() == Tri::False);
        let images: Vec<Point> = pts.iter().map(|x| invert(&point(x), &rp).unwrap()).collect();
        for w in images.windows(5) {
            prop_assert_eq!(cospherical(w).unwrap(), Tri::True);
        }
    }
}

#[test]
fn engine_matches_naive_oracle_on_small_sets() {
    let mut r = rng(11);
    for trial in 0..40 {
        let n = 6 + trial % 4;
        let p = random_config(&mut r, 3, n, 2, 2);
        let s = spectrum(&p, &CountOptions::default()).unwrap();
        assert_eq!(
            Some(s.counts.clone()),
            naive_sphere_spectrum(&p),
            "trial {trial}"
        );
        assert_eq!(spectrum_hashed(&p, &CountOptions::default()).unwrap(), s);
    }
}

#[test]
fn hyperplane_spectrum_matches_naive_oracle() {
    let mut r = rng(12);
    let mut tested = 0;
    while tested < 20 {
        let pts: Vec<Point> = (0..7)
            .map(|_| point(&random_point(&mut r, 3, 2, 1)))
            .collect();
        let Ok(q) = PointSet::new(3, pts, Metadata::default()) else {
            continue;
        };
        let Some(naive) = naive_plane_spectrum(&q) else {
            continue;
        };
        let s = ordinary_hyperplane_spectrum(&q, &CountOptions::default()).unwrap();
        assert_eq!(s.counts, naive);
        tested += 1;
    }
}

#[test]
fn lifted_trivial_config_has_the_same_spectrum() {
    let p = trivial_config(3, 6, 3).unwrap();
    let s = spectrum(&p, &CountOptions::default()).unwrap();
    let l = ordinary_hyperplane_spectrum(&lift_set(&p).unwrap(), &CountOptions::default()).unwrap();
    assert_eq!(s.counts, l.counts);
}

#[test]
fn spectrum_is_invariant_under_similarities() {
    let mut r = rng(13);
    for _ in 0..10 {
        let p = random_config(&mut r, 3, 8, 3, 2);
        let base = spectrum(&p, &CountOptions::default()).unwrap().counts;
        let t = random_point(&mut r, 3, 9, 4);
        let v = loop {
            let v = random_point(&mut r, 3, 5, 3);
            if v.iter().any(|c| !c.is_zero()) {
                break v;
            }
        };
        let moved = map_set(&p, |x| x.iter().zip(&t).map(|(a, b)| a + b).collect());
        let scaled = map_set(&p, |x| x.iter().map(|a| a * q(-7, 3)).collect());
        let turned = map_set(&p, |x| reflect(x, &v));
        for img in [moved, scaled, turned] {
            assert_eq!(
                spectrum(&img, &CountOptions::default()).unwrap().counts,
                base
            );
        }
    }
}

#[test]
fn inverted_coset_keeps_both_counts() {
    let p = coset_config(&CosetSpec::new(4, 9, 1).unwrap()).unwrap();
    let before = spectrum(&p, &CountOptions::default()).unwrap();
    let o = integer_oracle(9, 4, 1, None).unwrap();
    assert_eq!((before.ordinary(), before.next()), (o.ordinary, o.dplus2));
    let ctx_point = match &p.points()[0].coords()[0] {
        Scalar::Cyclotomic(e) => e.context().clone(),
        _ => unreachable!(),
    };
    let centre = Point::new(
        [3, -1, 2, 5]
            .iter()
            .map(|&v| {
                Scalar::Cyclotomic(
                    ctx_point.from_rational(BigRational::new(BigInt::from(v), BigInt::one())),
                )
            })
            .collect(),
    )
    .unwrap();
    let after = spectrum(&invert_set(&p, &centre).unwrap(), &CountOptions::default()).unwrap();
    assert_eq!(after.counts, before.counts);
}
