use locnash::classify::*;
use locnash::lattice::{CMatrix, Lattice1};
use locnash::structures::{ExactClass, Structure, StructureDescriptor};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn s(d: StructureDescriptor) -> Structure {
    Structure::new(d).unwrap()
}

fn wp(w1: Complex64, w2: Complex64) -> Structure {
    s(StructureDescriptor::wp(Lattice1::new(w1, w2).unwrap()))
}

fn sq() -> Lattice1 {
    Lattice1::new(c(1.0, 0.0), c(0.0, 1.0)).unwrap()
}

fn cfg() -> ClassifyConfig {
    ClassifyConfig::default()
}

#[test]
fn one_dimensional_canonical_forms() {
    let e3 = StructureDescriptor::exp()
        .with_alpha(CMatrix::new(1, vec![c(3.0, 0.0)]).unwrap())
        .unwrap();
    assert_eq!(classify_1d(&s(e3)).unwrap().canonical, Canonical1d::Exp);
    assert_eq!(
        classify_1d(&s(StructureDescriptor::sin()))
            .unwrap()
            .canonical,
        Canonical1d::Sin
    );
    assert_eq!(
        classify_1d(&s(StructureDescriptor::id()))
            .unwrap()
            .canonical,
        Canonical1d::Id
    );
    match classify_1d(&wp(c(2.0, 0.0), c(0.0, 4.0)))
        .unwrap()
        .canonical
    {
        Canonical1d::WpNormalized { a } => assert!((a - 2.0).abs() < 1e-12),
        other => panic!("{other:?}"),
    }
    // rhombic lattices reduce through their rectangular sublattice
    match classify_1d(&wp(c(1.0, 0.0), c(0.5, 3f64.sqrt() / 2.0)))
        .unwrap()
        .canonical
    {
        Canonical1d::WpNormalized { a } => assert!((a - 3f64.sqrt()).abs() < 1e-12),
        other => panic!("{other:?}"),
    }
}

#[test]
fn non_real_structures_are_rejected() {
    let e = StructureDescriptor::exp()
        .with_alpha(CMatrix::new(1, vec![c(0.0, 1.0)]).unwrap())
        .unwrap();
    assert_eq!(classify_1d(&s(e)), Err(ClassifyError::NotRealStructure));
    assert_eq!(
        classify_1d(&wp(c(1.0, 0.0), c(0.3, 1.1))),
        Err(ClassifyError::NotRealStructure)
    );
    assert!(matches!(
        classify_1d(&s(StructureDescriptor::p1())),
        Err(ClassifyError::WrongDimension { .. })
    ));
}

#[test]
fn weierstrass_ratio_test() {
    let v = isomorphic_1d(
        &wp(c(1.0, 0.0), c(0.0, 1.0)),
        &wp(c(1.0, 0.0), c(0.0, 2.0)),
        &cfg(),
    )
    .unwrap();
    assert_eq!(v.outcome, Outcome::Isomorphic);
    assert_eq!(v.ratio, Some((1, 2)));

    let pi = wp(c(1.0, 0.0), c(0.0, PI));
    let v = isomorphic_1d(&wp(c(1.0, 0.0), c(0.0, 1.0)), &pi, &cfg()).unwrap();
    assert_eq!(v.outcome, Outcome::Undetermined);
    assert!(v.reason.iter().any(|r| r.detail.contains("1000000")));

    let tagged_sq = s(StructureDescriptor::wp(sq()).with_exact(ExactClass::Rational));
    let tagged_pi = s(
        StructureDescriptor::wp(Lattice1::new(c(1.0, 0.0), c(0.0, PI)).unwrap())
            .with_exact(ExactClass::RationalTimesPi),
    );
    let v = isomorphic_1d(&tagged_sq, &tagged_pi, &cfg()).unwrap();
    assert_eq!(v.outcome, Outcome::NotIsomorphic);
}

#[test]
fn exp_and_sin_are_separated_by_axis() {
    let v = isomorphic_1d(
        &s(StructureDescriptor::exp()),
        &s(StructureDescriptor::sin()),
        &cfg(),
    )
    .unwrap();
    assert_eq!(v.outcome, Outcome::NotIsomorphic);
    assert!(v.reason.iter().any(|r| r.kind == "axis"));
}

#[test]
fn rank_mismatches_are_not_isomorphic() {
    let all = [
        s(StructureDescriptor::id()),
        s(StructureDescriptor::exp()),
        s(StructureDescriptor::sin()),
        s(StructureDescriptor::wp_real(1.0).unwrap()),
    ];
    for a in &all {
        for b in &all {
            let v = isomorphic_1d(a, b, &cfg()).unwrap();
            let (ra, rb) = (a.z_rank().unwrap(), b.z_rank().unwrap());
            assert_eq!(v.ranks, (ra, rb));
            if ra != rb {
                assert_eq!(v.outcome, Outcome::NotIsomorphic);
            }
        }
    }
}

#[test]
fn canonical_class_survives_real_alpha() {
    let mut rng = ChaCha8Rng::seed_from_u64(211);
    let bases = [
        StructureDescriptor::exp(),
        StructureDescriptor::sin(),
        StructureDescriptor::id(),
        StructureDescriptor::wp_real(1.7).unwrap(),
        StructureDescriptor::wp(Lattice1::new(c(1.0, 0.5), c(1.0, -0.5)).unwrap()),
    ];
    for base in bases {
        let s0 = s(base.clone());
        for _ in 0..20 {
            let mut x: f64 = rng.gen_range(0.2..5.0);
            if rng.gen_bool(0.5) {
                x = -x;
            }
            let d = base
                .clone()
                .with_alpha(CMatrix::new(1, vec![c(x, 0.0)]).unwrap())
                .unwrap();
            let v = isomorphic_1d(&s0, &s(d), &cfg()).unwrap();
            assert_eq!(v.outcome, Outcome::Isomorphic, "{x} {:?}", v.reason);
        }
    }
}

#[test]
fn two_dimensional_families() {
    let p4 = s(StructureDescriptor::p4(1, sq()).unwrap());
    let c4 = classify_2d(&p4).unwrap();
    assert_eq!((c4.family, c4.rank), (4, 2));
    let c1 = classify_2d(&s(StructureDescriptor::p1())).unwrap();
    assert_eq!((c1.family, c1.rank), (1, 0));
    let p5 = StructureDescriptor::p5(
        c(0.7, 0.0),
        Lattice1::new(c(1.0, 0.0), c(0.0, 2.0)).unwrap(),
    )
    .unwrap();
    let c5 = classify_2d(&s(p5)).unwrap();
    assert_eq!((c5.family, c5.rank), (5, 3));
}

#[test]
fn two_dimensional_comparisons() {
    let p2 = s(StructureDescriptor::p2());
    let p3 = s(StructureDescriptor::p3());
    let p4 = s(StructureDescriptor::p4(1, sq()).unwrap());
    let p4b =
        s(StructureDescriptor::p4(1, Lattice1::new(c(1.0, 0.0), c(0.0, 2.0)).unwrap()).unwrap());
    let p5 = s(StructureDescriptor::p5(c(0.3, 0.0), sq()).unwrap());

    let v = compare_2d(&p2, &p5).unwrap();
    assert_eq!((v.outcome, v.ranks), (Outcome::NotIsomorphic, (1, 3)));
    assert!(v.reason.iter().any(|r| r.kind == "rank"));

    let v = compare_2d(&p3, &p4).unwrap();
    assert_eq!(v.outcome, Outcome::NotIsomorphic);
    assert!(v
        .reason
        .iter()
        .any(|r| r.detail.contains("family separation, equal ranks")));

    assert_eq!(
        compare_2d(&p4, &p4b).unwrap().outcome,
        Outcome::Undetermined
    );
}

#[test]
fn comparison_is_symmetric() {
    let all = vec![
        s(StructureDescriptor::p1()),
        s(StructureDescriptor::p2()),
        s(StructureDescriptor::p3()),
        s(StructureDescriptor::p4(0, sq()).unwrap()),
        s(StructureDescriptor::p5(c(0.4, 0.0), sq()).unwrap()),
        s(StructureDescriptor::p6(sq(), sq())),
    ];
    for a in &all {
        for b in &all {
            let (x, y) = (compare_2d(a, b).unwrap(), compare_2d(b, a).unwrap());
            assert_eq!(x.outcome, y.outcome);
            assert_eq!(x.ranks, (y.ranks.1, y.ranks.0));
            assert_eq!(x.ranks, (a.z_rank().unwrap(), b.z_rank().unwrap()));
        }
    }
}

proptest! {
    #[test]
    fn small_fractions_are_detected(p in -100i64..=100, q in 1u64..=100) {
        let g = num_gcd(p.unsigned_abs(), q);
        let got = rational_detect(p as f64 / q as f64, 1_000_000, 1e-9);
        prop_assert_eq!(got, Some((p / g as i64, q / g)));
    }
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        num_gcd(b, a % b)
    }
}
