use locnash::lattice::Lattice1;
use locnash::weierstrass::checks::*;
use locnash::weierstrass::{WeierstrassConfig, WeierstrassContext};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::sync::OnceLock;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn lattice(w1: Complex64, w2: Complex64) -> Lattice1 {
    Lattice1::new(w1, w2).unwrap()
}

fn square() -> &'static WeierstrassContext {
    static CTX: OnceLock<WeierstrassContext> = OnceLock::new();
    CTX.get_or_init(|| WeierstrassContext::new(lattice(c(1.0, 0.0), c(0.0, 1.0))).unwrap())
}

fn hexagonal() -> &'static WeierstrassContext {
    static CTX: OnceLock<WeierstrassContext> = OnceLock::new();
    CTX.get_or_init(|| {
        WeierstrassContext::new(lattice(c(1.0, 0.0), c(0.5, 3f64.sqrt() / 2.0))).unwrap()
    })
}

fn skewed() -> &'static WeierstrassContext {
    static CTX: OnceLock<WeierstrassContext> = OnceLock::new();
    CTX.get_or_init(|| WeierstrassContext::new(lattice(c(0.8, 0.1), c(2.3, 0.9))).unwrap())
}

/// q = e^{±2iz} with |q| ≤ 1, and the sign used.
fn nome(z: Complex64) -> (Complex64, f64) {
    let sign = if z.im >= 0.0 { 1.0 } else { -1.0 };
    ((c(0.0, 2.0 * sign) * z).exp(), sign)
}

/// csc² z = −4q/(1−q)², free of overflow far from the real axis.
fn csc2(z: Complex64) -> Complex64 {
    let (q, _) = nome(z);
    let d = c(1.0, 0.0) - q;
    q * -4.0 / (d * d)
}

fn cot(z: Complex64) -> Complex64 {
    let (q, sign) = nome(z);
    c(0.0, sign) * (q + 1.0) / (q - 1.0)
}

/// Shortest-vector basis by the textbook Lagrange step, kept separate from the library.
fn short_basis(l: &Lattice1) -> (Complex64, Complex64) {
    let (mut a, mut b) = (l.omega1(), l.omega2());
    if b.norm() < a.norm() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        b -= a * ((b * a.conj()).re / a.norm_sqr()).round();
        if b.norm() >= a.norm() {
            return (a, b);
        }
        std::mem::swap(&mut a, &mut b);
    }
}

/// ℘ summed row by row with the closed form Σ_n (z − nω₂)⁻² = k² csc²(kz), k = π/ω₂,
/// rows taken along the shortest vector so they decay fast; 60 rows on either side
/// are then exact to rounding.
fn wp_rows(l: &Lattice1, u: Complex64) -> Complex64 {
    let (w2, w1) = short_basis(l);
    let k = c(PI, 0.0) / w2;
    let k2 = k * k;
    let mut acc = k2 * csc2(k * u) - k2 / 3.0;
    for m in 1..=60 {
        for s in [-1.0, 1.0] {
            let mw = w1 * (s * m as f64);
            acc += k2 * (csc2(k * (u - mw)) - csc2(k * mw));
        }
    }
    acc
}

fn wp_prime_rows(l: &Lattice1, u: Complex64) -> Complex64 {
    let (w2, w1) = short_basis(l);
    let k = c(PI, 0.0) / w2;
    let row = |z: Complex64| csc2(k * z) * cot(k * z) * k * k * k * -2.0;
    let mut acc = row(u);
    for m in 1..=60 {
        acc += row(u - w1 * m as f64) + row(u + w1 * m as f64);
    }
    acc
}

/// g₂ = 60Σ′ω⁻⁴, g₃ = 140Σ′ω⁻⁶ over the sharp disc |ω| ≤ R.
fn eisenstein_sharp(l: &Lattice1, radius: f64) -> (Complex64, Complex64) {
    let (w1, w2) = (l.omega1(), l.omega2());
    let area = (w1.conj() * w2).im.abs();
    let mm = (radius * w2.norm() / area).ceil() as i64 + 1;
    let nn = (radius * w1.norm() / area).ceil() as i64 + 1;
    let (mut s4, mut s6) = (c(0.0, 0.0), c(0.0, 0.0));
    for m in -mm..=mm {
        for n in -nn..=nn {
            let w = w1 * m as f64 + w2 * n as f64;
            if (m == 0 && n == 0) || w.norm() > radius {
                continue;
            }
            let inv2 = (w * w).inv();
            s4 += inv2 * inv2;
            s6 += inv2 * inv2 * inv2;
        }
    }
    (s4 * 60.0, s6 * 140.0)
}

fn random_points(count: usize, half_width: f64, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            c(
                rng.gen_range(-half_width..half_width),
                rng.gen_range(-half_width..half_width),
            )
        })
        .collect()
}

fn contexts() -> [&'static WeierstrassContext; 3] {
    [square(), hexagonal(), skewed()]
}

#[test]
fn wp_matches_row_summation_oracle() {
    for ctx in contexts() {
        let l = ctx.lattice();
        for u in random_points(40, 2.5, 11) {
            let got = ctx.wp(u);
            let want = wp_rows(&l, u);
            let err = (got.value - want).norm() / want.norm().max(1.0);
            assert!(
                err < 1e-11,
                "{l} u={u} got={} want={want} err={err:e}",
                got.value
            );
            let gp = ctx.wp_prime(u).value;
            let wp = wp_prime_rows(&l, u);
            assert!((gp - wp).norm() / wp.norm().max(1.0) < 1e-10, "{l} u={u}");
        }
    }
}

#[test]
fn wp_for_elongated_lattice() {
    let l = lattice(c(1.0, 0.0), c(0.0, PI));
    let ctx = WeierstrassContext::new(l).unwrap();
    for u in random_points(10, 1.5, 5) {
        let want = wp_rows(&l, u);
        assert!((ctx.wp(u).value - want).norm() / want.norm().max(1.0) < 1e-11);
    }
}

#[test]
fn differential_equation_against_sharp_eisenstein_oracle() {
    for ctx in contexts() {
        let l = ctx.lattice();
        let (g2, g3) = eisenstein_sharp(&l, 200.0 * l.max_abs());
        let (h2, h3) = ctx.invariants();
        let scale = g2.norm().max(g3.norm());
        assert!((g2 - h2).norm() < 1e-6 * scale && (g3 - h3).norm() < 1e-6 * scale);
        for u in reduced_samples(ctx, 30, 3) {
            let p = ctx.wp(u).value;
            let dp = ctx.wp_prime(u).value;
            let rhs = p * p * p * 4.0 - g2 * p - g3;
            let rel = (dp * dp - rhs).norm() / (dp * dp).norm().max(rhs.norm());
            assert!(rel < 1e-6, "{l} u={u} rel={rel:e}");
        }
    }
}

#[test]
fn square_lattice_half_period_zeta() {
    let z = square().zeta(c(0.5, 0.0)).value;
    assert!((z - c(PI / 2.0, 0.0)).norm() < 1e-8);
    assert!((square().eta_half()[0] - c(PI / 2.0, 0.0)).norm() < 1e-8);
}

#[test]
fn legendre_relation() {
    for ctx in contexts() {
        assert!(ctx.legendre_residual() < 10.0 * ctx.target_abs_err());
        assert!(ctx.legendre_residual() < 1e-12);
    }
}

#[test]
fn parity() {
    for ctx in [square(), hexagonal()] {
        let pts = reduced_samples(ctx, 100, 17);
        assert!(parity_residual(ctx, &pts) < 1e-10);
    }
}

#[test]
fn periodicity_within_error_estimate() {
    for ctx in contexts() {
        let [w1, w2] = ctx.lattice().periods();
        for u in reduced_samples(ctx, 10, 23) {
            let base = ctx.wp(u);
            for m in -3..=3 {
                for n in -3..=3 {
                    let shifted = ctx.wp(u + w1 * m as f64 + w2 * n as f64);
                    let diff = (shifted.value - base.value).norm();
                    assert!(
                        diff <= shifted.est_error + base.est_error,
                        "m={m} n={n} diff={diff:e}"
                    );
                }
            }
        }
    }
}

#[test]
fn quasi_periodicity() {
    for ctx in contexts() {
        let pts = reduced_samples(ctx, 50, 29);
        assert!(zeta_quasi_periodicity_residual(ctx, &pts) < 1e-9);
        assert!(sigma_quasi_periodicity_residual(ctx, &pts) < 1e-8);
        let eta = ctx.eta();
        for (i, w) in ctx.lattice().periods().into_iter().enumerate() {
            for &z in &pts {
                let lhs = ctx.zeta(z + w).value - ctx.zeta(z).value - eta[i];
                assert!(lhs.norm() < 1e-9);
                let s1 = ctx.sigma(z + w).value;
                let s0 = ctx.sigma(z).value * (eta[i] * (z + w * 0.5)).exp();
                assert!((s1 + s0).norm() < 1e-8 * s1.norm());
            }
        }
    }
}

#[test]
fn reduced_and_direct_paths_agree() {
    for ctx in contexts() {
        for u in random_points(30, 2.0, 31) {
            let a = ctx.sigma(u).value;
            let b = ctx.sigma_direct(u).value;
            assert!((a - b).norm() < 1e-11 * a.norm().max(1.0), "u={u}");
            let a = ctx.zeta(u).value;
            let b = ctx.zeta_direct(u).value;
            assert!((a - b).norm() < 1e-11 * a.norm().max(1.0), "u={u}");
        }
    }
}

#[test]
fn central_differences() {
    let h = 1e-5;
    for ctx in [square(), hexagonal()] {
        for u in reduced_samples(ctx, 20, 37) {
            let dz = (ctx.zeta(u + h).value - ctx.zeta(u - h).value) / (2.0 * h);
            assert!((dz + ctx.wp(u).value).norm() < 1e-5);
            let ds = (ctx.sigma(u + h).value - ctx.sigma(u - h).value) / (2.0 * h);
            assert!((ds / ctx.sigma(u).value - ctx.zeta(u).value).norm() < 1e-5);
            let dp = (ctx.wp(u + h).value - ctx.wp(u - h).value) / (2.0 * h);
            assert!((dp - ctx.wp_prime(u).value).norm() < 1e-5 * dp.norm().max(1.0));
        }
    }
}

#[test]
fn sigma_taylor_series_oracle() {
    // σ(u) = u − g₂u⁵/240 − g₃u⁷/840 − g₂²u⁹/161280 + O(u¹¹)
    for ctx in contexts() {
        let l = ctx.lattice();
        let (g2, g3) = eisenstein_sharp(&l, 200.0 * l.max_abs());
        for u in random_points(10, 0.05, 41) {
            let u5 = u.powi(5);
            let want =
                u - g2 * u5 / 240.0 - g3 * u5 * u * u / 840.0 - g2 * g2 * u5 * u.powi(4) / 161280.0;
            let got = ctx.sigma(u).value;
            assert!((got - want).norm() < 1e-12, "u={u}");
        }
    }
}

#[test]
fn scaling_law() {
    for ctx in [square(), hexagonal()] {
        let pts = reduced_samples(ctx, 20, 43);
        for s in [c(2.0, 0.0), c(1.0, 1.0)] {
            assert!(scaling_law_residual(ctx, s, &pts).unwrap() < 1e-8);
        }
    }
}

#[test]
fn conjugation_lemma() {
    for ctx in contexts() {
        let pts = reduced_samples(ctx, 30, 47);
        assert!(conjugate_lattice_check(ctx, &pts).unwrap() < 1e-9);
    }
    let ctx = square();
    for x in [0.1, 0.37, 0.8, 1.9] {
        assert!(ctx.wp(c(x, 0.0)).value.im.abs() < 1e-9);
    }
}

#[test]
fn coset_sums() {
    let cfg = WeierstrassConfig::default();
    let sq = lattice(c(1.0, 0.0), c(0.0, 1.0));
    let pts = reduced_samples(square(), 30, 53);
    // Index 4 with representatives 0, 1, i, 1+i: the constant is −(e₁+e₂+e₃) = 0.
    assert!(coset_sum_check(lattice(c(2.0, 0.0), c(0.0, 2.0)), sq, &pts, cfg).unwrap() < 1e-7);
    assert!(coset_sum_check(sq, sq, &pts, cfg).unwrap() < 1e-12);
}

/// For <1,2i> < <1,i> the sum ℘_{Λ₁}(u) + ℘_{Λ₁}(u+i) exceeds ℘_{Λ₂}(u) by the
/// constant ℘_{Λ₁}(i), a half-period value that is not zero.
#[test]
fn two_coset_sum_has_half_period_constant() {
    let sub = lattice(c(1.0, 0.0), c(0.0, 2.0));
    let sup = lattice(c(1.0, 0.0), c(0.0, 1.0));
    let c1 = WeierstrassContext::new(sub).unwrap();
    let e = wp_rows(&sub, c(0.0, 1.0));
    assert!(e.norm() > 1.0);
    for u in reduced_samples(square(), 20, 61) {
        let lhs = square().wp(u).value;
        let rhs = c1.wp(u).value + c1.wp(u + c(0.0, 1.0)).value;
        assert!((rhs - lhs - e).norm() < 1e-9, "u={u}");
    }
    let pts = reduced_samples(square(), 10, 67);
    let r = coset_sum_check(sub, sup, &pts, WeierstrassConfig::default()).unwrap();
    assert!((r - e.norm()).abs() < 1e-9);
}

#[test]
fn differential_equation_with_own_invariants() {
    for ctx in contexts() {
        let pts = reduced_samples(ctx, 30, 59);
        assert!(differential_equation_residual(ctx, &pts) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wp_is_even_and_periodic(re in -3.0f64..3.0, im in -3.0f64..3.0, m in -4i64..=4, n in -4i64..=4) {
        let ctx = hexagonal();
        let u = c(re, im);
        let base = ctx.wp(u);
        prop_assume!(!base.pole && base.value.norm() < 1e6);
        let neg = ctx.wp(-u);
        prop_assert!((neg.value - base.value).norm() <= neg.est_error + base.est_error + 1e-10);
        let [w1, w2] = ctx.lattice().periods();
        let sh = ctx.wp(u + w1 * m as f64 + w2 * n as f64);
        prop_assert!((sh.value - base.value).norm() <= sh.est_error + base.est_error);
    }

    #[test]
    fn zeta_is_odd(re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let ctx = square();
        let u = c(re, im);
        let a = ctx.zeta(u);
        prop_assume!(!a.pole && a.value.norm() < 1e6);
        let b = ctx.zeta(-u);
        prop_assert!((a.value + b.value).norm() <= a.est_error + b.est_error + 1e-10);
    }
}
