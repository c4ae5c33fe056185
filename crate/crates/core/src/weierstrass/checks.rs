//! Numerical checks of the classical Weierstrass identities.
//!
//! Each check returns the largest residual over its sample points and skips
//! points at which any participating evaluation hits a pole.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{WeierstrassConfig, WeierstrassContext, WeierstrassError};
use crate::lattice::{coset_representatives, ComplexVector, Lattice1};

/// Uniform points sω₁′ + tω₂′, s, t ∈ [−½, ½], of the reduced parallelogram,
/// kept at least a tenth of the shortest period away from the origin.
pub fn reduced_samples(ctx: &WeierstrassContext, count: usize, seed: u64) -> Vec<Complex64> {
    let basis = ctx.reduced_basis();
    let min = 0.1 * basis.omega1.norm();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let s: f64 = rng.gen_range(-0.5..0.5);
        let t: f64 = rng.gen_range(-0.5..0.5);
        let z = basis.omega1 * s + basis.omega2 * t;
        if z.norm() >= min {
            out.push(z);
        }
    }
    out
}

fn max_finite(values: impl ParallelIterator<Item = Option<f64>>) -> f64 {
    values.flatten().reduce(|| 0.0, f64::max)
}

/// max |℘_{Λ̄}(u) − conj ℘_Λ(ū)|.
pub fn conjugate_lattice_check(
    ctx: &WeierstrassContext,
    samples: &[Complex64],
) -> Result<f64, WeierstrassError> {
    let bar = WeierstrassContext::with_config(ctx.lattice().conj(), ctx.config())?;
    Ok(max_finite(samples.par_iter().map(|&u| {
        let a = bar.wp(u).finite()?;
        let b = ctx.wp(u.conj()).finite()?.conj();
        Some((a - b).norm())
    })))
}

/// max |℘_{Λ₂}(u) − Σᵢ ℘_{Λ₁}(u + aᵢ)| over coset representatives aᵢ of Λ₂/Λ₁.
pub fn coset_sum_check(
    sub: Lattice1,
    sup: Lattice1,
    samples: &[Complex64],
    config: WeierstrassConfig,
) -> Result<f64, WeierstrassError> {
    let reps: Vec<Complex64> = coset_representatives(&sub.to_subgroup(), &sup.to_subgroup())?
        .iter()
        .map(|a| a.get(0))
        .collect();
    let c1 = WeierstrassContext::with_config(sub, config)?;
    let c2 = WeierstrassContext::with_config(sup, config)?;
    Ok(max_finite(samples.par_iter().map(|&u| {
        let lhs = c2.wp(u).finite()?;
        let mut rhs = Complex64::new(0.0, 0.0);
        for a in &reps {
            rhs += c1.wp(u + a).finite()?;
        }
        Some((lhs - rhs).norm())
    })))
}

/// max over i of |ζ(z+ω_i) − ζ(z) − 2ζ(ω_i/2)|, with both ζ values taken from
/// the lattice sum at the unreduced arguments, so the cached η constants are
/// tested against independent evaluations.
pub fn zeta_quasi_periodicity_residual(ctx: &WeierstrassContext, samples: &[Complex64]) -> f64 {
    let eta = ctx.eta();
    let periods = ctx.lattice().periods();
    max_finite(samples.par_iter().map(|&z| {
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            let shifted = ctx.zeta_direct(z + periods[i]).finite()?;
            let base = ctx.zeta_direct(z).finite()?;
            worst = worst.max((shifted - base - eta[i]).norm());
        }
        Some(worst)
    }))
}

/// max over i of |σ(z+ω_i) + σ(z)·exp(2ζ(ω_i/2)(z + ω_i/2))| / |σ(z+ω_i)|, with
/// σ from the product at the unreduced arguments.
pub fn sigma_quasi_periodicity_residual(ctx: &WeierstrassContext, samples: &[Complex64]) -> f64 {
    let eta = ctx.eta();
    let periods = ctx.lattice().periods();
    max_finite(samples.par_iter().map(|&z| {
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            let lhs = ctx.sigma_direct(z + periods[i]).finite()?;
            let rhs = ctx.sigma_direct(z).finite()? * (eta[i] * (z + periods[i] * 0.5)).exp();
            let scale = lhs.norm().max(rhs.norm());
            if scale > 0.0 {
                worst = worst.max((lhs + rhs).norm() / scale);
            }
        }
        Some(worst)
    }))
}

/// max |℘_{cΛ}(cu) − c⁻²℘_Λ(u)|.
pub fn scaling_law_residual(
    ctx: &WeierstrassContext,
    c: Complex64,
    samples: &[Complex64],
) -> Result<f64, WeierstrassError> {
    let scaled = WeierstrassContext::with_config(ctx.lattice().scale(c)?, ctx.config())?;
    let inv2 = (c * c).inv();
    Ok(max_finite(samples.par_iter().map(|&u| {
        let a = scaled.wp(c * u).finite()?;
        let b = ctx.wp(u).finite()?;
        Some((a - b * inv2).norm())
    })))
}

/// Relative residual of ℘′² = 4℘³ − g₂℘ − g₃ with the context's own g₂, g₃.
pub fn differential_equation_residual(ctx: &WeierstrassContext, samples: &[Complex64]) -> f64 {
    let (g2, g3) = ctx.invariants();
    max_finite(samples.par_iter().map(|&u| {
        let p = ctx.wp(u).finite()?;
        let dp = ctx.wp_prime(u).finite()?;
        let lhs = dp * dp;
        let rhs = p * p * p * 4.0 - g2 * p - g3;
        let scale = lhs.norm() + 4.0 * p.norm().powi(3) + (g2 * p).norm() + g3.norm();
        Some((lhs - rhs).norm() / scale)
    }))
}

/// Largest of the parity residuals |σ(−u)+σ(u)|, |ζ(−u)+ζ(u)|, |℘(−u)−℘(u)|, |℘′(−u)+℘′(u)|.
pub fn parity_residual(ctx: &WeierstrassContext, samples: &[Complex64]) -> f64 {
    max_finite(samples.par_iter().map(|&u| {
        let s = (ctx.sigma(-u).finite()? + ctx.sigma(u).finite()?).norm();
        let z = (ctx.zeta(-u).finite()? + ctx.zeta(u).finite()?).norm();
        let p = (ctx.wp(-u).finite()? - ctx.wp(u).finite()?).norm();
        let d = (ctx.wp_prime(-u).finite()? + ctx.wp_prime(u).finite()?).norm();
        Some(s.max(z).max(p).max(d))
    }))
}

/// Helper for callers holding lattice vectors rather than scalars.
pub fn scalars(points: &[ComplexVector]) -> Vec<Complex64> {
    points.iter().map(|p| p.get(0)).collect()
}
