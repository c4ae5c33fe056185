//! Weierstrass σ, ζ, ℘ and ℘′ for a lattice Ω of ℂ.
//!
//! Arguments are first reduced into the centred fundamental parallelogram of
//! a Gauss-reduced basis; periodicity of ℘ and the quasi-periodicity of ζ and
//! σ transport the value back. On the reduced argument the lattice sums are
//! evaluated over ± pairs of lattice points, which makes parity exact, with a
//! smooth radial weight
//!
//! ```text
//!   w(|ω|) = 1            for |ω| ≤ R/2
//!   w(|ω|) = s(2|ω|/R−1)  for R/2 < |ω| < R,   s(x) = f(1−x)/(f(1−x)+f(x)),  f(y) = e^{−1/y}
//! ```
//!
//! Every paired summand is an analytic function of ω outside |ω| ≤ |u| whose
//! Laurent terms ω^{−k} (k ≥ 1) have zero angular mean. Summing them against a
//! smooth radial weight therefore leaves a remainder that decays faster than
//! any power of R, whereas a sharp cut at |ω| = R leaves an O(R⁻¹)–O(R⁻²)
//! oscillating tail. The error estimate compares the weighted sum with the
//! same sum at half radius, accumulated in the same pass.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;
use thiserror::Error;

use crate::lattice::{gauss_reduce, Lattice1, LatticeError, ReducedBasis};
use crate::report::fmt_f64;

pub mod checks;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeierstrassError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("Legendre relation violated: residual {residual:e} exceeds {limit:e}")]
    LegendreMismatch { residual: f64, limit: f64 },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeierstrassConfig {
    /// Summation radius as a multiple of max(|ω₁|, |ω₂|).
    pub trunc_radius_factor: f64,
    pub target_abs_err: f64,
    /// Pole neighbourhood radius as a multiple of max(|ω₁|, |ω₂|).
    pub pole_tol_factor: f64,
}

impl Default for WeierstrassConfig {
    fn default() -> Self {
        Self {
            trunc_radius_factor: 200.0,
            target_abs_err: 1e-9,
            pole_tol_factor: 1e-8,
        }
    }
}

impl WeierstrassConfig {
    fn validate(&self) -> Result<(), WeierstrassError> {
        if !(self.trunc_radius_factor >= 10.0 && self.trunc_radius_factor.is_finite()) {
            return Err(WeierstrassError::InvalidConfig(format!(
                "trunc_radius_factor must be at least 10, got {}",
                self.trunc_radius_factor
            )));
        }
        if !(self.target_abs_err > 0.0 && self.target_abs_err.is_finite()) {
            return Err(WeierstrassError::InvalidConfig(
                "target_abs_err must be positive".into(),
            ));
        }
        if !(self.pole_tol_factor > 0.0 && self.pole_tol_factor < 0.1) {
            return Err(WeierstrassError::InvalidConfig(
                "pole_tol_factor must lie in (0, 0.1)".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    pub est_error: f64,
    pub pole: bool,
}

impl EvalResult {
    pub(crate) fn pole() -> Self {
        Self {
            value: Complex64::new(f64::NAN, f64::NAN),
            est_error: f64::NAN,
            pole: true,
        }
    }

    pub(crate) fn ok(value: Complex64, est_error: f64) -> Self {
        Self {
            value,
            est_error,
            pole: false,
        }
    }

    /// The value unless it is a pole or not finite.
    pub fn finite(&self) -> Option<Complex64> {
        (!self.pole && self.value.re.is_finite() && self.value.im.is_finite()).then_some(self.value)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Function {
    Sigma,
    Zeta,
    Wp,
    WpPrime,
}

impl Function {
    pub fn name(&self) -> &'static str {
        match self {
            Function::Sigma => "sigma",
            Function::Zeta => "zeta",
            Function::Wp => "wp",
            Function::WpPrime => "wp-prime",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "sigma" => Some(Function::Sigma),
            "zeta" => Some(Function::Zeta),
            "wp" => Some(Function::Wp),
            "wp-prime" | "wp_prime" | "wpprime" => Some(Function::WpPrime),
            _ => None,
        }
    }
}

/// One representative ω of a pair ±ω.
#[derive(Clone, Copy, Debug)]
struct Node {
    w2: Complex64,
    w4: Complex64,
    inv_w2: Complex64,
    weight: f64,
    coarse: f64,
}

#[derive(Clone, Copy, Debug, Default)]
struct WindowSum {
    main: Complex64,
    coarse: Complex64,
    abs: f64,
}

impl WindowSum {
    fn spread(&self) -> f64 {
        (self.main - self.coarse).norm()
    }
}

/// Smooth decreasing step: 1 on t ≤ 1/2, 0 on t ≥ 1.
pub(crate) fn window(t: f64) -> f64 {
    if t <= 0.5 {
        return 1.0;
    }
    if t >= 1.0 {
        return 0.0;
    }
    let x = 2.0 * t - 1.0;
    let a = (-1.0 / (1.0 - x)).exp();
    let b = (-1.0 / x).exp();
    a / (a + b)
}

/// Precomputed lattice data for one Ω. Immutable; cheap to clone.
#[derive(Clone, Debug)]
pub struct WeierstrassContext {
    lattice: Lattice1,
    config: WeierstrassConfig,
    reduced: ReducedBasis,
    // 2ζ(ω/2) for the reduced basis vectors.
    eta_reduced: [Complex64; 2],
    eta_half: [Complex64; 2],
    trunc_radius: f64,
    pole_tol: f64,
    shortest: f64,
    nodes: Arc<[Node]>,
    invariants: (Complex64, Complex64),
    legendre_residual: f64,
}

impl WeierstrassContext {
    pub fn new(lattice: Lattice1) -> Result<Self, WeierstrassError> {
        Self::with_config(lattice, WeierstrassConfig::default())
    }

    pub fn with_config(
        lattice: Lattice1,
        config: WeierstrassConfig,
    ) -> Result<Self, WeierstrassError> {
        config.validate()?;
        let reduced = gauss_reduce(lattice.omega1(), lattice.omega2());
        let max_abs = lattice.max_abs();
        let trunc_radius = config.trunc_radius_factor * max_abs;
        let nodes = enumerate_nodes(&reduced, trunc_radius);
        let mut ctx = Self {
            lattice,
            config,
            reduced,
            eta_reduced: [Complex64::new(0.0, 0.0); 2],
            eta_half: [Complex64::new(0.0, 0.0); 2],
            trunc_radius,
            pole_tol: config.pole_tol_factor * max_abs,
            shortest: reduced.omega1.norm(),
            nodes: nodes.into(),
            invariants: (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
            legendre_residual: 0.0,
        };
        ctx.eta_reduced = [
            ctx.zeta_series(reduced.omega1 * 0.5).0 * 2.0,
            ctx.zeta_series(reduced.omega2 * 0.5).0 * 2.0,
        ];
        let inv = reduced.from_input();
        for (j, row) in inv.iter().enumerate() {
            let eta = ctx.eta_reduced[0] * row[0] as f64 + ctx.eta_reduced[1] * row[1] as f64;
            ctx.eta_half[j] = eta * 0.5;
        }
        ctx.invariants = ctx.eisenstein();
        let [e1, e2] = ctx.eta();
        let legendre =
            e1 * lattice.omega2() - e2 * lattice.omega1() - Complex64::new(0.0, 2.0 * PI);
        ctx.legendre_residual = legendre.norm();
        let limit = 10.0 * config.target_abs_err;
        if !(ctx.legendre_residual <= limit) {
            return Err(WeierstrassError::LegendreMismatch {
                residual: ctx.legendre_residual,
                limit,
            });
        }
        Ok(ctx)
    }

    pub fn lattice(&self) -> Lattice1 {
        self.lattice
    }

    pub fn config(&self) -> WeierstrassConfig {
        self.config
    }

    pub fn reduced_basis(&self) -> ReducedBasis {
        self.reduced
    }

    /// ζ(ω₁/2), ζ(ω₂/2) for the lattice's own generators.
    pub fn eta_half(&self) -> [Complex64; 2] {
        self.eta_half
    }

    /// η_i = 2ζ(ω_i/2).
    pub fn eta(&self) -> [Complex64; 2] {
        [self.eta_half[0] * 2.0, self.eta_half[1] * 2.0]
    }

    pub fn trunc_radius(&self) -> f64 {
        self.trunc_radius
    }

    pub fn target_abs_err(&self) -> f64 {
        self.config.target_abs_err
    }

    pub fn pole_tol(&self) -> f64 {
        self.pole_tol
    }

    /// |η₁ω₂ − η₂ω₁ − 2πi|.
    pub fn legendre_residual(&self) -> f64 {
        self.legendre_residual
    }

    /// Number of lattice points with nonzero weight.
    pub fn point_count(&self) -> usize {
        2 * self.nodes.len()
    }

    /// (g₂, g₃) = (60 Σ′ω⁻⁴, 140 Σ′ω⁻⁶), from the weighted sums.
    pub fn invariants(&self) -> (Complex64, Complex64) {
        self.invariants
    }

    fn eisenstein(&self) -> (Complex64, Complex64) {
        let g4 = self.sum(|n| n.inv_w2 * n.inv_w2).main * 2.0;
        let g6 = self.sum(|n| n.inv_w2 * n.inv_w2 * n.inv_w2).main * 2.0;
        (g4 * 60.0, g6 * 140.0)
    }

    fn sum(&self, term: impl Fn(&Node) -> Complex64) -> WindowSum {
        let mut acc = WindowSum::default();
        for n in self.nodes.iter() {
            let t = term(n);
            acc.main += t * n.weight;
            acc.coarse += t * n.coarse;
            acc.abs += t.norm() * n.weight;
        }
        acc
    }

    fn estimate(s: &WindowSum, lead: f64) -> f64 {
        s.spread() + 8.0 * f64::EPSILON * (s.abs + lead)
    }

    /// Splits u = r + mω₁′ + nω₂′ in the reduced basis with r in the centred parallelogram.
    pub fn reduce(&self, u: Complex64) -> (Complex64, i64, i64) {
        let (b1, b2) = (self.reduced.omega1, self.reduced.omega2);
        let det = b1.re * b2.im - b1.im * b2.re;
        let s = (u.re * b2.im - u.im * b2.re) / det;
        let t = (b1.re * u.im - b1.im * u.re) / det;
        let (m, n) = (s.round(), t.round());
        (u - b1 * m - b2 * n, m as i64, n as i64)
    }

    fn shift(&self, m: i64, n: i64) -> (Complex64, Complex64) {
        let lambda = self.reduced.omega1 * m as f64 + self.reduced.omega2 * n as f64;
        let eta = self.eta_reduced[0] * m as f64 + self.eta_reduced[1] * n as f64;
        (lambda, eta)
    }

    fn argument_error(&self, u: Complex64, lambda: Complex64) -> f64 {
        4.0 * f64::EPSILON * (u.norm() + lambda.norm() + self.shortest)
    }

    fn zeta_series(&self, u: Complex64) -> (Complex64, f64) {
        let u2 = u * u;
        let u3 = u2 * u;
        let s = self.sum(|n| u3 * 2.0 / (n.w2 * u2 - n.w4));
        let lead = u.inv();
        (lead + s.main, Self::estimate(&s, lead.norm()))
    }

    fn wp_series(&self, u: Complex64) -> (Complex64, f64) {
        let u2 = u * u;
        let s = self.sum(|n| {
            let d = u2 - n.w2;
            u2 * (n.w2 * 3.0 - u2) * 2.0 / (n.w2 * d * d)
        });
        let lead = u2.inv();
        (lead + s.main, Self::estimate(&s, lead.norm()))
    }

    fn wp_prime_series(&self, u: Complex64) -> (Complex64, f64) {
        let u2 = u * u;
        let s = self.sum(|n| {
            let d = u2 - n.w2;
            u * (u2 + n.w2 * 3.0) * -4.0 / (d * d * d)
        });
        let lead = (u2 * u).inv() * -2.0;
        (lead + s.main, Self::estimate(&s, lead.norm()))
    }

    /// Σ over pairs of log(1 − u²/ω²) + u²/ω², so that σ(u) = u·exp(Σ).
    fn log_sigma_series(&self, u: Complex64) -> (Complex64, f64) {
        let u2 = u * u;
        let s = self.sum(|n| log1m_plus(u2 * n.inv_w2));
        (s.main, Self::estimate(&s, 1.0))
    }

    /// ζ by the lattice sum at u itself, without argument reduction.
    /// Accurate while |u| is small compared with the summation radius.
    pub fn zeta_direct(&self, u: Complex64) -> EvalResult {
        if u.norm() < self.pole_tol {
            return EvalResult::pole();
        }
        let (v, e) = self.zeta_series(u);
        EvalResult::ok(v, e)
    }

    /// ℘ by the lattice sum at u itself, without argument reduction.
    pub fn wp_direct(&self, u: Complex64) -> EvalResult {
        if u.norm() < self.pole_tol {
            return EvalResult::pole();
        }
        let (v, e) = self.wp_series(u);
        EvalResult::ok(v, e)
    }

    /// σ by the product at u itself, without argument reduction.
    pub fn sigma_direct(&self, u: Complex64) -> EvalResult {
        let (s, e) = self.log_sigma_series(u);
        let v = u * s.exp();
        EvalResult::ok(v, v.norm() * e)
    }

    pub fn sigma(&self, u: Complex64) -> EvalResult {
        let (r, m, n) = self.reduce(u);
        let (lambda, eta) = self.shift(m, n);
        let (s, e) = self.log_sigma_series(r);
        let sign = if (m + n + m * n).rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        };
        let factor = (eta * (r + lambda * 0.5)).exp() * sign;
        let value = r * s.exp() * factor;
        let arg = self.argument_error(u, lambda);
        let sensitivity = if r.norm() > 0.0 {
            eta.norm() + r.norm().recip()
        } else {
            eta.norm()
        };
        let est = value.norm() * (e + sensitivity * arg) + factor.norm() * arg;
        EvalResult::ok(value, est)
    }

    pub fn zeta(&self, u: Complex64) -> EvalResult {
        let (r, m, n) = self.reduce(u);
        if r.norm() < self.pole_tol {
            return EvalResult::pole();
        }
        let (lambda, eta) = self.shift(m, n);
        let (v, e) = self.zeta_series(r);
        let slope = r.norm_sqr().recip() + 10.0 / (self.shortest * self.shortest);
        let eta_err = 4.0
            * f64::EPSILON
            * (m.unsigned_abs() + n.unsigned_abs()) as f64
            * (self.eta_reduced[0].norm() + self.eta_reduced[1].norm());
        EvalResult::ok(
            v + eta,
            e + slope * self.argument_error(u, lambda) + eta_err,
        )
    }

    pub fn wp(&self, u: Complex64) -> EvalResult {
        let (r, m, n) = self.reduce(u);
        if r.norm() < self.pole_tol {
            return EvalResult::pole();
        }
        let (lambda, _) = self.shift(m, n);
        let (v, e) = self.wp_series(r);
        let slope = 2.0 / r.norm().powi(3) + 10.0 / self.shortest.powi(3);
        EvalResult::ok(v, e + slope * self.argument_error(u, lambda))
    }

    pub fn wp_prime(&self, u: Complex64) -> EvalResult {
        let (r, m, n) = self.reduce(u);
        if r.norm() < self.pole_tol {
            return EvalResult::pole();
        }
        let (lambda, _) = self.shift(m, n);
        let (v, e) = self.wp_prime_series(r);
        let slope = 6.0 / r.norm().powi(4) + 30.0 / self.shortest.powi(4);
        EvalResult::ok(v, e + slope * self.argument_error(u, lambda))
    }

    pub fn eval(&self, f: Function, u: Complex64) -> EvalResult {
        match f {
            Function::Sigma => self.sigma(u),
            Function::Zeta => self.zeta(u),
            Function::Wp => self.wp(u),
            Function::WpPrime => self.wp_prime(u),
        }
    }

    /// Evaluates at every point in parallel; results keep the input order.
    pub fn eval_many(&self, f: Function, points: &[Complex64]) -> Vec<EvalResult> {
        points.par_iter().map(|&u| self.eval(f, u)).collect()
    }
}

/// log(1 − t) + t without cancellation for small t.
fn log1m_plus(t: Complex64) -> Complex64 {
    if t.norm_sqr() < 0.0625 {
        // −Σ_{k≥2} t^k / k
        let mut pow = t * t;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut k = 2.0;
        while pow.norm_sqr() > 1e-40 * acc.norm_sqr().max(1e-300) && k < 200.0 {
            acc -= pow / k;
            pow *= t;
            k += 1.0;
        }
        acc
    } else {
        (Complex64::new(1.0, 0.0) - t).ln() + t
    }
}

fn enumerate_nodes(basis: &ReducedBasis, radius: f64) -> Vec<Node> {
    let (b1, b2) = (basis.omega1, basis.omega2);
    let area = (b1.conj() * b2).im.abs();
    let m_max = (radius * b2.norm() / area).ceil() as i64 + 1;
    let n_max = (radius * b1.norm() / area).ceil() as i64 + 1;
    let mut nodes = Vec::new();
    for m in 0..=m_max {
        let n_start = if m == 0 { 1 } else { -n_max };
        for n in n_start..=n_max {
            let w = b1 * m as f64 + b2 * n as f64;
            let t = w.norm() / radius;
            if t >= 1.0 {
                continue;
            }
            let w2 = w * w;
            nodes.push(Node {
                w2,
                w4: w2 * w2,
                inv_w2: w2.inv(),
                weight: window(t),
                coarse: window(2.0 * t),
            });
        }
    }
    nodes
}

pub const CSV_HEADER: &str = "re_u,im_u,re_val,im_val,est_err,pole";

/// One CSV row per point; pole rows leave the value and error fields empty.
pub fn csv_rows(points: &[Complex64], results: &[EvalResult]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (u, r) in points.iter().zip(results) {
        match r.finite() {
            Some(v) => out.push_str(&format!(
                "{},{},{},{},{},0\n",
                fmt_f64(u.re),
                fmt_f64(u.im),
                fmt_f64(v.re),
                fmt_f64(v.im),
                fmt_f64(r.est_error)
            )),
            None => out.push_str(&format!("{},{},,,,1\n", fmt_f64(u.re), fmt_f64(u.im))),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn square() -> WeierstrassContext {
        WeierstrassContext::new(Lattice1::new(c(1.0, 0.0), c(0.0, 1.0)).unwrap()).unwrap()
    }

    #[test]
    fn window_is_smooth_step() {
        assert_eq!(window(0.3), 1.0);
        assert_eq!(window(1.2), 0.0);
        assert!((window(0.75) - 0.5).abs() < 1e-15);
        assert!(window(0.6) > window(0.7) && window(0.7) > window(0.9));
    }

    #[test]
    fn sigma_vanishes_at_origin() {
        let ctx = square();
        let r = ctx.sigma(c(0.0, 0.0));
        assert_eq!(r.value, c(0.0, 0.0));
        assert!(!r.pole);
    }

    #[test]
    fn square_lattice_eta() {
        let ctx = square();
        let z = ctx.zeta(c(0.5, 0.0)).value;
        assert!((z - c(PI / 2.0, 0.0)).norm() < 1e-12, "{z}");
        assert!(ctx.legendre_residual() < 1e-12);
    }

    #[test]
    fn poles_are_flagged() {
        let ctx = square();
        assert!(ctx.wp(c(2.0, -3.0)).pole);
        assert!(ctx.zeta(c(1.0, 1.0)).pole);
        assert!(ctx.wp_prime(c(0.0, 0.0)).pole);
        assert!(!ctx.wp(c(0.5, 0.5)).pole);
    }

    #[test]
    fn rejects_small_radius() {
        let cfg = WeierstrassConfig {
            trunc_radius_factor: 5.0,
            ..Default::default()
        };
        let l = Lattice1::new(c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        assert!(matches!(
            WeierstrassContext::with_config(l, cfg),
            Err(WeierstrassError::InvalidConfig(_))
        ));
    }

    #[test]
    fn csv_pole_row() {
        let ctx = square();
        let pts = [c(0.0, 0.0), c(0.25, 0.0)];
        let csv = csv_rows(&pts, &ctx.eval_many(Function::Wp, &pts));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "0.0000000000000000e0,0.0000000000000000e0,,,,1");
        assert!(lines[2].ends_with(",0"));
    }

    #[test]
    fn small_t_log_matches_direct() {
        for t in [c(0.2, 0.1), c(-0.1, 0.2), c(0.01, -0.003)] {
            let direct = (c(1.0, 0.0) - t).ln() + t;
            assert!((log1m_plus(t) - direct).norm() < 1e-15);
        }
    }
}
