//! Discrete subgroups of (ℂⁿ, +) for n ∈ {1, 2}.
//!
//! Generators are stored as double precision complex vectors. Every integer
//! decision (membership, transition matrices, indices) goes through a real
//! least-squares solve followed by nearest-integer rounding and a residual
//! gate at the subgroup's tolerance.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use thiserror::Error;

use crate::report::fmt_complex;

/// Default relative tolerance for membership and rank decisions.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default bound on integer coefficients in enumerations.
pub const DEFAULT_COEFF_BOX: i64 = 50;
/// Default multiplier bound for [`common_real_sublattice`].
pub const DEFAULT_A_MAX: u64 = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("vector dimension must be 1 or 2, got {0}")]
    BadDimension(usize),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{count} generators exceed the maximum rank {max}")]
    TooManyGenerators { count: usize, max: usize },
    #[error("generators are R-linearly dependent (singular value ratio {ratio:e})")]
    DegenerateGenerators { ratio: f64 },
    #[error("tolerance must be positive and finite")]
    BadTolerance,
    #[error("not a sublattice")]
    NotASublattice,
    #[error("ranks differ ({sub} vs {sup}); the index is infinite")]
    RankMismatch { sub: usize, sup: usize },
    #[error("transition matrix is not integral (residual {residual:e})")]
    NonIntegerTransition { residual: f64 },
    #[error("coset enumeration found {found} of {expected} classes inside the coefficient box")]
    CosetBoxExhausted { found: usize, expected: u64 },
    #[error("matrix is singular or ill-conditioned (condition number {condition:e})")]
    SingularMatrix { condition: f64 },
    #[error("expected a full lattice of C (dimension 1, rank 2)")]
    NotFullLattice,
    #[error("lattice is not closed under complex conjugation")]
    NotRealLattice,
    #[error("expected a rank-1 subgroup of C")]
    NotRank1,
}

/// A point of ℂⁿ, n ∈ {1, 2}, with finite coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector {
    coords: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(coords: Vec<Complex64>) -> Result<Self, LatticeError> {
        if coords.is_empty() || coords.len() > 2 {
            return Err(LatticeError::BadDimension(coords.len()));
        }
        if coords
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(LatticeError::NonFinite);
        }
        Ok(Self { coords })
    }

    /// # Panics
    /// Panics if `z` is not finite.
    pub fn scalar(z: Complex64) -> Self {
        Self::new(vec![z]).expect("non-finite coordinate")
    }

    /// # Panics
    /// Panics if either coordinate is not finite.
    pub fn pair(a: Complex64, b: Complex64) -> Self {
        Self::new(vec![a, b]).expect("non-finite coordinate")
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            coords: vec![Complex64::new(0.0, 0.0); dim.clamp(1, 2)],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.coords[i]
    }

    pub fn conj(&self) -> Self {
        Self {
            coords: self.coords.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            coords: self.coords.iter().map(|z| z * c).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(Complex64::new(k as f64, 0.0))
    }

    /// Real coordinates (Re z₁, Im z₁, Re z₂, Im z₂, …).
    pub fn real_parts(&self) -> Vec<f64> {
        self.coords.iter().flat_map(|z| [z.re, z.im]).collect()
    }
}

impl Add for &ComplexVector {
    type Output = ComplexVector;
    fn add(self, rhs: &ComplexVector) -> ComplexVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        ComplexVector {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexVector {
    type Output = ComplexVector;
    fn sub(self, rhs: &ComplexVector) -> ComplexVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        ComplexVector {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &ComplexVector {
    type Output = ComplexVector;
    fn neg(self) -> ComplexVector {
        ComplexVector {
            coords: self.coords.iter().map(|z| -z).collect(),
        }
    }
}

impl fmt::Display for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            return write!(f, "{}", fmt_complex(self.coords[0]));
        }
        let parts: Vec<String> = self.coords.iter().map(|z| fmt_complex(*z)).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Square complex matrix of size 1 or 2, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl CMatrix {
    pub fn new(n: usize, entries: Vec<Complex64>) -> Result<Self, LatticeError> {
        if n == 0 || n > 2 {
            return Err(LatticeError::BadDimension(n));
        }
        if entries.len() != n * n {
            return Err(LatticeError::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(LatticeError::NonFinite);
        }
        Ok(Self { n, entries })
    }

    pub fn identity(n: usize) -> Self {
        let n = n.clamp(1, 2);
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            entries[i * n + i] = Complex64::new(1.0, 0.0);
        }
        Self { n, entries }
    }

    pub fn from_real(n: usize, entries: &[f64]) -> Result<Self, LatticeError> {
        Self::new(n, entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        let scale = self
            .entries
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            .max(1.0);
        self.entries.iter().all(|z| z.im.abs() <= tol * scale)
    }

    pub fn det(&self) -> Complex64 {
        match self.n {
            1 => self.entries[0],
            _ => self.entries[0] * self.entries[3] - self.entries[1] * self.entries[2],
        }
    }

    /// Spectral condition number; infinite for singular matrices.
    pub fn condition_number(&self) -> f64 {
        let det = self.det().norm();
        if det == 0.0 {
            return f64::INFINITY;
        }
        if self.n == 1 {
            return 1.0;
        }
        let frob: f64 = self.entries.iter().map(|z| z.norm_sqr()).sum();
        let disc = (frob * frob - 4.0 * det * det).max(0.0).sqrt();
        let s1_sq = 0.5 * (frob + disc);
        s1_sq / det
    }

    pub fn inverse(&self) -> Result<Self, LatticeError> {
        let condition = self.condition_number();
        if !condition.is_finite() || condition > 1e15 {
            return Err(LatticeError::SingularMatrix { condition });
        }
        let d = self.det();
        let entries = match self.n {
            1 => vec![d.inv()],
            _ => {
                let inv = d.inv();
                vec![
                    self.entries[3] * inv,
                    -self.entries[1] * inv,
                    -self.entries[2] * inv,
                    self.entries[0] * inv,
                ]
            }
        };
        Ok(Self { n: self.n, entries })
    }

    /// # Panics
    /// Panics if `v` does not have dimension `self.dim()`.
    pub fn apply(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(v.dim(), self.n, "dimension mismatch");
        let coords = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v.get(j)).sum())
            .collect();
        ComplexVector { coords }
    }
}

/// A finitely generated discrete subgroup ℤλ₁ ⊕ … ⊕ ℤλ_r of ℂⁿ.
#[derive(Clone, Debug)]
pub struct DiscreteSubgroup {
    dim: usize,
    generators: Vec<ComplexVector>,
    tol: f64,
    // Working basis: Gauss-reduced for rank-2 lattices of C, else the generators.
    basis: Vec<ComplexVector>,
    // Left pseudo-inverse of the real (2n × r) basis matrix.
    pinv: DMatrix<f64>,
}

impl DiscreteSubgroup {
    pub fn new(dim: usize, generators: Vec<ComplexVector>) -> Result<Self, LatticeError> {
        Self::with_tol(dim, generators, DEFAULT_TOL)
    }

    pub fn trivial(dim: usize) -> Self {
        Self::new(dim.clamp(1, 2), Vec::new()).expect("trivial group is well formed")
    }

    pub fn with_tol(
        dim: usize,
        generators: Vec<ComplexVector>,
        tol: f64,
    ) -> Result<Self, LatticeError> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(LatticeError::BadTolerance);
        }
        if dim == 0 || dim > 2 {
            return Err(LatticeError::BadDimension(dim));
        }
        if let Some(g) = generators.iter().find(|g| g.dim() != dim) {
            return Err(LatticeError::DimensionMismatch {
                expected: dim,
                found: g.dim(),
            });
        }
        if generators.len() > 2 * dim {
            return Err(LatticeError::TooManyGenerators {
                count: generators.len(),
                max: 2 * dim,
            });
        }
        if !generators.is_empty() {
            let sv = real_matrix(&generators).singular_values();
            let max = sv.max();
            let min = sv.min();
            let ratio = if max > 0.0 { min / max } else { 0.0 };
            if !(ratio > tol) {
                return Err(LatticeError::DegenerateGenerators { ratio });
            }
        }
        let basis = if dim == 1 && generators.len() == 2 {
            let red = gauss_reduce(generators[0].get(0), generators[1].get(0));
            vec![
                ComplexVector::scalar(red.omega1),
                ComplexVector::scalar(red.omega2),
            ]
        } else {
            generators.clone()
        };
        let pinv = if basis.is_empty() {
            DMatrix::zeros(0, 2 * dim)
        } else {
            real_matrix(&basis)
                .pseudo_inverse(0.0)
                .map_err(|_| LatticeError::DegenerateGenerators { ratio: 0.0 })?
        };
        Ok(Self {
            dim,
            generators,
            tol,
            basis,
            pinv,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn generators(&self) -> &[ComplexVector] {
        &self.generators
    }

    /// ℤ-rank; the generators were validated as ℝ-independent at construction.
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// The basis used for integer decisions (Gauss-reduced in the rank-2 case of ℂ).
    pub fn working_basis(&self) -> &[ComplexVector] {
        &self.basis
    }

    fn real_coordinates(&self, x: &ComplexVector) -> Vec<f64> {
        let xr = nalgebra::DVector::from_vec(x.real_parts());
        (&self.pinv * xr).iter().copied().collect()
    }

    fn combination(&self, k: &[i64]) -> ComplexVector {
        let mut acc = ComplexVector::zero(self.dim);
        for (b, &m) in self.basis.iter().zip(k) {
            acc = &acc + &b.scale_int(m);
        }
        acc
    }

    /// Integer coordinates of `x` in the working basis, if `x` is in the group.
    pub fn integer_coordinates(&self, x: &ComplexVector) -> Option<Vec<i64>> {
        if x.dim() != self.dim {
            return None;
        }
        if self.basis.is_empty() {
            return (x.norm() <= self.tol).then(Vec::new);
        }
        let c = self.real_coordinates(x);
        let k: Vec<i64> = c.iter().map(|v| v.round() as i64).collect();
        if c.iter()
            .zip(&k)
            .any(|(v, &m)| (v - m as f64).abs() >= self.tol)
        {
            return None;
        }
        let residual = (x - &self.combination(&k)).norm();
        (residual < self.tol * (1.0 + x.norm())).then_some(k)
    }

    pub fn contains(&self, x: &ComplexVector) -> bool {
        self.integer_coordinates(x).is_some()
    }

    pub fn is_real(&self) -> bool {
        self.generators.iter().all(|g| self.contains(&g.conj()))
    }

    pub fn conj(&self) -> Self {
        Self::with_tol(
            self.dim,
            self.generators.iter().map(|g| g.conj()).collect(),
            self.tol,
        )
        .expect("conjugation preserves independence")
    }

    /// Image of the group under the linear map `alpha_inv`.
    pub fn transform(&self, alpha_inv: &CMatrix) -> Result<Self, LatticeError> {
        if alpha_inv.dim() != self.dim {
            return Err(LatticeError::DimensionMismatch {
                expected: self.dim,
                found: alpha_inv.dim(),
            });
        }
        let condition = alpha_inv.condition_number();
        if !(condition <= 1.0 / self.tol) {
            return Err(LatticeError::SingularMatrix { condition });
        }
        let gens = self.generators.iter().map(|g| alpha_inv.apply(g)).collect();
        Self::with_tol(self.dim, gens, self.tol)
    }

    pub fn real_rank1_form(&self) -> Result<RealRank1Form, LatticeError> {
        if self.dim != 1 || self.rank() != 1 {
            return Err(LatticeError::NotRank1);
        }
        let g = self.generators[0].get(0);
        let len = g.norm();
        Ok(if g.im.abs() < self.tol * len {
            RealRank1Form::RealAxis(len)
        } else if g.re.abs() < self.tol * len {
            RealRank1Form::ImagAxis(len)
        } else {
            RealRank1Form::NotRealRank1
        })
    }

    /// For a real rank-2 lattice Λ of ℂ, the positive generators a, b of
    /// Λ ∩ ℝ = ⟨a⟩ and Λ ∩ iℝ = ⟨ib⟩. `None` if either intersection is not
    /// found inside the coefficient box.
    pub fn axis_generators(&self, coeff_box: i64) -> Option<(f64, f64)> {
        if self.dim != 1 || self.rank() != 2 {
            return None;
        }
        let (b1, b2) = (self.basis[0].get(0), self.basis[1].get(0));
        let mut real: Option<f64> = None;
        let mut imag: Option<f64> = None;
        for m in -coeff_box..=coeff_box {
            for n in -coeff_box..=coeff_box {
                if m == 0 && n == 0 {
                    continue;
                }
                let z = b1 * m as f64 + b2 * n as f64;
                let len = z.norm();
                if z.im.abs() <= self.tol * len.max(1.0) && real.map_or(true, |r| len < r) {
                    real = Some(len);
                }
                if z.re.abs() <= self.tol * len.max(1.0) && imag.map_or(true, |r| len < r) {
                    imag = Some(len);
                }
            }
        }
        Some((real?, imag?))
    }
}

impl fmt::Display for DiscreteSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "<{}>", parts.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RealRank1Form {
    RealAxis(f64),
    ImagAxis(f64),
    NotRealRank1,
}

fn real_matrix(gens: &[ComplexVector]) -> DMatrix<f64> {
    let rows = 2 * gens[0].dim();
    DMatrix::from_fn(rows, gens.len(), |i, j| gens[j].real_parts()[i])
}

pub fn is_sublattice(g1: &DiscreteSubgroup, g2: &DiscreteSubgroup) -> bool {
    g1.dim == g2.dim && g1.generators.iter().all(|g| g2.contains(g))
}

/// Integer matrix T with G1's generators = T · (G2's working basis), row-wise.
fn transition(g1: &DiscreteSubgroup, g2: &DiscreteSubgroup) -> Result<Vec<Vec<i64>>, LatticeError> {
    if g1.dim != g2.dim {
        return Err(LatticeError::DimensionMismatch {
            expected: g2.dim,
            found: g1.dim,
        });
    }
    g1.generators
        .iter()
        .map(|g| {
            g2.integer_coordinates(g)
                .ok_or(LatticeError::NotASublattice)
        })
        .collect()
}

/// The index [G2 : G1] of a sublattice of equal rank.
pub fn index(g1: &DiscreteSubgroup, g2: &DiscreteSubgroup) -> Result<u64, LatticeError> {
    let t = transition(g1, g2)?;
    if g1.rank() != g2.rank() {
        return Err(LatticeError::RankMismatch {
            sub: g1.rank(),
            sup: g2.rank(),
        });
    }
    if t.is_empty() {
        return Ok(1);
    }
    let exact = int_det(&t);
    let approx: Vec<Vec<f64>> = g1
        .generators
        .iter()
        .map(|g| g2.real_coordinates(g))
        .collect();
    let residual = (float_det(approx) - exact as f64).abs();
    if residual >= g2.tol * (exact.unsigned_abs() as f64).max(1.0) {
        return Err(LatticeError::NonIntegerTransition { residual });
    }
    Ok(exact.unsigned_abs() as u64)
}

pub fn coset_representatives(
    g1: &DiscreteSubgroup,
    g2: &DiscreteSubgroup,
) -> Result<Vec<ComplexVector>, LatticeError> {
    coset_representatives_in_box(g1, g2, DEFAULT_COEFF_BOX)
}

/// Representatives of G2/G1, enumerated over non-negative coefficient vectors
/// of G2's working basis in order of increasing max-norm.
pub fn coset_representatives_in_box(
    g1: &DiscreteSubgroup,
    g2: &DiscreteSubgroup,
    coeff_box: i64,
) -> Result<Vec<ComplexVector>, LatticeError> {
    let m = index(g1, g2)?;
    let r = g2.rank();
    if r == 0 {
        return Ok(vec![ComplexVector::zero(g2.dim)]);
    }
    let t: Vec<Vec<i128>> = transition(g1, g2)?
        .into_iter()
        .map(|row| row.into_iter().map(i128::from).collect())
        .collect();
    // k ≡ k' (mod rows of T) iff adj(Tᵀ)(k − k') ≡ 0 (mod det T).
    let tt: Vec<Vec<i128>> = (0..r).map(|i| (0..r).map(|j| t[j][i]).collect()).collect();
    let adj = adjugate(&tt);
    let d = m as i128;
    let key = |k: &[i64]| -> Vec<i128> {
        adj.iter()
            .map(|row| {
                row.iter()
                    .zip(k)
                    .map(|(a, &b)| a * b as i128)
                    .sum::<i128>()
                    .rem_euclid(d)
            })
            .collect()
    };
    let limit = (m as i64 - 1).min(coeff_box);
    let mut seen: Vec<Vec<i128>> = Vec::new();
    let mut reps = Vec::new();
    'shells: for s in 0..=limit {
        let mut k = vec![0i64; r];
        loop {
            if k.iter().copied().max() == Some(s) {
                let kk = key(&k);
                if !seen.contains(&kk) {
                    seen.push(kk);
                    reps.push(g2.combination(&k));
                    if reps.len() as u64 == m {
                        break 'shells;
                    }
                }
            }
            // Lexicographic increment over [0, s]^r.
            let mut i = r;
            loop {
                if i == 0 {
                    continue 'shells;
                }
                i -= 1;
                if k[i] < s {
                    k[i] += 1;
                    break;
                }
                k[i] = 0;
            }
        }
    }
    if (reps.len() as u64) < m {
        return Err(LatticeError::CosetBoxExhausted {
            found: reps.len(),
            expected: m,
        });
    }
    Ok(reps)
}

/// Smallest a ∈ 1..=a_max with a·G1 ⊆ G2, for real lattices of ℂ.
pub fn common_real_sublattice(
    g1: &DiscreteSubgroup,
    g2: &DiscreteSubgroup,
    a_max: u64,
) -> Result<Option<(DiscreteSubgroup, u64)>, LatticeError> {
    for g in [g1, g2] {
        if g.dim != 1 || g.rank() != 2 {
            return Err(LatticeError::NotFullLattice);
        }
        if !g.is_real() {
            return Err(LatticeError::NotRealLattice);
        }
    }
    for a in 1..=a_max {
        let scaled: Vec<ComplexVector> = g1
            .generators
            .iter()
            .map(|g| g.scale_int(a as i64))
            .collect();
        if scaled.iter().all(|g| g2.contains(g)) {
            return Ok(Some((DiscreteSubgroup::with_tol(1, scaled, g1.tol)?, a)));
        }
    }
    Ok(None)
}

fn int_det(m: &[Vec<i64>]) -> i128 {
    bareiss_det(
        m.iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect(),
    )
}

fn bareiss_det(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn adjugate(a: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = a.len();
    if n == 1 {
        return vec![vec![1]];
    }
    let mut adj = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i128>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| a[r][c]).collect())
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[i][j] = sign * bareiss_det(minor);
        }
    }
    adj
}

fn float_det(m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    DMatrix::from_fn(n, n, |i, j| m[i][j]).determinant()
}

/// A lattice ⟨ω₁, ω₂⟩ of ℂ, oriented so that Im(ω₂/ω₁) > 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lattice1 {
    omega1: Complex64,
    omega2: Complex64,
}

impl Lattice1 {
    /// Builds the lattice, swapping the generators if needed for positive orientation.
    pub fn new(omega1: Complex64, omega2: Complex64) -> Result<Self, LatticeError> {
        if [omega1, omega2]
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(LatticeError::NonFinite);
        }
        let cross = (omega2 * omega1.conj()).im;
        let scale = omega1.norm() * omega2.norm();
        if !(cross.abs() > DEFAULT_TOL * scale) {
            return Err(LatticeError::DegenerateGenerators {
                ratio: if scale > 0.0 {
                    cross.abs() / scale
                } else {
                    0.0
                },
            });
        }
        Ok(if cross > 0.0 {
            Self { omega1, omega2 }
        } else {
            Self {
                omega1: omega2,
                omega2: omega1,
            }
        })
    }

    /// The rectangular lattice ⟨1, ia⟩.
    pub fn rectangular(a: f64) -> Result<Self, LatticeError> {
        Self::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, a))
    }

    pub fn from_subgroup(g: &DiscreteSubgroup) -> Result<Self, LatticeError> {
        if g.dim() != 1 || g.rank() != 2 {
            return Err(LatticeError::NotFullLattice);
        }
        Self::new(g.generators()[0].get(0), g.generators()[1].get(0))
    }

    pub fn omega1(&self) -> Complex64 {
        self.omega1
    }

    pub fn omega2(&self) -> Complex64 {
        self.omega2
    }

    pub fn periods(&self) -> [Complex64; 2] {
        [self.omega1, self.omega2]
    }

    pub fn max_abs(&self) -> f64 {
        self.omega1.norm().max(self.omega2.norm())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.omega1.conj(), self.omega2.conj())
            .expect("conjugation preserves independence")
    }

    pub fn scale(&self, c: Complex64) -> Result<Self, LatticeError> {
        Self::new(self.omega1 * c, self.omega2 * c)
    }

    pub fn to_subgroup(&self) -> DiscreteSubgroup {
        DiscreteSubgroup::new(
            1,
            vec![
                ComplexVector::scalar(self.omega1),
                ComplexVector::scalar(self.omega2),
            ],
        )
        .expect("validated lattice")
    }

    pub fn is_real(&self) -> bool {
        self.to_subgroup().is_real()
    }
}

impl fmt::Display for Lattice1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "<{}, {}>",
            fmt_complex(self.omega1),
            fmt_complex(self.omega2)
        )
    }
}

/// Gauss-reduced basis together with the unimodular change of basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReducedBasis {
    pub omega1: Complex64,
    pub omega2: Complex64,
    /// Rows express the reduced basis in the input basis.
    pub to_input: [[i64; 2]; 2],
}

impl ReducedBasis {
    /// Rows express the input basis in the reduced basis.
    pub fn from_input(&self) -> [[i64; 2]; 2] {
        let [[a, b], [c, d]] = self.to_input;
        let det = a * d - b * c;
        [[d * det, -b * det], [-c * det, a * det]]
    }
}

/// Lagrange–Gauss reduction of a basis of a lattice in ℂ ≅ ℝ².
/// The result satisfies |ω₁| ≤ |ω₂|, |Re(ω₂ ω̄₁)| ≤ |ω₁|²/2 and Im(ω₂/ω₁) > 0.
pub fn gauss_reduce(w1: Complex64, w2: Complex64) -> ReducedBasis {
    let (mut a, mut b) = (w1, w2);
    let (mut ua, mut ub) = ([1i64, 0], [0i64, 1]);
    if b.norm_sqr() < a.norm_sqr() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut ua, &mut ub);
    }
    for _ in 0..200 {
        let mu = ((b * a.conj()).re / a.norm_sqr()).round();
        if mu != 0.0 {
            b -= a * mu;
            let m = mu as i64;
            ub = [ub[0] - m * ua[0], ub[1] - m * ua[1]];
        }
        if b.norm_sqr() < a.norm_sqr() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut ua, &mut ub);
        } else {
            break;
        }
    }
    if (b * a.conj()).im < 0.0 {
        b = -b;
        ub = [-ub[0], -ub[1]];
    }
    ReducedBasis {
        omega1: a,
        omega2: b,
        to_input: [ua, ub],
    }
}
