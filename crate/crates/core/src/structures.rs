//! Model structures in dimensions one and two.
//!
//! A descriptor names one of the model maps, optionally precomposed with an
//! invertible linear map α:
//!
//! | family | map                                 | period group                         |
//! |--------|-------------------------------------|--------------------------------------|
//! | Id     | u                                   | 0                                    |
//! | Exp    | eᵘ                                  | ⟨2πi⟩                                |
//! | Sin    | sin u                               | ⟨2π⟩                                 |
//! | ℘      | ℘_Λ(u)                              | Λ                                    |
//! | P1     | (u, v)                              | 0                                    |
//! | P2     | (eᵘ, v)                             | ⟨(2πi, 0)⟩                           |
//! | P3     | (eᵘ, eᵛ)                            | ⟨(2πi, 0), (0, 2πi)⟩                 |
//! | P4     | (℘_Ω(u), v − aζ_Ω(u))               | ⟨(ω_i, 2aζ_Ω(ω_i/2))⟩                |
//! | P5     | (℘_Ω(u), σ_Ω(u − a)eᵛ/σ_Ω(u))       | ⟨(ω_i, 2aζ_Ω(ω_i/2)), (0, 2πi)⟩      |
//! | P6     | (℘_{Ω₁}(u), ℘_{Ω₂}(v))              | Ω₁ × 0 + 0 × Ω₂                      |
//!
//! Precomposing with α replaces the period group Λ by α⁻¹Λ.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

use crate::lattice::{
    CMatrix, ComplexVector, DiscreteSubgroup, Lattice1, LatticeError, DEFAULT_TOL,
};
use crate::parse::{parse_complex, parse_lattice, ParseError};
use crate::report::fmt_complex;
use crate::weierstrass::{EvalResult, WeierstrassConfig, WeierstrassContext, WeierstrassError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StructureError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("descriptor file: {0}")]
    Format(String),
}

/// Arithmetic nature of the normalised parameter a of ℘ on ⟨1, ia⟩, when known exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactClass {
    Rational,
    RationalTimesPi,
}

impl ExactClass {
    pub fn name(&self) -> &'static str {
        match self {
            ExactClass::Rational => "rational",
            ExactClass::RationalTimesPi => "rational-times-pi",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "rational" => Some(ExactClass::Rational),
            "rational-times-pi" => Some(ExactClass::RationalTimesPi),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Id,
    Exp,
    Sin,
    Wp(Lattice1),
    P1,
    P2,
    P3,
    P4 { a: u8, omega: Lattice1 },
    P5 { a: Complex64, omega: Lattice1 },
    P6 { omega1: Lattice1, omega2: Lattice1 },
}

impl Family {
    pub fn dim(&self) -> usize {
        match self {
            Family::Id | Family::Exp | Family::Sin | Family::Wp(_) => 1,
            _ => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Id => "id",
            Family::Exp => "exp",
            Family::Sin => "sin",
            Family::Wp(_) => "wp",
            Family::P1 => "P1",
            Family::P2 => "P2",
            Family::P3 => "P3",
            Family::P4 { .. } => "P4",
            Family::P5 { .. } => "P5",
            Family::P6 { .. } => "P6",
        }
    }

    /// Family number 1..=6 in dimension two.
    pub fn index_2d(&self) -> Option<u8> {
        match self {
            Family::P1 => Some(1),
            Family::P2 => Some(2),
            Family::P3 => Some(3),
            Family::P4 { .. } => Some(4),
            Family::P5 { .. } => Some(5),
            Family::P6 { .. } => Some(6),
            _ => None,
        }
    }

    /// The ℤ-rank every member of the family has.
    pub fn expected_rank(&self) -> usize {
        match self {
            Family::Id | Family::P1 => 0,
            Family::Exp | Family::Sin | Family::P2 => 1,
            Family::Wp(_) | Family::P3 | Family::P4 { .. } => 2,
            Family::P5 { .. } => 3,
            Family::P6 { .. } => 4,
        }
    }

    pub fn lattices(&self) -> Vec<Lattice1> {
        match self {
            Family::Wp(l) => vec![*l],
            Family::P4 { omega, .. } | Family::P5 { omega, .. } => vec![*omega],
            Family::P6 { omega1, omega2 } => vec![*omega1, *omega2],
            _ => Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureDescriptor {
    family: Family,
    alpha: CMatrix,
    exact: Option<ExactClass>,
}

impl StructureDescriptor {
    pub fn new(family: Family, alpha: CMatrix) -> Result<Self, StructureError> {
        if alpha.dim() != family.dim() {
            return Err(StructureError::InvalidParameter(format!(
                "alpha is {0}x{0} but the family has dimension {1}",
                alpha.dim(),
                family.dim()
            )));
        }
        alpha.inverse()?;
        if let Family::P4 { a, .. } = family {
            if a > 1 {
                return Err(StructureError::InvalidParameter(format!(
                    "P4 needs a in {{0, 1}}, got {a}"
                )));
            }
        }
        if let Family::P5 { a, .. } = family {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(StructureError::InvalidParameter(
                    "P5 parameter is not finite".into(),
                ));
            }
        }
        Ok(Self {
            family,
            alpha,
            exact: None,
        })
    }

    fn plain(family: Family) -> Self {
        let n = family.dim();
        Self {
            family,
            alpha: CMatrix::identity(n),
            exact: None,
        }
    }

    pub fn id() -> Self {
        Self::plain(Family::Id)
    }

    pub fn exp() -> Self {
        Self::plain(Family::Exp)
    }

    pub fn sin() -> Self {
        Self::plain(Family::Sin)
    }

    pub fn wp(lattice: Lattice1) -> Self {
        Self::plain(Family::Wp(lattice))
    }

    /// ℘ on ⟨1, ia⟩, a > 0.
    pub fn wp_real(a: f64) -> Result<Self, StructureError> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(StructureError::InvalidParameter(format!(
                "a must be positive, got {a}"
            )));
        }
        Ok(Self::wp(Lattice1::rectangular(a)?))
    }

    pub fn p1() -> Self {
        Self::plain(Family::P1)
    }

    pub fn p2() -> Self {
        Self::plain(Family::P2)
    }

    pub fn p3() -> Self {
        Self::plain(Family::P3)
    }

    pub fn p4(a: u8, omega: Lattice1) -> Result<Self, StructureError> {
        Self::new(Family::P4 { a, omega }, CMatrix::identity(2))
    }

    pub fn p5(a: Complex64, omega: Lattice1) -> Result<Self, StructureError> {
        Self::new(Family::P5 { a, omega }, CMatrix::identity(2))
    }

    pub fn p6(omega1: Lattice1, omega2: Lattice1) -> Self {
        Self::plain(Family::P6 { omega1, omega2 })
    }

    /// Precomposes the model map with `alpha` (replacing any previous α).
    pub fn with_alpha(self, alpha: CMatrix) -> Result<Self, StructureError> {
        let exact = self.exact;
        let mut d = Self::new(self.family, alpha)?;
        d.exact = exact;
        Ok(d)
    }

    pub fn with_exact(mut self, exact: ExactClass) -> Self {
        self.exact = Some(exact);
        self
    }

    pub fn dim(&self) -> usize {
        self.family.dim()
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn alpha(&self) -> &CMatrix {
        &self.alpha
    }

    pub fn exact(&self) -> Option<ExactClass> {
        self.exact
    }

    /// α real and every lattice closed under conjugation (and, for P5, a real).
    pub fn is_real_structure(&self) -> bool {
        if !self.alpha.is_real(DEFAULT_TOL) {
            return false;
        }
        if let Family::P5 { a, .. } = self.family {
            if a.im.abs() > DEFAULT_TOL * a.norm().max(1.0) {
                return false;
            }
        }
        self.family.lattices().iter().all(|l| l.is_real())
    }

    /// Serialises to the descriptor file format read by [`parse_descriptor`].
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "dim = {}\nfamily = \"{}\"\n",
            self.dim(),
            self.family.name()
        );
        let lit = |l: &Lattice1| {
            format!(
                "lattice({}, {})",
                fmt_complex(l.omega1()),
                fmt_complex(l.omega2())
            )
        };
        match &self.family {
            Family::Wp(l) => out.push_str(&format!("lattice = \"{}\"\n", lit(l))),
            Family::P4 { a, omega } => {
                out.push_str(&format!("a = \"{a}\"\nlattice = \"{}\"\n", lit(omega)));
            }
            Family::P5 { a, omega } => {
                out.push_str(&format!(
                    "a = \"{}\"\nlattice = \"{}\"\n",
                    fmt_complex(*a),
                    lit(omega)
                ));
            }
            Family::P6 { omega1, omega2 } => {
                out.push_str(&format!(
                    "lattice = [\"{}\", \"{}\"]\n",
                    lit(omega1),
                    lit(omega2)
                ));
            }
            _ => {}
        }
        if !self.alpha.is_identity() {
            let entries: Vec<String> = self
                .alpha
                .entries()
                .iter()
                .map(|z| format!("\"{}\"", fmt_complex(*z)))
                .collect();
            out.push_str(&format!("alpha = [{}]\n", entries.join(", ")));
        }
        if let Some(e) = self.exact {
            out.push_str(&format!("exact = \"{}\"\n", e.name()));
        }
        out
    }
}

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum LatticeField {
    One(String),
    Two(Vec<String>),
}

/// A scalar written either as a literal string ("1+2i", "pi") or as a bare number.
#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum ScalarField {
    Text(String),
    Int(i64),
    Float(f64),
}

impl ScalarField {
    fn value(&self) -> Result<Complex64, StructureError> {
        match self {
            ScalarField::Text(s) => Ok(parse_complex(s)?),
            ScalarField::Int(i) => Ok(Complex64::new(*i as f64, 0.0)),
            ScalarField::Float(x) => Ok(Complex64::new(*x, 0.0)),
        }
    }
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct DescriptorFile {
    dim: u8,
    family: String,
    a: Option<ScalarField>,
    lattice: Option<LatticeField>,
    alpha: Option<Vec<String>>,
    exact: Option<String>,
}

fn lattice1_from(text: &str) -> Result<Lattice1, StructureError> {
    let gens = parse_lattice(text)?;
    if gens.len() != 2 || gens[0].dim() != 1 {
        return Err(StructureError::InvalidParameter(format!(
            "expected two generators in C, got {text:?}"
        )));
    }
    Ok(Lattice1::new(gens[0].get(0), gens[1].get(0))?)
}

/// Splits a product lattice Ω₁ × 0 + 0 × Ω₂ of ℂ² into its factors.
fn product_lattice(text: &str) -> Result<(Lattice1, Lattice1), StructureError> {
    let gens = parse_lattice(text)?;
    let bad = || StructureError::InvalidParameter(format!("{text:?} is not a product lattice"));
    if gens.len() != 4 || gens[0].dim() != 2 {
        return Err(bad());
    }
    let zero = |z: Complex64| z.norm() == 0.0;
    let first: Vec<Complex64> = gens
        .iter()
        .filter(|g| zero(g.get(1)))
        .map(|g| g.get(0))
        .collect();
    let second: Vec<Complex64> = gens
        .iter()
        .filter(|g| zero(g.get(0)))
        .map(|g| g.get(1))
        .collect();
    if first.len() != 2 || second.len() != 2 {
        return Err(bad());
    }
    Ok((
        Lattice1::new(first[0], first[1])?,
        Lattice1::new(second[0], second[1])?,
    ))
}

/// Reads one descriptor document. Unknown fields are rejected.
pub fn parse_descriptor(text: &str) -> Result<StructureDescriptor, StructureError> {
    let file: DescriptorFile =
        toml::from_str(text).map_err(|e| StructureError::Format(e.to_string()))?;
    let missing = |field: &str| {
        StructureError::Format(format!("family {} needs field `{field}`", file.family))
    };
    let single_lattice = || match &file.lattice {
        Some(LatticeField::One(s)) => lattice1_from(s),
        Some(LatticeField::Two(_)) => Err(StructureError::Format(
            "expected a single lattice literal".into(),
        )),
        None => Err(missing("lattice")),
    };
    let family = match file.family.to_ascii_lowercase().as_str() {
        "id" => Family::Id,
        "exp" => Family::Exp,
        "sin" => Family::Sin,
        "wp" => Family::Wp(single_lattice()?),
        "wp-real" => {
            let a = file.a.as_ref().ok_or_else(|| missing("a"))?.value()?;
            if a.im != 0.0 || !(a.re > 0.0) {
                return Err(StructureError::InvalidParameter(
                    "wp-real needs a real a > 0".into(),
                ));
            }
            Family::Wp(Lattice1::rectangular(a.re)?)
        }
        "p1" => Family::P1,
        "p2" => Family::P2,
        "p3" => Family::P3,
        "p4" => {
            let a = file.a.as_ref().ok_or_else(|| missing("a"))?.value()?;
            let a = match (a.re, a.im) {
                (x, y) if x == 0.0 && y == 0.0 => 0,
                (x, y) if x == 1.0 && y == 0.0 => 1,
                _ => {
                    return Err(StructureError::InvalidParameter(
                        "P4 needs a in {0, 1}".into(),
                    ))
                }
            };
            Family::P4 {
                a,
                omega: single_lattice()?,
            }
        }
        "p5" => {
            let a = file.a.as_ref().ok_or_else(|| missing("a"))?.value()?;
            Family::P5 {
                a,
                omega: single_lattice()?,
            }
        }
        "p6" => {
            let (omega1, omega2) = match &file.lattice {
                Some(LatticeField::One(s)) => product_lattice(s)?,
                Some(LatticeField::Two(v)) if v.len() == 2 => {
                    (lattice1_from(&v[0])?, lattice1_from(&v[1])?)
                }
                Some(LatticeField::Two(_)) => {
                    return Err(StructureError::Format(
                        "P6 needs exactly two lattices".into(),
                    ))
                }
                None => return Err(missing("lattice")),
            };
            Family::P6 { omega1, omega2 }
        }
        other => return Err(StructureError::Format(format!("unknown family {other:?}"))),
    };
    if file.dim as usize != family.dim() {
        return Err(StructureError::Format(format!(
            "family {} has dimension {}, file says {}",
            family.name(),
            family.dim(),
            file.dim
        )));
    }
    let n = family.dim();
    let alpha = match &file.alpha {
        Some(entries) => {
            let vals = entries
                .iter()
                .map(|s| parse_complex(s))
                .collect::<Result<Vec<_>, _>>()?;
            CMatrix::new(n, vals)?
        }
        None => CMatrix::identity(n),
    };
    let mut d = StructureDescriptor::new(family, alpha)?;
    if let Some(e) = &file.exact {
        d.exact = Some(
            ExactClass::from_name(e)
                .ok_or_else(|| StructureError::Format(format!("unknown exact class {e:?}")))?,
        );
    }
    Ok(d)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StructureConfig {
    pub weierstrass: WeierstrassConfig,
    pub tol: f64,
}

impl Default for StructureConfig {
    fn default() -> Self {
        Self {
            weierstrass: WeierstrassConfig::default(),
            tol: DEFAULT_TOL,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PeriodGroupReport {
    pub group: DiscreteSubgroup,
    pub rank: usize,
    pub closed_form: Vec<String>,
}

/// Evaluated map coordinates; `None` marks a pole.
#[derive(Clone, Debug, PartialEq)]
pub struct MapValue {
    pub values: Vec<Option<Complex64>>,
}

impl MapValue {
    pub fn finite(&self) -> Option<Vec<Complex64>> {
        self.values
            .iter()
            .map(|v| v.filter(|z| z.re.is_finite() && z.im.is_finite()))
            .collect()
    }
}

/// A descriptor with the Weierstrass contexts its map needs.
#[derive(Clone, Debug)]
pub struct Structure {
    desc: StructureDescriptor,
    contexts: Vec<WeierstrassContext>,
    alpha_inv: CMatrix,
    tol: f64,
}

fn two_pi_i() -> Complex64 {
    Complex64::new(0.0, 2.0 * PI)
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

impl Structure {
    pub fn new(desc: StructureDescriptor) -> Result<Self, StructureError> {
        Self::with_config(desc, &StructureConfig::default())
    }

    pub fn with_config(
        desc: StructureDescriptor,
        cfg: &StructureConfig,
    ) -> Result<Self, StructureError> {
        let contexts = desc
            .family
            .lattices()
            .into_iter()
            .map(|l| WeierstrassContext::with_config(l, cfg.weierstrass))
            .collect::<Result<Vec<_>, _>>()?;
        let alpha_inv = desc.alpha.inverse()?;
        Ok(Self {
            desc,
            contexts,
            alpha_inv,
            tol: cfg.tol,
        })
    }

    pub fn descriptor(&self) -> &StructureDescriptor {
        &self.desc
    }

    pub fn dim(&self) -> usize {
        self.desc.dim()
    }

    pub fn contexts(&self) -> &[WeierstrassContext] {
        &self.contexts
    }

    /// Period generators of the model map, before the α⁻¹ transform, with labels.
    fn model_periods(&self) -> Vec<(String, ComplexVector)> {
        let pair = ComplexVector::pair;
        match &self.desc.family {
            Family::Id | Family::P1 => Vec::new(),
            Family::Exp => vec![("2πi".into(), ComplexVector::scalar(two_pi_i()))],
            Family::Sin => vec![(
                "2π".into(),
                ComplexVector::scalar(Complex64::new(2.0 * PI, 0.0)),
            )],
            Family::Wp(l) => vec![
                ("ω1".into(), ComplexVector::scalar(l.omega1())),
                ("ω2".into(), ComplexVector::scalar(l.omega2())),
            ],
            Family::P2 => vec![("(2πi, 0)".into(), pair(two_pi_i(), zero()))],
            Family::P3 => vec![
                ("(2πi, 0)".into(), pair(two_pi_i(), zero())),
                ("(0, 2πi)".into(), pair(zero(), two_pi_i())),
            ],
            Family::P4 { a, omega } => {
                let eta = self.contexts[0].eta();
                let a = *a as f64;
                (0..2)
                    .map(|i| {
                        let label = format!("(ω{0}, 2a·ζ(ω{0}/2))", i + 1);
                        (label, pair(omega.periods()[i], eta[i] * a))
                    })
                    .collect()
            }
            Family::P5 { a, omega } => {
                let eta = self.contexts[0].eta();
                let mut v: Vec<(String, ComplexVector)> = (0..2)
                    .map(|i| {
                        let label = format!("(ω{0}, 2a·ζ(ω{0}/2))", i + 1);
                        (label, pair(omega.periods()[i], eta[i] * a))
                    })
                    .collect();
                v.push(("(0, 2πi)".into(), pair(zero(), two_pi_i())));
                v
            }
            Family::P6 { omega1, omega2 } => vec![
                ("(Ω1.ω1, 0)".into(), pair(omega1.omega1(), zero())),
                ("(Ω1.ω2, 0)".into(), pair(omega1.omega2(), zero())),
                ("(0, Ω2.ω1)".into(), pair(zero(), omega2.omega1())),
                ("(0, Ω2.ω2)".into(), pair(zero(), omega2.omega2())),
            ],
        }
    }

    pub fn period_group(&self) -> Result<PeriodGroupReport, StructureError> {
        let raw = self.model_periods();
        let n = self.dim();
        let model =
            DiscreteSubgroup::with_tol(n, raw.iter().map(|(_, g)| g.clone()).collect(), self.tol)?;
        let group = model.transform(&self.alpha_inv)?;
        let mapped = !self.desc.alpha.is_identity();
        let closed_form = raw
            .iter()
            .zip(group.generators())
            .map(|((label, _), g)| {
                if mapped {
                    format!("α⁻¹{label} = {g}")
                } else {
                    format!("{label} = {g}")
                }
            })
            .collect();
        let rank = group.rank();
        Ok(PeriodGroupReport {
            group,
            rank,
            closed_form,
        })
    }

    pub fn z_rank(&self) -> Result<usize, StructureError> {
        Ok(self.period_group()?.rank)
    }

    /// The model map at α·u.
    pub fn evaluate_map(&self, u: &ComplexVector) -> Result<MapValue, StructureError> {
        if u.dim() != self.dim() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.dim(),
                found: u.dim(),
            }
            .into());
        }
        Ok(MapValue {
            values: self.evaluate(u.coords()),
        })
    }

    /// As [`evaluate_map`](Self::evaluate_map) on raw coordinates.
    ///
    /// # Panics
    /// Panics if `u` has the wrong length.
    pub fn evaluate(&self, u: &[Complex64]) -> Vec<Option<Complex64>> {
        self.evaluate_detailed(u)
            .iter()
            .map(EvalResult::finite)
            .collect()
    }

    /// Per-coordinate values with error estimates and pole flags.
    ///
    /// # Panics
    /// Panics if `u` has the wrong length.
    pub fn evaluate_detailed(&self, u: &[Complex64]) -> Vec<EvalResult> {
        let a = &self.desc.alpha;
        let w: Vec<Complex64> = (0..a.dim())
            .map(|i| (0..a.dim()).map(|j| a.get(i, j) * u[j]).sum())
            .collect();
        let exact = |z: Complex64| EvalResult::ok(z, 0.0);
        match &self.desc.family {
            Family::Id => vec![exact(w[0])],
            Family::Exp => vec![exact(w[0].exp())],
            Family::Sin => vec![exact(w[0].sin())],
            Family::Wp(_) => vec![self.contexts[0].wp(w[0])],
            Family::P1 => vec![exact(w[0]), exact(w[1])],
            Family::P2 => vec![exact(w[0].exp()), exact(w[1])],
            Family::P3 => vec![exact(w[0].exp()), exact(w[1].exp())],
            Family::P4 { a, .. } => {
                let ctx = &self.contexts[0];
                let second = if *a == 0 {
                    exact(w[1])
                } else {
                    let z = ctx.zeta(w[0]);
                    match z.finite() {
                        Some(v) => EvalResult::ok(w[1] - v, z.est_error),
                        None => EvalResult::pole(),
                    }
                };
                vec![ctx.wp(w[0]), second]
            }
            Family::P5 { a, .. } => {
                let ctx = &self.contexts[0];
                let p = ctx.wp(w[0]);
                let (num, den) = (ctx.sigma(w[0] - a), ctx.sigma(w[0]));
                let second = match (p.finite(), num.finite(), den.finite()) {
                    (Some(_), Some(n), Some(d)) if d.norm() > 0.0 => {
                        let e = w[1].exp();
                        let err = (num.est_error + n.norm() * den.est_error / d.norm()) / d.norm()
                            * e.norm();
                        EvalResult::ok(n / d * e, err)
                    }
                    _ => EvalResult::pole(),
                };
                vec![if second.pole { EvalResult::pole() } else { p }, second]
            }
            Family::P6 { .. } => vec![self.contexts[0].wp(w[0]), self.contexts[1].wp(w[1])],
        }
    }
}

/// Human-readable parameter summary used in reports.
pub fn describe(desc: &StructureDescriptor) -> String {
    let mut s = desc.family.name().to_string();
    match &desc.family {
        Family::Wp(l) => s.push_str(&format!(" {l}")),
        Family::P4 { a, omega } => s.push_str(&format!(" a={a} Ω={omega}")),
        Family::P5 { a, omega } => s.push_str(&format!(" a={} Ω={omega}", fmt_complex(*a))),
        Family::P6 { omega1, omega2 } => s.push_str(&format!(" Ω1={omega1} Ω2={omega2}")),
        _ => {}
    }
    if !desc.alpha.is_identity() {
        let e: Vec<String> = desc
            .alpha
            .entries()
            .iter()
            .map(|z| fmt_complex(*z))
            .collect();
        s.push_str(&format!(" α=[{}]", e.join(", ")));
    }
    if let Some(e) = desc.exact {
        s.push_str(&format!(" exact={}", e.name()));
    }
    s
}
