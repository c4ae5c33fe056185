//! Canonical forms and isomorphism verdicts.
//!
//! In dimension one every real structure is isomorphic to exactly one of
//! `id`, `exp`, `sin` or ℘ on ⟨1, ia⟩ with a > 0, and two ℘ forms ⟨1, ia⟩,
//! ⟨1, ib⟩ are isomorphic iff a/b is rational. Rationality is tested
//! numerically; a verdict that floats cannot settle is `Undetermined` unless
//! both descriptors carry an exact tag for their parameter.
//!
//! In dimension two the six families are pairwise non-isomorphic. Families
//! with different ℤ-ranks are separated by the rank; P3 and P4 share rank 2
//! and are separated by a transcendence argument that yields no computable
//! invariant, so that verdict is reported as a citation. Nothing is decided
//! inside a family.

use std::fmt;
use thiserror::Error;

use crate::lattice::{LatticeError, RealRank1Form, DEFAULT_COEFF_BOX};
use crate::structures::{ExactClass, Family, Structure, StructureError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error("structure is not real")]
    NotRealStructure,
    #[error("expected dimension {expected}, got {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("period group of rank {0} in dimension one")]
    RankOutOfRange(usize),
    #[error("family {family} has rank {expected} but the computed period group has rank {found}")]
    InternalInconsistency {
        family: String,
        expected: usize,
        found: usize,
    },
    #[error("no rectangular sublattice found within the coefficient box")]
    NoAxisGenerators,
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassifyConfig {
    pub max_denominator: u64,
    pub tol: f64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self {
            max_denominator: 1_000_000,
            tol: 1e-9,
        }
    }
}

/// First continued-fraction convergent p/q of `x` with q ≤ `max_denominator`
/// and |x − p/q| < tol/q².
pub fn rational_detect(x: f64, max_denominator: u64, tol: f64) -> Option<(i64, u64)> {
    if !x.is_finite() || max_denominator < 1 {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e18 {
            return None;
        }
        let ai = a as i128;
        let (p2, q2) = (ai * p1 + p0, ai * q1 + q0);
        if q2 > max_denominator as i128 {
            return None;
        }
        let qf = q2 as f64;
        if (x - p2 as f64 / qf).abs() < tol / (qf * qf) {
            return Some((p2 as i64, q2 as u64));
        }
        let frac = r - a;
        if frac == 0.0 {
            return None;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        r = 1.0 / frac;
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Canonical1d {
    Id,
    Exp,
    Sin,
    /// ℘ on ⟨1, ia⟩.
    WpNormalized {
        a: f64,
    },
}

impl Canonical1d {
    pub fn rank(&self) -> usize {
        match self {
            Canonical1d::Id => 0,
            Canonical1d::Exp | Canonical1d::Sin => 1,
            Canonical1d::WpNormalized { .. } => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Canonical1d::Id => "id",
            Canonical1d::Exp => "exp",
            Canonical1d::Sin => "sin",
            Canonical1d::WpNormalized { .. } => "wp",
        }
    }
}

impl fmt::Display for Canonical1d {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Canonical1d::WpNormalized { a } => write!(f, "wp <1, {a}i>"),
            other => f.write_str(other.name()),
        }
    }
}

/// One step of a decision, tagged by the kind of argument it uses.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    pub kind: &'static str,
    pub detail: String,
}

fn step(kind: &'static str, detail: impl Into<String>) -> TraceStep {
    TraceStep {
        kind,
        detail: detail.into(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification1d {
    pub canonical: Canonical1d,
    pub rank: usize,
    pub exact: Option<ExactClass>,
    pub trace: Vec<TraceStep>,
}

pub fn classify_1d(s: &Structure) -> Result<Classification1d, ClassifyError> {
    let d = s.descriptor();
    if d.dim() != 1 {
        return Err(ClassifyError::WrongDimension {
            expected: 1,
            found: d.dim(),
        });
    }
    if !d.is_real_structure() {
        return Err(ClassifyError::NotRealStructure);
    }
    let group = s.period_group()?.group;
    let rank = group.rank();
    let mut trace = vec![step(
        "rank",
        format!("period group {group} has rank {rank}"),
    )];
    let canonical = match rank {
        0 => Canonical1d::Id,
        1 => match group.real_rank1_form()? {
            RealRank1Form::ImagAxis(p) => {
                trace.push(step(
                    "axis",
                    format!("periods on the imaginary axis, generator {p}i"),
                ));
                Canonical1d::Exp
            }
            RealRank1Form::RealAxis(p) => {
                trace.push(step(
                    "axis",
                    format!("periods on the real axis, generator {p}"),
                ));
                Canonical1d::Sin
            }
            RealRank1Form::NotRealRank1 => return Err(ClassifyError::NotRealStructure),
        },
        2 => {
            let (re, im) = group
                .axis_generators(DEFAULT_COEFF_BOX)
                .ok_or(ClassifyError::NoAxisGenerators)?;
            trace.push(step(
                "axis",
                format!(
                    "rectangular sublattice <{re}, {im}i>; rescaling by 1/{re} gives <1, {}i>",
                    im / re
                ),
            ));
            Canonical1d::WpNormalized { a: im / re }
        }
        r => return Err(ClassifyError::RankOutOfRange(r)),
    };
    Ok(Classification1d {
        canonical,
        rank,
        exact: d.exact(),
        trace,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Isomorphic,
    NotIsomorphic,
    Undetermined,
}

impl Outcome {
    pub fn name(&self) -> &'static str {
        match self {
            Outcome::Isomorphic => "Isomorphic",
            Outcome::NotIsomorphic => "NotIsomorphic",
            Outcome::Undetermined => "Undetermined",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub ranks: (usize, usize),
    /// Parameter ratio p/q when rationality decided the verdict.
    pub ratio: Option<(i64, u64)>,
    pub reason: Vec<TraceStep>,
}

/// Canonical forms of both sides, then the rational-ratio test for two ℘ forms.
pub fn isomorphic_1d(
    s1: &Structure,
    s2: &Structure,
    cfg: &ClassifyConfig,
) -> Result<Verdict, ClassifyError> {
    let c1 = classify_1d(s1)?;
    let c2 = classify_1d(s2)?;
    let ranks = (c1.rank, c2.rank);
    let mut reason = vec![step(
        "rank",
        format!(
            "ranks {} and {}; canonical forms {} and {}",
            c1.rank, c2.rank, c1.canonical, c2.canonical
        ),
    )];
    let verdict = |outcome, ratio, reason| {
        Ok(Verdict {
            outcome,
            ranks,
            ratio,
            reason,
        })
    };
    match (c1.canonical, c2.canonical) {
        (x, y) if x.rank() != y.rank() => {
            reason.push(step(
                "rank",
                "isomorphic structures have period groups of equal rank",
            ));
            verdict(Outcome::NotIsomorphic, None, reason)
        }
        (Canonical1d::WpNormalized { a }, Canonical1d::WpNormalized { a: b }) => {
            let x = a / b;
            if let (Some(e1), Some(e2)) = (c1.exact, c2.exact) {
                reason.push(step(
                    "exact",
                    format!("parameters tagged {} and {}", e1.name(), e2.name()),
                ));
                return if e1 == e2 {
                    reason.push(step(
                        "ratio",
                        "ratio of parameters in the same class is rational",
                    ));
                    verdict(
                        Outcome::Isomorphic,
                        rational_detect(x, cfg.max_denominator, cfg.tol),
                        reason,
                    )
                } else {
                    reason.push(step(
                        "ratio",
                        "a rational multiple of pi over a rational is irrational",
                    ));
                    verdict(Outcome::NotIsomorphic, None, reason)
                };
            }
            match rational_detect(x, cfg.max_denominator, cfg.tol) {
                Some((p, q)) => {
                    reason.push(step("ratio", format!("a/b = {x} = {p}/{q}")));
                    verdict(Outcome::Isomorphic, Some((p, q)), reason)
                }
                None => {
                    reason.push(step(
                        "ratio",
                        format!(
                            "a/b = {x}: no convergent with denominator <= {} within tol {:e}/q^2; \
                             rationality cannot be refuted numerically",
                            cfg.max_denominator, cfg.tol
                        ),
                    ));
                    verdict(Outcome::Undetermined, None, reason)
                }
            }
        }
        (x, y) if x == y => {
            reason.push(step("family", format!("both canonical forms are {x}")));
            verdict(Outcome::Isomorphic, None, reason)
        }
        _ => {
            reason.push(step(
                "axis",
                "periods of exp are imaginary while the periods of sin are real",
            ));
            verdict(Outcome::NotIsomorphic, None, reason)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification2d {
    pub family: u8,
    pub rank: usize,
    pub trace: Vec<TraceStep>,
}

pub fn classify_2d(s: &Structure) -> Result<Classification2d, ClassifyError> {
    let d = s.descriptor();
    let family = d.family().index_2d().ok_or(ClassifyError::WrongDimension {
        expected: 2,
        found: d.dim(),
    })?;
    let rank = s.z_rank()?;
    let expected = d.family().expected_rank();
    if rank != expected {
        return Err(ClassifyError::InternalInconsistency {
            family: d.family().name().into(),
            expected,
            found: rank,
        });
    }
    let trace = vec![step(
        "rank",
        format!("family P{family}, period group rank {rank} as expected"),
    )];
    Ok(Classification2d {
        family,
        rank,
        trace,
    })
}

fn family_of(s: &Structure) -> &Family {
    s.descriptor().family()
}

pub fn compare_2d(s1: &Structure, s2: &Structure) -> Result<Verdict, ClassifyError> {
    for s in [s1, s2] {
        if !s.descriptor().is_real_structure() {
            return Err(ClassifyError::NotRealStructure);
        }
    }
    let c1 = classify_2d(s1)?;
    let c2 = classify_2d(s2)?;
    let ranks = (c1.rank, c2.rank);
    let mut reason = vec![step(
        "family",
        format!("families P{} and P{}", c1.family, c2.family),
    )];
    let outcome = if c1.family == c2.family {
        reason.push(step(
            "family",
            format!(
                "no isomorphism criterion is known inside family {}",
                family_of(s1).name()
            ),
        ));
        Outcome::Undetermined
    } else if c1.rank != c2.rank {
        reason.push(step(
            "rank",
            format!("ranks {} and {} differ", c1.rank, c2.rank),
        ));
        Outcome::NotIsomorphic
    } else {
        reason.push(step(
            "family",
            format!(
                "family separation, equal ranks {}: P3 and P4 are not isomorphic (transcendence argument, no computed invariant)",
                c1.rank
            ),
        ));
        Outcome::NotIsomorphic
    };
    Ok(Verdict {
        outcome,
        ranks,
        ratio: None,
        reason,
    })
}
