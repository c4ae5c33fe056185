//! Numerical detection of polynomial relations among sampled functions.
//!
//! Given functions f₁, …, f_k on ℂᵐ, sample them at random points, build the
//! matrix of every monomial X^e = Π X_j^{e_j} with 0 ≤ e_j ≤ d, and read a
//! relation Σ c_e X^e = 0 off its numerical nullspace. Degrees are tried in
//! increasing order and the first accepted relation is returned.
//!
//! A relation is accepted when the singular spectrum shows a clean gap of at
//! least `gap_threshold` and the relation also vanishes on a fresh set of
//! validation points. Not finding a relation at a degree bound says nothing
//! about independence beyond that bound.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::report::{fmt_f64, Document};
use crate::structures::{Family, Structure, StructureError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RelationError {
    #[error("invalid relation search: {0}")]
    InvalidArgument(String),
    #[error("only {found} of {needed} sample points avoided the poles after {tried} draws")]
    InsufficientSamples {
        needed: usize,
        found: usize,
        tried: usize,
    },
    #[error("no relation up to degree {max_degree} (best gap {best_gap:e}, best validation residual {best_residual:e})")]
    NoRelationFound {
        max_degree: u32,
        best_gap: f64,
        best_residual: f64,
    },
    #[error("degree {degree} needs {monomials} monomials, above the limit of {limit}; no relation found below it")]
    MonomialLimit {
        degree: u32,
        monomials: usize,
        limit: usize,
    },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelationConfig {
    /// Real and imaginary parts of each input coordinate are drawn from [−w, w].
    pub box_half_width: f64,
    pub gap_threshold: f64,
    pub res_tol: f64,
    /// Points where a sampled value exceeds this multiple of the output's median
    /// modulus count as near a pole.
    pub value_bound: f64,
    /// Draw budget per needed point before giving up.
    pub max_draw_factor: usize,
    /// Largest monomial basis a single degree may use.
    pub max_monomials: usize,
}

impl Default for RelationConfig {
    fn default() -> Self {
        Self {
            box_half_width: 1.5,
            gap_threshold: 1e6,
            res_tol: 1e-6,
            value_bound: 1e2,
            max_draw_factor: 20,
            max_monomials: 512,
        }
    }
}

const PILOT: usize = 64;

type SampleFn<'a> = dyn Fn(&[Complex64]) -> Option<Vec<Complex64>> + Sync + 'a;

/// A vector of functions on ℂᵐ evaluated together. `None` marks a pole.
pub struct Samplers<'a> {
    input_dim: usize,
    outputs: usize,
    f: Box<SampleFn<'a>>,
}

impl<'a> Samplers<'a> {
    pub fn new(
        input_dim: usize,
        outputs: usize,
        f: impl Fn(&[Complex64]) -> Option<Vec<Complex64>> + Sync + 'a,
    ) -> Self {
        Self {
            input_dim,
            outputs,
            f: Box::new(f),
        }
    }

    /// Separate scalar functions sharing one input space.
    pub fn from_scalars(
        input_dim: usize,
        fs: Vec<Box<dyn Fn(&[Complex64]) -> Option<Complex64> + Sync + 'a>>,
    ) -> Self {
        let outputs = fs.len();
        Self::new(input_dim, outputs, move |x| {
            fs.iter().map(|f| f(x)).collect()
        })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn eval(&self, x: &[Complex64]) -> Option<Vec<Complex64>> {
        (self.f)(x)
    }
}

/// Exponent vectors with every entry ≤ `degree`, in graded-lex order: by total
/// degree, then lexicographically with X₁ the most significant variable. The
/// constant monomial comes first.
pub fn monomials(arity: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|e| {
                (0..=degree).map(move |k| {
                    let mut f = e.clone();
                    f.push(k);
                    f
                })
            })
            .collect();
    }
    out.sort_by(|a, b| {
        let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
        da.cmp(&db).then_with(|| a.cmp(b))
    });
    out
}

fn monomial_value(x: &[Complex64], e: &[u32]) -> Complex64 {
    x.iter()
        .zip(e)
        .fold(Complex64::new(1.0, 0.0), |acc, (xi, &k)| acc * xi.powu(k))
}

/// A polynomial relation Σ c_e X^e, coefficients unit-norm, the coefficient of
/// the leading monomial real and positive.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationCertificate {
    pub variable_arity: usize,
    /// Bound on each variable's exponent.
    pub max_degree: u32,
    pub exponents: Vec<Vec<u32>>,
    pub coefficients: Vec<Complex64>,
    /// max |P(x)| / Σ|c_e||x^e| over the validation points.
    pub residual: f64,
    pub singular_gap: f64,
    pub nullity: usize,
    pub samples: usize,
}

impl RelationCertificate {
    /// Terms with |c| above `cutoff`.
    pub fn support(&self, cutoff: f64) -> Vec<(&[u32], Complex64)> {
        self.exponents
            .iter()
            .zip(&self.coefficients)
            .filter(|(_, c)| c.norm() > cutoff)
            .map(|(e, c)| (e.as_slice(), *c))
            .collect()
    }

    /// Largest total degree among terms with |c| > 1e−8.
    pub fn total_degree(&self) -> u32 {
        self.support(1e-8)
            .iter()
            .map(|(e, _)| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn coefficient(&self, exponent: &[u32]) -> Complex64 {
        self.exponents
            .iter()
            .position(|e| e == exponent)
            .map(|i| self.coefficients[i])
            .unwrap_or_default()
    }

    pub fn evaluate(&self, x: &[Complex64]) -> Complex64 {
        self.exponents
            .iter()
            .zip(&self.coefficients)
            .map(|(e, c)| c * monomial_value(x, e))
            .sum()
    }

    /// The relation divided by the coefficient of `exponent`.
    pub fn normalized_by(&self, exponent: &[u32]) -> Vec<Complex64> {
        let c = self.coefficient(exponent);
        self.coefficients.iter().map(|x| x / c).collect()
    }

    /// Terms above 1e−10 written out, e.g. `(1+0i)*X1*X2 + (-1+0i)*X3`.
    pub fn pretty(&self) -> String {
        let terms: Vec<String> = self
            .support(1e-10)
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(j, &k)| {
                        if k == 1 {
                            format!("X{}", j + 1)
                        } else {
                            format!("X{}^{k}", j + 1)
                        }
                    })
                    .collect();
                let coeff = format!("({}{:+}i)", short(c.re), ShortF(c.im));
                if mono.is_empty() {
                    coeff
                } else {
                    format!("{coeff}*{}", mono.join("*"))
                }
            })
            .collect();
        terms.join(" + ")
    }

    /// Writes the certificate into a `[name]` section of `doc`.
    pub fn write_to(&self, doc: &mut Document, name: &str) {
        let s = doc.section(name);
        s.set("arity", self.variable_arity)
            .set("degree", self.max_degree as u64)
            .set("total_degree", self.total_degree() as u64)
            .set("nullity", self.nullity)
            .set("samples", self.samples)
            .set("residual", self.residual)
            .set("singular_gap", self.singular_gap)
            .set("relation", self.pretty())
            .set(
                "exponents",
                self.exponents
                    .iter()
                    .map(|e| e.iter().map(|&k| k as u64).collect::<Vec<u64>>())
                    .collect::<Vec<_>>(),
            )
            .set(
                "coefficients",
                self.coefficients
                    .iter()
                    .map(|c| vec![c.re, c.im])
                    .collect::<Vec<_>>(),
            );
    }

    pub fn to_text(&self) -> String {
        let mut doc = Document::new();
        self.write_to(&mut doc, "certificate");
        doc.render()
    }
}

fn short(x: f64) -> String {
    format!("{}", ShortF(x)).trim_start_matches('+').to_string()
}

struct ShortF(f64);

impl std::fmt::Display for ShortF {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let x = if self.0.abs() < 1e-12 { 0.0 } else { self.0 };
        if f.sign_plus() && x >= 0.0 {
            write!(f, "+")?;
        }
        write!(
            f,
            "{}",
            format!("{x:.12}")
                .trim_end_matches('0')
                .trim_end_matches('.')
        )
    }
}

/// Draws `count` points where every sampled value is finite and bounded, and
/// returns them with their values. Draws are sequential so the result only
/// depends on the generator state.
fn draw_points(
    s: &Samplers<'_>,
    count: usize,
    rng: &mut ChaCha8Rng,
    cfg: &RelationConfig,
) -> Result<Vec<Vec<Complex64>>, RelationError> {
    let w = cfg.box_half_width;
    let budget = count * cfg.max_draw_factor.max(1);
    let draw = |k: usize, rng: &mut ChaCha8Rng| -> Vec<Option<Vec<Complex64>>> {
        let pts: Vec<Vec<Complex64>> = (0..k)
            .map(|_| {
                (0..s.input_dim)
                    .map(|_| Complex64::new(rng.gen_range(-w..w), rng.gen_range(-w..w)))
                    .collect()
            })
            .collect();
        pts.par_iter()
            .map(|x| {
                s.eval(x)
                    .filter(|v| v.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
            })
            .collect()
    };
    // Typical modulus of each output, from a pilot draw; values far above it
    // mark points close to a pole.
    let pilot: Vec<Vec<Complex64>> = draw(PILOT, rng).into_iter().flatten().collect();
    let mut tried = PILOT;
    let typical: Vec<f64> = (0..s.outputs)
        .map(|j| {
            let mut mags: Vec<f64> = pilot.iter().map(|v| v[j].norm()).collect();
            mags.sort_by(f64::total_cmp);
            mags.get(mags.len() / 2)
                .copied()
                .filter(|&x| x > 0.0)
                .unwrap_or(1.0)
        })
        .collect();
    let bounded = |v: &Vec<Complex64>| {
        v.iter()
            .zip(&typical)
            .all(|(z, t)| z.norm() <= cfg.value_bound * t)
    };
    let mut values: Vec<Vec<Complex64>> = pilot.into_iter().filter(bounded).take(count).collect();
    while values.len() < count {
        if tried >= budget {
            return Err(RelationError::InsufficientSamples {
                needed: count,
                found: values.len(),
                tried,
            });
        }
        let batch = (count - values.len()).max(8).min(budget - tried);
        tried += batch;
        for v in draw(batch, rng).into_iter().flatten().filter(bounded) {
            if values.len() < count {
                values.push(v);
            }
        }
    }
    Ok(values)
}

struct Attempt {
    coefficients: Option<Vec<Complex64>>,
    gap: f64,
    nullity: usize,
}

/// Nullspace analysis of the sampled monomial matrix.
fn analyse(values: &[Vec<Complex64>], monos: &[Vec<u32>], cfg: &RelationConfig) -> Attempt {
    let (n, m) = (values.len(), monos.len());
    let mut a = DMatrix::<Complex64>::from_fn(n, m, |i, j| monomial_value(&values[i], &monos[j]));
    let scale: Vec<f64> = (0..m)
        .map(|j| {
            let s = (a.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>() / n as f64).sqrt();
            if s > 0.0 {
                s
            } else {
                1.0
            }
        })
        .collect();
    for j in 0..m {
        let inv = 1.0 / scale[j];
        a.column_mut(j).iter_mut().for_each(|z| *z *= inv);
    }
    for i in 0..n {
        let norm = a.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            a.row_mut(i).iter_mut().for_each(|z| *z /= norm);
        }
    }
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
    let sv: Vec<f64> = order.iter().map(|&k| svd.singular_values[k]).collect();
    let smax = sv[0];
    let floor = f64::EPSILON * smax;

    // nullity k: sv[m−k] is the largest discarded value, sv[m−k−1] the smallest kept
    let mut best = (0usize, 0.0f64);
    for k in 1..m {
        let discarded = sv[m - k];
        if discarded > cfg.res_tol * smax {
            break;
        }
        let gap = sv[m - k - 1] / discarded.max(floor);
        if gap > best.1 {
            best = (k, gap);
        }
    }
    let (k, gap) = best;
    if k == 0 || gap < cfg.gap_threshold {
        return Attempt {
            coefficients: None,
            gap,
            nullity: k,
        };
    }

    // Null vectors in the scaled basis, one per row.
    let mut basis: Vec<Vec<Complex64>> = order[m - k..]
        .iter()
        .map(|&r| vt.row(r).iter().map(|z| z.conj()).collect())
        .collect();
    let relation = minimal_relation(&mut basis);
    let mut c: Vec<Complex64> = relation.iter().zip(&scale).map(|(x, s)| x / s).collect();
    let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let lead_cut = 1e-8 * c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let lead = c.iter().rposition(|z| z.norm() > lead_cut).unwrap_or(0);
    let phase = c[lead].conj() / c[lead].norm();
    for z in &mut c {
        *z = *z * phase / norm;
    }
    Attempt {
        coefficients: Some(c),
        gap,
        nullity: k,
    }
}

/// Element of the span of `rows` whose highest-order nonzero entry sits as
/// low as possible: elimination from the last column down.
fn minimal_relation(rows: &mut [Vec<Complex64>]) -> Vec<Complex64> {
    let k = rows.len();
    let m = rows[0].len();
    let mut done = vec![false; k];
    let mut last = 0;
    for col in (0..m).rev() {
        let pick = (0..k)
            .filter(|&r| !done[r])
            .max_by(|&x, &y| rows[x][col].norm().total_cmp(&rows[y][col].norm()));
        let Some(p) = pick else { break };
        let row_norm = rows[p].iter().map(|z| z.norm()).fold(0.0, f64::max);
        if rows[p][col].norm() <= 1e-6 * row_norm {
            continue;
        }
        done[p] = true;
        last = p;
        let pivot = rows[p][col];
        for r in 0..k {
            if !done[r] {
                let f = rows[r][col] / pivot;
                for j in 0..m {
                    let sub = rows[p][j] * f;
                    rows[r][j] -= sub;
                }
            }
        }
    }
    rows[last].clone()
}

fn validation_residual(values: &[Vec<Complex64>], monos: &[Vec<u32>], c: &[Complex64]) -> f64 {
    values
        .par_iter()
        .map(|x| {
            let mut sum = Complex64::new(0.0, 0.0);
            let mut scale = 0.0;
            for (e, ce) in monos.iter().zip(c) {
                let term = ce * monomial_value(x, e);
                sum += term;
                scale += term.norm();
            }
            if scale > 0.0 {
                sum.norm() / scale
            } else {
                0.0
            }
        })
        .reduce(|| 0.0, f64::max)
}

/// Searches degrees 1..=`max_degree` for a polynomial relation among the
/// sampler outputs. Each degree uses max(`n_samples`, 2·#monomials) fitting
/// points and as many validation points.
pub fn find_relation(
    samplers: &Samplers<'_>,
    max_degree: u32,
    n_samples: usize,
    seed: u64,
    cfg: &RelationConfig,
) -> Result<RelationCertificate, RelationError> {
    if max_degree < 1 {
        return Err(RelationError::InvalidArgument(
            "max_degree must be at least 1".into(),
        ));
    }
    if samplers.outputs == 0 {
        return Err(RelationError::InvalidArgument("no samplers".into()));
    }
    if !(cfg.res_tol > 0.0
        && cfg.gap_threshold > 1.0
        && cfg.box_half_width > 0.0
        && cfg.value_bound > 0.0)
    {
        return Err(RelationError::InvalidArgument(format!(
            "bad relation config {cfg:?}"
        )));
    }
    let (mut best_gap, mut best_residual) = (0.0f64, f64::INFINITY);
    for degree in 1..=max_degree {
        let monos = monomials(samplers.outputs, degree);
        if monos.len() > cfg.max_monomials {
            return Err(RelationError::MonomialLimit {
                degree,
                monomials: monos.len(),
                limit: cfg.max_monomials,
            });
        }
        let count = n_samples.max(2 * monos.len());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(2 * degree as u64);
        let fit = draw_points(samplers, count, &mut rng, cfg)?;
        let attempt = analyse(&fit, &monos, cfg);
        best_gap = best_gap.max(attempt.gap);
        let Some(c) = attempt.coefficients else {
            continue;
        };
        rng.set_stream(2 * degree as u64 + 1);
        let check = draw_points(samplers, count, &mut rng, cfg)?;
        let residual = validation_residual(&check, &monos, &c);
        best_residual = best_residual.min(residual);
        if residual < cfg.res_tol {
            return Ok(RelationCertificate {
                variable_arity: samplers.outputs,
                max_degree: degree,
                exponents: monos,
                coefficients: c,
                residual,
                singular_gap: attempt.gap,
                nullity: attempt.nullity,
                samples: count,
            });
        }
    }
    Err(RelationError::NoRelationFound {
        max_degree,
        best_gap,
        best_residual,
    })
}

/// Outcome of a dependence search. `dependent == false` only means no
/// relation was found at the degree bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Dependence {
    pub dependent: bool,
    pub certificate: Option<RelationCertificate>,
    pub max_degree: u32,
    pub best_gap: f64,
}

/// Looks for P(f(u), g(u)) = 0 with u ∈ ℂ.
pub fn dependent(
    f: impl Fn(Complex64) -> Option<Complex64> + Sync,
    g: impl Fn(Complex64) -> Option<Complex64> + Sync,
    max_degree: u32,
    n_samples: usize,
    seed: u64,
    cfg: &RelationConfig,
) -> Result<Dependence, RelationError> {
    let s = Samplers::new(1, 2, |x| Some(vec![f(x[0])?, g(x[0])?]));
    match find_relation(&s, max_degree, n_samples, seed, cfg) {
        Ok(c) => Ok(Dependence {
            dependent: true,
            best_gap: c.singular_gap,
            certificate: Some(c),
            max_degree,
        }),
        Err(RelationError::NoRelationFound { best_gap, .. }) => Ok(Dependence {
            dependent: false,
            certificate: None,
            max_degree,
            best_gap,
        }),
        Err(e) => Err(e),
    }
}

/// Looks for a relation between u ↦ f(u) and u ↦ f(u + a) for a one-dimensional structure.
pub fn translate_algebraicity_check(
    d: &Structure,
    a: Complex64,
    max_degree: u32,
    n_samples: usize,
    seed: u64,
    cfg: &RelationConfig,
) -> Result<Dependence, RelationError> {
    if d.dim() != 1 {
        return Err(RelationError::InvalidArgument(
            "translate check needs a one-dimensional structure".into(),
        ));
    }
    dependent(
        |u| d.evaluate(&[u])[0],
        |u| d.evaluate(&[u + a])[0],
        max_degree,
        n_samples,
        seed,
        cfg,
    )
}

/// Per-coordinate addition-theorem certificates.
#[derive(Clone, Debug, PartialEq)]
pub struct AatReport {
    pub certificates: Vec<RelationCertificate>,
}

/// For each coordinate i, a relation among f₁(u), …, f_n(u), f₁(v), …, f_n(v), f_i(u+v).
pub fn verify_aat(
    d: &Structure,
    max_degree: u32,
    n_samples: usize,
    seed: u64,
    cfg: &RelationConfig,
) -> Result<AatReport, RelationError> {
    let n = d.dim();
    let mut certificates = Vec::with_capacity(n);
    for i in 0..n {
        let s = Samplers::new(2 * n, 2 * n + 1, |x| {
            let (u, v) = x.split_at(n);
            let w: Vec<Complex64> = u.iter().zip(v).map(|(a, b)| a + b).collect();
            let mut out: Vec<Complex64> = d.evaluate(u).into_iter().collect::<Option<_>>()?;
            out.extend(d.evaluate(v).into_iter().collect::<Option<Vec<_>>>()?);
            out.push(d.evaluate(&w)[i]?);
            Some(out)
        });
        let c = find_relation(&s, max_degree, n_samples, seed.wrapping_add(i as u64), cfg)?;
        certificates.push(c);
    }
    Ok(AatReport { certificates })
}

/// Default per-variable degree bound for the addition theorem of each family.
/// These are empirical values, large enough for every family member tried.
pub fn default_aat_degree(family: &Family) -> u32 {
    match family {
        Family::Id | Family::P1 => 1,
        Family::Exp | Family::P2 | Family::P3 => 2,
        Family::Sin | Family::Wp(_) | Family::P4 { .. } | Family::P5 { .. } | Family::P6 { .. } => {
            4
        }
    }
}

/// Summary line for logs.
pub fn describe_certificate(c: &RelationCertificate) -> String {
    format!(
        "degree {} residual {} gap {}: {}",
        c.max_degree,
        fmt_f64(c.residual),
        fmt_f64(c.singular_gap),
        c.pretty()
    )
}
