use clap::Args;
use num_complex::Complex64;
use std::fmt;
use std::path::{Path, PathBuf};

use locnash::classify::{self, ClassifyError, Outcome, TraceStep, Verdict};
use locnash::lattice::{DiscreteSubgroup, Lattice1, LatticeError};
use locnash::parse::{parse_complex, parse_lattice};
use locnash::relations::{self, RelationError};
use locnash::report::{fmt_f64, Document};
use locnash::structures::{
    describe, parse_descriptor, Structure, StructureDescriptor, StructureError,
};
use locnash::weierstrass::checks;
use locnash::weierstrass::{csv_rows, Function, WeierstrassContext, WeierstrassError};

use crate::config::RunConfig;

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Usage(String),
    Io(String),
    Numeric(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) | CliError::Usage(m) | CliError::Io(m) | CliError::Numeric(m) => {
                f.write_str(m)
            }
        }
    }
}

impl From<StructureError> for CliError {
    fn from(e: StructureError) -> Self {
        match e {
            StructureError::Weierstrass(w) => w.into(),
            StructureError::Lattice(LatticeError::DimensionMismatch { .. })
            | StructureError::Lattice(LatticeError::DegenerateGenerators { .. })
            | StructureError::Parse(_)
            | StructureError::InvalidParameter(_)
            | StructureError::Format(_) => CliError::Parse(e.to_string()),
            StructureError::Lattice(_) => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<WeierstrassError> for CliError {
    fn from(e: WeierstrassError) -> Self {
        match e {
            WeierstrassError::InvalidConfig(m) => CliError::Usage(m),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::NotRealStructure | ClassifyError::WrongDimension { .. } => {
                CliError::Usage(e.to_string())
            }
            ClassifyError::Structure(s) => s.into(),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

/// Exit status of a command that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum Status {
    Ok = 0,
    Negative = 1,
    Undetermined = 4,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Lattice literal, e.g. "lattice(1, 2i)".
    #[arg(
        long,
        conflicts_with = "descriptor",
        required_unless_present = "descriptor"
    )]
    lattice: Option<String>,
    /// Structure descriptor file.
    #[arg(long)]
    descriptor: Option<PathBuf>,
    /// sigma, zeta, wp or wp-prime (lattice mode only).
    #[arg(long = "fn", default_value = "wp")]
    function: String,
    /// start:stop:step, used for both the real and the imaginary part.
    #[arg(long, allow_hyphen_values = true)]
    grid: String,
    /// Value of the second coordinate for two-dimensional descriptors.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    other: String,
}

/// Grid values start + k·step for k = 0..=round((stop − start)/step).
pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Parse(format!("grid must be start:stop:step, got {text:?}"));
    let parts: Vec<f64> = text
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(bad());
    };
    if !(step > 0.0 && step.is_finite() && start.is_finite() && stop.is_finite() && stop >= start) {
        return Err(bad());
    }
    let n = ((stop - start) / step).round();
    if n > 1e5 {
        return Err(CliError::Usage(format!(
            "grid {text:?} has too many points"
        )));
    }
    Ok((0..=n as usize).map(|k| start + k as f64 * step).collect())
}

/// Row-major square grid: imaginary part outer, real part inner.
fn square(axis: &[f64]) -> Vec<Complex64> {
    axis.iter()
        .flat_map(|&y| axis.iter().map(move |&x| Complex64::new(x, y)))
        .collect()
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_descriptor(path: &Path) -> Result<StructureDescriptor, CliError> {
    parse_descriptor(&read(path)?).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn load_structure(path: &Path, cfg: &RunConfig) -> Result<Structure, CliError> {
    Ok(Structure::with_config(
        load_descriptor(path)?,
        &cfg.structure(),
    )?)
}

fn parse_lattice1(text: &str) -> Result<Lattice1, CliError> {
    let gens = parse_lattice(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let g = DiscreteSubgroup::new(1, gens).map_err(|e| CliError::Parse(e.to_string()))?;
    Lattice1::from_subgroup(&g).map_err(|e| CliError::Parse(e.to_string()))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// `report.toml` becomes `report.coord1.toml`; paths without an extension get `.coord1`.
fn coordinate_path(base: &Path, i: usize) -> PathBuf {
    match (base.file_stem(), base.extension()) {
        (Some(stem), Some(ext)) => base.with_file_name(format!(
            "{}.coord{i}.{}",
            stem.to_string_lossy(),
            ext.to_string_lossy()
        )),
        _ => PathBuf::from(format!("{}.coord{i}", base.display())),
    }
}

fn report(command: &str, cfg: &RunConfig) -> Document {
    let mut doc = Document::new();
    doc.root().set("command", command);
    cfg.write_to(doc.section("config"));
    doc
}

fn structure_section(doc: &mut Document, name: &str, d: &StructureDescriptor) {
    doc.section(name)
        .set("family", d.family().name())
        .set("dim", d.dim())
        .set("description", describe(d))
        .set("exact", d.exact().map(|e| e.name()).unwrap_or("none"));
}

fn finish(doc: &Document, cfg: &RunConfig) -> Result<(), CliError> {
    write_out(cfg.output_path.as_deref(), &doc.render())
}

pub fn eval(args: &EvalArgs, cfg: &RunConfig) -> Result<Status, CliError> {
    let axis = parse_grid(&args.grid)?;
    if let Some(text) = &args.lattice {
        let f = Function::from_name(&args.function)
            .ok_or_else(|| CliError::Parse(format!("unknown function {:?}", args.function)))?;
        let ctx = WeierstrassContext::with_config(parse_lattice1(text)?, cfg.weierstrass())?;
        let points = square(&axis);
        let results = ctx.eval_many(f, &points);
        let poles = results.iter().filter(|r| r.pole).count();
        eprintln!(
            "{} on {}: {} points, {} poles",
            f.name(),
            ctx.lattice(),
            points.len(),
            poles
        );
        return write_out(cfg.output_path.as_deref(), &csv_rows(&points, &results))
            .map(|_| Status::Ok);
    }
    let path = args
        .descriptor
        .as_deref()
        .expect("clap requires one of --lattice, --descriptor");
    if args.function != "wp" {
        return Err(CliError::Usage("--fn applies to --lattice only".into()));
    }
    let s = load_structure(path, cfg)?;
    let other = parse_complex(&args.other).map_err(|e| CliError::Parse(e.to_string()))?;
    let points = square(&axis);
    let inputs: Vec<Vec<Complex64>> = points
        .iter()
        .map(|&z| {
            if s.dim() == 1 {
                vec![z]
            } else {
                vec![z, other]
            }
        })
        .collect();
    let results: Vec<_> = inputs.iter().map(|u| s.evaluate_detailed(u)).collect();
    for i in 0..s.dim() {
        let column: Vec<_> = results.iter().map(|r| r[i]).collect();
        let csv = csv_rows(&points, &column);
        let poles = column.iter().filter(|r| r.pole).count();
        eprintln!(
            "{} coordinate {}: {} points, {} poles",
            describe(s.descriptor()),
            i + 1,
            points.len(),
            poles
        );
        match (&cfg.output_path, s.dim()) {
            (Some(p), 2) => write_out(Some(&coordinate_path(p, i + 1)), &csv)?,
            (p, _) => write_out(p.as_deref(), &csv)?,
        }
    }
    Ok(Status::Ok)
}

pub fn periods(path: &Path, cfg: &RunConfig) -> Result<Status, CliError> {
    let s = load_structure(path, cfg)?;
    let rep = s.period_group()?;
    let expected = s.descriptor().family().expected_rank();
    let mut doc = report("periods", cfg);
    structure_section(&mut doc, "structure", s.descriptor());
    doc.section("periods")
        .set("rank", rep.rank)
        .set("expected_rank", expected)
        .set("generators", rep.closed_form.clone())
        .set("real", rep.group.is_real());
    finish(&doc, cfg)?;
    eprintln!("{}: rank {}", describe(s.descriptor()), rep.rank);
    for line in &rep.closed_form {
        eprintln!("  {line}");
    }
    if rep.rank != expected {
        return Err(CliError::Numeric(format!(
            "computed rank {} but the family has rank {expected}",
            rep.rank
        )));
    }
    Ok(Status::Ok)
}

fn citation(kind: &str) -> &'static str {
    match kind {
        "rank" => "the Z-rank of the period group is an isomorphism invariant",
        "axis" => {
            "one-dimensional structures are id, exp, sin or wp on <1, ai> up to real linear change"
        }
        "ratio" => "wp on <1, ai> and <1, bi> are isomorphic exactly when a/b is rational",
        "exact" => "exact parameter tags decide rationality of the ratio",
        "family" => "the two-dimensional families P1 to P6 are pairwise non-isomorphic",
        _ => "",
    }
}

fn trace_lines(trace: &[TraceStep]) -> (Vec<String>, Vec<String>) {
    let lines = trace
        .iter()
        .map(|t| format!("{}: {}", t.kind, t.detail))
        .collect();
    let mut cites: Vec<String> = Vec::new();
    for t in trace {
        let c = citation(t.kind).to_string();
        if !c.is_empty() && !cites.contains(&c) {
            cites.push(c);
        }
    }
    (lines, cites)
}

pub fn classify(path: &Path, cfg: &RunConfig) -> Result<Status, CliError> {
    let s = load_structure(path, cfg)?;
    let mut doc = report("classify", cfg);
    structure_section(&mut doc, "structure", s.descriptor());
    if s.dim() == 1 {
        let c = classify::classify_1d(&s)?;
        let (trace, cites) = trace_lines(&c.trace);
        let sec = doc.section("classification");
        sec.set("canonical", c.canonical.name()).set("rank", c.rank);
        if let classify::Canonical1d::WpNormalized { a } = c.canonical {
            sec.set("a", a);
        }
        sec.set("exact", c.exact.map(|e| e.name()).unwrap_or("none"))
            .set("trace", trace)
            .set("citations", cites);
        finish(&doc, cfg)?;
        eprintln!(
            "{}: canonical form {}, rank {}",
            describe(s.descriptor()),
            c.canonical,
            c.rank
        );
    } else {
        let c = classify::classify_2d(&s)?;
        let (trace, cites) = trace_lines(&c.trace);
        doc.section("classification")
            .set("family", format!("P{}", c.family))
            .set("rank", c.rank)
            .set("trace", trace)
            .set("citations", cites);
        finish(&doc, cfg)?;
        eprintln!(
            "{}: family P{}, rank {}",
            describe(s.descriptor()),
            c.family,
            c.rank
        );
    }
    Ok(Status::Ok)
}

fn verdict_status(v: &Verdict) -> Status {
    match v.outcome {
        Outcome::Isomorphic => Status::Ok,
        Outcome::NotIsomorphic => Status::Negative,
        Outcome::Undetermined => Status::Undetermined,
    }
}

pub fn compare(first: &Path, second: &Path, cfg: &RunConfig) -> Result<Status, CliError> {
    let s1 = load_structure(first, cfg)?;
    let s2 = load_structure(second, cfg)?;
    if s1.dim() != s2.dim() {
        return Err(CliError::Usage(format!(
            "dimensions {} and {} differ",
            s1.dim(),
            s2.dim()
        )));
    }
    let v = if s1.dim() == 1 {
        classify::isomorphic_1d(&s1, &s2, &cfg.classify())?
    } else {
        classify::compare_2d(&s1, &s2)?
    };
    let mut doc = report("compare", cfg);
    structure_section(&mut doc, "first", s1.descriptor());
    structure_section(&mut doc, "second", s2.descriptor());
    let (trace, cites) = trace_lines(&v.reason);
    let sec = doc.section("verdict");
    sec.set("outcome", v.outcome.name())
        .set("ranks", vec![v.ranks.0, v.ranks.1]);
    if let Some((p, q)) = v.ratio {
        sec.set("ratio", format!("{p}/{q}"));
    }
    sec.set("reason", trace).set("citations", cites);
    finish(&doc, cfg)?;
    eprintln!(
        "{} (ranks {} and {})",
        v.outcome.name(),
        v.ranks.0,
        v.ranks.1
    );
    for r in &v.reason {
        eprintln!("  {}: {}", r.kind, r.detail);
    }
    Ok(verdict_status(&v))
}

pub fn verify_aat(path: &Path, cfg: &RunConfig) -> Result<Status, CliError> {
    let s = load_structure(path, cfg)?;
    let degree = cfg
        .max_degree
        .unwrap_or_else(|| relations::default_aat_degree(s.descriptor().family()));
    let mut doc = report("verify-aat", cfg);
    structure_section(&mut doc, "structure", s.descriptor());
    match relations::verify_aat(&s, degree, cfg.n_samples, cfg.seed, &cfg.relations()) {
        Ok(rep) => {
            doc.section("result")
                .set("status", "ok")
                .set("max_degree", degree as u64);
            for (i, c) in rep.certificates.iter().enumerate() {
                c.write_to(&mut doc, &format!("certificate.coord{}", i + 1));
                eprintln!(
                    "coordinate {}: {}",
                    i + 1,
                    relations::describe_certificate(c)
                );
            }
            finish(&doc, cfg)?;
            Ok(Status::Ok)
        }
        Err(RelationError::NoRelationFound {
            max_degree,
            best_gap,
            best_residual,
        }) => {
            doc.section("result")
                .set("status", "no-relation-found")
                .set("max_degree", max_degree as u64)
                .set("best_gap", best_gap)
                .set("best_residual", best_residual);
            finish(&doc, cfg)?;
            eprintln!("no relation up to degree {max_degree}");
            Ok(Status::Negative)
        }
        Err(RelationError::InvalidArgument(m)) => Err(CliError::Usage(m)),
        Err(e) => Err(CliError::Numeric(e.to_string())),
    }
}

struct Check {
    name: &'static str,
    residual: f64,
    limit: f64,
}

pub fn check_identities(lattice: &str, cfg: &RunConfig) -> Result<Status, CliError> {
    let l = parse_lattice1(lattice)?;
    let ctx = WeierstrassContext::with_config(l, cfg.weierstrass())?;
    let samples = checks::reduced_samples(&ctx, 50, cfg.seed);
    let coset_samples = checks::reduced_samples(&ctx, 30, cfg.seed.wrapping_add(1));
    let double = l
        .scale(Complex64::new(2.0, 0.0))
        .map_err(|e| CliError::Numeric(e.to_string()))?;
    let results = vec![
        Check {
            name: "zeta_quasi_periodicity",
            residual: checks::zeta_quasi_periodicity_residual(&ctx, &samples),
            limit: 1e-8,
        },
        Check {
            name: "sigma_quasi_periodicity",
            residual: checks::sigma_quasi_periodicity_residual(&ctx, &samples),
            limit: 1e-7,
        },
        Check {
            name: "coset_sum_2L_in_L",
            residual: checks::coset_sum_check(double, l, &coset_samples, cfg.weierstrass())?,
            limit: 1e-6,
        },
        Check {
            name: "conjugation",
            residual: checks::conjugate_lattice_check(&ctx, &samples)?,
            limit: 1e-8,
        },
        Check {
            name: "scaling_c_2",
            residual: checks::scaling_law_residual(&ctx, Complex64::new(2.0, 0.0), &samples)?,
            limit: 1e-8,
        },
        Check {
            name: "scaling_c_1_plus_i",
            residual: checks::scaling_law_residual(&ctx, Complex64::new(1.0, 1.0), &samples)?,
            limit: 1e-8,
        },
    ];
    let mut doc = report("check-identities", cfg);
    doc.section("lattice")
        .set("lattice", l.to_string())
        .set("samples", samples.len());
    let mut all = true;
    for c in &results {
        let pass = c.residual < c.limit;
        all &= pass;
        doc.array_item("check")
            .set("name", c.name)
            .set("residual", c.residual)
            .set("limit", c.limit)
            .set("pass", pass);
        eprintln!(
            "{} {:<24} residual {} limit {}",
            if pass { "PASS" } else { "FAIL" },
            c.name,
            fmt_f64(c.residual),
            fmt_f64(c.limit)
        );
    }
    doc.section("summary").set("all_pass", all);
    finish(&doc, cfg)?;
    Ok(if all { Status::Ok } else { Status::Negative })
}
