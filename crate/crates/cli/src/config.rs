//! Run configuration: defaults, then the config file, then command-line flags.

use serde::Deserialize;
use std::path::{Path, PathBuf};

use locnash::classify::ClassifyConfig;
use locnash::relations::RelationConfig;
use locnash::report::Section;
use locnash::structures::StructureConfig;
use locnash::weierstrass::WeierstrassConfig;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "LOCNASH_CONFIG";

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub tol: f64,
    pub trunc_radius_factor: f64,
    pub target_abs_err: f64,
    /// `None` picks the per-family default.
    pub max_degree: Option<u32>,
    pub n_samples: usize,
    pub seed: u64,
    pub max_denominator: u64,
    pub output_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            trunc_radius_factor: 200.0,
            target_abs_err: 1e-9,
            max_degree: None,
            n_samples: 64,
            seed: 1,
            max_denominator: 1_000_000,
            output_path: None,
        }
    }
}

/// Every field optional; unknown fields are an error.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub tol: Option<f64>,
    pub trunc_radius_factor: Option<f64>,
    pub target_abs_err: Option<f64>,
    pub max_degree: Option<u32>,
    pub n_samples: Option<usize>,
    pub seed: Option<u64>,
    pub max_denominator: Option<u64>,
    pub output_path: Option<PathBuf>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Overrides the fields of `base` set in `self`.
    pub fn apply(self, base: &mut RunConfig) {
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { base.$f = v; } )* };
        }
        take!(
            tol,
            trunc_radius_factor,
            target_abs_err,
            n_samples,
            seed,
            max_denominator
        );
        if self.max_degree.is_some() {
            base.max_degree = self.max_degree;
        }
        if self.output_path.is_some() {
            base.output_path = self.output_path;
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        let positive = [
            ("tol", self.tol),
            ("trunc_radius_factor", self.trunc_radius_factor),
            ("target_abs_err", self.target_abs_err),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("{name} must be positive, got {v}"));
            }
        }
        if self.max_degree == Some(0) {
            return Err("max_degree must be positive".into());
        }
        if self.n_samples == 0 || self.max_denominator == 0 {
            return Err("n_samples and max_denominator must be positive".into());
        }
        Ok(())
    }

    pub fn weierstrass(&self) -> WeierstrassConfig {
        WeierstrassConfig {
            trunc_radius_factor: self.trunc_radius_factor,
            target_abs_err: self.target_abs_err,
            ..WeierstrassConfig::default()
        }
    }

    pub fn structure(&self) -> StructureConfig {
        StructureConfig {
            weierstrass: self.weierstrass(),
            tol: self.tol,
        }
    }

    pub fn classify(&self) -> ClassifyConfig {
        ClassifyConfig {
            max_denominator: self.max_denominator,
            ..ClassifyConfig::default()
        }
    }

    pub fn relations(&self) -> RelationConfig {
        RelationConfig::default()
    }

    /// Writes the fields reports embed. The output path is left out so that
    /// the same run written to two places gives identical bytes.
    pub fn write_to(&self, s: &mut Section) {
        s.set("tol", self.tol)
            .set("trunc_radius_factor", self.trunc_radius_factor)
            .set("target_abs_err", self.target_abs_err)
            .set(
                "max_degree",
                match self.max_degree {
                    Some(d) => d.to_string(),
                    None => "family-default".to_string(),
                },
            )
            .set("n_samples", self.n_samples)
            .set("seed", self.seed)
            .set("max_denominator", self.max_denominator);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_overrides_defaults() {
        let f: ConfigFile = toml::from_str("seed = 9\nmax_degree = 3\n").unwrap();
        let mut c = RunConfig::default();
        f.apply(&mut c);
        assert_eq!((c.seed, c.max_degree, c.tol), (9, Some(3), 1e-9));
        assert!(toml::from_str::<ConfigFile>("sed = 9\n").is_err());
    }
}
