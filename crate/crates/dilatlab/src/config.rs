//! Experiment configuration: one TOML document describing the potential,
//! grid, angles, constants, estimates, and tolerances.
//!
//! Complex numbers are written as two-element arrays `[re, im]`. Validation
//! errors name the offending field, for example `grid.N`.

use crate::bounds::{LPolicy, LTConstants, TheoremId};
use crate::error::{Error, Result};
use crate::operator::{Grid, Scheme};
use crate::potential::Potential;
use crate::spectral::Tolerances;
use num_complex::Complex64;
use serde::Deserialize;
use std::path::{Path, PathBuf};

/// Top-level parsed configuration.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub potential: PotentialConfig,
    pub grid: GridConfig,
    #[serde(default)]
    pub angles: AnglesConfig,
    pub constants: ConstantsConfig,
    #[serde(default)]
    pub bounds: BoundsConfig,
    #[serde(default)]
    pub tolerances: TolerancesConfig,
    #[serde(default)]
    pub norms: NormsConfig,
    #[serde(default)]
    pub scan: ScanConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Potential family and parameters.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    /// One of `zero`, `gaussian`, `rational`, `finite_well`, `tabulated`.
    pub family: String,
    pub amplitude: Option<f64>,
    /// Complex coefficient for `gaussian` and `rational`, as `[re, im]`.
    pub c: Option<[f64; 2]>,
    /// Power for `rational`.
    pub s: Option<f64>,
    pub depth: Option<f64>,
    pub halfwidth: Option<f64>,
    /// Uniform-grid origin for inline `tabulated` samples.
    pub x0: Option<f64>,
    pub dx: Option<f64>,
    /// Inline samples as `[re, im]` pairs.
    pub values: Option<Vec<[f64; 2]>>,
    /// CSV file of `x,re,im` (or `x,value`) rows, relative to the config.
    pub samples_file: Option<String>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "N")]
    pub n: usize,
    /// `fd2` (default) or `fd4`.
    pub scheme: Option<String>,
}

/// Working dilation angles, either an explicit list or a uniform range.
#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct AnglesConfig {
    pub phi: Option<Vec<f64>>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub count: Option<usize>,
    pub phi_probe: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsConfig {
    pub gamma: f64,
    pub d: u32,
    /// `"semiclassical"`, `{ times = m }`, or `{ value = x }`.
    #[serde(rename = "L_policy")]
    pub l_policy: Option<LPolicyConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum LPolicyConfig {
    Named(String),
    Times { times: f64 },
    Value { value: f64 },
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    /// Estimate tags; empty means every estimate the potential admits.
    #[serde(default)]
    pub theorems: Vec<String>,
    pub kappa: Option<f64>,
    /// Theorem angle for the resonance estimate; doubles as the working
    /// classification angle for `verify`.
    pub phi: Option<f64>,
    /// Re-run with the box doubled and report eigenvalue drift.
    #[serde(default)]
    pub box_check: bool,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct TolerancesConfig {
    pub tol_eig: Option<f64>,
    pub tol_match: Option<f64>,
    pub tol_report: Option<f64>,
    pub tol_box: Option<f64>,
    pub ray_rel: Option<f64>,
    pub ray_abs: Option<f64>,
    pub cluster_factor: Option<f64>,
    pub quad_tol: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct NormsConfig {
    /// Norm exponents; defaults to `[2.0]`.
    pub p: Option<Vec<f64>>,
    /// Angle grid for norm scans; defaults to the working angles.
    pub phi_grid: Option<Vec<f64>>,
    /// Compare against the closed form where one exists.
    pub closed_form: Option<bool>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    /// Estimate tags to sweep; empty means the `bounds.theorems` list.
    #[serde(default)]
    pub theorems: Vec<String>,
    pub kappa: Option<Vec<f64>>,
    pub phi: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<String>,
    /// Also dump assembled matrices in the binary layout.
    #[serde(default)]
    pub matrix_dump: bool,
}

impl ExperimentConfig {
    /// Parse a TOML document.
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::validation("config", e.to_string()))
    }

    /// Read and parse a config file, returning the raw bytes as well so
    /// outputs can embed their hash.
    pub fn from_path(path: &Path) -> Result<(Self, String)> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::validation("config", format!("{}: {e}", path.display())))?;
        let cfg = Self::from_toml(&text)?;
        Ok((cfg, text))
    }

    /// Build the potential, resolving a samples file relative to `base_dir`.
    pub fn build_potential(&self, base_dir: &Path) -> Result<Potential> {
        self.potential.build(base_dir)
    }

    pub fn build_grid(&self) -> Result<Grid> {
        if !(self.grid.l > 0.0) || !self.grid.l.is_finite() {
            return Err(Error::validation("grid.L", "must be positive and finite"));
        }
        if self.grid.n < 16 {
            return Err(Error::validation("grid.N", "need at least 16 interior points"));
        }
        Grid::new(self.grid.l, self.grid.n)
    }

    pub fn build_scheme(&self) -> Result<Scheme> {
        match self.grid.scheme.as_deref() {
            None | Some("fd2") => Ok(Scheme::Fd2),
            Some("fd4") => Ok(Scheme::Fd4),
            Some(_) => Err(Error::validation("grid.scheme", "expected fd2 or fd4")),
        }
    }

    pub fn build_constants(&self) -> Result<LTConstants> {
        let policy = match &self.constants.l_policy {
            None => LPolicy::Semiclassical,
            Some(LPolicyConfig::Named(s)) if s == "semiclassical" => LPolicy::Semiclassical,
            Some(LPolicyConfig::Named(_)) => {
                return Err(Error::validation(
                    "constants.L_policy",
                    "expected \"semiclassical\", { times = m }, or { value = x }",
                ));
            }
            Some(LPolicyConfig::Times { times }) => LPolicy::SemiclassicalTimes(*times),
            Some(LPolicyConfig::Value { value }) => LPolicy::UserSupplied(*value),
        };
        LTConstants::new(self.constants.gamma, self.constants.d, policy)
    }

    /// The working angle list: explicit list, else a uniform range, else empty.
    pub fn build_angles(&self) -> Result<Vec<f64>> {
        if let Some(list) = &self.angles.phi {
            if list.iter().any(|p| !p.is_finite()) {
                return Err(Error::validation("angles.phi", "angles must be finite"));
            }
            return Ok(list.clone());
        }
        match (self.angles.start, self.angles.stop, self.angles.count) {
            (None, None, None) => Ok(Vec::new()),
            (Some(a), Some(b), Some(n)) => {
                if n < 2 {
                    return Err(Error::validation("angles.count", "need at least 2 points"));
                }
                if !(a.is_finite() && b.is_finite() && b > a) {
                    return Err(Error::validation("angles.stop", "need finite stop > start"));
                }
                let step = (b - a) / (n - 1) as f64;
                Ok((0..n).map(|k| a + k as f64 * step).collect())
            }
            _ => Err(Error::validation(
                "angles.start",
                "a range needs start, stop, and count together",
            )),
        }
    }

    /// Resolved theorem list; empty config means every estimate whose
    /// hypotheses this potential can meet is selected by the caller.
    pub fn build_theorems(&self) -> Result<Vec<TheoremId>> {
        self.bounds.theorems.iter().map(|t| TheoremId::from_tag(t)).collect()
    }

    pub fn build_tolerances(&self) -> Result<Tolerances> {
        let mut t = Tolerances::default();
        let fields: [(&str, Option<f64>, &mut f64); 6] = [
            ("tolerances.tol_eig", self.tolerances.tol_eig, &mut t.tol_eig),
            ("tolerances.tol_match", self.tolerances.tol_match, &mut t.tol_match),
            ("tolerances.tol_report", self.tolerances.tol_report, &mut t.tol_report),
            ("tolerances.ray_rel", self.tolerances.ray_rel, &mut t.ray_rel),
            ("tolerances.ray_abs", self.tolerances.ray_abs, &mut t.ray_abs),
            ("tolerances.cluster_factor", self.tolerances.cluster_factor, &mut t.cluster_factor),
        ];
        for (name, value, slot) in fields {
            if let Some(v) = value {
                if !(v > 0.0) || !v.is_finite() {
                    return Err(Error::validation(name, "must be positive and finite"));
                }
                *slot = v;
            }
        }
        Ok(t)
    }

    pub fn tol_box(&self) -> f64 {
        self.tolerances.tol_box.unwrap_or(1e-3)
    }

    pub fn quad_tol(&self) -> f64 {
        self.tolerances.quad_tol.unwrap_or(1e-10)
    }
}

fn complex_of(raw: [f64; 2]) -> Complex64 {
    Complex64::new(raw[0], raw[1])
}

impl PotentialConfig {
    fn amp(&self) -> f64 {
        self.amplitude.unwrap_or(1.0)
    }

    fn require_c(&self) -> Result<Complex64> {
        self.c
            .map(complex_of)
            .ok_or_else(|| Error::validation("potential.c", "this family needs c = [re, im]"))
    }

    pub fn build(&self, base_dir: &Path) -> Result<Potential> {
        match self.family.as_str() {
            "zero" => Potential::finite_well(0.0, 1.0, 1.0),
            "gaussian" => Potential::gaussian(self.require_c()?, self.amp()),
            "rational" => {
                let s = self
                    .s
                    .ok_or_else(|| Error::validation("potential.s", "rational needs s > 0"))?;
                Potential::rational(self.require_c()?, s, self.amp())
            }
            "finite_well" => {
                let depth = self
                    .depth
                    .ok_or_else(|| Error::validation("potential.depth", "finite_well needs depth"))?;
                let halfwidth = self.halfwidth.ok_or_else(|| {
                    Error::validation("potential.halfwidth", "finite_well needs halfwidth")
                })?;
                Potential::finite_well(depth, halfwidth, self.amp())
            }
            "tabulated" => self.build_tabulated(base_dir),
            _ => Err(Error::validation(
                "potential.family",
                "expected zero, gaussian, rational, finite_well, or tabulated",
            )),
        }
    }

    fn build_tabulated(&self, base_dir: &Path) -> Result<Potential> {
        if let Some(file) = &self.samples_file {
            let mut path = PathBuf::from(file);
            if path.is_relative() {
                path = base_dir.join(path);
            }
            let text = std::fs::read_to_string(&path).map_err(|e| {
                Error::validation("potential.samples_file", format!("{}: {e}", path.display()))
            })?;
            let (xs, vals) = parse_samples(&text)?;
            return Potential::tabulated_from_points(&xs, vals, self.amp());
        }
        let values = self.values.as_ref().ok_or_else(|| {
            Error::validation("potential.values", "tabulated needs values or samples_file")
        })?;
        let x0 = self
            .x0
            .ok_or_else(|| Error::validation("potential.x0", "tabulated needs x0"))?;
        let dx = self
            .dx
            .ok_or_else(|| Error::validation("potential.dx", "tabulated needs dx"))?;
        let vals: Vec<Complex64> = values.iter().map(|v| complex_of(*v)).collect();
        Potential::tabulated(x0, dx, vals, self.amp())
    }
}

fn parse_samples(text: &str) -> Result<(Vec<f64>, Vec<Complex64>)> {
    let mut xs = Vec::new();
    let mut vals = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = |msg: &str| {
            Error::validation(
                "potential.samples_file",
                format!("line {}: {msg}", lineno + 1),
            )
        };
        if cols.len() != 2 && cols.len() != 3 {
            return Err(bad("expected x,re[,im]"));
        }
        let mut nums = Vec::with_capacity(3);
        for c in &cols {
            nums.push(c.parse::<f64>().map_err(|_| bad("not a number"))?);
        }
        xs.push(nums[0]);
        vals.push(Complex64::new(nums[1], if nums.len() == 3 { nums[2] } else { 0.0 }));
    }
    if xs.len() < 3 {
        return Err(Error::validation("potential.samples_file", "need at least 3 samples"));
    }
    Ok((xs, vals))
}
