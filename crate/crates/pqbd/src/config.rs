//! Experiment configuration: presets, a flat JSON file, and command-line
//! overrides, applied in that order.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use pqbd_core::{
    GridSpec, KernelVariant, MomentReference, PqParams, StancuParams, TruncationConfig,
};
use serde::{Deserialize, Serialize};

use crate::error::{RunError, RunResult};
use crate::function::FunctionSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    PaperFigure,
    Moments,
    Convergence,
    Custom,
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper_figure" => Ok(Preset::PaperFigure),
            "moments" => Ok(Preset::Moments),
            "convergence" => Ok(Preset::Convergence),
            "custom" => Ok(Preset::Custom),
            _ => Err(format!("unknown preset {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Svg,
    Both,
}

impl OutputFormat {
    pub fn csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }

    pub fn svg(self) -> bool {
        matches!(self, OutputFormat::Svg | OutputFormat::Both)
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "svg" => Ok(OutputFormat::Svg),
            "both" => Ok(OutputFormat::Both),
            _ => Err(format!("unknown format {s:?}; expected csv, svg or both")),
        }
    }
}

/// How `(p, q)` depends on `n` in convergence runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    /// The configured `(p, q)` for every `n`.
    Fixed,
    /// `p_n = 1 - 1/(2n^2)`, `q_n = 1 - 1/n^2`.
    Standard,
}

impl FromStr for ScheduleKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fixed" => Ok(ScheduleKind::Fixed),
            "standard" => Ok(ScheduleKind::Standard),
            _ => Err(format!(
                "unknown schedule {s:?}; expected fixed or standard"
            )),
        }
    }
}

/// Kernel used by the operators; the non-default ones are diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelChoice {
    Gamma,
    Printed,
    Literal,
}

impl From<KernelChoice> for KernelVariant {
    fn from(k: KernelChoice) -> Self {
        match k {
            KernelChoice::Gamma => KernelVariant::Gamma,
            KernelChoice::Printed => KernelVariant::PrintedNormalization,
            KernelChoice::Literal => KernelVariant::Literal,
        }
    }
}

impl FromStr for KernelChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gamma" => Ok(KernelChoice::Gamma),
            "printed" => Ok(KernelChoice::Printed),
            "literal" => Ok(KernelChoice::Literal),
            _ => Err(format!(
                "unknown kernel {s:?}; expected gamma, printed or literal"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceChoice {
    Published,
    Operator,
}

impl From<ReferenceChoice> for MomentReference {
    fn from(r: ReferenceChoice) -> Self {
        match r {
            ReferenceChoice::Published => MomentReference::Published,
            ReferenceChoice::Operator => MomentReference::Operator,
        }
    }
}

impl FromStr for ReferenceChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "published" => Ok(ReferenceChoice::Published),
            "operator" => Ok(ReferenceChoice::Operator),
            _ => Err(format!(
                "unknown reference {s:?}; expected published or operator"
            )),
        }
    }
}

/// `min:max:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridArg {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl FromStr for GridArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, step] = parts.as_slice() else {
            return Err(format!("grid {s:?} is not min:max:step"));
        };
        let num = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad number {v:?} in grid {s:?}"))
        };
        Ok(GridArg {
            min: num(min)?,
            max: num(max)?,
            step: num(step)?,
        })
    }
}

impl fmt::Display for GridArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.step)
    }
}

/// Settings that may come from a config file or from flags. Every field is
/// optional; unset fields fall through to the next source.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub preset: Option<Preset>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub n: Option<Vec<u32>>,
    pub grid: Option<String>,
    pub tol: Option<f64>,
    pub max_terms: Option<usize>,
    pub max_nodes: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub strict: Option<bool>,
    pub function: Option<String>,
    pub growth_constant: Option<f64>,
    pub schedule: Option<ScheduleKind>,
    pub kernel: Option<KernelChoice>,
    pub reference: Option<ReferenceChoice>,
}

impl Overrides {
    pub fn from_json(text: &str) -> RunResult<Self> {
        serde_json::from_str(text).map_err(|e| RunError::Config(format!("config file: {e}")))
    }

    pub fn from_file(path: &Path) -> RunResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| RunError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Fields set in `top` win over fields set in `self`.
    pub fn layered(self, top: Overrides) -> Overrides {
        Overrides {
            preset: top.preset.or(self.preset),
            p: top.p.or(self.p),
            q: top.q.or(self.q),
            alpha: top.alpha.or(self.alpha),
            beta: top.beta.or(self.beta),
            n: top.n.or(self.n),
            grid: top.grid.or(self.grid),
            tol: top.tol.or(self.tol),
            max_terms: top.max_terms.or(self.max_terms),
            max_nodes: top.max_nodes.or(self.max_nodes),
            out: top.out.or(self.out),
            format: top.format.or(self.format),
            strict: top.strict.or(self.strict),
            function: top.function.or(self.function),
            growth_constant: top.growth_constant.or(self.growth_constant),
            schedule: top.schedule.or(self.schedule),
            kernel: top.kernel.or(self.kernel),
            reference: top.reference.or(self.reference),
        }
    }
}

/// A fully resolved experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub preset: Preset,
    pub params: PqParams,
    pub stancu: StancuParams,
    pub n_values: Vec<u32>,
    pub function: FunctionSpec,
    pub grid: GridSpec,
    pub truncation: TruncationConfig,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    pub strict: bool,
    pub schedule: ScheduleKind,
    pub kernel: KernelChoice,
    pub reference: ReferenceChoice,
}

struct Defaults {
    p: f64,
    q: f64,
    alpha: f64,
    beta: f64,
    n: &'static [u32],
    function: FunctionSpec,
    grid: GridArg,
    schedule: ScheduleKind,
}

fn defaults(preset: Preset) -> Defaults {
    let figure = Defaults {
        p: 0.9,
        q: 0.8,
        alpha: 0.1,
        beta: 0.5,
        n: &[98, 100],
        function: FunctionSpec::CosXSquared,
        grid: GridArg {
            min: 0.0,
            max: 2.0,
            step: 0.01,
        },
        schedule: ScheduleKind::Fixed,
    };
    match preset {
        Preset::PaperFigure | Preset::Custom => figure,
        Preset::Moments => Defaults {
            n: &[2, 5, 10, 50, 100],
            grid: GridArg {
                min: 0.0,
                max: 3.0,
                step: 0.5,
            },
            ..figure
        },
        Preset::Convergence => Defaults {
            alpha: 0.0,
            beta: 0.0,
            n: &[5, 10, 20, 40],
            schedule: ScheduleKind::Standard,
            ..figure
        },
    }
}

fn config<T>(r: Result<T, impl fmt::Display>) -> RunResult<T> {
    r.map_err(|e| RunError::Config(e.to_string()))
}

impl ExperimentConfig {
    /// Resolves `merged` (file values already overridden by flags) on top of
    /// the defaults of its preset, or of `fallback` when no preset is named.
    pub fn resolve(merged: Overrides, fallback: Preset) -> RunResult<Self> {
        let preset = merged.preset.unwrap_or(fallback);
        if preset == Preset::PaperFigure {
            check_figure_overrides(&merged)?;
        }
        let d = defaults(preset);
        let params = config(PqParams::new(
            merged.p.unwrap_or(d.p),
            merged.q.unwrap_or(d.q),
        ))?;
        let stancu = config(StancuParams::new(
            merged.alpha.unwrap_or(d.alpha),
            merged.beta.unwrap_or(d.beta),
        ))?;
        let mut n_values = merged.n.unwrap_or_else(|| d.n.to_vec());
        if n_values.is_empty() || n_values.contains(&0) {
            return Err(RunError::Config(
                "n values must be positive and nonempty".into(),
            ));
        }
        n_values.sort_unstable();
        n_values.dedup();
        let grid_arg = match merged.grid {
            Some(g) => config(g.parse::<GridArg>())?,
            None => d.grid,
        };
        let grid = config(GridSpec::new(grid_arg.min, grid_arg.max, grid_arg.step))?;
        let mut function = match merged.function {
            Some(f) => config(f.parse::<FunctionSpec>())?,
            None => d.function,
        };
        if let Some(c) = merged.growth_constant {
            function = function.with_growth_constant(c);
        }
        let base = TruncationConfig::default();
        let mut truncation = base;
        if let Some(tol) = merged.tol {
            truncation = truncation.with_tolerance(tol);
        }
        if let Some(m) = merged.max_terms {
            truncation.max_k = m;
        }
        if let Some(m) = merged.max_nodes {
            truncation = truncation.with_lattice_limit(m);
        }
        config(truncation.validate())?;
        Ok(Self {
            preset,
            params,
            stancu,
            n_values,
            function,
            grid,
            truncation,
            output_path: merged.out,
            output_format: merged.format.unwrap_or(OutputFormat::Csv),
            strict: merged.strict.unwrap_or(false),
            schedule: merged.schedule.unwrap_or(d.schedule),
            kernel: merged.kernel.unwrap_or(KernelChoice::Gamma),
            reference: merged.reference.unwrap_or(ReferenceChoice::Published),
        })
    }
}

fn check_figure_overrides(m: &Overrides) -> RunResult<()> {
    let d = defaults(Preset::PaperFigure);
    let mut clashes = Vec::new();
    let mut num = |name: &str, got: Option<f64>, want: f64| {
        if got.is_some_and(|v| v != want) {
            clashes.push(name.to_string());
        }
    };
    num("p", m.p, d.p);
    num("q", m.q, d.q);
    num("alpha", m.alpha, d.alpha);
    num("beta", m.beta, d.beta);
    if let Some(n) = &m.n {
        let mut n = n.clone();
        n.sort_unstable();
        n.dedup();
        if n != d.n {
            clashes.push("n".into());
        }
    }
    if let Some(f) = &m.function {
        if f.parse::<FunctionSpec>().ok() != Some(FunctionSpec::CosXSquared) {
            clashes.push("function".into());
        }
    }
    if m.schedule == Some(ScheduleKind::Standard) {
        clashes.push("schedule".into());
    }
    if clashes.is_empty() {
        Ok(())
    } else {
        Err(RunError::Config(format!(
            "preset paper_figure fixes p=0.9, q=0.8, n=98,100, alpha=0.1, beta=0.5, f=cos x^2; conflicting: {}",
            clashes.join(", ")
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_arg_parses() {
        let g: GridArg = "0:2:0.01".parse().unwrap();
        assert_eq!((g.min, g.max, g.step), (0.0, 2.0, 0.01));
        assert!("0:2".parse::<GridArg>().is_err());
        assert!("0:a:1".parse::<GridArg>().is_err());
    }

    #[test]
    fn figure_preset_defaults() {
        let c = ExperimentConfig::resolve(Overrides::default(), Preset::PaperFigure).unwrap();
        assert_eq!(c.n_values, vec![98, 100]);
        assert_eq!((c.params.p(), c.params.q()), (0.9, 0.8));
        assert_eq!((c.stancu.alpha(), c.stancu.beta()), (0.1, 0.5));
        assert_eq!(c.grid.len(), 201);
        assert_eq!(c.function, FunctionSpec::CosXSquared);
    }

    #[test]
    fn figure_preset_rejects_conflicts() {
        let o = Overrides {
            p: Some(0.95),
            ..Default::default()
        };
        assert!(matches!(
            ExperimentConfig::resolve(o, Preset::PaperFigure),
            Err(RunError::Config(_))
        ));
        let same = Overrides {
            p: Some(0.9),
            n: Some(vec![100, 98]),
            ..Default::default()
        };
        assert!(ExperimentConfig::resolve(same, Preset::PaperFigure).is_ok());
    }

    #[test]
    fn flags_override_file_override_preset() {
        let file =
            Overrides::from_json(r#"{"preset": "custom", "p": 0.95, "q": 0.9, "n": [3, 4]}"#)
                .unwrap();
        let flags = Overrides {
            q: Some(0.5),
            ..Default::default()
        };
        let c = ExperimentConfig::resolve(file.layered(flags), Preset::Moments).unwrap();
        assert_eq!(c.preset, Preset::Custom);
        assert_eq!((c.params.p(), c.params.q()), (0.95, 0.5));
        assert_eq!(c.n_values, vec![3, 4]);
        assert_eq!(c.stancu.alpha(), 0.1);
    }

    #[test]
    fn unknown_file_keys_are_errors() {
        assert!(Overrides::from_json(r#"{"pp": 1}"#).is_err());
        assert!(Overrides::from_json(r#"{"format": "png"}"#).is_err());
    }

    #[test]
    fn invalid_values_are_config_errors() {
        let bad = Overrides {
            p: Some(0.5),
            q: Some(0.8),
            preset: Some(Preset::Custom),
            ..Default::default()
        };
        assert!(matches!(
            ExperimentConfig::resolve(bad, Preset::Custom),
            Err(RunError::Config(_))
        ));
        let zero = Overrides {
            n: Some(vec![0]),
            ..Default::default()
        };
        assert!(ExperimentConfig::resolve(zero, Preset::Custom).is_err());
    }
}
