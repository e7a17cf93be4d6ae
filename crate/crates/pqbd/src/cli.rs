//! Command-line front end.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{
    ExperimentConfig, KernelChoice, OutputFormat, Overrides, Preset, ReferenceChoice, ScheduleKind,
};
use crate::error::{RunError, RunResult};
use crate::experiments;
use crate::svg::{self, Series};
use crate::table::Table;

#[derive(Debug, Parser)]
#[command(
    name = "pqbd",
    version,
    about = "(p,q)-Baskakov-Durrmeyer-Stancu operator experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare numeric moments of orders 0..2 against closed forms.
    Moments(RunArgs),
    /// Sup-norm error of B_n f for a list of n.
    Converge(RunArgs),
    /// f and B_n f on a grid, as CSV and/or SVG.
    Figure(RunArgs),
}

#[derive(Debug, Args, Default)]
pub struct RunArgs {
    /// Named preset supplying defaults.
    #[arg(long)]
    pub preset: Option<Preset>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Operator index; repeat for several.
    #[arg(long)]
    pub n: Vec<u32>,
    /// Grid as min:max:step.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Series truncation tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_terms: Option<usize>,
    /// Upper limit on lattice nodes per integral.
    #[arg(long)]
    pub max_nodes: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv, svg or both.
    #[arg(long)]
    pub format: Option<OutputFormat>,
    /// JSON file with the same keys as the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Fail on the first numerical failure instead of leaving empty cells.
    #[arg(long)]
    pub strict: bool,
    /// cos_x_squared, monomial:J or expr:<expression in x>.
    #[arg(long)]
    pub function: Option<String>,
    /// Growth constant M in |f(x)| <= M(1 + x^2).
    #[arg(long)]
    pub growth_constant: Option<f64>,
    /// fixed or standard.
    #[arg(long)]
    pub schedule: Option<ScheduleKind>,
    /// gamma, printed or literal.
    #[arg(long)]
    pub kernel: Option<KernelChoice>,
    /// published or operator.
    #[arg(long)]
    pub reference: Option<ReferenceChoice>,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            preset: self.preset,
            p: self.p,
            q: self.q,
            alpha: self.alpha,
            beta: self.beta,
            n: (!self.n.is_empty()).then(|| self.n.clone()),
            grid: self.grid.clone(),
            tol: self.tol,
            max_terms: self.max_terms,
            max_nodes: self.max_nodes,
            out: self.out.clone(),
            format: self.format,
            strict: self.strict.then_some(true),
            function: self.function.clone(),
            growth_constant: self.growth_constant,
            schedule: self.schedule,
            kernel: self.kernel,
            reference: self.reference,
        }
    }

    /// Preset defaults, then the config file, then flags.
    pub fn resolve(&self, fallback: Preset) -> RunResult<ExperimentConfig> {
        let file = match &self.config {
            Some(path) => Overrides::from_file(path)?,
            None => Overrides::default(),
        };
        ExperimentConfig::resolve(file.layered(self.overrides()), fallback)
    }
}

/// Parses `args`, runs the subcommand and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> RunResult<i32> {
    match command {
        Command::Moments(args) => {
            let cfg = args.resolve(Preset::Moments)?;
            if cfg.output_format.svg() {
                return Err(RunError::Config("moments writes csv only".into()));
            }
            let v = experiments::run_moment_verification(&cfg)?;
            write_outputs(&cfg, &v.table(), &[], "", stdout)?;
            let (mismatches, failures) = (v.mismatches(), v.failures());
            writeln!(
                stderr,
                "{} rows, {mismatches} above relative tolerance {:e}, {failures} failed",
                v.rows.len(),
                experiments::MOMENT_REL_TOL
            )?;
            Ok(if mismatches + failures > 0 { 2 } else { 0 })
        }
        Command::Converge(args) => {
            let cfg = args.resolve(Preset::Convergence)?;
            let rows = experiments::run_convergence_table(&cfg)?;
            let series = experiments::convergence_series(&rows);
            write_outputs(
                &cfg,
                &experiments::convergence_table(&rows),
                &series,
                "Sup error against n",
                stdout,
            )?;
            let skipped: usize = rows.iter().map(|r| r.skipped).sum();
            if skipped > 0 {
                writeln!(stderr, "{skipped} grid evaluations failed and were skipped")?;
            }
            Ok(0)
        }
        Command::Figure(args) => {
            let cfg = args.resolve(Preset::PaperFigure)?;
            let fig = experiments::reproduce_figure(&cfg)?;
            let title = format!(
                "B_n f with p={}, q={}, alpha={}, beta={}",
                cfg.params.p(),
                cfg.params.q(),
                cfg.stancu.alpha(),
                cfg.stancu.beta()
            );
            write_outputs(&cfg, &fig.table(), &fig.series(), &title, stdout)?;
            let failures = fig.failures();
            if failures > 0 {
                writeln!(
                    stderr,
                    "{failures} grid evaluations failed and were left empty"
                )?;
            }
            Ok(0)
        }
    }
}

/// Target paths for csv and svg output. With `both`, the extension of `out`
/// is replaced.
pub fn output_paths(out: &Path, format: OutputFormat) -> (Option<PathBuf>, Option<PathBuf>) {
    match format {
        OutputFormat::Csv => (Some(out.to_path_buf()), None),
        OutputFormat::Svg => (None, Some(out.to_path_buf())),
        OutputFormat::Both => (
            Some(out.with_extension("csv")),
            Some(out.with_extension("svg")),
        ),
    }
}

fn write_outputs(
    cfg: &ExperimentConfig,
    table: &Table,
    series: &[Series],
    title: &str,
    stdout: &mut dyn Write,
) -> RunResult<()> {
    let Some(out) = &cfg.output_path else {
        if cfg.output_format.svg() {
            return Err(RunError::Config("svg output needs --out".into()));
        }
        return table.write(stdout);
    };
    let (csv_path, svg_path) = output_paths(out, cfg.output_format);
    if let Some(path) = csv_path {
        let mut w = BufWriter::new(File::create(&path)?);
        table.write(&mut w)?;
        w.flush()?;
    }
    if let Some(path) = svg_path {
        svg::emit_plot(series, title, &path)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_formats_swap_extension() {
        let (c, s) = output_paths(Path::new("out/fig.dat"), OutputFormat::Both);
        assert_eq!(c.unwrap(), Path::new("out/fig.csv"));
        assert_eq!(s.unwrap(), Path::new("out/fig.svg"));
        let (c, s) = output_paths(Path::new("a.txt"), OutputFormat::Csv);
        assert_eq!(c.unwrap(), Path::new("a.txt"));
        assert!(s.is_none());
    }

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("pqbd-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cfg.json");
        std::fs::write(&path, r#"{"p": 0.95, "q": 0.9, "n": [7]}"#).unwrap();
        let args = RunArgs {
            config: Some(path),
            q: Some(0.85),
            ..RunArgs::default()
        };
        let cfg = args.resolve(Preset::Custom).unwrap();
        assert_eq!((cfg.params.p(), cfg.params.q()), (0.95, 0.85));
        assert_eq!(cfg.n_values, vec![7]);
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn bad_flag_is_config_error() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(run(["pqbd", "moments", "--bogus"], &mut out, &mut err), 1);
        assert_eq!(
            run(["pqbd", "moments", "--p", "1.5"], &mut out, &mut err),
            1
        );
        assert_eq!(run(["pqbd", "--help"], &mut out, &mut err), 0);
    }

    #[test]
    fn svg_without_out_is_rejected() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            ["pqbd", "converge", "--format", "svg", "--n", "3"],
            &mut out,
            &mut err,
        );
        assert_eq!(code, 1);
        assert!(String::from_utf8(err).unwrap().contains("--out"));
    }
}
