//! The three experiments behind the CLI subcommands.

use pqbd_core::smoothness::ParamSchedule;
use pqbd_core::{moments, Error, MomentReport, Operator, PqParams, RealFunction, TruncationConfig};
use rayon::prelude::*;

use crate::config::{ExperimentConfig, ScheduleKind};
use crate::error::{RunError, RunResult};
use crate::svg::Series;
use crate::table::{Cell, Table};

/// Relative error above which a moment row counts as a mismatch.
pub const MOMENT_REL_TOL: f64 = 1e-6;

/// `B(f; x)` at every `x`, in parallel, in input order.
pub fn evaluate_on_grid(op: &Operator, f: &RealFunction, xs: &[f64]) -> Vec<Result<f64, Error>> {
    xs.par_iter().map(|&x| op.apply(f, x)).collect()
}

fn operator(
    cfg: &ExperimentConfig,
    n: u32,
    params: &PqParams,
    truncation: &TruncationConfig,
) -> RunResult<Operator> {
    Ok(Operator::with_variant(
        n,
        params,
        &cfg.stancu,
        truncation,
        cfg.kernel.into(),
    )?)
}

fn build_function(cfg: &ExperimentConfig) -> RunResult<RealFunction> {
    cfg.function.build().map_err(RunError::Config)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentRow {
    pub n: u32,
    pub x: f64,
    pub order: u32,
    /// `None` when the numeric evaluation failed; the message is in `error`.
    pub report: Option<MomentReport>,
    pub error: Option<String>,
}

impl MomentRow {
    pub fn passed(&self) -> bool {
        self.report.is_some_and(|r| r.rel_err < MOMENT_REL_TOL)
    }

    /// `ok`, `mismatch` or `failed`.
    pub fn status(&self) -> &'static str {
        match (self.report, self.passed()) {
            (None, _) => "failed",
            (Some(_), true) => "ok",
            (Some(_), false) => "mismatch",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentVerification {
    pub params: PqParams,
    pub alpha: f64,
    pub beta: f64,
    pub rows: Vec<MomentRow>,
}

impl MomentVerification {
    pub fn mismatches(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.report.is_some() && !r.passed())
            .count()
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.report.is_none()).count()
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new([
            "p",
            "q",
            "alpha",
            "beta",
            "n",
            "x",
            "order",
            "numeric",
            "closed_form",
            "abs_err",
            "rel_err",
            "status",
        ]);
        for row in &self.rows {
            let mut cells: Vec<Cell> = vec![
                self.params.p().into(),
                self.params.q().into(),
                self.alpha.into(),
                self.beta.into(),
                row.n.into(),
                row.x.into(),
                row.order.into(),
            ];
            match row.report {
                Some(r) => {
                    cells.extend([r.numeric, r.closed_form, r.abs_err, r.rel_err].map(Cell::from))
                }
                None => cells.extend([Cell::Empty; 4]),
            }
            cells.push(Cell::Text(row.status()));
            t.push(cells);
        }
        t
    }
}

/// Moments of orders 0, 1, 2 at every `(n, x)` against the configured
/// closed forms.
pub fn run_moment_verification(cfg: &ExperimentConfig) -> RunResult<MomentVerification> {
    let xs = cfg.grid.points();
    let reference = cfg.reference.into();
    let mut rows = Vec::new();
    for &n in &cfg.n_values {
        let op = operator(cfg, n, &cfg.params, &cfg.truncation)?;
        let per_x: Vec<Vec<MomentRow>> = xs
            .par_iter()
            .map(|&x| {
                (0..=2)
                    .map(
                        |order| match moments::moment_report(&op, order, x, reference) {
                            Ok(r) => MomentRow {
                                n,
                                x,
                                order,
                                report: Some(r),
                                error: None,
                            },
                            Err(e) => MomentRow {
                                n,
                                x,
                                order,
                                report: None,
                                error: Some(e.to_string()),
                            },
                        },
                    )
                    .collect()
            })
            .collect();
        rows.extend(per_x.into_iter().flatten());
    }
    let v = MomentVerification {
        params: cfg.params,
        alpha: cfg.stancu.alpha(),
        beta: cfg.stancu.beta(),
        rows,
    };
    if cfg.strict {
        if let Some(row) = v.rows.iter().find(|r| r.error.is_some()) {
            return Err(RunError::Numerical(format!(
                "n={} x={} order={}: {}",
                row.n,
                row.x,
                row.order,
                row.error.as_deref().unwrap_or_default()
            )));
        }
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n: u32,
    pub p: f64,
    pub q: f64,
    /// `max |B(f;x) - f(x)|` over the grid.
    pub sup_error: f64,
    /// The same weighted by `(1 + x^2)^(-1-alpha)`.
    pub weighted_sup_error: f64,
    /// `sqrt(gamma*(n))`.
    pub delta_n: f64,
    /// Grid points whose evaluation failed and were left out.
    pub skipped: usize,
}

pub fn convergence_table(rows: &[ConvergenceRow]) -> Table {
    let mut t = Table::new([
        "n",
        "sup_error",
        "p",
        "q",
        "weighted_sup_error",
        "delta_n",
        "skipped",
    ]);
    for r in rows {
        t.push(vec![
            r.n.into(),
            r.sup_error.into(),
            r.p.into(),
            r.q.into(),
            r.weighted_sup_error.into(),
            r.delta_n.into(),
            Cell::Int(r.skipped as i64),
        ]);
    }
    t
}

pub fn convergence_series(rows: &[ConvergenceRow]) -> Vec<Series> {
    vec![
        Series::new(
            "sup error",
            rows.iter().map(|r| (f64::from(r.n), r.sup_error)).collect(),
        ),
        Series::new(
            "weighted sup error",
            rows.iter()
                .map(|r| (f64::from(r.n), r.weighted_sup_error))
                .collect(),
        ),
    ]
}

/// Sup and weighted sup errors of `B_n f` over the grid, one row per `n`.
pub fn run_convergence_table(cfg: &ExperimentConfig) -> RunResult<Vec<ConvergenceRow>> {
    let f = build_function(cfg)?;
    let xs = cfg.grid.points();
    let fx = xs
        .iter()
        .map(|&x| f.eval(x))
        .collect::<Result<Vec<_>, _>>()?;
    let schedule = match cfg.schedule {
        ScheduleKind::Fixed => ParamSchedule::Fixed(cfg.params),
        ScheduleKind::Standard => ParamSchedule::Standard,
    };
    let alpha = cfg.stancu.alpha();
    let mut rows = Vec::with_capacity(cfg.n_values.len());
    for &n in &cfg.n_values {
        let params = schedule.params(n)?;
        let truncation = match cfg.schedule {
            ScheduleKind::Fixed => cfg.truncation,
            ScheduleKind::Standard => cfg.truncation.for_lattice(&params),
        };
        let op = operator(cfg, n, &params, &truncation)?;
        let values = evaluate_on_grid(&op, &f, &xs);
        let (mut sup, mut weighted, mut skipped) = (0.0f64, 0.0f64, 0usize);
        for ((x, v), target) in xs.iter().zip(&values).zip(&fx) {
            match v {
                Ok(b) => {
                    let err = (b - target).abs();
                    sup = sup.max(err);
                    weighted = weighted.max(err / (1.0 + x * x).powf(1.0 + alpha));
                }
                Err(e) if cfg.strict => {
                    return Err(RunError::Numerical(format!("n={n} x={x}: {e}")))
                }
                Err(_) => skipped += 1,
            }
        }
        rows.push(ConvergenceRow {
            n,
            p: params.p(),
            q: params.q(),
            sup_error: sup,
            weighted_sup_error: weighted,
            delta_n: moments::gamma_coefficients(n, &params, &cfg.stancu)
                .gamma_star
                .sqrt(),
            skipped,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub function_label: String,
    pub xs: Vec<f64>,
    pub f: Vec<f64>,
    /// `(n, B_n f)` per curve; `None` marks a failed evaluation.
    pub curves: Vec<(u32, Vec<Option<f64>>)>,
}

impl FigureData {
    pub fn table(&self) -> Table {
        let mut header = vec!["x".to_string(), "f".to_string()];
        header.extend(self.curves.iter().map(|(n, _)| format!("B_n{n}")));
        let mut t = Table::new(header);
        for (i, (&x, &fx)) in self.xs.iter().zip(&self.f).enumerate() {
            let mut row = vec![Cell::Num(x), Cell::Num(fx)];
            row.extend(self.curves.iter().map(|(_, c)| Cell::from(c[i])));
            t.push(row);
        }
        t
    }

    pub fn series(&self) -> Vec<Series> {
        let mut s = vec![Series::new(
            self.function_label.clone(),
            self.xs
                .iter()
                .copied()
                .zip(self.f.iter().copied())
                .collect(),
        )];
        for (n, c) in &self.curves {
            s.push(Series::new(
                format!("B_n{n}"),
                self.xs
                    .iter()
                    .zip(c)
                    .map(|(&x, v)| (x, v.unwrap_or(f64::NAN)))
                    .collect(),
            ));
        }
        s
    }

    pub fn failures(&self) -> usize {
        self.curves
            .iter()
            .map(|(_, c)| c.iter().filter(|v| v.is_none()).count())
            .sum()
    }
}

/// `f` and `B_n f` on the grid for each configured `n`.
pub fn reproduce_figure(cfg: &ExperimentConfig) -> RunResult<FigureData> {
    let f = build_function(cfg)?;
    let xs = cfg.grid.points();
    let fx = xs
        .iter()
        .map(|&x| f.eval(x))
        .collect::<Result<Vec<_>, _>>()?;
    let mut curves = Vec::new();
    for &n in &cfg.n_values {
        let op = operator(cfg, n, &cfg.params, &cfg.truncation)?;
        let values = evaluate_on_grid(&op, &f, &xs);
        if cfg.strict {
            if let Some((x, Err(e))) = xs.iter().zip(&values).find(|(_, v)| v.is_err()) {
                return Err(RunError::Numerical(format!("n={n} x={x}: {e}")));
            }
        }
        curves.push((n, values.into_iter().map(Result::ok).collect()));
    }
    Ok(FigureData {
        function_label: format!("f = {}", cfg.function),
        xs,
        f: fx,
        curves,
    })
}
