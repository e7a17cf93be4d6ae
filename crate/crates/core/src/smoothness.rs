//! Discretised moduli of smoothness, weighted norms, and the local and
//! weighted error bounds as numerical diagnostics.
//!
//! Every supremum over `[0, inf)` is taken over a finite [`GridSpec`].

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fmath::{abs, powf, sqrt};
use crate::function::RealFunction;
use crate::integrate::TruncationConfig;
use crate::kernel::StancuParams;
use crate::moments::{gamma_coefficients, mu_squared};
use crate::operators::Operator;
use crate::pq::{pq_int, PqParams};

/// Largest number of grid intervals accepted.
pub const MAX_GRID_INTERVALS: f64 = 1e7;

/// Tolerance in [`BoundReport::satisfied`].
pub const BOUND_SLACK: f64 = 1e-9;

/// Evenly spaced points `x_min, x_min + step, ..., x_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    x_min: f64,
    x_max: f64,
    step: f64,
    intervals: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, step: f64) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && step.is_finite()) {
            return Err(Error::InvalidGrid("grid bounds must be finite"));
        }
        if x_min < 0.0 {
            return Err(Error::InvalidGrid("x_min must be >= 0"));
        }
        if x_max <= x_min {
            return Err(Error::InvalidGrid("x_max must exceed x_min"));
        }
        if step <= 0.0 {
            return Err(Error::InvalidGrid("step must be > 0"));
        }
        let ratio = (x_max - x_min) / step;
        if ratio > MAX_GRID_INTERVALS {
            return Err(Error::InvalidGrid("grid has more than 1e7 intervals"));
        }
        // absorb representation error in ratios like 2 / 0.01
        let intervals = libm::floor(ratio + 1e-9) as usize;
        if intervals == 0 {
            return Err(Error::InvalidGrid("step exceeds the grid width"));
        }
        Ok(Self {
            x_min,
            x_max,
            step,
            intervals,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Number of points, both ends included.
    pub fn len(&self) -> usize {
        self.intervals + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.step
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    /// The same bounds with `step / factor`.
    pub fn refined(&self, factor: u32) -> Result<Self> {
        Self::new(self.x_min, self.x_max, self.step / f64::from(factor.max(1)))
    }
}

/// A discretised modulus. `degenerate` is set when `delta` is below the grid
/// step, in which case no shift fits and `value` is 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus {
    pub value: f64,
    pub degenerate: bool,
}

/// Bound diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    pub slack: f64,
    /// A modulus on the right-hand side was evaluated below grid resolution.
    pub degenerate: bool,
}

impl BoundReport {
    pub fn new(lhs: f64, rhs: f64, degenerate: bool) -> Self {
        Self {
            lhs,
            rhs,
            satisfied: lhs <= rhs + BOUND_SLACK,
            slack: rhs - lhs,
            degenerate,
        }
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain("delta must be positive and finite"))
    }
}

fn shifts(delta: f64, grid: &GridSpec) -> usize {
    libm::floor(delta / grid.step + 1e-9) as usize
}

fn sample(f: &RealFunction, grid: &GridSpec) -> Result<Vec<f64>> {
    (0..grid.len()).map(|i| f.eval(grid.point(i))).collect()
}

fn scan<K>(values: &[f64], max_shift: usize, mut kernel: K) -> f64
where
    K: FnMut(usize, usize) -> Option<f64>,
{
    let mut best = 0.0f64;
    for s in 1..=max_shift {
        for i in 0..values.len() {
            match kernel(i, s) {
                Some(v) => best = best.max(v),
                None => break,
            }
        }
    }
    best
}

/// `omega(f, delta)`: the largest `|f(x+h) - f(x)|` with `x`, `x+h` on the
/// grid and `h` a multiple of the step not above `delta`.
pub fn empirical_modulus(f: &RealFunction, delta: f64, grid: &GridSpec) -> Result<Modulus> {
    check_delta(delta)?;
    let m = shifts(delta, grid);
    if m == 0 {
        return Ok(Modulus {
            value: 0.0,
            degenerate: true,
        });
    }
    let v = sample(f, grid)?;
    let value = scan(&v, m, |i, s| v.get(i + s).map(|b| abs(b - v[i])));
    Ok(Modulus {
        value,
        degenerate: false,
    })
}

/// `omega_2(f, delta)` with the kernel `|f(x+2h) - 2f(x+h) + f(x)|`.
pub fn empirical_modulus2(f: &RealFunction, delta: f64, grid: &GridSpec) -> Result<Modulus> {
    check_delta(delta)?;
    let m = shifts(delta, grid);
    if m == 0 {
        return Ok(Modulus {
            value: 0.0,
            degenerate: true,
        });
    }
    let v = sample(f, grid)?;
    let value = scan(&v, m, |i, s| {
        v.get(i + 2 * s).map(|c| abs(c - 2.0 * v[i + s] + v[i]))
    });
    Ok(Modulus {
        value,
        degenerate: false,
    })
}

/// `Omega(f; delta)`, the modulus weighted by `1 / (1 + (x+h)^2)`.
pub fn weighted_modulus(f: &RealFunction, delta: f64, grid: &GridSpec) -> Result<Modulus> {
    check_delta(delta)?;
    let m = shifts(delta, grid);
    if m == 0 {
        return Ok(Modulus {
            value: 0.0,
            degenerate: true,
        });
    }
    let v = sample(f, grid)?;
    let value = scan(&v, m, |i, s| {
        v.get(i + s).map(|b| {
            let xh = grid.point(i + s);
            abs(b - v[i]) / (1.0 + xh * xh)
        })
    });
    Ok(Modulus {
        value,
        degenerate: false,
    })
}

/// `||f||_{x^2} = sup |f(x)| / (1 + x^2)` over the grid.
pub fn weighted_norm(f: &RealFunction, grid: &GridSpec) -> Result<f64> {
    let mut best = 0.0f64;
    for i in 0..grid.len() {
        let x = grid.point(i);
        best = best.max(abs(f.eval(x)?) / (1.0 + x * x));
    }
    Ok(best)
}

/// `sup |values_i - f(x_i)| / (1 + x_i^2)^(1 + alpha)` over the grid.
pub fn weighted_sup_error(
    f: &RealFunction,
    values: &[f64],
    grid: &GridSpec,
    alpha: f64,
) -> Result<f64> {
    if values.len() != grid.len() {
        return Err(Error::InvalidGrid("value count differs from grid length"));
    }
    let mut best = 0.0f64;
    for (i, b) in values.iter().enumerate() {
        let x = grid.point(i);
        let err = abs(b - f.eval(x)?) / powf(1.0 + x * x, 1.0 + alpha);
        best = best.max(err);
    }
    Ok(best)
}

/// Local bound
/// `|B(f;x) - f(x)| <= L omega_2(f, sqrt(gamma* (1+x)^2 + mu^2)) + omega(f, (q p^{n-1} + alpha) / ([n] + beta))`.
pub fn local_bound_residual(
    op: &Operator,
    f: &RealFunction,
    x: f64,
    l: f64,
    grid: &GridSpec,
) -> Result<BoundReport> {
    let (n, params, st) = (op.n(), op.params(), op.stancu());
    let lhs = abs(op.apply(f, x)? - f.eval(x)?);
    let g = gamma_coefficients(n, params, st);
    let d2 = sqrt(g.gamma_star * (1.0 + x) * (1.0 + x) + mu_squared(n, x, params, st));
    let d1 = shift_term(n, params, st);
    let w2 = empirical_modulus2(f, d2, grid)?;
    let w1 = empirical_modulus(f, d1, grid)?;
    Ok(BoundReport::new(
        lhs,
        l * w2.value + w1.value,
        w2.degenerate || w1.degenerate,
    ))
}

/// `(q p^{n-1} + alpha) / ([n] + beta)`.
pub fn shift_term(n: u32, params: &PqParams, st: &StancuParams) -> f64 {
    (params.q() * crate::fmath::powi(params.p(), i64::from(n) - 1) + st.alpha())
        / (pq_int(n, params) + st.beta())
}

/// Finite-interval bound
/// `|B(f;x) - f(x)| <= 4 M_f (1+a^2)(1+x) sqrt(gamma*) + 2 omega_{a+1}(f, (1+x) sqrt(gamma*))`,
/// with `omega_{a+1}` the modulus on `[0, a+1]` at the given step.
pub fn interval_bound_residual(
    op: &Operator,
    f: &RealFunction,
    x: f64,
    a: f64,
    step: f64,
) -> Result<BoundReport> {
    if op.n() <= 3 {
        return Err(Error::Domain("the finite-interval bound needs n > 3"));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Domain("a must be positive"));
    }
    let lhs = abs(op.apply(f, x)? - f.eval(x)?);
    let root = sqrt(gamma_coefficients(op.n(), op.params(), op.stancu()).gamma_star);
    let grid = GridSpec::new(0.0, a + 1.0, step)?;
    let w = empirical_modulus(f, (1.0 + x) * root, &grid)?;
    let rhs = 4.0 * f.growth_constant() * (1.0 + a * a) * (1.0 + x) * root + 2.0 * w.value;
    Ok(BoundReport::new(lhs, rhs, w.degenerate))
}

/// `(p_n, q_n)` as a function of `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamSchedule {
    Fixed(PqParams),
    /// `p_n = 1 - 1/(2n^2)`, `q_n = 1 - 1/n^2`.
    Standard,
}

impl ParamSchedule {
    pub fn params(&self, n: u32) -> Result<PqParams> {
        match self {
            Self::Fixed(p) => Ok(*p),
            Self::Standard => {
                let n2 = f64::from(n) * f64::from(n);
                PqParams::new(1.0 - 0.5 / n2, 1.0 - 1.0 / n2)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub n: u32,
    pub p: f64,
    pub q: f64,
    /// `sup |B(f;x) - f(x)| / (1+x^2)^(1+alpha)` over the grid.
    pub sup_error: f64,
    /// `sqrt(gamma*(n))`.
    pub delta_n: f64,
}

/// One [`ScanRow`] per `n`, the weight exponent using the Stancu `alpha`.
pub fn weighted_convergence_scan(
    f: &RealFunction,
    n_list: &[u32],
    schedule: &ParamSchedule,
    st: &StancuParams,
    cfg: &TruncationConfig,
    grid: &GridSpec,
) -> Result<Vec<ScanRow>> {
    let points = grid.points();
    n_list
        .iter()
        .map(|&n| {
            let params = schedule.params(n)?;
            let op = Operator::new(n, &params, st, cfg)?;
            let values = points
                .iter()
                .map(|&x| op.apply(f, x))
                .collect::<Result<Vec<_>>>()?;
            scan_row(f, n, &params, st, &values, grid)
        })
        .collect()
}

/// Assembles a [`ScanRow`] from operator values already computed on `grid`.
pub fn scan_row(
    f: &RealFunction,
    n: u32,
    params: &PqParams,
    st: &StancuParams,
    values: &[f64],
    grid: &GridSpec,
) -> Result<ScanRow> {
    Ok(ScanRow {
        n,
        p: params.p(),
        q: params.q(),
        sup_error: weighted_sup_error(f, values, grid, st.alpha())?,
        delta_n: sqrt(gamma_coefficients(n, params, st).gamma_star),
    })
}

/// Right side of `Omega(f; lambda delta) <= (1 + lambda) Omega(f; delta) + slack`,
/// with `slack = 2 max|f| step`.
pub fn modulus_scaling_slack(f: &RealFunction, grid: &GridSpec) -> Result<f64> {
    let v = sample(f, grid)?;
    Ok(2.0 * v.iter().fold(0.0f64, |m, y| m.max(abs(*y))) * grid.step)
}
