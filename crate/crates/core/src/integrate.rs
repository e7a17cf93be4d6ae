//! Jackson-type (p,q)-integrals.
//!
//! For `q < p` the finite integral is
//!
//! ```text
//! int_0^a f d_{p,q}t = (p - q) a sum_{j>=0} q^j / p^{j+1} f(a q^j / p^{j+1})
//! ```
//!
//! and the improper integral `int_0^{inf/A}` runs the same sum over the
//! bilateral lattice `{ r^j / (A p) : j in Z }`, `r = q/p`, each node weighted
//! by `(p - q)` times itself.

use alloc::vec::Vec;

use crate::error::{Error, Result, Site};
use crate::fmath::{abs, exp, expm1, ln};
use crate::pq::{ln_pq_factorial, PqParams};
use crate::sum::NeumaierSum;

/// Cut-offs for every infinite sum in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationConfig {
    /// Relative size at which a series term is considered negligible.
    pub series_tol: f64,
    /// Maximum number of series terms (also the cap on the basis index).
    pub max_k: usize,
    /// Relative size at which a Jackson-sum tail is considered negligible.
    pub integral_tol: f64,
    /// Maximum number of nodes towards the origin.
    pub max_j_pos: usize,
    /// Maximum number of nodes towards infinity.
    pub max_j_neg: usize,
}

impl Default for TruncationConfig {
    fn default() -> Self {
        Self {
            series_tol: 1e-12,
            max_k: 2000,
            integral_tol: 1e-12,
            max_j_pos: 2000,
            max_j_neg: 600,
        }
    }
}

impl TruncationConfig {
    pub fn new(
        series_tol: f64,
        max_k: usize,
        integral_tol: f64,
        max_j_pos: usize,
        max_j_neg: usize,
    ) -> Result<Self> {
        let cfg = Self {
            series_tol,
            max_k,
            integral_tol,
            max_j_pos,
            max_j_neg,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.series_tol > 0.0 && self.integral_tol > 0.0) {
            return Err(Error::InvalidParams("tolerances must be strictly positive"));
        }
        if self.max_k < 1 || self.max_j_pos < 1 || self.max_j_neg < 1 {
            return Err(Error::InvalidParams("truncation limits must be at least 1"));
        }
        Ok(())
    }

    /// Same tolerances, with both lattice limits set to `limit`.
    pub fn with_lattice_limit(mut self, limit: usize) -> Self {
        self.max_j_pos = limit;
        self.max_j_neg = limit;
        self
    }

    /// Raises `max_j_pos` to at least what [`ExpLattice`] needs at `params`.
    pub fn for_lattice(mut self, params: &PqParams) -> Self {
        self.max_j_pos = self.max_j_pos.max(ExpLattice::required_len(params));
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.series_tol = tol;
        self.integral_tol = tol;
        self
    }
}

/// Consecutive negligible terms required before a sum is cut.
const QUIET_TERMS: u32 = 3;

/// `int_0^a f(t) d_{p,q}t`.
///
/// The first node is `a/p`, so `f` must be defined slightly past `a` when
/// `p < 1`.
pub fn jackson_finite<F>(mut f: F, a: f64, params: &PqParams, cfg: &TruncationConfig) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if !(a > 0.0) {
        return Err(Error::Domain("upper limit must be positive"));
    }
    let first = a / params.p();
    let dp = params.p() - params.q();
    let mut acc = NeumaierSum::new();
    let mut quiet = 0;
    for j in 0..cfg.max_j_pos {
        let node = first * exp(j as f64 * params.ln_ratio());
        let term = dp * node * f(node);
        if !term.is_finite() {
            break;
        }
        acc.add(term);
        if abs(term) <= cfg.integral_tol * abs(acc.value()) {
            quiet += 1;
            if quiet >= QUIET_TERMS {
                return Ok(acc.value());
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence {
        site: Site::SmallNodeTail,
        limit: cfg.max_j_pos,
    })
}

/// `int_0^inf f(t) d_{p,q}t` over the unscaled lattice `{ q^j / p^{j+1} }`.
pub fn jackson_improper<F>(f: F, params: &PqParams, cfg: &TruncationConfig) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    jackson_improper_scaled(f, 1.0, params, cfg)
}

/// `int_0^{inf/A} f(t) d_{p,q}t` over `{ q^j / (A p^{j+1}) : j in Z }`.
///
/// Each direction is truncated on its own: towards the origin after
/// `max_j_pos` nodes, towards infinity after `max_j_neg` nodes. A direction
/// whose terms are still significant at its limit (or stop being finite)
/// reports its own [`Site`].
pub fn jackson_improper_scaled<F>(
    mut f: F,
    scale: f64,
    params: &PqParams,
    cfg: &TruncationConfig,
) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::Domain("lattice scale must be positive"));
    }
    let first = 1.0 / (scale * params.p());
    let dp = params.p() - params.q();
    let mut acc = NeumaierSum::new();

    let mut run =
        |acc: &mut NeumaierSum, step: f64, start: i64, limit: usize, site: Site| -> Result<()> {
            let mut quiet = 0;
            for i in 0..limit {
                let j = start as f64 + step * i as f64;
                let node = first * exp(j * params.ln_ratio());
                let term = dp * node * f(node);
                if !term.is_finite() {
                    return Err(Error::NonConvergence { site, limit });
                }
                acc.add(term);
                if abs(term) <= cfg.integral_tol * abs(acc.value()) {
                    quiet += 1;
                    if quiet >= QUIET_TERMS {
                        return Ok(());
                    }
                } else {
                    quiet = 0;
                }
            }
            Err(Error::NonConvergence { site, limit })
        };

    run(&mut acc, 1.0, 0, cfg.max_j_pos, Site::SmallNodeTail)?;
    run(&mut acc, -1.0, -1, cfg.max_j_neg, Site::LargeNodeTail)?;
    Ok(acc.value())
}

/// The Jackson lattice for integrands carrying the weight `E_{p,q}(-c t)`.
///
/// `E_{p,q}(-c t)` vanishes at `t = r^{-j} / ((1-r) c)`, `j >= 0`, and grows
/// without bound in between, so the improper integral only makes sense on the
/// lattice through those zeros: `int_0^{inf/A}` with `A = (p-q) c / p^2`.
/// Its nodes are `tau_m = r^m / ((1-r) c)`; nodes with `m <= 0` are zeros of
/// the weight and at `m >= 1` the weight is the infinite product
/// `(r^m; r)_inf = prod_{i>=m} (1 - r^i)`, kept here as a table of logs.
///
/// On this lattice
///
/// ```text
/// int_0^{inf/A} t^s E(-c t) d_{p,q}t = [s]! p^{-s(s+1)/2} (q/c)^{s+1}
/// ```
#[derive(Debug, Clone)]
pub struct ExpLattice {
    params: PqParams,
    ln_c: f64,
    ln_first: f64,
    ln_dp: f64,
    /// `ln (r^m; r)_inf` for `m = 1..=len`, stored at index `m - 1`.
    ln_poch: Vec<f64>,
    capped: bool,
}

impl ExpLattice {
    pub fn new(c: f64, params: &PqParams, cfg: &TruncationConfig) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Domain("weight rate must be positive"));
        }
        let lr = params.ln_ratio();
        let wanted = Self::required_len(params);
        let len = wanted.min(cfg.max_j_pos).max(1);
        let capped = len < wanted;

        let mut ln_poch = alloc::vec![0.0; len];
        // tail: sum_{i>len} ln(1 - r^i) = -sum_s r^{s(len+1)} / (s (1 - r^s))
        let mut tail = 0.0;
        for s in 1..=8u32 {
            let sf = f64::from(s);
            let t = exp(sf * (len as f64 + 1.0) * lr) / (sf * -expm1(sf * lr));
            tail -= t;
            if t < 1e-18 * abs(tail).max(1e-300) {
                break;
            }
        }
        let mut acc = tail;
        for m in (1..=len).rev() {
            // ln(1 - r^m) without cancellation when r^m is near 1
            acc += ln(-expm1(m as f64 * lr));
            ln_poch[m - 1] = acc;
        }
        Ok(Self {
            params: *params,
            ln_c: ln(c),
            ln_first: -ln(params.one_minus_ratio()) - ln(c),
            ln_dp: ln(params.p() - params.q()),
            ln_poch,
            capped,
        })
    }

    /// Nodes tabulated when `max_j_pos` does not cap the table.
    pub fn required_len(params: &PqParams) -> usize {
        let lr = params.ln_ratio();
        // nodes past the s = 0 peak by 46/|ln r| carry relative weight < 1e-20
        let peak0 = ln(params.one_minus_ratio()) / lr;
        libm::ceil(peak0 + 46.0 / -lr) as usize + 16
    }

    /// Number of tabulated nonzero nodes.
    pub fn len(&self) -> usize {
        self.ln_poch.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ln_poch.is_empty()
    }

    /// Lattice scale `A` of the equivalent `int_0^{inf/A}`.
    pub fn scale(&self) -> f64 {
        let p = self.params.p();
        (p - self.params.q()) * exp(self.ln_c) / (p * p)
    }

    #[inline]
    pub fn ln_node(&self, m: usize) -> f64 {
        self.ln_first + m as f64 * self.params.ln_ratio()
    }

    #[inline]
    pub fn node(&self, m: usize) -> f64 {
        exp(self.ln_node(m))
    }

    /// `ln E_{p,q}(-c tau_m)` for `m >= 1`.
    #[inline]
    pub fn ln_weight_factor(&self, m: usize) -> f64 {
        self.ln_poch[m - 1]
    }

    /// `ln` of `(p - q) tau_m * tau_m^s * E(-c tau_m)`.
    #[inline]
    pub fn ln_term_weight(&self, m: usize, power: u32) -> f64 {
        self.ln_dp + f64::from(power + 1) * self.ln_node(m) + self.ln_poch[m - 1]
    }

    /// Node index where `tau^power E(-c tau)` peaks on the lattice.
    pub fn peak(&self, power: u32) -> usize {
        let lr = self.params.ln_ratio();
        // successive weights have ratio r^{s+1} / (1 - r^m); the peak is where it crosses 1
        let m = ln(-expm1(f64::from(power + 1) * lr)) / lr;
        if m.is_finite() {
            (libm::round(m) as usize).clamp(1, self.len())
        } else {
            1
        }
    }

    /// Closed form of `int t^s E(-c t) d_{p,q}t` on this lattice.
    pub fn closed_moment(&self, power: u32) -> f64 {
        let s = f64::from(power);
        exp(
            ln_pq_factorial(power, &self.params) - 0.5 * s * (s + 1.0) * self.params.ln_p()
                + (s + 1.0) * (self.params.ln_q() - self.ln_c),
        )
    }

    /// `exp(ln_scale) * int t^power E(-c t) g(t) d_{p,q}t`.
    ///
    /// Summed outward from the peak of the weight. A direction stops once
    /// the geometric bound on its remaining weight, times `g_bound` at the
    /// current node, falls below `tol` relative to the running sum for three
    /// consecutive nodes.
    pub fn integrate<G, B>(
        &self,
        power: u32,
        ln_scale: f64,
        mut g: G,
        g_bound: B,
        tol: f64,
    ) -> Result<f64>
    where
        G: FnMut(f64) -> Result<f64>,
        B: Fn(f64) -> f64,
    {
        let lr = self.params.ln_ratio();
        let rs_ln = f64::from(power + 1) * lr;
        let peak = self.peak(power);
        let mut acc = NeumaierSum::new();

        // towards the origin: ratio of successive weights is r^{s+1} / (1 - r^m)
        let mut quiet = 0;
        let mut converged = false;
        for m in peak..=self.len() {
            let ln_w = ln_scale + self.ln_term_weight(m, power);
            let node = self.node(m);
            let w = exp(ln_w);
            acc.add(w * g(node)?);
            let ratio = exp(rs_ln - ln(-expm1(m as f64 * lr)));
            if ratio < 1.0 {
                let tail = w * ratio / (1.0 - ratio) * g_bound(node);
                if tail <= tol * abs(acc.value()).max(f64::MIN_POSITIVE) {
                    quiet += 1;
                    if quiet >= QUIET_TERMS {
                        converged = true;
                        break;
                    }
                } else {
                    quiet = 0;
                }
            }
        }
        if !converged && self.capped {
            return Err(Error::NonConvergence {
                site: Site::SmallNodeTail,
                limit: self.len(),
            });
        }

        // towards infinity: weights shrink at least geometrically, down to the
        // first zero of E at m = 0
        let far_bound = g_bound(self.node(1));
        quiet = 0;
        for m in (1..peak).rev() {
            let ln_w = ln_scale + self.ln_term_weight(m, power);
            let w = exp(ln_w);
            acc.add(w * g(self.node(m))?);
            let ratio = exp(ln(-expm1((m as f64 - 1.0) * lr)) - rs_ln);
            if ratio < 1.0 {
                let tail = w * ratio / (1.0 - ratio) * far_bound;
                if tail <= tol * abs(acc.value()).max(f64::MIN_POSITIVE) {
                    quiet += 1;
                    if quiet >= QUIET_TERMS {
                        break;
                    }
                } else {
                    quiet = 0;
                }
            }
        }
        Ok(acc.value())
    }
}
