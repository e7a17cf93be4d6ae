//! (p,q)-calculus primitives.
//!
//! Everything here follows the usual two-parameter deformation with
//! `0 < q < p <= 1`:
//!
//! ```text
//! [n]      = (p^n - q^n) / (p - q)
//! [n]!     = [1][2]...[n]
//! (1+x)^n  = prod_{j<n} (p^j + q^j x)
//! E(x)     = sum q^{m(m-1)/2} x^m / [m]!
//! e(x)     = sum p^{m(m-1)/2} x^m / [m]!
//! ```
//!
//! With `r = q/p` one has `[n] = p^{n-1} [n]_r`, hence `E(x) = E_r(x)`, which
//! has the Euler product `prod_{j>=0} (1 + (1-r) r^j x)`. The product is used
//! wherever the series loses accuracy.

use core::ops::{Div, Mul};

use crate::error::{Error, Result, Site};
use crate::fmath::{abs, exp, expm1, ln, ln1p};
use crate::integrate::TruncationConfig;
use crate::sum::NeumaierSum;

/// The deformation pair `(p, q)` with `0 < q < p <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PqParams {
    p: f64,
    q: f64,
    ln_p: f64,
    ln_q: f64,
    ln_r: f64,
    one_minus_r: f64,
}

impl PqParams {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p.is_finite() && q.is_finite()) {
            return Err(Error::InvalidParams("p and q must be finite"));
        }
        if !(0.0 < q && q < p && p <= 1.0) {
            return Err(Error::InvalidParams("require 0 < q < p <= 1"));
        }
        let ln_p = ln(p);
        let ln_q = ln(q);
        let ln_r = ln_q - ln_p;
        Ok(Self {
            p,
            q,
            ln_p,
            ln_q,
            ln_r,
            one_minus_r: -expm1(ln_r),
        })
    }

    #[inline]
    pub fn p(&self) -> f64 {
        self.p
    }

    #[inline]
    pub fn q(&self) -> f64 {
        self.q
    }

    #[inline]
    pub fn ln_p(&self) -> f64 {
        self.ln_p
    }

    #[inline]
    pub fn ln_q(&self) -> f64 {
        self.ln_q
    }

    /// `ln(q/p)`, always negative.
    #[inline]
    pub fn ln_ratio(&self) -> f64 {
        self.ln_r
    }

    /// `q/p`.
    #[inline]
    pub fn ratio(&self) -> f64 {
        exp(self.ln_r)
    }

    /// `1 - q/p`, computed without cancellation.
    #[inline]
    pub fn one_minus_ratio(&self) -> f64 {
        self.one_minus_r
    }
}

/// A real number stored as `sign * exp(ln_magnitude)`.
///
/// Products such as `p^{n(n-1)/2}` at `n = 100` leave the double range long
/// before the quantities built from them do, so the basis and kernel are
/// assembled here and only exponentiated at the end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    ln_magnitude: f64,
    sign: i8,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        ln_magnitude: f64::NEG_INFINITY,
        sign: 0,
    };
    pub const ONE: LogValue = LogValue {
        ln_magnitude: 0.0,
        sign: 1,
    };

    /// `sign` is clamped to -1, 0 or +1; a zero sign ignores the magnitude.
    pub fn new(ln_magnitude: f64, sign: i8) -> Self {
        match sign.signum() {
            0 => Self::ZERO,
            s => Self {
                ln_magnitude,
                sign: s,
            },
        }
    }

    pub fn positive(ln_magnitude: f64) -> Self {
        Self::new(ln_magnitude, 1)
    }

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            Self::new(ln(abs(v)), if v > 0.0 { 1 } else { -1 })
        }
    }

    #[inline]
    pub fn ln_magnitude(&self) -> f64 {
        self.ln_magnitude
    }

    #[inline]
    pub fn sign(&self) -> i8 {
        self.sign
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn value(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * exp(self.ln_magnitude),
        }
    }

    pub fn powi(self, k: u32) -> Self {
        if k == 0 {
            return Self::ONE;
        }
        let sign = if self.sign < 0 && k % 2 == 1 {
            -1
        } else {
            self.sign
        };
        Self::new(self.ln_magnitude * f64::from(k), sign)
    }

    pub fn recip(self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Self::new(-self.ln_magnitude, self.sign)
    }
}

impl Mul for LogValue {
    type Output = LogValue;

    fn mul(self, rhs: LogValue) -> LogValue {
        LogValue::new(self.ln_magnitude + rhs.ln_magnitude, self.sign * rhs.sign)
    }
}

impl Div for LogValue {
    type Output = LogValue;

    fn div(self, rhs: LogValue) -> LogValue {
        self * rhs.recip()
    }
}

/// `[n]_{p,q}`.
pub fn pq_int(n: u32, params: &PqParams) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let nf = f64::from(n);
    exp((nf - 1.0) * params.ln_p) * (expm1(nf * params.ln_r) / expm1(params.ln_r))
}

/// `ln [n]_{p,q}` for `n >= 1`.
pub fn ln_pq_int(n: u32, params: &PqParams) -> f64 {
    debug_assert!(n >= 1);
    let nf = f64::from(n);
    (nf - 1.0) * params.ln_p + ln(expm1(nf * params.ln_r) / expm1(params.ln_r))
}

/// `[n]_{p,q}!`.
pub fn pq_factorial(n: u32, params: &PqParams) -> f64 {
    (1..=n).map(|m| pq_int(m, params)).product()
}

/// `ln [n]_{p,q}!`.
pub fn ln_pq_factorial(n: u32, params: &PqParams) -> f64 {
    (1..=n).map(|m| ln_pq_int(m, params)).sum()
}

/// Gaussian (p,q)-binomial, formed as a product of ratios `[n-k+i]/[i]`.
pub fn pq_binomial(n: u32, k: u32, params: &PqParams) -> Result<f64> {
    Ok(exp(ln_pq_binomial(n, k, params)?))
}

pub fn ln_pq_binomial(n: u32, k: u32, params: &PqParams) -> Result<f64> {
    if k > n {
        return Err(Error::Domain("binomial requires k <= n"));
    }
    let k = k.min(n - k);
    Ok((1..=k)
        .map(|i| ln_pq_int(n - k + i, params) - ln_pq_int(i, params))
        .sum())
}

/// `(1 (+) x)^n_{p,q} = prod_{j<n} (p^j + q^j x)` in log form.
pub fn pq_rising_power(x: f64, n: u32, params: &PqParams) -> Result<LogValue> {
    if !(x >= 0.0) {
        return Err(Error::Domain("rising power requires x >= 0"));
    }
    let mut acc = 0.0;
    for j in 0..n {
        let jf = f64::from(j);
        acc += jf * params.ln_p + ln1p(exp(jf * params.ln_r) * x);
    }
    Ok(LogValue::positive(acc))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpKind {
    /// `E_{p,q}(x) = sum q^{m(m-1)/2} x^m / [m]!`, entire.
    BigE,
    /// `e_{p,q}(x) = sum p^{m(m-1)/2} x^m / [m]!`, radius `p/(p-q)`.
    SmallE,
}

/// Cancellation ratio past which the alternating series is abandoned.
const CANCELLATION_LIMIT: f64 = 1e6;

/// Evaluate a (p,q)-exponential.
///
/// The power series is summed with compensation until a term drops below
/// `series_tol` relative to the partial sum. For negative arguments the
/// series alternates; if it cancels by more than six orders of magnitude, or
/// does not settle within `max_k` terms, the value is taken from the Euler
/// product instead (`E(x)` directly, `e(x) = 1 / E(-x)`).
pub fn pq_exponential(
    x: f64,
    kind: ExpKind,
    params: &PqParams,
    cfg: &TruncationConfig,
) -> Result<f64> {
    if x == 0.0 {
        return Ok(1.0);
    }
    if kind == ExpKind::SmallE && x * params.one_minus_r >= 1.0 {
        // outside the disc of convergence
        return Err(Error::NonConvergence {
            site: Site::Series,
            limit: cfg.max_k,
        });
    }
    match exponential_series(x, kind, params, cfg) {
        Ok(acc) if x > 0.0 || acc.cancellation() <= CANCELLATION_LIMIT => Ok(acc.value()),
        Err(e) if x > 0.0 => Err(e),
        _ => Ok(match kind {
            ExpKind::BigE => big_e_product(x, params).value(),
            ExpKind::SmallE => big_e_product(-x, params).recip().value(),
        }),
    }
}

fn exponential_series(
    x: f64,
    kind: ExpKind,
    params: &PqParams,
    cfg: &TruncationConfig,
) -> Result<NeumaierSum> {
    let ln_base = match kind {
        ExpKind::BigE => params.ln_q,
        ExpKind::SmallE => params.ln_p,
    };
    let ln_x = ln(abs(x));
    let negative = x < 0.0;
    let mut acc = NeumaierSum::new();
    acc.add(1.0);
    let mut ln_fact = 0.0;
    let mut prev_ln = 0.0;
    for m in 1..=cfg.max_k as u32 {
        let mf = f64::from(m);
        ln_fact += ln_pq_int(m, params);
        let ln_term = 0.5 * mf * (mf - 1.0) * ln_base + mf * ln_x - ln_fact;
        let term = if negative && m % 2 == 1 {
            -exp(ln_term)
        } else {
            exp(ln_term)
        };
        acc.add(term);
        let decreasing = ln_term < prev_ln;
        prev_ln = ln_term;
        if decreasing && abs(term) < cfg.series_tol * abs(acc.value()) {
            return Ok(acc);
        }
    }
    Err(Error::NonConvergence {
        site: Site::Series,
        limit: cfg.max_k,
    })
}

/// `E_{p,q}(x)` from its Euler product `prod_{j>=0} (1 + (1-r) r^j x)`.
///
/// Valid for every real `x`; the zeros sit at `x = -r^{-j}/(1-r)`.
pub fn big_e_product(x: f64, params: &PqParams) -> LogValue {
    if x == 0.0 {
        return LogValue::ONE;
    }
    let c = params.one_minus_r * x;
    let mut ln_mag = 0.0;
    let mut sign: i8 = 1;
    let mut j = 0u32;
    loop {
        let z = c * exp(f64::from(j) * params.ln_r);
        if abs(z) <= 1e-6 {
            // sum_{i>=j} ln(1 + z r^{i-j}) = sum_s (-1)^{s+1} z^s / (s (1 - r^s))
            let mut zs = z;
            for s in 1..=4u32 {
                let sf = f64::from(s);
                let denom = -expm1(sf * params.ln_r);
                let t = zs / (sf * denom);
                ln_mag += if s % 2 == 1 { t } else { -t };
                zs *= z;
            }
            break;
        }
        let factor = 1.0 + z;
        if factor == 0.0 {
            return LogValue::ZERO;
        }
        if z > -1.0 {
            ln_mag += ln1p(z);
        } else {
            ln_mag += ln(abs(factor));
            if factor < 0.0 {
                sign = -sign;
            }
        }
        j += 1;
    }
    LogValue::new(ln_mag, sign)
}
