//! Building blocks of the Durrmeyer-Stancu operator: the (p,q)-Baskakov basis
//! in `x`, the Durrmeyer weight in `t`, and the Stancu-shifted argument.

use alloc::vec::Vec;

use crate::error::{Error, Result, Site};
use crate::fmath::{exp, ln, ln1p};
use crate::integrate::TruncationConfig;
use crate::pq::{
    big_e_product, ln_pq_binomial, ln_pq_factorial, ln_pq_int, pq_int, pq_rising_power, LogValue,
    PqParams,
};

/// Stancu shift parameters, `0 <= alpha <= beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StancuParams {
    alpha: f64,
    beta: f64,
}

impl StancuParams {
    /// `alpha = beta = 0`: the unshifted operator.
    pub const NONE: StancuParams = StancuParams {
        alpha: 0.0,
        beta: 0.0,
    };

    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(Error::InvalidParams("alpha and beta must be finite"));
        }
        if !(0.0 <= alpha && alpha <= beta) {
            return Err(Error::InvalidParams("require 0 <= alpha <= beta"));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn is_none(&self) -> bool {
        self.alpha == 0.0 && self.beta == 0.0
    }
}

impl Default for StancuParams {
    fn default() -> Self {
        Self::NONE
    }
}

/// Form of the Durrmeyer weight.
///
/// Only [`KernelVariant::Gamma`] reproduces constants; the other two are kept
/// to show what goes wrong with the weight as printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelVariant {
    /// `p^{k(k+1)/2} ([n] t)^k E(-q[n]t) / [k]!`, normalised so that
    /// `[n] int weight d_{p,q}t = 1` for every `k`.
    #[default]
    Gamma,
    /// `p^{k(k-1)/2} ([n] t)^k E(-q[n]t) / [k]!`; agrees with `Gamma` at `p = 1`.
    PrintedNormalization,
    /// `p^{k(k-1)/2} [n]^k E(-q[n]t) / [k]!` with no `t^k` factor.
    Literal,
}

impl KernelVariant {
    /// Power of `t` carried by the weight.
    pub fn t_power(&self, k: u32) -> u32 {
        match self {
            KernelVariant::Literal => 0,
            _ => k,
        }
    }

    /// `ln` of the constant in front of `[n]^k t^power E(-q[n]t)`.
    pub fn ln_normalization(&self, k: u32, params: &PqParams) -> f64 {
        let kf = f64::from(k);
        let p_exp = match self {
            KernelVariant::Gamma => 0.5 * kf * (kf + 1.0),
            _ => 0.5 * kf * (kf - 1.0),
        };
        p_exp * params.ln_p() - ln_pq_factorial(k, params)
    }
}

/// One term of the basis expansion: `b_{n,k}(x)` in log form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisTerm {
    pub k: u32,
    pub weight: LogValue,
}

/// `b_{n,k}(x) = [n+k-1 choose k] p^{k+n(n-1)/2} q^{k(k-1)/2} x^k / (1 (+) x)^{n+k}`.
pub fn baskakov_basis(n: u32, k: u32, x: f64, params: &PqParams) -> Result<LogValue> {
    if n == 0 {
        return Err(Error::Domain("basis requires n >= 1"));
    }
    if !(x >= 0.0) {
        return Err(Error::Domain("basis requires x >= 0"));
    }
    if x == 0.0 {
        return Ok(if k == 0 {
            LogValue::ONE
        } else {
            LogValue::ZERO
        });
    }
    let (nf, kf) = (f64::from(n), f64::from(k));
    let ln_b = ln_pq_binomial(n + k - 1, k, params)?
        + (kf + 0.5 * nf * (nf - 1.0)) * params.ln_p()
        + 0.5 * kf * (kf - 1.0) * params.ln_q()
        + kf * ln(x)
        - pq_rising_power(x, n + k, params)?.ln_magnitude();
    Ok(LogValue::positive(ln_b))
}

/// The basis terms `b_{n,0}(x), b_{n,1}(x), ...` that matter.
///
/// The basis is unimodal in `k`; the list ends at the first `k` past the
/// largest term where three consecutive terms fall below `series_tol` times
/// that largest term.
pub fn basis_terms(
    n: u32,
    x: f64,
    params: &PqParams,
    cfg: &TruncationConfig,
) -> Result<Vec<BasisTerm>> {
    let first = baskakov_basis(n, 0, x, params)?;
    if x == 0.0 {
        return Ok(alloc::vec![BasisTerm {
            k: 0,
            weight: first
        }]);
    }
    let ln_tol = ln(cfg.series_tol);
    let ln_x = ln(x);
    let mut terms = Vec::new();
    let mut ln_b = first.ln_magnitude();
    let mut ln_max = ln_b;
    let mut quiet = 0;
    for k in 0..cfg.max_k as u32 {
        if k > 0 && k % 64 == 0 {
            // resynchronise the running ratio product with the direct formula
            ln_b = baskakov_basis(n, k, x, params)?.ln_magnitude();
        }
        terms.push(BasisTerm {
            k,
            weight: LogValue::positive(ln_b),
        });
        if ln_b > ln_max {
            ln_max = ln_b;
            quiet = 0;
        } else if ln_b < ln_max + ln_tol {
            quiet += 1;
            if quiet >= 3 {
                return Ok(terms);
            }
        } else {
            quiet = 0;
        }
        // b_{k+1} / b_k = [n+k]/[k+1] * p q^k x / (p^{n+k} + q^{n+k} x)
        let m = f64::from(n + k);
        ln_b += ln_pq_int(n + k, params) - ln_pq_int(k + 1, params)
            + params.ln_p()
            + f64::from(k) * params.ln_q()
            + ln_x
            - m * params.ln_p()
            - ln1p(exp(m * params.ln_ratio()) * x);
    }
    Err(Error::NonConvergence {
        site: Site::BasisSum,
        limit: cfg.max_k,
    })
}

/// Durrmeyer weight in `t` for basis index `k` (without the leading `[n]`).
pub fn durrmeyer_weight(
    n: u32,
    k: u32,
    t: f64,
    params: &PqParams,
    variant: KernelVariant,
) -> Result<LogValue> {
    if n == 0 {
        return Err(Error::Domain("weight requires n >= 1"));
    }
    if !(t >= 0.0) {
        return Err(Error::Domain("weight requires t >= 0"));
    }
    let int_n = pq_int(n, params);
    let power = variant.t_power(k);
    let tpow = if power == 0 {
        LogValue::ONE
    } else if t == 0.0 {
        return Ok(LogValue::ZERO);
    } else {
        LogValue::positive(f64::from(power) * ln(t))
    };
    let front = LogValue::positive(variant.ln_normalization(k, params) + f64::from(k) * ln(int_n));
    Ok(front * tpow * big_e_product(-params.q() * int_n * t, params))
}

/// `(p^{k+n-1} q^{1-k} t [n] + alpha) / ([n] + beta)`.
pub fn stancu_argument(
    n: u32,
    k: u32,
    t: f64,
    params: &PqParams,
    st: &StancuParams,
) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain("argument requires t >= 0"));
    }
    let int_n = pq_int(n, params);
    Ok(ArgumentMap::new(n, k, int_n, params, st).apply(t))
}

/// Affine map `t -> slope t + offset` for fixed `(n, k)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ArgumentMap {
    ln_slope: f64,
    slope: f64,
    offset: f64,
}

impl ArgumentMap {
    pub(crate) fn new(n: u32, k: u32, int_n: f64, params: &PqParams, st: &StancuParams) -> Self {
        let ln_base = f64::from(k + n - 1) * params.ln_p() + (1.0 - f64::from(k)) * params.ln_q();
        let shrink = int_n / (int_n + st.beta());
        let ln_slope = ln_base + ln(shrink);
        Self {
            ln_slope,
            slope: exp(ln_slope),
            offset: st.alpha() / (int_n + st.beta()),
        }
    }

    #[inline]
    pub(crate) fn apply(&self, t: f64) -> f64 {
        if t == 0.0 {
            self.offset
        } else if self.slope.is_normal() {
            self.slope * t + self.offset
        } else {
            exp(self.ln_slope + ln(t)) + self.offset
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fmath::abs;

    fn pq(p: f64, q: f64) -> PqParams {
        PqParams::new(p, q).unwrap()
    }

    #[test]
    fn stancu_params_ordering() {
        assert!(StancuParams::new(0.1, 0.5).is_ok());
        assert!(StancuParams::new(0.5, 0.1).is_err());
        assert!(StancuParams::new(-0.1, 0.5).is_err());
    }

    #[test]
    fn basis_at_origin() {
        let a = pq(0.9, 0.8);
        assert!(baskakov_basis(3, 1, 0.0, &a).unwrap().is_zero());
        assert_eq!(baskakov_basis(3, 0, 0.0, &a).unwrap().value(), 1.0);
    }

    #[test]
    fn basis_n100_k40_log_magnitude() {
        // 50-digit reference
        let a = pq(0.9, 0.8);
        let v = baskakov_basis(100, 40, 1.0, &a).unwrap();
        assert_eq!(v.sign(), 1);
        assert!(abs(v.ln_magnitude() - (-87.30481545019053837576732)) < 1e-9);
    }

    #[test]
    fn running_terms_match_direct_basis() {
        let a = pq(0.95, 0.9);
        let cfg = TruncationConfig::default();
        let terms = basis_terms(10, 2.5, &a, &cfg).unwrap();
        for t in &terms {
            let direct = baskakov_basis(10, t.k, 2.5, &a).unwrap();
            assert!(
                abs(t.weight.ln_magnitude() - direct.ln_magnitude())
                    < 1e-10 * (1.0 + abs(direct.ln_magnitude()))
            );
        }
    }

    #[test]
    fn weight_values() {
        let a = pq(0.9, 0.8);
        assert_eq!(
            durrmeyer_weight(5, 0, 0.0, &a, KernelVariant::Gamma)
                .unwrap()
                .value(),
            1.0
        );
        // 50-digit reference: p^3 ([5] 0.1)^2 E(-q[5] 0.1) / [2]!
        let w = durrmeyer_weight(5, 2, 0.1, &a, KernelVariant::Gamma)
            .unwrap()
            .value();
        assert!(abs(w - 0.02397076580639631693529753) / 0.024 < 1e-12);
        let printed = durrmeyer_weight(5, 2, 0.1, &a, KernelVariant::PrintedNormalization)
            .unwrap()
            .value();
        assert!(abs(printed - w / 0.81) < 1e-15);
    }

    #[test]
    fn argument() {
        let a = pq(0.9, 0.8);
        assert_eq!(
            stancu_argument(2, 3, 0.0, &a, &StancuParams::NONE).unwrap(),
            0.0
        );
        let st = StancuParams::new(0.1, 0.5).unwrap();
        assert!(abs(stancu_argument(2, 0, 0.0, &a, &st).unwrap() - 0.1 / 2.2) < 1e-15);
        let v = stancu_argument(5, 1, 0.7, &a, &StancuParams::NONE).unwrap();
        assert!(abs(v - 0.9f64.powi(5) * 0.7) < 1e-15);
    }
}
