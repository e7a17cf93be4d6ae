//! Closed-form moments.
//!
//! Two families live here:
//!
//! * the published moment formulas (`closed_moment_*`, [`central_moments`],
//!   [`gamma_coefficients`], [`mu_squared`]);
//! * the exact moments of the operator as implemented (`operator_moment_*`),
//!   obtained from the lattice identity
//!   `int t^s E(-q[n]t) d_{p,q}t = [s]! p^{-s(s+1)/2} / [n]^{s+1}` and the
//!   basis sums `sum b_k [k] q^{-k} = [n] x / (q p^{n-1})`,
//!   `sum b_k [k][k-1] q^{-2k} = [n][n+1] x^2 / (q^3 p^{2n-1})`.
//!
//! At `p = 1` the two families coincide. For `p < 1` they differ by powers of
//! `p` in every non-leading coefficient.

use crate::error::{Error, Result};
use crate::fmath::abs;
use crate::function::RealFunction;
use crate::kernel::StancuParams;
use crate::operators::Operator;
use crate::pq::{pq_int, PqParams};

/// Numeric moment next to its closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentReport {
    pub order: u32,
    pub numeric: f64,
    pub closed_form: f64,
    pub abs_err: f64,
    pub rel_err: f64,
}

impl MomentReport {
    pub fn new(order: u32, numeric: f64, closed_form: f64) -> Self {
        let abs_err = abs(numeric - closed_form);
        Self {
            order,
            numeric,
            closed_form,
            abs_err,
            rel_err: abs_err / abs(closed_form).max(1e-300),
        }
    }
}

/// Which closed forms a numeric moment is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MomentReference {
    /// The published moment formulas.
    #[default]
    Published,
    /// The exact moments of the implemented operator.
    Operator,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaCoefficients {
    pub gamma1: f64,
    /// Linear coefficient of the central second moment, from
    /// `m2 - 2 x m1 + x^2`.
    pub gamma2: f64,
    pub gamma3: f64,
    /// `max(gamma1, gamma2 / 2, gamma3)`.
    pub gamma_star: f64,
    /// The linear coefficient as printed, which subtracts
    /// `(2 q p^{n-1} + alpha) / ([n] + beta)` instead of
    /// `2 (q p^{n-1} + alpha) / ([n] + beta)`.
    pub gamma2_printed: f64,
}

fn check_order(order: u32) -> Result<()> {
    if order > 2 {
        Err(Error::Domain("moments are available for orders 0, 1, 2"))
    } else {
        Ok(())
    }
}

fn pw(params: &PqParams, e: i64) -> f64 {
    crate::fmath::powi(params.p(), e)
}

/// Published moments of the unshifted operator.
pub fn closed_moment_base(order: u32, n: u32, x: f64, params: &PqParams) -> Result<f64> {
    check_order(order)?;
    let (p, q) = (params.p(), params.q());
    let big_n = pq_int(n, params);
    let two = pq_int(2, params);
    let n = i64::from(n);
    Ok(match order {
        0 => 1.0,
        1 => x + q * pw(params, n - 1) / big_n,
        _ => {
            (p * p + pw(params, n + 2) / (q * big_n)) * x * x
                + pw(params, n - 1) * two * two / big_n * x
                + two * pw(params, 2 * n - 1) * q * q / (big_n * big_n)
        }
    })
}

/// Published moments of the Stancu operator.
pub fn closed_moment_stancu(
    order: u32,
    n: u32,
    x: f64,
    params: &PqParams,
    st: &StancuParams,
) -> Result<f64> {
    check_order(order)?;
    if st.is_none() {
        return closed_moment_base(order, n, x, params);
    }
    let (p, q) = (params.p(), params.q());
    let (alpha, beta) = (st.alpha(), st.beta());
    let big_n = pq_int(n, params);
    let two = pq_int(2, params);
    let d = big_n + beta;
    let n = i64::from(n);
    Ok(match order {
        0 => 1.0,
        1 => big_n / d * x + (q * pw(params, n - 1) + alpha) / d,
        _ => {
            (big_n * big_n * q * p * p + big_n * pw(params, n + 2)) / (q * d * d) * x * x
                + (big_n * two * two * pw(params, n - 1) + 2.0 * alpha * big_n) / (d * d) * x
                + (two * q * q * pw(params, 2 * n - 1)
                    + 2.0 * alpha * q * pw(params, n - 1)
                    + alpha * alpha)
                    / (d * d)
        }
    })
}

/// Exact moments of the implemented unshifted operator.
pub fn operator_moment_base(order: u32, n: u32, x: f64, params: &PqParams) -> f64 {
    let q = params.q();
    let big_n = pq_int(n, params);
    let two = pq_int(2, params);
    let n_next = pq_int(n + 1, params);
    let n = i64::from(n);
    match order {
        0 => 1.0,
        1 => x + q * pw(params, n - 2) / big_n,
        2 => {
            n_next / (q * big_n) * x * x
                + pw(params, n - 3) * two * two / big_n * x
                + two * q * q * pw(params, 2 * n - 5) / (big_n * big_n)
        }
        _ => f64::NAN,
    }
}

/// Exact moments of the implemented Stancu operator.
///
/// The Stancu argument is affine in the unshifted one, so these follow from
/// [`operator_moment_base`]. Orders above 2 give NaN.
pub fn operator_moment_stancu(
    order: u32,
    n: u32,
    x: f64,
    params: &PqParams,
    st: &StancuParams,
) -> f64 {
    if st.is_none() {
        return operator_moment_base(order, n, x, params);
    }
    let (alpha, beta) = (st.alpha(), st.beta());
    let big_n = pq_int(n, params);
    let d = big_n + beta;
    let m1 = operator_moment_base(1, n, x, params);
    match order {
        0 => 1.0,
        1 => (big_n * m1 + alpha) / d,
        2 => {
            let m2 = operator_moment_base(2, n, x, params);
            (big_n * big_n * m2 + 2.0 * alpha * big_n * m1 + alpha * alpha) / (d * d)
        }
        _ => f64::NAN,
    }
}

pub fn gamma_coefficients(n: u32, params: &PqParams, st: &StancuParams) -> GammaCoefficients {
    let (p, q) = (params.p(), params.q());
    let (alpha, beta) = (st.alpha(), st.beta());
    let big_n = pq_int(n, params);
    let two = pq_int(2, params);
    let d = big_n + beta;
    let n = i64::from(n);
    let qpn1 = q * pw(params, n - 1);

    let gamma1 = (big_n * big_n * q * p * p + big_n * pw(params, n + 2)) / (q * d * d)
        - 2.0 * big_n / d
        + 1.0;
    let lin = (big_n * two * two * pw(params, n - 1) + 2.0 * alpha * big_n) / (d * d);
    let gamma2 = lin - 2.0 * (qpn1 + alpha) / d;
    let gamma2_printed = lin - (2.0 * qpn1 + alpha) / d;
    let gamma3 =
        (two * q * q * pw(params, 2 * n - 1) + 2.0 * alpha * qpn1 + alpha * alpha) / (d * d);
    GammaCoefficients {
        gamma1,
        gamma2,
        gamma3,
        gamma_star: gamma1.max(gamma2 / 2.0).max(gamma3),
        gamma2_printed,
    }
}

/// Published first and second central moments `B((t-x)^j; x)`, `j = 1, 2`.
pub fn central_moments(n: u32, x: f64, params: &PqParams, st: &StancuParams) -> (f64, f64) {
    let big_n = pq_int(n, params);
    let (alpha, beta) = (st.alpha(), st.beta());
    let first = (-beta * x + params.q() * pw(params, i64::from(n) - 1) + alpha) / (big_n + beta);
    let g = gamma_coefficients(n, params, st);
    (first, g.gamma1 * x * x + g.gamma2 * x + g.gamma3)
}

/// Square of the published first central moment.
pub fn mu_squared(n: u32, x: f64, params: &PqParams, st: &StancuParams) -> f64 {
    let (first, _) = central_moments(n, x, params, st);
    first * first
}

/// Numeric `B(t^order; x)` through the full pipeline, against a closed form.
pub fn moment_report(
    op: &Operator,
    order: u32,
    x: f64,
    reference: MomentReference,
) -> Result<MomentReport> {
    check_order(order)?;
    let numeric = op.apply(&RealFunction::monomial(order)?, x)?;
    let closed = match reference {
        MomentReference::Published => {
            closed_moment_stancu(order, op.n(), x, op.params(), op.stancu())?
        }
        MomentReference::Operator => {
            operator_moment_stancu(order, op.n(), x, op.params(), op.stancu())
        }
    };
    Ok(MomentReport::new(order, numeric, closed))
}
