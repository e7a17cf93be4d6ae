//! The (p,q)-Baskakov-Durrmeyer operator, its Stancu form, and the auxiliary
//! operator used in the local estimates.
//!
//! ```text
//! B(f; x) = [n] sum_k b_{n,k}(x) int_0^{inf/A} w_k(t) f(s_k(t)) d_{p,q}t
//! ```
//!
//! with `w_k` the Durrmeyer weight of [`KernelVariant`], `s_k` the Stancu
//! argument and `A = (p-q) q [n] / p^2`, the lattice through the zeros of
//! `E(-q[n]t)` (see [`ExpLattice`]).

use crate::error::Result;
use crate::fmath::ln;
use crate::function::RealFunction;
use crate::integrate::{ExpLattice, TruncationConfig};
use crate::kernel::{basis_terms, ArgumentMap, KernelVariant, StancuParams};
use crate::moments::operator_moment_stancu;
use crate::pq::{pq_int, PqParams};
use crate::sum::NeumaierSum;

/// The operator for one `(n, p, q, alpha, beta)`, with its lattice tabulated.
///
/// Cheap to share between threads; every `apply` is independent.
#[derive(Debug, Clone)]
pub struct Operator {
    n: u32,
    params: PqParams,
    stancu: StancuParams,
    cfg: TruncationConfig,
    variant: KernelVariant,
    int_n: f64,
    lattice: ExpLattice,
}

impl Operator {
    pub fn new(
        n: u32,
        params: &PqParams,
        stancu: &StancuParams,
        cfg: &TruncationConfig,
    ) -> Result<Self> {
        Self::with_variant(n, params, stancu, cfg, KernelVariant::Gamma)
    }

    pub fn with_variant(
        n: u32,
        params: &PqParams,
        stancu: &StancuParams,
        cfg: &TruncationConfig,
        variant: KernelVariant,
    ) -> Result<Self> {
        if n == 0 {
            return Err(crate::Error::Domain("operator requires n >= 1"));
        }
        cfg.validate()?;
        let int_n = pq_int(n, params);
        let lattice = ExpLattice::new(params.q() * int_n, params, cfg)?;
        Ok(Self {
            n,
            params: *params,
            stancu: *stancu,
            cfg: *cfg,
            variant,
            int_n,
            lattice,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn params(&self) -> &PqParams {
        &self.params
    }

    pub fn stancu(&self) -> &StancuParams {
        &self.stancu
    }

    pub fn variant(&self) -> KernelVariant {
        self.variant
    }

    pub fn lattice(&self) -> &ExpLattice {
        &self.lattice
    }

    /// `B_{n,alpha,beta}(f; x)`.
    pub fn apply(&self, f: &RealFunction, x: f64) -> Result<f64> {
        let terms = basis_terms(self.n, x, &self.params, &self.cfg)?;
        let ln_n = ln(self.int_n);
        let mut acc = NeumaierSum::new();
        for term in terms {
            let k = term.k;
            let map = ArgumentMap::new(self.n, k, self.int_n, &self.params, &self.stancu);
            let power = self.variant.t_power(k);
            let ln_scale = term.weight.ln_magnitude()
                + ln_n
                + self.variant.ln_normalization(k, &self.params)
                + f64::from(k) * ln_n;
            let inner = self.lattice.integrate(
                power,
                ln_scale,
                |t| f.eval(map.apply(t)),
                |t| f.bound(map.apply(t)),
                self.cfg.integral_tol,
            )?;
            acc.add(inner);
        }
        Ok(acc.value())
    }

    /// First moment `B(t; x)` of this operator in closed form, or numerically
    /// for the diagnostic kernels.
    pub fn first_moment(&self, x: f64) -> Result<f64> {
        match self.variant {
            KernelVariant::Gamma => Ok(operator_moment_stancu(
                1,
                self.n,
                x,
                &self.params,
                &self.stancu,
            )),
            _ => self.apply(&RealFunction::monomial(1)?, x),
        }
    }

    /// `B^(g; x) = B(g; x) + g(x) - g(B(t; x))`.
    pub fn apply_auxiliary(&self, g: &RealFunction, x: f64) -> Result<f64> {
        let m1 = self.first_moment(x)?;
        Ok(self.apply(g, x)? + g.eval(x)? - g.eval(m1)?)
    }
}

/// `B_n(f; x)`, the operator without Stancu shift.
pub fn apply_base(
    f: &RealFunction,
    n: u32,
    x: f64,
    params: &PqParams,
    cfg: &TruncationConfig,
) -> Result<f64> {
    apply_stancu(f, n, x, params, &StancuParams::NONE, cfg)
}

/// `B_{n,alpha,beta}(f; x)`.
pub fn apply_stancu(
    f: &RealFunction,
    n: u32,
    x: f64,
    params: &PqParams,
    st: &StancuParams,
    cfg: &TruncationConfig,
) -> Result<f64> {
    Operator::new(n, params, st, cfg)?.apply(f, x)
}

/// `B^_{n,alpha,beta}(g; x)`.
pub fn apply_auxiliary(
    g: &RealFunction,
    n: u32,
    x: f64,
    params: &PqParams,
    st: &StancuParams,
    cfg: &TruncationConfig,
) -> Result<f64> {
    Operator::new(n, params, st, cfg)?.apply_auxiliary(g, x)
}
