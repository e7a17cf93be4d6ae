use alloc::sync::Arc;

use crate::error::{Error, Result};
use crate::fmath::{abs, powi};

/// Growth class of an integrand on `[0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Growth {
    /// `|f(x)| <= M`.
    Bounded,
    /// `|f(x)| <= M (1 + x^2)`.
    Quadratic,
}

/// A real function on `[0, inf)` together with its declared growth bound.
///
/// The bound is checked on every point the operators evaluate; a violation
/// surfaces as [`Error::GrowthViolation`].
#[derive(Clone)]
pub struct RealFunction {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    growth: Growth,
    constant: f64,
}

impl core::fmt::Debug for RealFunction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("RealFunction")
            .field("growth", &self.growth)
            .field("constant", &self.constant)
            .finish_non_exhaustive()
    }
}

impl RealFunction {
    pub fn new<F>(eval: F, growth: Growth, constant: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(constant > 0.0 && constant.is_finite()) {
            return Err(Error::InvalidParams(
                "growth constant must be positive and finite",
            ));
        }
        Ok(Self {
            eval: Arc::new(eval),
            growth,
            constant,
        })
    }

    pub fn bounded<F>(eval: F, sup: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(eval, Growth::Bounded, sup)
    }

    pub fn quadratic<F>(eval: F, constant: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(eval, Growth::Quadratic, constant)
    }

    pub fn constant(c: f64) -> Self {
        let sup = if c == 0.0 { 1.0 } else { abs(c) };
        Self::bounded(move |_| c, sup).expect("finite constant")
    }

    /// `t^j` for `j <= 2`, the degrees with quadratic growth.
    pub fn monomial(j: u32) -> Result<Self> {
        match j {
            0 => Ok(Self::constant(1.0)),
            1 | 2 => Self::quadratic(move |t| powi(t, i64::from(j)), 1.0),
            _ => Err(Error::Domain(
                "monomials above degree 2 are not of quadratic growth",
            )),
        }
    }

    pub fn cos_x_squared() -> Self {
        Self::bounded(|x| libm::cos(x * x), 1.0).expect("valid bound")
    }

    pub fn growth(&self) -> Growth {
        self.growth
    }

    pub fn growth_constant(&self) -> f64 {
        self.constant
    }

    /// Declared bound on `|f|` at `x`.
    #[inline]
    pub fn bound(&self, x: f64) -> f64 {
        match self.growth {
            Growth::Bounded => self.constant,
            Growth::Quadratic => self.constant * (1.0 + x * x),
        }
    }

    /// Evaluate without checking the growth bound.
    #[inline]
    pub fn value(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    /// Evaluate and check the declared growth bound.
    #[inline]
    pub fn eval(&self, x: f64) -> Result<f64> {
        let v = (self.eval)(x);
        let bound = self.bound(x);
        if abs(v) <= bound * (1.0 + 1e-12) {
            Ok(v)
        } else {
            Err(Error::GrowthViolation {
                at: x,
                value: v,
                bound,
            })
        }
    }

    /// `a f + b g`, with the sum of the scaled growth constants.
    pub fn linear_combination(a: f64, f: &RealFunction, b: f64, g: &RealFunction) -> Result<Self> {
        let growth = if f.growth == Growth::Bounded && g.growth == Growth::Bounded {
            Growth::Bounded
        } else {
            Growth::Quadratic
        };
        let constant = (abs(a) * f.constant + abs(b) * g.constant).max(f64::MIN_POSITIVE);
        let (f, g) = (f.clone(), g.clone());
        Self::new(move |x| a * f.value(x) + b * g.value(x), growth, constant)
    }
}
