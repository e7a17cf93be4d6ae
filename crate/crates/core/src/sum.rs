use core::ops::AddAssign;

use crate::fmath::abs;

/// Kahan-Babuska-Neumaier compensated accumulator.
///
/// Keeps a running compensation term so that sums of alternating terms with
/// large cancellation stay accurate to a few ulps of the largest partial sum.
/// Also tracks the sum of magnitudes, which bounds the cancellation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
    magnitude: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if abs(self.sum) >= abs(value) {
            self.comp += (self.sum - t) + value;
        } else {
            self.comp += (value - t) + self.sum;
        }
        self.sum = t;
        self.magnitude += abs(value);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// Sum of |terms| seen so far.
    #[inline]
    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    /// Ratio of the magnitude sum to the result; 1 means no cancellation.
    pub fn cancellation(&self) -> f64 {
        let v = abs(self.value());
        if v == 0.0 {
            if self.magnitude == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            self.magnitude / v
        }
    }
}

impl AddAssign<f64> for NeumaierSum {
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

impl core::iter::FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}
