//! Small summation helpers shared by the series code.

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Streaming log-sum-exp over a sequence of log-magnitudes.
#[derive(Debug, Clone, Copy)]
pub struct LogSumExp {
    max: f64,
    scaled: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self { max: f64::NEG_INFINITY, scaled: 0.0 }
    }
}

impl LogSumExp {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, log_term: f64) {
        if log_term == f64::NEG_INFINITY {
            return;
        }
        if log_term > self.max {
            self.scaled = self.scaled * (self.max - log_term).exp() + 1.0;
            self.max = log_term;
        } else {
            self.scaled += (log_term - self.max).exp();
        }
    }

    /// Log of the accumulated sum; `-inf` when empty.
    #[inline]
    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }
}

pub fn log_sum_exp(terms: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = LogSumExp::new();
    for t in terms {
        acc.add(t);
    }
    acc.value()
}

/// `j * ln(y)` with the convention `0 * ln(0) = 0`.
#[inline]
pub(crate) fn k_log(k: usize, log_y: f64) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * log_y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn compensated_sum_recovers_small_addends() {
        let mut s = CompensatedSum::new();
        s.add(1.0);
        for _ in 0..1000 {
            s.add(1e-17);
        }
        s.add(-1.0);
        assert!((s.value() - 1e-14).abs() < 1e-26);
    }

    #[test]
    fn empty_log_sum_is_neg_infinity() {
        assert_eq!(log_sum_exp(std::iter::empty()), f64::NEG_INFINITY);
        assert_eq!(log_sum_exp([f64::NEG_INFINITY, 0.0]), 0.0);
    }

    proptest! {
        #[test]
        fn log_sum_exp_matches_direct(xs in proptest::collection::vec(-30f64..30.0, 1..40)) {
            let direct: f64 = xs.iter().map(|x| x.exp()).sum::<f64>().ln();
            let lse = log_sum_exp(xs.iter().copied());
            prop_assert!((direct - lse).abs() <= 1e-13 * (1.0 + direct.abs()));
        }
    }
}
