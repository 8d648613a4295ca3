//! Numerically stable accumulation helpers shared across the crate.

/// ln(e^a + e^b) without overflow for large arguments.
///
/// Handles the empty-sum convention: `logaddexp(NEG_INFINITY, b) == b`.
#[inline]
pub fn logaddexp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Kahan-Babuska (Neumaier) compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of the values in `it`.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut acc = NeumaierSum::new();
    for v in it {
        acc.add(v);
    }
    acc.value()
}

/// Running sum kept both in linear space (compensated) and in log space.
///
/// Terms are supplied as logarithms. The linear track gives near-exact
/// values while the sum is representable; the log track keeps going when
/// individual terms or the total would overflow an f64.
#[derive(Debug, Clone, Copy)]
pub struct DualTrackSum {
    linear: NeumaierSum,
    linear_valid: bool,
    log_sum: f64,
}

impl Default for DualTrackSum {
    fn default() -> Self {
        Self {
            linear: NeumaierSum::new(),
            linear_valid: true,
            log_sum: f64::NEG_INFINITY,
        }
    }
}

impl DualTrackSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add a positive term given as its natural log.
    #[inline]
    pub fn add_log(&mut self, log_term: f64) {
        self.log_sum = logaddexp(self.log_sum, log_term);
        if self.linear_valid {
            let t = log_term.exp();
            if t.is_finite() {
                self.linear.add(t);
                if !self.linear.value().is_finite() {
                    self.linear_valid = false;
                }
            } else {
                self.linear_valid = false;
            }
        }
    }

    /// Add a positive term given in linear space (its log must be supplied
    /// for the log track).
    #[inline]
    pub fn add(&mut self, term: f64, log_term: f64) {
        self.log_sum = logaddexp(self.log_sum, log_term);
        if self.linear_valid {
            if term.is_finite() {
                self.linear.add(term);
                if !self.linear.value().is_finite() {
                    self.linear_valid = false;
                }
            } else {
                self.linear_valid = false;
            }
        }
    }

    /// Current value in linear space; `inf` if beyond the f64 range.
    #[inline]
    pub fn value(&self) -> f64 {
        if self.linear_valid {
            self.linear.value()
        } else {
            self.log_sum.exp()
        }
    }

    /// Natural log of the current value.
    #[inline]
    pub fn log_value(&self) -> f64 {
        if self.linear_valid && self.linear.value() > 0.0 {
            self.linear.value().ln()
        } else {
            self.log_sum
        }
    }
}

/// Format a float with 17 significant digits (round-trip safe).
pub fn fmt_f64(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        // Integers print exactly without an exponent.
        format!("{v}")
    } else {
        format!("{v:.16e}")
    }
}

/// Median of a slice (averages the middle pair for even lengths).
/// Panics on empty input.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of empty slice");
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("NaN in median input"));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Quantile by linear interpolation on the sorted sample, q in [0, 1].
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        let w = pos - lo as f64;
        sorted[lo] * (1.0 - w) + sorted[hi] * w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logaddexp_matches_naive_in_range() {
        for (a, b) in [(0.0f64, 0.0f64), (1.0, -3.0), (-700.0, -701.0), (5.0, 5.0)] {
            let naive = (a.exp() + b.exp()).ln();
            assert!((logaddexp(a, b) - naive).abs() < 1e-13);
        }
    }

    #[test]
    fn logaddexp_survives_large_args() {
        let v = logaddexp(1000.0, 999.0);
        assert!((v - (1000.0 + (-1.0f64).exp().ln_1p())).abs() < 1e-12);
        assert_eq!(logaddexp(f64::NEG_INFINITY, 3.0), 3.0);
    }

    #[test]
    fn neumaier_beats_naive() {
        let mut s = NeumaierSum::new();
        s.add(1.0);
        for _ in 0..10 {
            s.add(1e-17);
        }
        assert!((s.value() - (1.0 + 1e-16)).abs() < 1e-18);
    }

    #[test]
    fn dual_track_switches_to_log() {
        let mut s = DualTrackSum::new();
        s.add_log(710.0);
        s.add_log(710.0);
        assert!((s.log_value() - (710.0 + 2f64.ln())).abs() < 1e-12);
        assert!(s.value().is_infinite());
    }

    #[test]
    fn dual_track_linear_is_exact_for_small_ints() {
        let mut s = DualTrackSum::new();
        for i in 1..=100u32 {
            let v = f64::from(i);
            s.add(v, v.ln());
        }
        assert_eq!(s.value(), 5050.0);
    }

    #[test]
    fn fmt_round_trips() {
        for v in [0.1, 25.0, std::f64::consts::PI, 1.0 / 3.0, 2.5e-300] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
    }

    #[test]
    fn median_and_quantile() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        let sorted = [0.0, 1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&sorted, 0.5), 2.0);
        assert_eq!(quantile(&sorted, 0.25), 1.0);
        assert_eq!(quantile(&sorted, 1.0), 4.0);
    }
}
