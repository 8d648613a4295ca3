//! Electrical-network quantities for a reflected walk on the half-line:
//! edge resistances, harmonic scale, reversing measure, and expected
//! hitting times, with the standard comparison inequalities as checks.
//!
//! The walk's law depends only on weight ratios, so all derived quantities
//! are computed on the sequence normalized to unit weight at the origin
//! edge. Resistances are kept in log space; sums are accumulated on a dual
//! linear/log track so that profiles remain exact in the ordinary range
//! and keep working when individual resistances leave it.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::numeric::{fmt_f64, logaddexp, DualTrackSum};
use crate::weights::WeightProfile;

/// Positive edge weights `w_0 .. w_xmax`, stored as natural logs.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence {
    log_w: Vec<f64>,
}

impl WeightSequence {
    pub fn from_log_weights(log_w: Vec<f64>) -> Result<Self> {
        if log_w.is_empty() {
            return Err(Error::Config("weight sequence must be nonempty".into()));
        }
        if let Some(bad) = log_w.iter().position(|v| !v.is_finite()) {
            return Err(Error::Config(format!(
                "log-weight at x = {bad} is not finite"
            )));
        }
        Ok(Self { log_w })
    }

    pub fn from_weights(w: &[f64]) -> Result<Self> {
        let log_w = w
            .iter()
            .enumerate()
            .map(|(x, &v)| {
                if v > 0.0 && v.is_finite() {
                    Ok(v.ln())
                } else {
                    Err(Error::Config(format!(
                        "weight at x = {x} must be positive and finite, got {v}"
                    )))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_log_weights(log_w)
    }

    /// Initial weights of a profile over `0..=x_max`.
    pub fn from_profile(profile: &WeightProfile, x_max: usize) -> Self {
        Self {
            log_w: (0..=x_max as u64)
                .map(|x| profile.log_initial_weight(x))
                .collect(),
        }
    }

    pub fn x_max(&self) -> usize {
        self.log_w.len() - 1
    }

    pub fn log_weight(&self, x: usize) -> f64 {
        self.log_w[x]
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_w
    }

    /// CSV with columns `x,w`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,w")?;
        for (x, lw) in self.log_w.iter().enumerate() {
            writeln!(w, "{},{}", x, fmt_f64(lw.exp()))?;
        }
        Ok(())
    }

    /// Parse the `x,w` CSV produced by [`write_csv`](Self::write_csv).
    /// Rows must be consecutive from `x = 0`.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut log_w = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if lineno == 0 || line.is_empty() {
                continue;
            }
            let mut parts = line.split(',');
            let parse = |s: Option<&str>| -> Result<f64> {
                s.ok_or(Error::Parse {
                    line: lineno + 1,
                    msg: "missing field".into(),
                })?
                .trim()
                .parse()
                .map_err(|e| Error::Parse {
                    line: lineno + 1,
                    msg: format!("{e}"),
                })
            };
            let x = parse(parts.next())? as usize;
            let w = parse(parts.next())?;
            if x != log_w.len() {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("expected x = {}, got {x}", log_w.len()),
                });
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("weight must be positive and finite, got {w}"),
                });
            }
            log_w.push(w.ln());
        }
        Self::from_log_weights(log_w)
    }
}

/// Resistances, harmonic scale, reversing measure, and hitting times for a
/// weight sequence. Immutable and shareable.
///
/// Index conventions: `log_gamma` and `pi` run over `0..=x_max`; `h` and
/// `t` run over `0..=x_max+1`. The reversing measure may underflow to zero
/// for extreme sequences; `log_gamma` always carries the exact information.
#[derive(Debug, Clone)]
pub struct ResistanceProfile {
    pub log_gamma: Vec<f64>,
    pub h: Vec<f64>,
    pub pi: Vec<f64>,
    pub z_partial: f64,
    pub t: Vec<f64>,
}

/// Build the full profile in a single pass using the prefix-sum form of
/// the hitting-time identity, `T(x) = sum_{i<x} gamma_i sum_{j<=i} pi_j`.
///
/// Fails with [`Error::Overflow`] at the first index whose stored value
/// exceeds the f64 range even after log-space rescaling.
pub fn build_resistance_profile(w: &WeightSequence) -> Result<ResistanceProfile> {
    let x_max = w.x_max();
    let lw0 = w.log_weight(0);

    // ln gamma_x = ln w_0 - ln w_x by telescoping of the ratio product.
    let log_gamma: Vec<f64> = (0..=x_max).map(|x| lw0 - w.log_weight(x)).collect();

    let mut pi = Vec::with_capacity(x_max + 1);
    let mut h = Vec::with_capacity(x_max + 2);
    let mut t = Vec::with_capacity(x_max + 2);
    h.push(0.0);
    t.push(0.0);

    let mut pi_prefix = DualTrackSum::new(); // sum_{j<=x} pi_j
    let mut h_acc = DualTrackSum::new();
    let mut t_acc = DualTrackSum::new();

    for x in 0..=x_max {
        // Normalized reversing measure pi_x = (w_{x-1} + w_x) / w_0.
        let log_pi = if x == 0 {
            0.0
        } else {
            logaddexp(-log_gamma[x - 1], -log_gamma[x])
        };
        let pi_x = log_pi.exp();
        if pi_x.is_infinite() {
            return Err(Error::Overflow { field: "pi", x });
        }
        pi.push(pi_x);
        pi_prefix.add_log(log_pi);

        h_acc.add_log(log_gamma[x]);
        let hx = h_acc.value();
        if hx.is_infinite() {
            return Err(Error::Overflow { field: "h", x: x + 1 });
        }
        h.push(hx);

        t_acc.add_log(log_gamma[x] + pi_prefix.log_value());
        let tx = t_acc.value();
        if tx.is_infinite() {
            return Err(Error::Overflow { field: "T", x: x + 1 });
        }
        t.push(tx);
    }

    let z_partial = pi_prefix.value();
    if z_partial.is_infinite() {
        return Err(Error::Overflow {
            field: "z_partial",
            x: x_max,
        });
    }

    Ok(ResistanceProfile {
        log_gamma,
        h,
        pi,
        z_partial,
        t,
    })
}

impl ResistanceProfile {
    pub fn x_max(&self) -> usize {
        self.log_gamma.len() - 1
    }

    /// `T(x)`, the expected first-entrance time of `x` from the origin.
    /// Valid for `x <= x_max + 1`.
    pub fn hitting_time(&self, x: usize) -> Result<f64> {
        self.t
            .get(x)
            .copied()
            .ok_or(Error::OutOfRange { x, max: self.t.len() - 1 })
    }

    /// CSV with columns `x,log_gamma,h,pi,t` over `0..=x_max`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,log_gamma,h,pi,t")?;
        for x in 0..=self.x_max() {
            writeln!(
                w,
                "{},{},{},{},{}",
                x,
                fmt_f64(self.log_gamma[x]),
                fmt_f64(self.h[x]),
                fmt_f64(self.pi[x]),
                fmt_f64(self.t[x]),
            )?;
        }
        Ok(())
    }
}

/// Expected hitting time of `x` for the walk with weights `w`.
pub fn expected_hitting_time(w: &WeightSequence, x: usize) -> Result<f64> {
    if x > w.x_max() + 1 {
        return Err(Error::OutOfRange { x, max: w.x_max() + 1 });
    }
    build_resistance_profile(w)?.hitting_time(x)
}

/// Identifier of one of the comparison inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundId {
    /// `T(x) >= h(x) >= max_{i<x} gamma_i >= gamma_{x-1}`.
    HittingAboveHarmonic,
    /// `T(x) <= 2 x^2 (max gamma) (max 1/gamma)`.
    QuadraticUpper,
    /// `T(x) <= Z h(x) <= Z x (max gamma)`, `Z` an upper bound for the
    /// total reversing mass.
    MassUpper,
}

impl BoundId {
    pub fn label(&self) -> &'static str {
        match self {
            BoundId::HittingAboveHarmonic => "lower_chain",
            BoundId::QuadraticUpper => "quadratic_upper",
            BoundId::MassUpper => "mass_upper",
        }
    }
}

/// Worst slack of one inequality over the profile.
#[derive(Debug, Clone, Copy)]
pub struct BoundCheck {
    pub bound: BoundId,
    pub min_slack: f64,
    pub argmin_x: usize,
    pub violations: usize,
}

#[derive(Debug, Clone)]
pub struct BoundsReport {
    pub checks: Vec<BoundCheck>,
    pub tol_rel: f64,
}

impl BoundsReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.violations == 0)
    }
}

/// Evaluate the comparison inequalities at every `1 <= x <= x_max + 1`.
///
/// A slack below `-tol_rel * T(x)` counts as a violation. `z_upper` must
/// only be supplied when the caller has certified, analytically, that the
/// total reversing mass converges and is dominated by it; the mass bound
/// is skipped otherwise.
pub fn check_bounds(p: &ResistanceProfile, z_upper: Option<f64>, tol_rel: f64) -> BoundsReport {
    let mut lower = BoundCheck {
        bound: BoundId::HittingAboveHarmonic,
        min_slack: f64::INFINITY,
        argmin_x: 0,
        violations: 0,
    };
    let mut quad = BoundCheck {
        bound: BoundId::QuadraticUpper,
        min_slack: f64::INFINITY,
        argmin_x: 0,
        violations: 0,
    };
    let mut mass = BoundCheck {
        bound: BoundId::MassUpper,
        min_slack: f64::INFINITY,
        argmin_x: 0,
        violations: 0,
    };

    let mut max_lg = f64::NEG_INFINITY;
    let mut max_neg_lg = f64::NEG_INFINITY;
    for x in 1..=p.x_max() + 1 {
        max_lg = max_lg.max(p.log_gamma[x - 1]);
        max_neg_lg = max_neg_lg.max(-p.log_gamma[x - 1]);
        let tx = p.t[x];
        let tol = tol_rel * tx.abs();
        let max_gamma = max_lg.exp();

        let slack = (tx - p.h[x])
            .min(p.h[x] - max_gamma)
            .min(max_gamma - p.log_gamma[x - 1].exp());
        record(&mut lower, x, slack, tol);

        // RHS assembled in log space: 2 x^2 (max gamma)(max 1/gamma).
        let rhs_ln = 2f64.ln() + 2.0 * (x as f64).ln() + max_lg + max_neg_lg;
        record(&mut quad, x, rhs_ln.exp() - tx, tol);

        if let Some(z) = z_upper {
            record(&mut mass, x, z * p.h[x] - tx, tol);
        }
    }

    let mut checks = vec![lower, quad];
    if z_upper.is_some() {
        checks.push(mass);
    }
    BoundsReport { checks, tol_rel }
}

fn record(check: &mut BoundCheck, x: usize, slack: f64, tol: f64) {
    if slack < check.min_slack {
        check.min_slack = slack;
        check.argmin_x = x;
    }
    if slack < -tol {
        check.violations += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::compensated_sum;
    use proptest::prelude::*;

    fn unit_weights(x_max: usize) -> WeightSequence {
        WeightSequence::from_log_weights(vec![0.0; x_max + 1]).unwrap()
    }

    /// Test-only oracle: the double-sum form of the hitting-time identity,
    /// `T(x) = sum_{j<x} pi_j (h(x) - h(j))`, evaluated directly.
    fn hitting_time_double_sum(w: &WeightSequence, x: usize) -> f64 {
        let w0 = w.log_weight(0).exp();
        let wx: Vec<f64> = w.log_weights().iter().map(|lw| lw.exp() / w0).collect();
        let gamma: Vec<f64> = wx.iter().map(|v| 1.0 / v).collect();
        let h = |x: usize| compensated_sum(gamma[..x].iter().copied());
        let pi = |j: usize| if j == 0 { wx[0] } else { wx[j - 1] + wx[j] };
        compensated_sum((0..x).map(|j| pi(j) * (h(x) - h(j))))
    }

    #[test]
    fn unit_weights_give_square_hitting_times() {
        let w = unit_weights(100);
        let p = build_resistance_profile(&w).unwrap();
        for x in 0..=100 {
            assert_eq!(p.log_gamma[x], 0.0);
            assert!((p.h[x] - x as f64).abs() < 1e-12);
            let t = p.t[x];
            let want = (x * x) as f64;
            assert!((t - want).abs() <= 1e-12 * want, "T({x}) = {t}");
        }
    }

    #[test]
    fn two_step_example() {
        let w = WeightSequence::from_weights(&[1.0, 2.0]).unwrap();
        let p = build_resistance_profile(&w).unwrap();
        assert!((p.log_gamma[1] - 0.5f64.ln()).abs() < 1e-15);
        assert!((p.h[2] - 1.5).abs() < 1e-14);
        assert!((p.t[2] - 3.0).abs() < 1e-14);
        assert!((hitting_time_double_sum(&w, 2) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn hitting_time_bounds_and_range() {
        let w = unit_weights(30);
        assert!((expected_hitting_time(&w, 5).unwrap() - 25.0).abs() < 1e-12);
        assert!((expected_hitting_time(&w, 1).unwrap() - 1.0).abs() < 1e-14);
        assert!(expected_hitting_time(&w, 32).is_err());
    }

    #[test]
    fn profile_is_scale_invariant() {
        // Scaling every weight leaves the walk, and hence T, unchanged.
        let base = WeightSequence::from_weights(&[1.0, 0.5, 2.5, 0.25]).unwrap();
        let scaled = WeightSequence::from_weights(&[7.0, 3.5, 17.5, 1.75]).unwrap();
        let a = build_resistance_profile(&base).unwrap();
        let b = build_resistance_profile(&scaled).unwrap();
        for x in 0..=4 {
            assert!((a.t[x] - b.t[x]).abs() < 1e-12 * a.t[x].max(1.0));
        }
    }

    #[test]
    fn overflow_reports_index() {
        // gamma_x = exp(800) at x = 1 pushes T(2) out of range.
        let w = WeightSequence::from_log_weights(vec![0.0, -800.0]).unwrap();
        match build_resistance_profile(&w) {
            Err(Error::Overflow { x, .. }) => assert_eq!(x, 2),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn log_space_track_survives_huge_resistance_ranges() {
        // ln w descends by 30 per edge: gamma_20 = e^600 is near the f64
        // ceiling but T(21) ~ e^600 is still representable.
        let log_w: Vec<f64> = (0..=20).map(|x| -30.0 * x as f64).collect();
        let w = WeightSequence::from_log_weights(log_w).unwrap();
        let p = build_resistance_profile(&w).unwrap();
        let t21 = p.t[21];
        assert!(t21.is_finite() && t21 > 1e260);
        // Leading term gamma_20 * (pi_0 + pi_1) = 2 e^600 up to e^-30 tails.
        let oracle = 2.0 * 600f64.exp();
        assert!((t21 / oracle - 1.0).abs() < 1e-12, "T(21)/2e^600 = {}", t21 / oracle);

        // gamma_{x-1} = e^{30(x-1)} crosses the f64 ceiling near x = 25.
        let log_w: Vec<f64> = (0..=30).map(|x| -30.0 * x as f64).collect();
        let w = WeightSequence::from_log_weights(log_w).unwrap();
        match build_resistance_profile(&w) {
            Err(Error::Overflow { x, .. }) => assert_eq!(x, 25),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn check_bounds_constant_weights() {
        let w = unit_weights(10);
        let p = build_resistance_profile(&w).unwrap();
        let report = check_bounds(&p, None, 1e-10);
        assert!(report.pass());
        assert_eq!(report.checks.len(), 2); // mass bound skipped without z_upper
        // At x = 4 the quadratic bound reads 16 <= 32.
        let quad = &report.checks[1];
        assert_eq!(quad.bound, BoundId::QuadraticUpper);
        // min slack over x of 2x^2 - x^2 = x^2 is attained at x = 1.
        assert_eq!(quad.argmin_x, 1);
        assert!((quad.min_slack - 1.0).abs() < 1e-12);
    }

    #[test]
    fn check_bounds_with_mass_bound() {
        // Converging reversing mass: w0(x) = (ln x) / x^2 type decay.
        let profile = WeightProfile::log_poly(-2.0, 1.0, 1.0).unwrap();
        let w = WeightSequence::from_profile(&profile, 1000);
        let p = build_resistance_profile(&w).unwrap();
        // Analytic tail bound for 2 sum_{x>N} w0(x) via integral comparison.
        let n = 1_000_000f64;
        let tail = 2.0 * (n.ln() + 1.0) / n;
        let big = WeightSequence::from_profile(&profile, 1_000_000);
        let z_upper = build_resistance_profile(&big).unwrap().z_partial + tail;
        let report = check_bounds(&p, Some(z_upper), 1e-10);
        assert!(report.pass(), "{:?}", report.checks);
        assert_eq!(report.checks.len(), 3);
    }

    #[test]
    fn weight_csv_round_trip() {
        let w = WeightSequence::from_weights(&[1.0, 0.125, 3.5, 9.75]).unwrap();
        let mut buf = Vec::new();
        w.write_csv(&mut buf).unwrap();
        let back = WeightSequence::read_csv(&buf[..]).unwrap();
        assert_eq!(back, w);
    }

    proptest! {
        // Telescoped log-resistance equals the direct product of the
        // step-probability ratios.
        #[test]
        fn telescoping_matches_ratio_product(
            log_w in proptest::collection::vec(-3.0f64..3.0, 2..50)
        ) {
            let w = WeightSequence::from_log_weights(log_w.clone()).unwrap();
            let p = build_resistance_profile(&w).unwrap();
            let mut direct = 1.0f64;
            for x in 1..log_w.len() {
                let wx = log_w[x].exp();
                let wxm1 = log_w[x - 1].exp();
                let px = wx / (wxm1 + wx);
                let qx = wxm1 / (wxm1 + wx);
                direct *= qx / px;
                let telescoped = p.log_gamma[x].exp();
                prop_assert!((telescoped - direct).abs() <= 1e-12 * direct.abs());
            }
        }

        // All three algebraic forms of T agree.
        #[test]
        fn t_forms_agree(log_w in proptest::collection::vec(-2.0f64..2.0, 2..100)) {
            let w = WeightSequence::from_log_weights(log_w).unwrap();
            let p = build_resistance_profile(&w).unwrap();
            let x = w.x_max() + 1;
            let oracle = hitting_time_double_sum(&w, x);
            prop_assert!((p.t[x] - oracle).abs() <= 1e-10 * oracle.abs());
        }

        // T strictly increasing with increments gamma_x * prefix(pi).
        #[test]
        fn t_strictly_increasing(log_w in proptest::collection::vec(-2.0f64..2.0, 2..60)) {
            let w = WeightSequence::from_log_weights(log_w).unwrap();
            let p = build_resistance_profile(&w).unwrap();
            for x in 0..=w.x_max() {
                prop_assert!(p.t[x + 1] > p.t[x]);
                let inc = p.log_gamma[x].exp()
                    * compensated_sum(p.pi[..=x].iter().copied());
                let got = p.t[x + 1] - p.t[x];
                prop_assert!((got - inc).abs() <= 1e-9 * inc.abs().max(1e-300));
            }
        }

        // The comparison inequalities hold on every constructed profile.
        #[test]
        fn bounds_hold(log_w in proptest::collection::vec(-2.5f64..2.5, 2..60)) {
            let w = WeightSequence::from_log_weights(log_w).unwrap();
            let p = build_resistance_profile(&w).unwrap();
            prop_assert!(check_bounds(&p, None, 1e-10).pass());
        }

        #[test]
        fn h_monotone_and_anchored(log_w in proptest::collection::vec(-2.0f64..2.0, 2..40)) {
            let w = WeightSequence::from_log_weights(log_w).unwrap();
            let p = build_resistance_profile(&w).unwrap();
            prop_assert_eq!(p.h[0], 0.0);
            prop_assert_eq!(p.log_gamma[0], 0.0);
            for x in 0..=w.x_max() {
                prop_assert!(p.h[x + 1] > p.h[x]);
                prop_assert!(p.pi[x] > 0.0);
            }
        }
    }
}
