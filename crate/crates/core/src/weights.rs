//! Initial-weight profiles on the half-line and their recurrence/transience
//! classification.
//!
//! Two families are supported. `LogPoly` assigns the edge `{x, x+1}` the
//! weight `x^alpha * (ln x)^beta` for `x >= 2` and unit weight for
//! `x = 0, 1`. `TakeiPoly` assigns `x^alpha` for `x >= 1` and unit weight
//! at the origin edge.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::NeumaierSum;

/// Weight-profile family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileFamily {
    #[serde(rename = "logpoly")]
    LogPoly,
    #[serde(rename = "takei")]
    TakeiPoly,
}

/// Initial-weight profile `(family, alpha, beta, delta)`.
///
/// `delta` is the reinforcement increment per edge traversal; `delta = 0`
/// gives the un-reinforced walk. For `TakeiPoly`, `beta` is fixed at zero.
/// Immutable after construction and safe to share across threads.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileRepr", into = "ProfileRepr")]
pub struct WeightProfile {
    family: ProfileFamily,
    alpha: f64,
    beta: f64,
    delta: f64,
}

#[derive(Serialize, Deserialize)]
struct ProfileRepr {
    family: ProfileFamily,
    alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    delta: f64,
}

impl From<WeightProfile> for ProfileRepr {
    fn from(p: WeightProfile) -> Self {
        ProfileRepr {
            family: p.family,
            alpha: p.alpha,
            beta: Some(p.beta),
            delta: p.delta,
        }
    }
}

impl TryFrom<ProfileRepr> for WeightProfile {
    type Error = Error;

    fn try_from(r: ProfileRepr) -> Result<Self> {
        match r.family {
            ProfileFamily::LogPoly => {
                let beta = r.beta.ok_or_else(|| {
                    Error::InvalidProfile("field `beta` is required for family \"logpoly\"".into())
                })?;
                WeightProfile::log_poly(r.alpha, beta, r.delta)
            }
            ProfileFamily::TakeiPoly => {
                if let Some(b) = r.beta {
                    if b != 0.0 {
                        return Err(Error::InvalidProfile(
                            "field `beta` must be 0 or absent for family \"takei\"".into(),
                        ));
                    }
                }
                WeightProfile::takei(r.alpha, r.delta)
            }
        }
    }
}

impl WeightProfile {
    /// `w0(x) = x^alpha (ln x)^beta` for `x >= 2`, unit weight at `x = 0, 1`.
    pub fn log_poly(alpha: f64, beta: f64, delta: f64) -> Result<Self> {
        validate_params(alpha, beta, delta)?;
        Ok(Self {
            family: ProfileFamily::LogPoly,
            alpha,
            beta,
            delta,
        })
    }

    /// `w0(x) = x^alpha` for `x >= 1`, unit weight at the origin edge.
    pub fn takei(alpha: f64, delta: f64) -> Result<Self> {
        validate_params(alpha, 0.0, delta)?;
        Ok(Self {
            family: ProfileFamily::TakeiPoly,
            alpha,
            beta: 0.0,
            delta,
        })
    }

    pub fn family(&self) -> ProfileFamily {
        self.family
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Initial weight of the edge `{x, x+1}`. Strictly positive.
    pub fn initial_weight(&self, x: u64) -> f64 {
        self.log_initial_weight(x).exp()
    }

    /// `ln w0(x)`, exact at the unit-weight sites.
    pub fn log_initial_weight(&self, x: u64) -> f64 {
        match self.family {
            ProfileFamily::LogPoly => {
                if x < 2 {
                    0.0
                } else {
                    let xf = x as f64;
                    self.alpha * xf.ln() + self.beta * xf.ln().ln()
                }
            }
            ProfileFamily::TakeiPoly => {
                if x == 0 {
                    0.0
                } else {
                    self.alpha * (x as f64).ln()
                }
            }
        }
    }

    /// Analytic recurrence/transience classification.
    ///
    /// The verdict is decided from `(family, alpha, beta)` alone; the
    /// partial sum of `1/w0` attached to the verdict is diagnostic only.
    pub fn classify_recurrence(&self) -> RecurrenceVerdict {
        self.classify_recurrence_with(DEFAULT_PHI0_TRUNCATION)
    }

    /// Classification with an explicit truncation for the diagnostic sum.
    pub fn classify_recurrence_with(&self, truncation: u64) -> RecurrenceVerdict {
        let recurrent = match self.family {
            ProfileFamily::LogPoly => self.alpha < 1.0 || (self.alpha == 1.0 && self.beta <= 1.0),
            ProfileFamily::TakeiPoly => self.alpha <= 1.0,
        };
        RecurrenceVerdict {
            verdict: if recurrent {
                Verdict::Recurrent
            } else {
                Verdict::Transient
            },
            phi0_partial: self.phi0_partial_sum(truncation),
            truncation,
        }
    }

    /// Partial sum of reciprocal weights over `x = 0..=n`.
    /// Monotone nondecreasing in `n`.
    pub fn phi0_partial_sum(&self, n: u64) -> f64 {
        let mut acc = NeumaierSum::new();
        for x in 0..=n {
            acc.add((-self.log_initial_weight(x)).exp());
        }
        acc.value()
    }
}

fn validate_params(alpha: f64, beta: f64, delta: f64) -> Result<()> {
    if !alpha.is_finite() {
        return Err(Error::InvalidProfile(format!("alpha must be finite, got {alpha}")));
    }
    if !beta.is_finite() {
        return Err(Error::InvalidProfile(format!("beta must be finite, got {beta}")));
    }
    if !delta.is_finite() || delta < 0.0 {
        return Err(Error::InvalidProfile(format!(
            "delta must be finite and >= 0, got {delta}"
        )));
    }
    Ok(())
}

const DEFAULT_PHI0_TRUNCATION: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Recurrent,
    Transient,
}

/// Classification result with a diagnostic partial sum of `1/w0`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RecurrenceVerdict {
    pub verdict: Verdict,
    pub phi0_partial: f64,
    pub truncation: u64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lp(alpha: f64, beta: f64, delta: f64) -> WeightProfile {
        WeightProfile::log_poly(alpha, beta, delta).unwrap()
    }

    #[test]
    fn initial_weight_examples() {
        assert_eq!(lp(1.0, 1.0, 1.0).initial_weight(0), 1.0);
        assert_eq!(lp(1.0, 1.0, 1.0).initial_weight(1), 1.0);
        let w4 = WeightProfile::takei(0.5, 1.0).unwrap().initial_weight(4);
        assert!((w4 - 2.0).abs() < 1e-15);
        let w2 = lp(1.0, 1.0, 1.0).initial_weight(2);
        assert!((w2 - 2.0 * std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(lp(1.0, 1.0, 1.0).classify_recurrence().verdict, Verdict::Recurrent);
        assert_eq!(lp(1.0, 2.0, 1.0).classify_recurrence().verdict, Verdict::Transient);
        assert_eq!(lp(2.0, 0.0, 1.0).classify_recurrence().verdict, Verdict::Transient);
        let takei = WeightProfile::takei(1.0, 0.5).unwrap();
        assert_eq!(takei.classify_recurrence().verdict, Verdict::Recurrent);
    }

    #[test]
    fn phi0_partial_examples() {
        assert_eq!(lp(3.0, -1.0, 1.0).phi0_partial_sum(1), 2.0);
        let takei = WeightProfile::takei(0.0, 1.0).unwrap();
        assert!((takei.phi0_partial_sum(9) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn phi0_converges_for_transient_profile() {
        // Tail of sum x^-2 beyond 1e6 is below 1e-6 << 1e-3.
        let p = lp(2.0, 0.0, 1.0);
        let a = p.phi0_partial_sum(1_000_000);
        let b = p.phi0_partial_sum(10_000_000);
        assert!(b >= a);
        assert!(b - a < 1e-3, "tail {}", b - a);
    }

    #[test]
    fn delta_zero_is_accepted_and_negative_rejected() {
        assert!(WeightProfile::log_poly(0.5, 1.0, 0.0).is_ok());
        assert!(WeightProfile::log_poly(0.5, 1.0, -0.1).is_err());
        assert!(WeightProfile::log_poly(f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn json_schema_round_trip() {
        let p = lp(0.5, -1.25, 2.0);
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"family\":\"logpoly\""), "{s}");
        let back: WeightProfile = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);

        let t: WeightProfile =
            serde_json::from_str(r#"{"family":"takei","alpha":0.5,"delta":1.0}"#).unwrap();
        assert_eq!(t.family(), ProfileFamily::TakeiPoly);
        assert_eq!(t.beta(), 0.0);

        // Missing beta for logpoly is a config error.
        assert!(
            serde_json::from_str::<WeightProfile>(r#"{"family":"logpoly","alpha":1.0,"delta":1.0}"#)
                .is_err()
        );
        // Negative delta rejected at the serde boundary too.
        assert!(serde_json::from_str::<WeightProfile>(
            r#"{"family":"logpoly","alpha":1.0,"beta":1.0,"delta":-1.0}"#
        )
        .is_err());
    }

    #[test]
    fn classification_independent_of_delta_and_beta_below_one() {
        for &delta in &[0.0, 0.5, 1.0, 7.0] {
            for &beta in &[-3.0, -0.5, 0.5, 4.0] {
                let v = lp(0.7, beta, delta).classify_recurrence().verdict;
                assert_eq!(v, Verdict::Recurrent);
            }
        }
    }

    proptest! {
        #[test]
        fn weights_positive_and_monotone(alpha in 0.0f64..2.0, beta in 0.0f64..2.0, x in 2u64..10_000) {
            let p = lp(alpha, beta, 1.0);
            let w = p.initial_weight(x);
            prop_assert!(w > 0.0);
            prop_assert!(p.initial_weight(x + 1) >= w);
        }

        #[test]
        fn phi0_monotone_in_n(alpha in -1.5f64..1.5, beta in -2.0f64..2.0, n in 1u64..500) {
            let p = lp(alpha, beta, 1.0);
            prop_assert!(p.phi0_partial_sum(n + 1) >= p.phi0_partial_sum(n));
        }
    }
}
