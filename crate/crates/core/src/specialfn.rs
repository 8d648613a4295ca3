//! Digamma/trigamma/log-Beta special functions, closed-form moment formulas
//! for the environment log-resistance, and asymptotic regime predictors.
//!
//! The polygamma implementations use upward recurrence to shift the argument
//! into `z >= 8` (10 for `ln_gamma`) and then a Bernoulli-number asymptotic
//! series truncated at `B_14`. No external math library is used.

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{fmt_f64, NeumaierSum};
use crate::weights::{ProfileFamily, WeightProfile};

/// `B_{2k} / (2k)` for k = 1..=7.
const DIGAMMA_COEFFS: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
];

/// `B_{2k}` for k = 1..=7.
const TRIGAMMA_COEFFS: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

/// `B_{2k} / ((2k)(2k-1))` for k = 1..=7.
const LN_GAMMA_COEFFS: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    7.0 / 1092.0,
];

const DIGAMMA_SHIFT: f64 = 8.0;
const LN_GAMMA_SHIFT: f64 = 10.0;
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_74;

/// Digamma function `psi(z)` for `z > 0`.
pub fn digamma(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain { func: "digamma", arg: z });
    }
    let mut shift = NeumaierSum::new();
    let mut zz = z;
    while zz < DIGAMMA_SHIFT {
        shift.add(-1.0 / zz);
        zz += 1.0;
    }
    let inv = 1.0 / zz;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut p = inv2;
    for c in DIGAMMA_COEFFS {
        series += c * p;
        p *= inv2;
    }
    Ok(shift.value() + zz.ln() - 0.5 * inv - series)
}

/// Trigamma function `psi'(z)` for `z > 0`. Strictly positive and
/// strictly decreasing.
pub fn trigamma(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain { func: "trigamma", arg: z });
    }
    let mut shift = NeumaierSum::new();
    let mut zz = z;
    while zz < DIGAMMA_SHIFT {
        shift.add(1.0 / (zz * zz));
        zz += 1.0;
    }
    let inv = 1.0 / zz;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut p = inv2 * inv;
    for c in TRIGAMMA_COEFFS {
        series += c * p;
        p *= inv2;
    }
    Ok(shift.value() + inv + 0.5 * inv2 + series)
}

/// `ln Gamma(z)` for `z > 0`.
pub fn ln_gamma(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain { func: "ln_gamma", arg: z });
    }
    let mut shift = NeumaierSum::new();
    let mut zz = z;
    while zz < LN_GAMMA_SHIFT {
        shift.add(-zz.ln());
        zz += 1.0;
    }
    let inv = 1.0 / zz;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut p = inv;
    for c in LN_GAMMA_COEFFS {
        series += c * p;
        p *= inv2;
    }
    Ok(shift.value() + (zz - 0.5) * zz.ln() - zz + HALF_LN_TWO_PI + series)
}

/// `ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b)`.
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain { func: "log_beta", arg: a });
    }
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::Domain { func: "log_beta", arg: b });
    }
    Ok(ln_gamma(a)? + ln_gamma(b)? - ln_gamma(a + b)?)
}

/// Beta shape parameters of the environment variable at site `i >= 1`:
/// `(w0(i) / 2 delta, (w0(i-1) + delta) / 2 delta)`.
pub fn beta_shapes(profile: &WeightProfile, i: u64) -> Result<(f64, f64)> {
    let delta = profile.delta();
    if delta <= 0.0 {
        return Err(Error::InvalidProfile(
            "delta must be > 0 for the random environment".into(),
        ));
    }
    if i == 0 {
        return Err(Error::OutOfRange { x: 0, max: 0 });
    }
    let a = profile.initial_weight(i) / (2.0 * delta);
    let b = (profile.initial_weight(i - 1) + delta) / (2.0 * delta);
    Ok((a, b))
}

fn require_positive_delta(profile: &WeightProfile, what: &str) -> Result<f64> {
    let delta = profile.delta();
    if delta <= 0.0 {
        return Err(Error::InvalidProfile(format!("{what} requires delta > 0")));
    }
    Ok(delta)
}

/// Mean of the log-resistance `S_x` under the Beta environment:
/// the site-by-site digamma sum.
pub fn mean_s(profile: &WeightProfile, x: u64) -> Result<f64> {
    let delta = require_positive_delta(profile, "mean_s")?;
    if x == 0 {
        return Err(Error::OutOfRange { x: 0, max: 0 });
    }
    let two_delta = 2.0 * delta;
    let mut acc = NeumaierSum::new();
    let mut w_prev = profile.initial_weight(0);
    for i in 1..=x {
        let w_i = profile.initial_weight(i);
        acc.add(digamma((w_prev + delta) / two_delta)?);
        acc.add(-digamma(w_i / two_delta)?);
        w_prev = w_i;
    }
    Ok(acc.value())
}

/// The regrouped form of the mean: boundary digamma difference plus the
/// half-shift telescoping sum. Algebraically identical to [`mean_s`].
pub fn mean_s_regrouped(profile: &WeightProfile, x: u64) -> Result<f64> {
    let delta = require_positive_delta(profile, "mean_s_regrouped")?;
    if x == 0 {
        return Err(Error::OutOfRange { x: 0, max: 0 });
    }
    let two_delta = 2.0 * delta;
    let mut acc = NeumaierSum::new();
    acc.add(digamma(profile.initial_weight(0) / two_delta)?);
    acc.add(-digamma(profile.initial_weight(x) / two_delta)?);
    for i in 0..x {
        let z = profile.initial_weight(i) / two_delta;
        acc.add(digamma(z + 0.5)?);
        acc.add(-digamma(z)?);
    }
    Ok(acc.value())
}

/// Variance of the log-resistance `S_x`: the site-by-site trigamma sum.
/// Strictly positive and strictly increasing in `x`.
pub fn var_s(profile: &WeightProfile, x: u64) -> Result<f64> {
    let delta = require_positive_delta(profile, "var_s")?;
    if x == 0 {
        return Err(Error::OutOfRange { x: 0, max: 0 });
    }
    let two_delta = 2.0 * delta;
    let mut acc = NeumaierSum::new();
    let mut w_prev = profile.initial_weight(0);
    for i in 1..=x {
        let w_i = profile.initial_weight(i);
        acc.add(trigamma((w_prev + delta) / two_delta)?);
        acc.add(trigamma(w_i / two_delta)?);
        w_prev = w_i;
    }
    Ok(acc.value())
}

/// The digamma-difference sandwich `(ln y - ln z - 1/y, psi(y) - psi(z),
/// ln y - ln z + 1/z)`; lower <= value <= upper holds for all positive
/// arguments.
pub fn digamma_difference_bounds(y: f64, z: f64) -> Result<(f64, f64, f64)> {
    let value = digamma(y)? - digamma(z)?;
    let base = y.ln() - z.ln();
    Ok((base - 1.0 / y, value, base + 1.0 / z))
}

/// The constant governing the `(K ln n)^{1/(1-alpha)}` limsup scale.
///
/// Piecewise in `alpha` (and in the sign of `beta` for the log-corrected
/// family at `alpha = 0`); defined for recurrent sub-linear profiles only.
pub fn k_constant(profile: &WeightProfile) -> Result<f64> {
    let delta = require_positive_delta(profile, "k_constant")?;
    let alpha = profile.alpha();
    let beta = profile.beta();
    if alpha >= 1.0 {
        return Err(Error::NoRegime {
            what: format!("k_constant with alpha = {alpha} (requires alpha < 1)"),
        });
    }
    match profile.family() {
        ProfileFamily::LogPoly => {
            if alpha < 0.0 {
                Ok((1.0 - alpha) / (2.0 * delta))
            } else if alpha == 0.0 {
                if beta < 0.0 {
                    Ok(1.0 / (2.0 * delta))
                } else if beta > 0.0 {
                    Ok(1.0 / delta)
                } else {
                    Err(Error::NoRegime {
                        what: "k_constant with alpha = 0, beta = 0 (logpoly requires beta != 0)"
                            .into(),
                    })
                }
            } else {
                Ok((1.0 - alpha) / delta)
            }
        }
        ProfileFamily::TakeiPoly => {
            if alpha < 0.0 {
                Ok((1.0 - alpha) / (2.0 * delta))
            } else if alpha == 0.0 {
                let z = 1.0 / (2.0 * delta);
                Ok(1.0 / (digamma(z + 0.5)? - digamma(z)?))
            } else {
                Ok((1.0 - alpha) / delta)
            }
        }
    }
}

/// Case rows of the asymptotic regime split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `alpha < 0` (two-sided epsilon bands).
    AlphaNeg,
    /// `alpha = 0, beta < 0`.
    AlphaZeroBetaNeg,
    /// `alpha = 0, beta > 0`.
    AlphaZeroBetaPos,
    /// `0 < alpha < 1`.
    AlphaFrac,
    /// `alpha = 1, beta < 0`.
    AlphaOneBetaNeg,
    /// `alpha = 1, 0 < beta < 1`.
    AlphaOneBetaFrac,
    /// `alpha = 1, beta = 1`.
    AlphaOneBetaOne,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::AlphaNeg => "alpha<0",
            Regime::AlphaZeroBetaNeg => "alpha=0,beta<0",
            Regime::AlphaZeroBetaPos => "alpha=0,beta>0",
            Regime::AlphaFrac => "0<alpha<1",
            Regime::AlphaOneBetaNeg => "alpha=1,beta<0",
            Regime::AlphaOneBetaFrac => "alpha=1,0<beta<1",
            Regime::AlphaOneBetaOne => "alpha=1,beta=1",
        };
        f.write_str(s)
    }
}

fn regime_of(profile: &WeightProfile) -> Option<Regime> {
    if profile.family() != ProfileFamily::LogPoly {
        return None;
    }
    let (alpha, beta) = (profile.alpha(), profile.beta());
    if beta == 0.0 || alpha > 1.0 {
        return None;
    }
    Some(if alpha < 0.0 {
        Regime::AlphaNeg
    } else if alpha == 0.0 {
        if beta < 0.0 {
            Regime::AlphaZeroBetaNeg
        } else {
            Regime::AlphaZeroBetaPos
        }
    } else if alpha < 1.0 {
        Regime::AlphaFrac
    } else if beta < 0.0 {
        Regime::AlphaOneBetaNeg
    } else if beta < 1.0 {
        Regime::AlphaOneBetaFrac
    } else if beta == 1.0 {
        Regime::AlphaOneBetaOne
    } else {
        return None;
    })
}

type Curve = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Either a single asymptotic curve or a two-sided epsilon band.
pub enum PredictorCurve {
    Point(Curve),
    Band { lower: Curve, upper: Curve },
}

impl PredictorCurve {
    /// Evaluate; a band yields its endpoints, a point repeats the value.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        match self {
            PredictorCurve::Point(f) => {
                let v = f(x);
                (v, v)
            }
            PredictorCurve::Band { lower, upper } => (lower(x), upper(x)),
        }
    }

    pub fn is_band(&self) -> bool {
        matches!(self, PredictorCurve::Band { .. })
    }
}

/// Which asymptotic the predictor describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictorTarget {
    /// Leading behavior of the environment mean `E[S_x]`.
    MeanS,
    /// Leading behavior of the environment variance `V[S_x]`.
    VarS,
    /// Scale of the walk's running maximum as a function of the horizon.
    LimsupScale,
}

/// A matched regime row together with its closed-form predictor.
pub struct RegimePredictor {
    pub regime: Regime,
    pub curve: PredictorCurve,
}

/// Closed-form predictor for the requested target.
///
/// `epsilon` parametrizes the band rows (the `alpha < 0` moment bands and
/// the `alpha = 1` envelope pairs); it is ignored by single-curve rows.
pub fn regime_predictor(
    profile: &WeightProfile,
    target: PredictorTarget,
    epsilon: f64,
) -> Result<RegimePredictor> {
    let delta = require_positive_delta(profile, "regime_predictor")?;
    let alpha = profile.alpha();
    let beta = profile.beta();

    if target == PredictorTarget::LimsupScale {
        return limsup_predictor(profile, epsilon);
    }

    let regime = regime_of(profile).ok_or_else(|| Error::NoRegime {
        what: format!("{target:?} predictor for (alpha={alpha}, beta={beta})"),
    })?;
    let abs_beta = beta.abs();

    let curve = match (target, regime) {
        (PredictorTarget::MeanS, Regime::AlphaNeg) => {
            if !(epsilon > 0.0 && epsilon < 1.0 / abs_beta) {
                return Err(Error::Config(format!(
                    "epsilon must lie in (0, 1/|beta|) = (0, {}) for the alpha<0 mean band",
                    1.0 / abs_beta
                )));
            }
            band(
                move |x: f64| {
                    let e = 1.0 - alpha - epsilon * abs_beta;
                    (2.0 * delta - epsilon / 2.0) / e * x.powf(e)
                },
                move |x: f64| {
                    let e = 1.0 - alpha + epsilon * abs_beta;
                    (2.0 * delta + epsilon / 2.0) / e * x.powf(e)
                },
            )
        }
        (PredictorTarget::MeanS, Regime::AlphaZeroBetaPos) => {
            point(move |x: f64| delta * x * x.ln().powf(-beta))
        }
        (PredictorTarget::MeanS, Regime::AlphaZeroBetaNeg) => {
            point(move |x: f64| 2.0 * delta * x * x.ln().powf(-beta))
        }
        (PredictorTarget::MeanS, Regime::AlphaFrac) => point(move |x: f64| {
            delta / (1.0 - alpha) * x.powf(1.0 - alpha) * x.ln().powf(-beta)
        }),
        (PredictorTarget::MeanS, Regime::AlphaOneBetaNeg | Regime::AlphaOneBetaFrac) => {
            point(move |x: f64| -x.ln() + delta / (1.0 - beta) * x.ln().powf(1.0 - beta))
        }
        (PredictorTarget::MeanS, Regime::AlphaOneBetaOne) => {
            point(move |x: f64| -x.ln() + (delta - 1.0) * x.ln().ln())
        }
        (PredictorTarget::VarS, Regime::AlphaNeg) => {
            if epsilon <= 0.0 {
                return Err(Error::Config(
                    "epsilon must be > 0 for the alpha<0 variance band".into(),
                ));
            }
            band(
                move |x: f64| {
                    let e = 1.0 - 2.0 * alpha - 2.0 * epsilon * abs_beta;
                    (4.0 * delta * delta - epsilon) / e * x.powf(e)
                },
                move |x: f64| {
                    let e = 1.0 - 2.0 * alpha + 2.0 * epsilon * abs_beta;
                    (4.0 * delta * delta + epsilon) / e * x.powf(e)
                },
            )
        }
        (PredictorTarget::VarS, Regime::AlphaZeroBetaPos) => {
            point(move |x: f64| 4.0 * delta * x * x.ln().powf(-beta))
        }
        (PredictorTarget::VarS, Regime::AlphaZeroBetaNeg) => {
            point(move |x: f64| 4.0 * delta * delta * x * x.ln().powf(-2.0 * beta))
        }
        (PredictorTarget::VarS, Regime::AlphaFrac) => point(move |x: f64| {
            4.0 * delta / (1.0 - alpha) * x.powf(1.0 - alpha) * x.ln().powf(-beta)
        }),
        (PredictorTarget::VarS, Regime::AlphaOneBetaNeg | Regime::AlphaOneBetaFrac) => {
            point(move |x: f64| 4.0 * delta / (1.0 - beta) * x.ln().powf(1.0 - beta))
        }
        (PredictorTarget::VarS, Regime::AlphaOneBetaOne) => {
            point(move |x: f64| 4.0 * delta * x.ln().ln())
        }
        (PredictorTarget::LimsupScale, _) => unreachable!(),
    };

    Ok(RegimePredictor { regime, curve })
}

fn limsup_predictor(profile: &WeightProfile, epsilon: f64) -> Result<RegimePredictor> {
    let alpha = profile.alpha();
    let beta = profile.beta();
    if alpha < 1.0 {
        let k = k_constant(profile)?;
        let exponent = 1.0 / (1.0 - alpha);
        let regime = regime_of(profile).unwrap_or(if alpha < 0.0 {
            Regime::AlphaNeg
        } else if alpha == 0.0 {
            Regime::AlphaZeroBetaPos
        } else {
            Regime::AlphaFrac
        });
        return Ok(RegimePredictor {
            regime,
            curve: point(move |n: f64| (k * n.ln()).powf(exponent)),
        });
    }
    if profile.family() == ProfileFamily::LogPoly && alpha == 1.0 && beta != 0.0 && beta <= 1.0 {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::Config(format!(
                "epsilon must lie in (0, 1), got {epsilon}"
            )));
        }
        if beta < 0.0 {
            return Ok(RegimePredictor {
                regime: Regime::AlphaOneBetaNeg,
                curve: band(
                    move |n: f64| (n.ln().powf((1.0 - epsilon) / (1.0 - beta))).exp(),
                    move |n: f64| (n.ln().powf((1.0 + epsilon) / (1.0 - beta))).exp(),
                ),
            });
        }
        let regime = if beta == 1.0 {
            Regime::AlphaOneBetaOne
        } else {
            Regime::AlphaOneBetaFrac
        };
        return Ok(RegimePredictor {
            regime,
            curve: band(
                move |n: f64| n.powf((1.0 - epsilon) / 2.0),
                move |n: f64| n.powf((1.0 + epsilon) / 2.0),
            ),
        });
    }
    Err(Error::NoRegime {
        what: format!(
            "limsup scale for (alpha={alpha}, beta={beta}, family={:?})",
            profile.family()
        ),
    })
}

/// Almost-sure scale of `S_x` itself (the strong-law normalization):
/// `x^{1-alpha} (ln x)^{-beta} / K` for `0 <= alpha < 1`, the log-power
/// limits at `alpha = 1`, and the epsilon band below zero.
pub fn slln_scale_predictor(profile: &WeightProfile, epsilon: f64) -> Result<RegimePredictor> {
    let delta = require_positive_delta(profile, "slln_scale_predictor")?;
    let regime = regime_of(profile).ok_or_else(|| Error::NoRegime {
        what: format!(
            "S_x scale for (alpha={}, beta={})",
            profile.alpha(),
            profile.beta()
        ),
    })?;
    let alpha = profile.alpha();
    let beta = profile.beta();
    let curve = match regime {
        Regime::AlphaNeg => {
            let abs_beta = beta.abs();
            if !(epsilon > 0.0 && epsilon < 1.0 / abs_beta) {
                return Err(Error::Config(format!(
                    "epsilon must lie in (0, 1/|beta|) = (0, {})",
                    1.0 / abs_beta
                )));
            }
            band(
                move |x: f64| {
                    let e = 1.0 - alpha - epsilon * abs_beta;
                    (2.0 * delta - epsilon / 2.0) / e * x.powf(e)
                },
                move |x: f64| {
                    let e = 1.0 - alpha + epsilon * abs_beta;
                    (2.0 * delta + epsilon / 2.0) / e * x.powf(e)
                },
            )
        }
        Regime::AlphaZeroBetaNeg | Regime::AlphaZeroBetaPos | Regime::AlphaFrac => {
            let k = k_constant(profile)?;
            point(move |x: f64| x.powf(1.0 - alpha) * x.ln().powf(-beta) / k)
        }
        Regime::AlphaOneBetaNeg => {
            point(move |x: f64| delta / (1.0 - beta) * x.ln().powf(1.0 - beta))
        }
        Regime::AlphaOneBetaFrac | Regime::AlphaOneBetaOne => point(move |x: f64| -x.ln()),
    };
    Ok(RegimePredictor { regime, curve })
}

fn point(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> PredictorCurve {
    PredictorCurve::Point(Box::new(f))
}

fn band(
    lower: impl Fn(f64) -> f64 + Send + Sync + 'static,
    upper: impl Fn(f64) -> f64 + Send + Sync + 'static,
) -> PredictorCurve {
    PredictorCurve::Band {
        lower: Box::new(lower),
        upper: Box::new(upper),
    }
}

/// Closed-form moment table for a profile over a grid of sites.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MomentTable {
    pub profile: WeightProfile,
    pub xs: Vec<u64>,
    pub mean_s: Vec<f64>,
    pub var_s: Vec<f64>,
}

impl MomentTable {
    /// Single streaming pass over `1..=max(xs)`; `xs` must be nonempty,
    /// sorted, positive.
    pub fn build(profile: &WeightProfile, xs: &[u64]) -> Result<Self> {
        let delta = require_positive_delta(profile, "MomentTable::build")?;
        if xs.is_empty() || xs[0] == 0 || xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(
                "xs must be a nonempty strictly increasing list of positive sites".into(),
            ));
        }
        let two_delta = 2.0 * delta;
        let mut mean = NeumaierSum::new();
        let mut var = NeumaierSum::new();
        let mut mean_out = Vec::with_capacity(xs.len());
        let mut var_out = Vec::with_capacity(xs.len());
        let mut next = 0usize;
        let mut w_prev = profile.initial_weight(0);
        for i in 1..=xs[xs.len() - 1] {
            let w_i = profile.initial_weight(i);
            let za = (w_prev + delta) / two_delta;
            let zb = w_i / two_delta;
            mean.add(digamma(za)?);
            mean.add(-digamma(zb)?);
            var.add(trigamma(za)?);
            var.add(trigamma(zb)?);
            w_prev = w_i;
            if xs[next] == i {
                mean_out.push(mean.value());
                var_out.push(var.value());
                next += 1;
            }
        }
        Ok(Self {
            profile: *profile,
            xs: xs.to_vec(),
            mean_s: mean_out,
            var_s: var_out,
        })
    }

    /// CSV with columns `x,mean_s,var_s,predictor_mean,predictor_var`.
    /// Predictor cells are left empty where no single-curve regime applies.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let pred_mean = regime_predictor(&self.profile, PredictorTarget::MeanS, 0.1).ok();
        let pred_var = regime_predictor(&self.profile, PredictorTarget::VarS, 0.1).ok();
        let cell = |p: &Option<RegimePredictor>, x: f64| -> String {
            match p {
                Some(RegimePredictor {
                    curve: PredictorCurve::Point(f),
                    ..
                }) => fmt_f64(f(x)),
                _ => String::new(),
            }
        };
        writeln!(w, "x,mean_s,var_s,predictor_mean,predictor_var")?;
        for (k, &x) in self.xs.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{},{}",
                x,
                fmt_f64(self.mean_s[k]),
                fmt_f64(self.var_s[k]),
                cell(&pred_mean, x as f64),
                cell(&pred_var, x as f64),
            )?;
        }
        Ok(())
    }
}
