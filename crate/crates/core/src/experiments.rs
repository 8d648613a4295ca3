//! Ensemble experiments: running-maximum scaling against closed-form
//! predictors, hitting-time Monte Carlo against the resistance formulas,
//! strong-law ratio checks, and the exact reinforced/annealed equivalence
//! suite.
//!
//! Replicas run on isolated RNG substreams of the master seed and are
//! aggregated in replica order, so every report is bit-reproducible from
//! `(config, master_seed)` at any worker-thread count. The almost-sure
//! limit statements behind these experiments are not observable at finite
//! horizons; reports therefore compare against bands, and the band widths
//! are configuration with documented defaults, not sharp constants.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::environment::{
    annealed_path_probability, quenched_first_hits, sample_environment, s_statistics_grid,
    walk_stream,
};
use crate::error::{Error, Result};
use crate::lerrw::{enumerate_admissible_paths, path_probability, simulate, Schedule};
use crate::numeric::{fmt_f64, median, quantile, NeumaierSum};
use crate::resistance::{build_resistance_profile, WeightSequence};
use crate::rng::stream_rng;
use crate::specialfn::{regime_predictor, slln_scale_predictor, PredictorTarget};
use crate::weights::{ProfileFamily, Verdict, WeightProfile};

/// Relative tolerance of the reinforced/annealed equivalence oracle.
pub const ORACLE_REL_TOL: f64 = 1e-10;
/// Tolerance for total path mass at the oracle horizon.
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    ReinforcedScaling,
    UnreinforcedScaling,
    Alpha1Scaling,
    SllnCheck,
    HittingTime,
    OracleSuite,
}

/// One experiment run: profile, horizon, ensemble size, seed, checkpoint
/// schedule, and the epsilon of the epsilon-theorem envelopes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub profile: WeightProfile,
    pub mode: Mode,
    pub n_steps: u64,
    #[serde(default = "default_replicas")]
    pub n_replicas: usize,
    #[serde(default = "default_seed")]
    pub master_seed: u64,
    #[serde(default)]
    pub checkpoints: Schedule,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Acceptance band for median-ratio verdicts; mode-specific default
    /// when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio_band: Option<(f64, f64)>,
    /// Fraction of replicas that must end inside the envelope pair.
    #[serde(default = "default_envelope_fraction")]
    pub envelope_min_fraction: f64,
    /// Levels for the hitting-time suite.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hit_levels: Vec<u64>,
    /// Freeze one quenched environment with this seed for the
    /// hitting-time suite; absent means fixed initial weights.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub env_seed: Option<u64>,
    /// Path-length horizon for the oracle suite.
    #[serde(default = "default_max_path_len")]
    pub max_path_len: u32,
}

fn default_replicas() -> usize {
    20
}
fn default_seed() -> u64 {
    42
}
fn default_epsilon() -> f64 {
    0.3
}
fn default_envelope_fraction() -> f64 {
    0.8
}
fn default_max_path_len() -> u32 {
    12
}

const REINFORCED_RATIO_BAND: (f64, f64) = (1.0 / 3.0, 3.0);
const UNREINFORCED_RATIO_BAND: (f64, f64) = (0.1, 10.0);

impl ExperimentConfig {
    pub fn new(profile: WeightProfile, mode: Mode, n_steps: u64) -> Self {
        Self {
            profile,
            mode,
            n_steps,
            n_replicas: default_replicas(),
            master_seed: default_seed(),
            checkpoints: Schedule::default(),
            epsilon: default_epsilon(),
            ratio_band: None,
            envelope_min_fraction: default_envelope_fraction(),
            hit_levels: Vec::new(),
            env_seed: None,
            max_path_len: default_max_path_len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_replicas < 1 {
            return Err(Error::Config("n_replicas must be >= 1".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::Config(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if let Some((lo, hi)) = self.ratio_band {
            if !(lo > 0.0 && lo < hi) {
                return Err(Error::Config(format!(
                    "ratio_band must satisfy 0 < low < high, got ({lo}, {hi})"
                )));
            }
        }
        let p = &self.profile;
        match self.mode {
            Mode::ReinforcedScaling => {
                if p.delta() <= 0.0 {
                    return Err(Error::Config("reinforced-scaling requires delta > 0".into()));
                }
                if p.alpha() >= 1.0 {
                    return Err(Error::Config("reinforced-scaling requires alpha < 1".into()));
                }
                if p.family() == ProfileFamily::LogPoly && p.alpha() == 0.0 && p.beta() == 0.0 {
                    return Err(Error::Config(
                        "reinforced-scaling requires beta != 0 for the logpoly family at alpha = 0"
                            .into(),
                    ));
                }
            }
            Mode::Alpha1Scaling => {
                if p.family() != ProfileFamily::LogPoly
                    || p.alpha() != 1.0
                    || p.beta() == 0.0
                    || p.beta() > 1.0
                {
                    return Err(Error::Config(
                        "alpha1-scaling requires a logpoly profile with alpha = 1, beta <= 1, beta != 0"
                            .into(),
                    ));
                }
                if p.delta() <= 0.0 {
                    return Err(Error::Config("alpha1-scaling requires delta > 0".into()));
                }
            }
            Mode::UnreinforcedScaling => {
                if p.delta() != 0.0 {
                    return Err(Error::Config("unreinforced-scaling requires delta = 0".into()));
                }
                if p.family() != ProfileFamily::LogPoly || p.beta() == 0.0 {
                    return Err(Error::Config(
                        "unreinforced-scaling requires a logpoly profile with beta != 0".into(),
                    ));
                }
                if p.classify_recurrence().verdict == Verdict::Transient {
                    return Err(Error::Config(
                        "unreinforced-scaling requires a recurrent profile".into(),
                    ));
                }
            }
            Mode::SllnCheck => {
                if p.delta() <= 0.0 {
                    return Err(Error::Config("slln-check requires delta > 0".into()));
                }
            }
            Mode::HittingTime => {
                if self.hit_levels.is_empty() || self.hit_levels.iter().all(|&x| x == 0) {
                    return Err(Error::Config(
                        "hitting-time requires at least one positive level in hit_levels".into(),
                    ));
                }
                if self.env_seed.is_none() && p.delta() != 0.0 {
                    return Err(Error::Config(
                        "hitting-time with initial weights requires delta = 0; pass env_seed for a quenched run"
                            .into(),
                    ));
                }
                if self.env_seed.is_some() && p.delta() <= 0.0 {
                    return Err(Error::Config(
                        "quenched hitting-time requires delta > 0".into(),
                    ));
                }
            }
            Mode::OracleSuite => {}
        }
        Ok(())
    }

    fn band_or_default(&self, default: (f64, f64)) -> (f64, f64) {
        self.ratio_band.unwrap_or(default)
    }
}

/// Per-checkpoint ensemble summary. For band predictors `predictor_low`
/// and `predictor_high` are the envelope pair; point predictors repeat the
/// value. `median_ratio` is the replica median of `M_n` over
/// `predictor_low`.
#[derive(Debug, Clone, Serialize)]
pub struct CheckpointRow {
    pub n: u64,
    pub predictor_low: f64,
    pub predictor_high: f64,
    pub q_min: f64,
    pub q25: f64,
    pub q_median: f64,
    pub q75: f64,
    pub q_max: f64,
    pub median_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingReport {
    pub config: ExperimentConfig,
    pub rows: Vec<CheckpointRow>,
    /// Verdict band applied to the final-checkpoint median ratio.
    pub band: (f64, f64),
    /// Replicas whose final running maximum lies inside the envelope pair.
    pub final_in_envelope: usize,
    pub replica_final_max: Vec<u64>,
    pub verdict: bool,
}

impl ScalingReport {
    /// One row per checkpoint and quantile:
    /// `n,quantile,value,predictor_low,predictor_high,ratio`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "n,quantile,value,predictor_low,predictor_high,ratio")?;
        for row in &self.rows {
            for (label, v) in [
                ("min", row.q_min),
                ("q25", row.q25),
                ("median", row.q_median),
                ("q75", row.q75),
                ("max", row.q_max),
            ] {
                writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    row.n,
                    label,
                    fmt_f64(v),
                    fmt_f64(row.predictor_low),
                    fmt_f64(row.predictor_high),
                    fmt_f64(v / row.predictor_low),
                )?;
            }
        }
        Ok(())
    }

    pub fn summary_json(&self) -> serde_json::Value {
        json!({
            "mode": self.config.mode,
            "config": self.config,
            "band": self.band,
            "verdict": self.verdict,
            "final_in_envelope": self.final_in_envelope,
            "replica_final_max": self.replica_final_max,
            "rows": self.rows.iter().map(|r| json!({
                "n": r.n,
                "predictor_low": r.predictor_low,
                "predictor_high": r.predictor_high,
                "median": r.q_median,
                "median_ratio": r.median_ratio,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Running maxima of `n_replicas` independent walks at the realized
/// checkpoints: `maxima[replica][checkpoint_index]`.
fn max_ensemble(config: &ExperimentConfig) -> (Vec<u64>, Vec<Vec<u64>>) {
    let horizon = config.n_steps.max(1);
    let cps = config.checkpoints.realize(horizon);
    let maxima: Vec<Vec<u64>> = (0..config.n_replicas)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(config.master_seed, r as u64);
            let stats = simulate(&config.profile, horizon, &config.checkpoints, &[], &mut rng);
            stats.running_max.iter().map(|c| c.max_position).collect()
        })
        .collect();
    (cps, maxima)
}

fn scaling_rows(
    cps: &[u64],
    maxima: &[Vec<u64>],
    predictor: impl Fn(f64) -> (f64, f64),
) -> Vec<CheckpointRow> {
    cps.iter()
        .enumerate()
        .map(|(k, &n)| {
            let mut vals: Vec<f64> = maxima.iter().map(|m| m[k] as f64).collect();
            vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let (lo, hi) = predictor(n as f64);
            let med = quantile(&vals, 0.5);
            CheckpointRow {
                n,
                predictor_low: lo,
                predictor_high: hi,
                q_min: vals[0],
                q25: quantile(&vals, 0.25),
                q_median: med,
                q75: quantile(&vals, 0.75),
                q_max: vals[vals.len() - 1],
                median_ratio: med / lo,
            }
        })
        .collect()
}

/// Running-maximum scaling against the `(K ln n)^{1/(1-alpha)}` predictor
/// in the sub-linear recurrent regime.
pub fn run_reinforced_scaling(config: &ExperimentConfig) -> Result<ScalingReport> {
    if config.mode != Mode::ReinforcedScaling {
        return Err(Error::Config("mode must be reinforced-scaling".into()));
    }
    config.validate()?;
    let predictor = regime_predictor(&config.profile, PredictorTarget::LimsupScale, config.epsilon)?;
    let (cps, maxima) = max_ensemble(config);
    let rows = scaling_rows(&cps, &maxima, |n| predictor.curve.eval(n));
    let band = config.band_or_default(REINFORCED_RATIO_BAND);
    let last = rows.last().expect("at least one checkpoint");
    let verdict = last.median_ratio >= band.0 && last.median_ratio <= band.1;
    let replica_final_max: Vec<u64> = maxima.iter().map(|m| *m.last().unwrap()).collect();
    let final_in_envelope = replica_final_max
        .iter()
        .filter(|&&m| (m as f64) >= last.predictor_low && (m as f64) <= last.predictor_high)
        .count();
    Ok(ScalingReport {
        config: config.clone(),
        rows,
        band,
        final_in_envelope,
        replica_final_max,
        verdict,
    })
}

/// Envelope experiment in the critical `alpha = 1` column: the final
/// running maximum of most replicas should fall between the two
/// epsilon-envelopes.
pub fn run_alpha1_scaling(config: &ExperimentConfig) -> Result<ScalingReport> {
    if config.mode != Mode::Alpha1Scaling {
        return Err(Error::Config("mode must be alpha1-scaling".into()));
    }
    config.validate()?;
    let predictor = regime_predictor(&config.profile, PredictorTarget::LimsupScale, config.epsilon)?;
    let (cps, maxima) = max_ensemble(config);
    let rows = scaling_rows(&cps, &maxima, |n| predictor.curve.eval(n));
    let last = rows.last().expect("at least one checkpoint");
    let replica_final_max: Vec<u64> = maxima.iter().map(|m| *m.last().unwrap()).collect();
    let final_in_envelope = replica_final_max
        .iter()
        .filter(|&&m| (m as f64) >= last.predictor_low && (m as f64) <= last.predictor_high)
        .count();
    let needed = (config.envelope_min_fraction * config.n_replicas as f64).ceil() as usize;
    let verdict = final_in_envelope >= needed;
    Ok(ScalingReport {
        config: config.clone(),
        rows,
        band: config.band_or_default(REINFORCED_RATIO_BAND),
        final_in_envelope,
        replica_final_max,
        verdict,
    })
}

/// Envelope pair for the un-reinforced walk, by case on `(alpha, beta)`.
fn unreinforced_envelopes(
    alpha: f64,
    beta: f64,
    eps: f64,
) -> (
    impl Fn(f64) -> f64 + Copy,
    impl Fn(f64) -> f64 + Copy,
    &'static str,
) {
    #[derive(Clone, Copy)]
    struct Pow {
        exp_lo: f64,
        exp_hi: f64,
        log_power: f64,
    }
    let p = if alpha < -1.0 {
        Pow {
            exp_lo: 1.0 / (1.0 - alpha + eps * beta.abs()),
            exp_hi: 1.0 / (1.0 - alpha - eps * beta.abs()),
            log_power: 1.0 + eps,
        }
    } else if alpha == -1.0 && beta < -1.0 {
        Pow {
            exp_lo: 1.0 / (2.0 - eps * beta),
            exp_hi: 1.0 / (2.0 + eps * beta),
            log_power: 1.0 + eps,
        }
    } else if alpha == -1.0 {
        Pow {
            exp_lo: (1.0 - eps) / 2.0,
            exp_hi: 0.5,
            log_power: 1.0 + eps,
        }
    } else if alpha <= 0.0 {
        Pow {
            exp_lo: 0.5,
            exp_hi: 0.5,
            log_power: 1.0 + eps,
        }
    } else {
        Pow {
            exp_lo: 1.0 / (2.0 * (1.0 + eps * beta.abs())),
            exp_hi: 1.0 / (2.0 * (1.0 - eps * beta.abs())),
            log_power: 1.0 + eps,
        }
    };
    let label = if alpha < -1.0 {
        "alpha<-1"
    } else if alpha == -1.0 && beta < -1.0 {
        "alpha=-1,beta<-1"
    } else if alpha == -1.0 {
        "alpha=-1,beta>=-1"
    } else if alpha <= 0.0 {
        "-1<alpha<=0"
    } else {
        "0<alpha<=1"
    };
    let lower = move |n: f64| n.powf(p.exp_lo);
    let upper = move |n: f64| (n * n.ln().powf(p.log_power)).powf(p.exp_hi);
    (lower, upper, label)
}

/// Scaling of the un-reinforced (fixed-weight) walk against the
/// case-matched envelope pair.
pub fn run_unreinforced_scaling(config: &ExperimentConfig) -> Result<ScalingReport> {
    if config.mode != Mode::UnreinforcedScaling {
        return Err(Error::Config("mode must be unreinforced-scaling".into()));
    }
    config.validate()?;
    let (lower, upper, _case) =
        unreinforced_envelopes(config.profile.alpha(), config.profile.beta(), config.epsilon);
    let (cps, maxima) = max_ensemble(config);
    let rows = scaling_rows(&cps, &maxima, |n| (lower(n), upper(n)));
    let band = config.band_or_default(UNREINFORCED_RATIO_BAND);
    let last = rows.last().expect("at least one checkpoint");
    let replica_final_max: Vec<u64> = maxima.iter().map(|m| *m.last().unwrap()).collect();
    let final_in_envelope = replica_final_max
        .iter()
        .filter(|&&m| (m as f64) >= last.predictor_low && (m as f64) <= last.predictor_high)
        .count();
    let verdict = last.median_ratio >= band.0
        && last.median_ratio <= band.1
        && last.q_median <= last.predictor_high;
    Ok(ScalingReport {
        config: config.clone(),
        rows,
        band,
        final_in_envelope,
        replica_final_max,
        verdict,
    })
}

/// One hitting-time comparison row.
#[derive(Debug, Clone, Serialize)]
pub struct HittingTimeRow {
    pub x: u64,
    pub t_theory: f64,
    pub mc_mean: f64,
    pub mc_se: f64,
    pub z_score: f64,
    pub hits: usize,
    pub censored: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct HittingTimeReport {
    pub config: ExperimentConfig,
    pub rows: Vec<HittingTimeRow>,
}

impl HittingTimeReport {
    pub fn all_within(&self, z: f64) -> bool {
        self.rows
            .iter()
            .all(|r| r.censored == 0 && r.z_score.abs() <= z)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,t_theory,mc_mean,mc_se,z_score,hits,censored")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                r.x,
                fmt_f64(r.t_theory),
                fmt_f64(r.mc_mean),
                fmt_f64(r.mc_se),
                fmt_f64(r.z_score),
                r.hits,
                r.censored
            )?;
        }
        Ok(())
    }

    pub fn summary_json(&self) -> serde_json::Value {
        json!({
            "mode": self.config.mode,
            "config": self.config,
            "rows": self.rows,
            "all_within_3se": self.all_within(3.0),
        })
    }
}

/// Monte Carlo first-entrance times versus the resistance formula, either
/// for the fixed initial weights (`delta = 0`) or in one frozen quenched
/// environment (`env_seed` set).
pub fn run_hitting_time_suite(config: &ExperimentConfig) -> Result<HittingTimeReport> {
    if config.mode != Mode::HittingTime {
        return Err(Error::Config("mode must be hitting-time".into()));
    }
    config.validate()?;
    let mut levels: Vec<u64> = config.hit_levels.iter().copied().filter(|&x| x > 0).collect();
    levels.sort_unstable();
    levels.dedup();
    let max_level = *levels.last().unwrap() as usize;
    let horizon = config.n_steps;

    // Theory side.
    let (t_theory, base_env) = match config.env_seed {
        None => {
            let w = WeightSequence::from_profile(&config.profile, max_level);
            let prof = build_resistance_profile(&w)?;
            let t: Vec<f64> = levels.iter().map(|&x| prof.t[x as usize]).collect();
            (t, None)
        }
        Some(seed) => {
            let env = sample_environment(&config.profile, (4 * max_level).max(64), seed)?;
            let w = env.quenched_step_weights();
            let prof = build_resistance_profile(&w)?;
            let t: Vec<f64> = levels.iter().map(|&x| prof.t[x as usize]).collect();
            (t, Some(env))
        }
    };

    // Monte Carlo side: tau per level per replica, None when censored.
    let taus: Vec<BTreeMap<u64, Option<u64>>> = (0..config.n_replicas)
        .into_par_iter()
        .map(|r| -> Result<BTreeMap<u64, Option<u64>>> {
            match &base_env {
                None => {
                    let mut rng = stream_rng(config.master_seed, r as u64);
                    Ok(crate::lerrw::first_hits(&config.profile, &levels, horizon, &mut rng))
                }
                Some(env) => {
                    let mut env = env.clone();
                    let mut rng = walk_stream(config.master_seed, r as u64);
                    let (hits, _) = quenched_first_hits(&mut env, &levels, horizon, &mut rng)?;
                    Ok(hits)
                }
            }
        })
        .collect::<Result<_>>()?;

    let rows = levels
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let mut hit_values: Vec<f64> = Vec::new();
            let mut censored = 0usize;
            for t in &taus {
                match t[&x] {
                    Some(v) => hit_values.push(v as f64),
                    None => censored += 1,
                }
            }
            let hits = hit_values.len();
            let (mc_mean, mc_se) = if hits > 1 {
                let mut acc = NeumaierSum::new();
                for &v in &hit_values {
                    acc.add(v);
                }
                let mean = acc.value() / hits as f64;
                let mut var = NeumaierSum::new();
                for &v in &hit_values {
                    let d = v - mean;
                    var.add(d * d);
                }
                let sd = (var.value() / (hits - 1) as f64).sqrt();
                (mean, sd / (hits as f64).sqrt())
            } else {
                (f64::NAN, f64::NAN)
            };
            let z = (mc_mean - t_theory[k]) / mc_se;
            HittingTimeRow {
                x,
                t_theory: t_theory[k],
                mc_mean,
                mc_se,
                z_score: z,
                hits,
                censored,
            }
        })
        .collect();

    Ok(HittingTimeReport {
        config: config.clone(),
        rows,
    })
}

/// One site of the strong-law report.
#[derive(Debug, Clone, Serialize)]
pub struct SllnRow {
    pub x: u64,
    pub sample_mean: f64,
    pub sample_var: f64,
    pub mean_s: f64,
    pub var_s: f64,
    /// Median over environments of `S_x / E[S_x]`.
    pub slln_ratio: f64,
    pub predictor_low: f64,
    pub predictor_high: f64,
    /// Median over environments of `S_x / predictor_low`.
    pub scale_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SllnReport {
    pub config: ExperimentConfig,
    pub regime: String,
    pub rows: Vec<SllnRow>,
}

impl SllnReport {
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(
            w,
            "x,sample_mean,sample_var,mean_s,var_s,slln_ratio,predictor_low,predictor_high,scale_ratio"
        )?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{}",
                r.x,
                fmt_f64(r.sample_mean),
                fmt_f64(r.sample_var),
                fmt_f64(r.mean_s),
                fmt_f64(r.var_s),
                fmt_f64(r.slln_ratio),
                fmt_f64(r.predictor_low),
                fmt_f64(r.predictor_high),
                fmt_f64(r.scale_ratio),
            )?;
        }
        Ok(())
    }

    pub fn summary_json(&self) -> serde_json::Value {
        json!({
            "mode": self.config.mode,
            "config": self.config,
            "regime": self.regime,
            "rows": self.rows,
        })
    }
}

/// Strong-law ratios `S_x / E[S_x]` and regime-scale ratios across a site
/// grid. For `SllnCheck` configs, `n_steps` is the largest site and the
/// checkpoint schedule generates the grid.
pub fn run_slln_check(config: &ExperimentConfig) -> Result<SllnReport> {
    if config.mode != Mode::SllnCheck {
        return Err(Error::Config("mode must be slln-check".into()));
    }
    config.validate()?;
    let xs = config.checkpoints.realize(config.n_steps.max(1));
    let stats = s_statistics_grid(&config.profile, &xs, config.n_replicas, config.master_seed)?;
    let predictor = slln_scale_predictor(&config.profile, config.epsilon)?;
    let rows = stats
        .into_iter()
        .map(|s| {
            let (lo, hi) = predictor.curve.eval(s.x as f64);
            let ratios: Vec<f64> = s.per_env_s.iter().map(|v| v / lo).collect();
            SllnRow {
                x: s.x,
                sample_mean: s.sample_mean,
                sample_var: s.sample_var,
                mean_s: s.mean_s,
                var_s: s.var_s,
                slln_ratio: s.slln_ratio,
                predictor_low: lo,
                predictor_high: hi,
                scale_ratio: median(&ratios),
            }
        })
        .collect();
    Ok(SllnReport {
        config: config.clone(),
        regime: predictor.regime.to_string(),
        rows,
    })
}

/// One profile of the equivalence suite.
#[derive(Debug, Clone, Serialize)]
pub struct OracleRow {
    pub profile: WeightProfile,
    pub max_rel_err: f64,
    pub worst_path: Vec<i64>,
    /// |1 - total mass| over paths of the horizon length.
    pub normalization_gap: f64,
    pub paths_checked: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub max_len: u32,
    pub rows: Vec<OracleRow>,
}

impl OracleReport {
    pub fn pass(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.max_rel_err <= ORACLE_REL_TOL && r.normalization_gap <= NORMALIZATION_TOL)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(
            w,
            "family,alpha,beta,delta,max_rel_err,normalization_gap,paths_checked,worst_path"
        )?;
        for r in &self.rows {
            let fam = match r.profile.family() {
                ProfileFamily::LogPoly => "logpoly",
                ProfileFamily::TakeiPoly => "takei",
            };
            let path = r
                .worst_path
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                fam,
                fmt_f64(r.profile.alpha()),
                fmt_f64(r.profile.beta()),
                fmt_f64(r.profile.delta()),
                fmt_f64(r.max_rel_err),
                fmt_f64(r.normalization_gap),
                r.paths_checked,
                path
            )?;
        }
        Ok(())
    }

    pub fn summary_json(&self) -> serde_json::Value {
        json!({
            "max_len": self.max_len,
            "pass": self.pass(),
            "rel_tol": ORACLE_REL_TOL,
            "normalization_tol": NORMALIZATION_TOL,
            "rows": self.rows,
        })
    }
}

/// The reference profile grid of the equivalence suite.
pub fn oracle_grid() -> Vec<WeightProfile> {
    vec![
        WeightProfile::log_poly(-1.0, 1.0, 1.0).unwrap(),
        WeightProfile::log_poly(0.0, -1.0, 1.0).unwrap(),
        WeightProfile::log_poly(0.0, 1.0, 2.0).unwrap(),
        WeightProfile::log_poly(0.5, 1.0, 1.0).unwrap(),
        WeightProfile::log_poly(1.0, -2.0, 1.0).unwrap(),
        WeightProfile::log_poly(1.0, 1.0, 0.5).unwrap(),
        WeightProfile::takei(0.5, 1.0).unwrap(),
    ]
}

/// Exhaustive reinforced-vs-annealed equivalence check over every
/// admissible path of length `<= max_len` for each grid profile, plus the
/// total-mass normalization at the horizon length.
pub fn run_oracle_suite(max_len: u32, grid: &[WeightProfile]) -> Result<OracleReport> {
    let mut rows = Vec::with_capacity(grid.len());
    for profile in grid {
        let mut max_rel_err = 0.0f64;
        let mut worst_path: Vec<i64> = vec![0];
        let mut paths_checked = 0usize;
        for len in 0..=max_len {
            for path in enumerate_admissible_paths(len)? {
                let reinforced = path_probability(profile, &path)?;
                let annealed = annealed_path_probability(profile, &path)?;
                let rel = (reinforced - annealed).abs() / annealed;
                paths_checked += 1;
                if rel > max_rel_err {
                    max_rel_err = rel;
                    worst_path = path;
                }
            }
        }
        let mut mass = NeumaierSum::new();
        for path in enumerate_admissible_paths(max_len)? {
            mass.add(path_probability(profile, &path)?);
        }
        rows.push(OracleRow {
            profile: *profile,
            max_rel_err,
            worst_path,
            normalization_gap: (mass.value() - 1.0).abs(),
            paths_checked,
        });
    }
    Ok(OracleReport { max_len, rows })
}

/// Output of [`run_experiment`], dispatched on the configured mode.
pub enum ExperimentOutput {
    Scaling(ScalingReport),
    HittingTime(HittingTimeReport),
    Slln(SllnReport),
    Oracle(OracleReport),
}

impl ExperimentOutput {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        match self {
            ExperimentOutput::Scaling(r) => r.write_csv(w),
            ExperimentOutput::HittingTime(r) => r.write_csv(w),
            ExperimentOutput::Slln(r) => r.write_csv(w),
            ExperimentOutput::Oracle(r) => r.write_csv(w),
        }
    }

    pub fn summary_json(&self) -> serde_json::Value {
        match self {
            ExperimentOutput::Scaling(r) => r.summary_json(),
            ExperimentOutput::HittingTime(r) => r.summary_json(),
            ExperimentOutput::Slln(r) => r.summary_json(),
            ExperimentOutput::Oracle(r) => r.summary_json(),
        }
    }

    /// Pass/fail verdict where the mode defines one.
    pub fn passed(&self) -> Option<bool> {
        match self {
            ExperimentOutput::Scaling(r) => Some(r.verdict),
            ExperimentOutput::HittingTime(r) => Some(r.all_within(3.0)),
            ExperimentOutput::Slln(_) => None,
            ExperimentOutput::Oracle(r) => Some(r.pass()),
        }
    }
}

/// Run the experiment selected by `config.mode`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    Ok(match config.mode {
        Mode::ReinforcedScaling => ExperimentOutput::Scaling(run_reinforced_scaling(config)?),
        Mode::Alpha1Scaling => ExperimentOutput::Scaling(run_alpha1_scaling(config)?),
        Mode::UnreinforcedScaling => ExperimentOutput::Scaling(run_unreinforced_scaling(config)?),
        Mode::SllnCheck => ExperimentOutput::Slln(run_slln_check(config)?),
        Mode::HittingTime => ExperimentOutput::HittingTime(run_hitting_time_suite(config)?),
        Mode::OracleSuite => {
            ExperimentOutput::Oracle(run_oracle_suite(config.max_path_len, &oracle_grid())?)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(alpha: f64, beta: f64, delta: f64) -> WeightProfile {
        WeightProfile::log_poly(alpha, beta, delta).unwrap()
    }

    #[test]
    fn config_validation() {
        let mut c = ExperimentConfig::new(lp(0.0, -1.0, 1.0), Mode::ReinforcedScaling, 1000);
        assert!(c.validate().is_ok());
        c.epsilon = 0.0;
        assert!(c.validate().is_err());
        c.epsilon = 0.3;
        c.n_replicas = 0;
        assert!(c.validate().is_err());

        // Mode-profile compatibility.
        let c = ExperimentConfig::new(lp(1.0, 1.0, 1.0), Mode::ReinforcedScaling, 10);
        assert!(c.validate().is_err());
        let c = ExperimentConfig::new(lp(0.5, 1.0, 1.0), Mode::Alpha1Scaling, 10);
        assert!(c.validate().is_err());
        let c = ExperimentConfig::new(lp(0.5, 1.0, 1.0), Mode::UnreinforcedScaling, 10);
        assert!(c.validate().is_err()); // delta != 0
        let c = ExperimentConfig::new(lp(0.5, 1.0, 0.0), Mode::SllnCheck, 10);
        assert!(c.validate().is_err());
    }

    #[test]
    fn zero_step_run_reports_the_forced_first_step() {
        let mut c = ExperimentConfig::new(lp(0.0, -1.0, 1.0), Mode::ReinforcedScaling, 0);
        c.n_replicas = 3;
        let r = run_reinforced_scaling(&c).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.rows[0].n, 1);
        assert_eq!(r.rows[0].q_median, 1.0);
    }

    #[test]
    fn reinforced_scaling_small_run_is_deterministic() {
        let mut c = ExperimentConfig::new(lp(0.0, -1.0, 1.0), Mode::ReinforcedScaling, 20_000);
        c.n_replicas = 6;
        let a = run_reinforced_scaling(&c).unwrap();
        let b = run_reinforced_scaling(&c).unwrap();
        let mut csv_a = Vec::new();
        let mut csv_b = Vec::new();
        a.write_csv(&mut csv_a).unwrap();
        b.write_csv(&mut csv_b).unwrap();
        assert_eq!(csv_a, csv_b);
        assert!(a.rows.windows(2).all(|w| w[0].predictor_low < w[1].predictor_low));
    }

    #[test]
    fn unreinforced_envelope_formulas() {
        // alpha = -2, beta = 1, eps = 0.5: upper exponent 1/(3 - 0.5).
        let (lo, hi, case) = unreinforced_envelopes(-2.0, 1.0, 0.5);
        assert_eq!(case, "alpha<-1");
        let n = 1e7;
        assert!((lo(n) - n.powf(1.0 / 3.5)).abs() < 1e-9);
        assert!((hi(n) - (n * n.ln().powf(1.5)).powf(1.0 / 2.5)).abs() < 1e-6);

        // alpha = -1, beta = -2, eps = 0.5: exponent pair (1/3, 1).
        let (lo, hi, case) = unreinforced_envelopes(-1.0, -2.0, 0.5);
        assert_eq!(case, "alpha=-1,beta<-1");
        assert!((lo(n) - n.powf(1.0 / 3.0)).abs() < 1e-6);
        assert!((hi(n) - n * n.ln().powf(1.5)).abs() / hi(n) < 1e-12);

        let (lo, _hi, case) = unreinforced_envelopes(-0.5, 1.0, 0.5);
        assert_eq!(case, "-1<alpha<=0");
        assert_eq!(lo(1e6), 1e3);
    }

    #[test]
    fn alpha1_envelopes_at_example_parameters() {
        let mut c = ExperimentConfig::new(lp(1.0, -1.0, 1.0), Mode::Alpha1Scaling, 1000);
        c.epsilon = 0.3;
        c.n_replicas = 2;
        let r = run_alpha1_scaling(&c).unwrap();
        let n = 1000f64;
        let last = r.rows.last().unwrap();
        assert!((last.predictor_low - n.ln().powf(0.35).exp()).abs() < 1e-9);
        assert!((last.predictor_high - n.ln().powf(0.65).exp()).abs() < 1e-9);
        // beta in (0, 1]: power envelopes.
        let mut c = ExperimentConfig::new(lp(1.0, 0.5, 1.0), Mode::Alpha1Scaling, 1000);
        c.epsilon = 0.4;
        c.n_replicas = 2;
        let r = run_alpha1_scaling(&c).unwrap();
        let last = r.rows.last().unwrap();
        assert!((last.predictor_low - n.powf(0.3)).abs() < 1e-9);
        assert!((last.predictor_high - n.powf(0.7)).abs() < 1e-9);
    }

    #[test]
    fn hitting_time_constant_weights() {
        let takei = WeightProfile::takei(0.0, 0.0).unwrap();
        let mut c = ExperimentConfig::new(takei, Mode::HittingTime, 100_000);
        c.hit_levels = vec![3, 5, 8];
        c.n_replicas = 4000;
        let r = run_hitting_time_suite(&c).unwrap();
        assert_eq!(r.rows.len(), 3);
        for (row, want) in r.rows.iter().zip([9.0, 25.0, 64.0]) {
            assert_eq!(row.t_theory, want);
            assert_eq!(row.censored, 0);
            assert!(row.z_score.abs() < 4.0, "x={} z={}", row.x, row.z_score);
        }
    }

    #[test]
    fn hitting_time_requires_levels_and_consistent_delta() {
        let takei = WeightProfile::takei(0.0, 0.0).unwrap();
        let c = ExperimentConfig::new(takei, Mode::HittingTime, 1000);
        assert!(run_hitting_time_suite(&c).is_err());
        let mut c = ExperimentConfig::new(lp(0.5, 1.0, 1.0), Mode::HittingTime, 1000);
        c.hit_levels = vec![3];
        assert!(c.validate().is_err()); // delta > 0 without env_seed
        c.env_seed = Some(7);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn slln_report_has_grid_rows() {
        let mut c = ExperimentConfig::new(lp(0.5, 1.0, 1.0), Mode::SllnCheck, 1000);
        c.n_replicas = 8;
        c.checkpoints = Schedule::Decades;
        let r = run_slln_check(&c).unwrap();
        assert_eq!(r.rows.len(), 3); // 10, 100, 1000
        assert_eq!(r.regime, "0<alpha<1");
        for row in &r.rows {
            assert!(row.predictor_low > 0.0);
            assert!(row.scale_ratio.is_finite());
        }
    }

    #[test]
    fn oracle_suite_short_horizon_passes() {
        let report = run_oracle_suite(6, &oracle_grid()).unwrap();
        assert!(report.pass(), "{:?}", report.rows);
        assert_eq!(report.rows.len(), 7);
        let mut csv = Vec::new();
        report.write_csv(&mut csv).unwrap();
        assert!(String::from_utf8(csv).unwrap().lines().count() == 8);
    }

    #[test]
    fn json_config_round_trip_with_defaults() {
        let text = r#"{
            "profile": {"family": "logpoly", "alpha": 0.0, "beta": -1.0, "delta": 1.0},
            "mode": "reinforced-scaling",
            "n_steps": 10000000
        }"#;
        let c: ExperimentConfig = serde_json::from_str(text).unwrap();
        assert_eq!(c.n_replicas, 20);
        assert_eq!(c.master_seed, 42);
        assert_eq!(c.epsilon, 0.3);
        assert_eq!(c.checkpoints, Schedule::PowersOfTwo);
        let echoed = serde_json::to_string(&c).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&echoed).unwrap();
        assert_eq!(back.n_steps, c.n_steps);
    }
}
