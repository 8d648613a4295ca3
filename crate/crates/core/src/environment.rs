//! The random-environment representation of the reinforced walk: Beta
//! environment sampling, quenched walks, log-resistance statistics, and
//! the exact annealed path-probability oracle.
//!
//! Site `i >= 1` carries an independent Beta(w0(i)/2d, (w0(i-1)+d)/2d)
//! right-step probability; the origin steps right with probability one.
//! Sampling goes through a gamma-ratio construction carried out in log
//! space, so shapes far below one (where linear gamma variates underflow)
//! still produce exact `ln p` and `ln(1-p)` values.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::{fmt_f64, logaddexp, median, NeumaierSum};
use crate::resistance::WeightSequence;
use crate::rng::{derive_seed, stream_rng, StreamRng};
use crate::specialfn::{beta_shapes, log_beta, mean_s, var_s};
use crate::weights::WeightProfile;

/// `ln X` for `X ~ Gamma(shape, 1)`.
///
/// Marsaglia-Tsang for `shape >= 1`; for `shape < 1` the boost
/// `X = Gamma(shape + 1) * U^{1/shape}` is applied directly in log space,
/// which stays exact where the linear variate would underflow.
pub fn sample_log_gamma<R: Rng>(shape: f64, rng: &mut R) -> f64 {
    debug_assert!(shape > 0.0 && shape.is_finite());
    if shape < 1.0 {
        let boost = rng.random::<f64>().ln() / shape;
        return sample_log_gamma(shape + 1.0, rng) + boost;
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let z: f64 = rng.sample(StandardNormal);
        let t = 1.0 + c * z;
        if t <= 0.0 {
            continue;
        }
        let v = t * t * t;
        let u = rng.random::<f64>();
        let z2 = z * z;
        if u < 1.0 - 0.0331 * z2 * z2 || u.ln() < 0.5 * z2 + d * (1.0 - v + v.ln()) {
            return d.ln() + 3.0 * t.ln();
        }
    }
}

/// One Beta draw carried in both linear and log space.
#[derive(Debug, Clone, Copy)]
pub struct BetaDraw {
    pub p: f64,
    pub log_p: f64,
    pub log_q: f64,
}

/// `p ~ Beta(a, b)` via the gamma ratio `X / (X + Y)`.
pub fn sample_beta<R: Rng>(a: f64, b: f64, rng: &mut R) -> BetaDraw {
    let lx = sample_log_gamma(a, rng);
    let ly = sample_log_gamma(b, rng);
    let lsum = logaddexp(lx, ly);
    let log_p = lx - lsum;
    BetaDraw {
        p: log_p.exp(),
        log_p,
        log_q: ly - lsum,
    }
}

/// A realized environment: per-site right-step probabilities and the
/// log-resistance prefix sums. Immutable after sampling (growth excepted)
/// and cheap to clone.
#[derive(Debug, Clone)]
pub struct Environment {
    profile: WeightProfile,
    seed: u64,
    /// `p_i` for `i = 1..=x_max` (index `i - 1`).
    p: Vec<f64>,
    log_p: Vec<f64>,
    log_q: Vec<f64>,
    /// `S_x = sum_{i<=x} ln(q_i / p_i)` for `x = 1..=x_max`.
    s: Vec<f64>,
}

/// Draw an environment up to `x_max`. Each site is sampled from its own
/// RNG substream, so the realization is a pure function of `(seed, i)` and
/// later growth cannot disturb earlier sites.
pub fn sample_environment(
    profile: &WeightProfile,
    x_max: usize,
    seed: u64,
) -> Result<Environment> {
    if profile.delta() <= 0.0 {
        return Err(Error::InvalidProfile(
            "delta must be > 0 to define the Beta environment".into(),
        ));
    }
    if x_max < 1 {
        return Err(Error::Config("x_max must be >= 1".into()));
    }
    let mut env = Environment {
        profile: *profile,
        seed,
        p: Vec::new(),
        log_p: Vec::new(),
        log_q: Vec::new(),
        s: Vec::new(),
    };
    env.grow(x_max)?;
    Ok(env)
}

impl Environment {
    pub fn profile(&self) -> &WeightProfile {
        &self.profile
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn x_max(&self) -> usize {
        self.p.len()
    }

    /// Right-step probability at site `i >= 1`.
    pub fn p(&self, i: usize) -> f64 {
        self.p[i - 1]
    }

    pub fn log_p(&self, i: usize) -> f64 {
        self.log_p[i - 1]
    }

    pub fn log_q(&self, i: usize) -> f64 {
        self.log_q[i - 1]
    }

    /// Log-resistance `S_x` at `x >= 1`.
    pub fn s(&self, x: usize) -> f64 {
        self.s[x - 1]
    }

    /// Extend the realized range to `new_x_max` (no-op when smaller).
    pub fn grow(&mut self, new_x_max: usize) -> Result<()> {
        while self.p.len() < new_x_max {
            let i = self.p.len() + 1;
            let (a, b) = beta_shapes(&self.profile, i as u64)?;
            let mut rng = stream_rng(self.seed, i as u64);
            let draw = sample_beta(a, b, &mut rng);
            let prev_s = if i == 1 { 0.0 } else { self.s[i - 2] };
            self.p.push(draw.p);
            self.log_p.push(draw.log_p);
            self.log_q.push(draw.log_q);
            self.s.push(prev_s + (draw.log_q - draw.log_p));
        }
        Ok(())
    }

    /// Quenched conductances: `ln w(x) = -S_x` with unit weight at the
    /// origin edge. Feeding these to the resistance module yields the
    /// quenched hitting times; the induced walk reproduces `p` exactly.
    pub fn quenched_step_weights(&self) -> WeightSequence {
        let mut log_w = Vec::with_capacity(self.x_max() + 1);
        log_w.push(0.0);
        log_w.extend(self.s.iter().map(|s| -s));
        WeightSequence::from_log_weights(log_w).expect("finite by construction")
    }

    /// CSV with columns `i,p,s`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "i,p,s")?;
        for i in 1..=self.x_max() {
            writeln!(w, "{},{},{}", i, fmt_f64(self.p(i)), fmt_f64(self.s(i)))?;
        }
        Ok(())
    }

    /// Re-import an exported environment for replay. The seed is not
    /// recoverable from the file; growth is disabled on imported
    /// environments (`seed` is set to a sentinel and sites are fixed).
    pub fn read_csv<R: BufRead>(profile: &WeightProfile, r: R) -> Result<Self> {
        let mut p = Vec::new();
        let mut s = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if lineno == 0 || line.is_empty() {
                continue;
            }
            let mut parts = line.split(',');
            let mut field = |name: &str| -> Result<f64> {
                parts
                    .next()
                    .ok_or(Error::Parse {
                        line: lineno + 1,
                        msg: format!("missing field {name}"),
                    })?
                    .trim()
                    .parse()
                    .map_err(|e| Error::Parse {
                        line: lineno + 1,
                        msg: format!("{name}: {e}"),
                    })
            };
            let i = field("i")? as usize;
            if i != p.len() + 1 {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("expected site {}, got {i}", p.len() + 1),
                });
            }
            let pi = field("p")?;
            if !(pi > 0.0 && pi < 1.0) {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("p must lie in (0,1), got {pi}"),
                });
            }
            p.push(pi);
            s.push(field("s")?);
        }
        if p.is_empty() {
            return Err(Error::Config("environment file has no sites".into()));
        }
        let log_p: Vec<f64> = p.iter().map(|v| v.ln()).collect();
        let log_q: Vec<f64> = p.iter().map(|v| (-v).ln_1p()).collect();
        Ok(Environment {
            profile: *profile,
            seed: u64::MAX,
            p,
            log_p,
            log_q,
            s,
        })
    }
}

/// Exact annealed probability of a nearest-neighbor path from the origin:
/// the product over sites of Beta moments of the per-site crossing counts,
/// evaluated through log-Beta ratios.
///
/// Depends on the path only through its crossing counts. Returns zero
/// (not an error) for a path that dips below the origin.
pub fn annealed_path_probability(profile: &WeightProfile, path: &[i64]) -> Result<f64> {
    if profile.delta() <= 0.0 {
        return Err(Error::InvalidProfile(
            "delta must be > 0 to define the Beta environment".into(),
        ));
    }
    if path.is_empty() || path[0] != 0 {
        return Err(Error::InvalidPath("path must start at 0".into()));
    }
    let mut rights: BTreeMap<i64, u64> = BTreeMap::new();
    let mut lefts: BTreeMap<i64, u64> = BTreeMap::new();
    for (k, pair) in path.windows(2).enumerate() {
        let (from, to) = (pair[0], pair[1]);
        if (to - from).abs() != 1 {
            return Err(Error::InvalidPath(format!(
                "step {k} is not nearest-neighbor: {from} -> {to}"
            )));
        }
        if to < -1 || from < 0 {
            return Err(Error::InvalidPath(format!(
                "position {} at step {k} is negative",
                from.min(to)
            )));
        }
        if to == -1 {
            // A left step at the reflecting origin has probability zero.
            return Ok(0.0);
        }
        if to > from {
            *rights.entry(from).or_insert(0) += 1;
        } else {
            *lefts.entry(from).or_insert(0) += 1;
        }
    }

    let mut log_prob = NeumaierSum::new();
    let mut sites: Vec<i64> = rights.keys().chain(lefts.keys()).copied().collect();
    sites.sort_unstable();
    sites.dedup();
    for site in sites {
        if site == 0 {
            continue; // p_0 = 1 contributes factor one
        }
        let a_cross = rights.get(&site).copied().unwrap_or(0) as f64;
        let b_cross = lefts.get(&site).copied().unwrap_or(0) as f64;
        let (a, b) = beta_shapes(profile, site as u64)?;
        log_prob.add(log_beta(a + a_cross, b + b_cross)?);
        log_prob.add(-log_beta(a, b)?);
    }
    Ok(log_prob.value().exp())
}

/// Quenched probability of a path in a fixed environment.
pub fn quenched_path_probability(env: &Environment, path: &[i64]) -> Result<f64> {
    if path.is_empty() || path[0] != 0 {
        return Err(Error::InvalidPath("path must start at 0".into()));
    }
    let mut log_prob = NeumaierSum::new();
    for (k, pair) in path.windows(2).enumerate() {
        let (from, to) = (pair[0], pair[1]);
        if (to - from).abs() != 1 || to < 0 || from < 0 {
            return Err(Error::InvalidPath(format!("bad step {k}: {from} -> {to}")));
        }
        if from == 0 {
            continue;
        }
        let site = from as usize;
        if site > env.x_max() {
            return Err(Error::OutOfRange { x: site, max: env.x_max() });
        }
        log_prob.add(if to > from { env.log_p(site) } else { env.log_q(site) });
    }
    Ok(log_prob.value().exp())
}

/// Walk the quenched chain until every level in `levels` is hit or the
/// horizon runs out; returns first-entrance times and the running maximum.
/// The environment grows lazily if the walk outruns its realized range.
pub fn quenched_first_hits<R: Rng>(
    env: &mut Environment,
    levels: &[u64],
    horizon: u64,
    rng: &mut R,
) -> Result<(BTreeMap<u64, Option<u64>>, u64)> {
    let mut first_hit: BTreeMap<u64, Option<u64>> = levels.iter().map(|&x| (x, None)).collect();
    if first_hit.contains_key(&0) {
        first_hit.insert(0, Some(0));
    }
    let mut pending: Vec<u64> = {
        let mut v: Vec<u64> = levels.iter().copied().filter(|&x| x > 0).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let mut pos: u64 = 0;
    let mut max_pos: u64 = 0;
    for n in 1..=horizon {
        if pending.is_empty() {
            break;
        }
        if pos == 0 {
            pos = 1;
        } else {
            if pos as usize >= env.x_max() {
                env.grow((pos as usize + 1).max(env.x_max() * 2))?;
            }
            if rng.random::<f64>() < env.p(pos as usize) {
                pos += 1;
            } else {
                pos -= 1;
            }
        }
        if pos > max_pos {
            max_pos = pos;
            while let Some(&lvl) = pending.first() {
                if lvl <= max_pos {
                    first_hit.insert(lvl, Some(n));
                    pending.remove(0);
                } else {
                    break;
                }
            }
        }
    }
    Ok((first_hit, max_pos))
}

/// Empirical environment statistics of `S_x` at one site.
#[derive(Debug, Clone)]
pub struct SStatistics {
    pub x: u64,
    pub n_envs: usize,
    pub sample_mean: f64,
    pub sample_var: f64,
    /// Closed-form `E[S_x]`.
    pub mean_s: f64,
    /// Closed-form `V[S_x]`.
    pub var_s: f64,
    /// Median over environments of `S_x / E[S_x]`.
    pub slln_ratio: f64,
    /// Raw `S_x` per environment, replica order.
    pub per_env_s: Vec<f64>,
}

/// Sample `n_envs` environments and compare the empirical moments of `S_x`
/// at each requested site against the closed forms. Environments are
/// sampled in parallel on substreams of `master_seed`; output is
/// deterministic and independent of thread count.
pub fn s_statistics_grid(
    profile: &WeightProfile,
    xs: &[u64],
    n_envs: usize,
    master_seed: u64,
) -> Result<Vec<SStatistics>> {
    if xs.is_empty() || xs.iter().any(|&x| x == 0) || xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(
            "xs must be nonempty, strictly increasing, positive".into(),
        ));
    }
    if n_envs == 0 {
        return Err(Error::Config("n_envs must be >= 1".into()));
    }
    let x_top = *xs.last().unwrap() as usize;
    let per_env: Vec<Vec<f64>> = (0..n_envs)
        .into_par_iter()
        .map(|replica| {
            let seed = derive_seed(master_seed, replica as u64);
            let env = sample_environment(profile, x_top, seed)?;
            Ok(xs.iter().map(|&x| env.s(x as usize)).collect())
        })
        .collect::<Result<_>>()?;

    xs.iter()
        .enumerate()
        .map(|(k, &x)| {
            let samples: Vec<f64> = per_env.iter().map(|row| row[k]).collect();
            let mean = compensated_mean(&samples);
            let var = if samples.len() > 1 {
                let mut acc = NeumaierSum::new();
                for v in &samples {
                    let d = v - mean;
                    acc.add(d * d);
                }
                acc.value() / (samples.len() - 1) as f64
            } else {
                f64::NAN
            };
            let m = mean_s(profile, x)?;
            let v = var_s(profile, x)?;
            let ratios: Vec<f64> = samples.iter().map(|s| s / m).collect();
            Ok(SStatistics {
                x,
                n_envs,
                sample_mean: mean,
                sample_var: var,
                mean_s: m,
                var_s: v,
                slln_ratio: median(&ratios),
                per_env_s: samples,
            })
        })
        .collect()
}

/// Single-site convenience wrapper around [`s_statistics_grid`].
pub fn s_statistics(
    profile: &WeightProfile,
    x: u64,
    n_envs: usize,
    master_seed: u64,
) -> Result<SStatistics> {
    Ok(s_statistics_grid(profile, &[x], n_envs, master_seed)?.remove(0))
}

fn compensated_mean(v: &[f64]) -> f64 {
    let mut acc = NeumaierSum::new();
    for &x in v {
        acc.add(x);
    }
    acc.value() / v.len() as f64
}

/// Deterministic per-replica stream for walk randomness, separated from
/// environment seeds by a fixed tag.
pub fn walk_stream(master_seed: u64, replica: u64) -> StreamRng {
    stream_rng(derive_seed(master_seed, u64::MAX - 1), replica)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lerrw::{self, path_probability};
    use crate::resistance::build_resistance_profile;

    fn lp(alpha: f64, beta: f64, delta: f64) -> WeightProfile {
        WeightProfile::log_poly(alpha, beta, delta).unwrap()
    }

    #[test]
    fn beta_shapes_at_site_one() {
        let p = lp(0.0, -1.0, 1.0);
        let (a, b) = beta_shapes(&p, 1).unwrap();
        assert_eq!((a, b), (0.5, 1.0));
    }

    #[test]
    fn environment_is_deterministic_and_growable() {
        let p = lp(0.5, 1.0, 1.0);
        let full = sample_environment(&p, 50, 7).unwrap();
        let mut part = sample_environment(&p, 20, 7).unwrap();
        part.grow(50).unwrap();
        for i in 1..=50 {
            assert_eq!(full.p(i), part.p(i));
            assert_eq!(full.s(i), part.s(i));
        }
    }

    #[test]
    fn delta_zero_rejected() {
        let p = lp(0.5, 1.0, 0.0);
        assert!(sample_environment(&p, 10, 1).is_err());
        assert!(annealed_path_probability(&p, &[0, 1]).is_err());
    }

    #[test]
    fn s_prefix_identity_is_exact() {
        let p = lp(0.0, -1.0, 1.0);
        let env = sample_environment(&p, 200, 3).unwrap();
        let mut acc = 0.0;
        for i in 1..=200 {
            acc += env.log_q(i) - env.log_p(i);
            assert_eq!(env.s(i), acc);
        }
    }

    #[test]
    fn quenched_weights_reproduce_transition_probabilities() {
        let p = lp(0.5, 1.0, 1.0);
        let env = sample_environment(&p, 100, 11).unwrap();
        let w = env.quenched_step_weights();
        for x in 1..=100usize {
            // p_x = w(x) / (w(x-1) + w(x)) in log-safe form.
            let lw_x = w.log_weight(x);
            let lw_prev = w.log_weight(x - 1);
            let p_x = (lw_x - logaddexp(lw_prev, lw_x)).exp();
            assert!(
                (p_x - env.p(x)).abs() <= 1e-12 * env.p(x),
                "site {x}: {p_x} vs {}",
                env.p(x)
            );
        }
    }

    #[test]
    fn quenched_weights_constant_env() {
        // p_i = 1/2 at every site gives unit weights.
        let p = lp(0.5, 1.0, 1.0);
        let csv = "i,p,s\n1,0.5,0\n2,0.5,0\n3,0.5,0\n";
        let env = Environment::read_csv(&p, csv.as_bytes()).unwrap();
        let w = env.quenched_step_weights();
        for x in 0..=3 {
            assert_eq!(w.log_weight(x), 0.0);
        }
        // p1 = 1/3 gives w(1) = q/p... = 1/2.
        let csv = "i,p,s\n1,0.3333333333333333,0.6931471805599453\n";
        let env = Environment::read_csv(&p, csv.as_bytes()).unwrap();
        let w = env.quenched_step_weights();
        assert!((w.log_weight(1) - 0.5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn annealed_examples() {
        let p = lp(1.0, 1.0, 1.0);
        assert_eq!(annealed_path_probability(&p, &[0]).unwrap(), 1.0);
        let v = annealed_path_probability(&p, &[0, 1, 0]).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
        let v = annealed_path_probability(&p, &[0, 1, 2]).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(annealed_path_probability(&p, &[0, -1, 0]).unwrap(), 0.0);
        assert!(annealed_path_probability(&p, &[0, 2]).is_err());
    }

    #[test]
    fn annealed_matches_reinforced_on_short_paths() {
        let profiles = [lp(-1.0, 1.0, 1.0), lp(0.0, -1.0, 1.0), lp(1.0, 1.0, 0.5)];
        for p in &profiles {
            for len in 0..=8u32 {
                for path in lerrw::enumerate_admissible_paths(len).unwrap() {
                    let a = annealed_path_probability(p, &path).unwrap();
                    let b = path_probability(p, &path).unwrap();
                    assert!(
                        (a - b).abs() <= 1e-10 * a.max(1e-300),
                        "path {path:?}: annealed {a} vs reinforced {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn crossing_count_sufficiency() {
        // Two different paths with identical per-site crossing counts get
        // identical annealed probabilities (partial exchangeability).
        // Both cross: site 0 right twice, site 1 once each way, site 2 left.
        let p = lp(0.5, 1.0, 1.0);
        let a = annealed_path_probability(&p, &[0, 1, 2, 1, 0, 1]).unwrap();
        let b = annealed_path_probability(&p, &[0, 1, 0, 1, 2, 1]).unwrap();
        assert!((a - b).abs() <= 1e-14 * a);
    }

    #[test]
    fn quenched_path_probability_uses_environment() {
        let p = lp(0.5, 1.0, 1.0);
        let env = sample_environment(&p, 10, 5).unwrap();
        let pr = quenched_path_probability(&env, &[0, 1, 2, 1]).unwrap();
        let want = env.p(1) * (1.0 - env.p(2));
        assert!((pr - want).abs() < 1e-14 * want);
        assert!(quenched_path_probability(&env, &[0, 1, 3]).is_err());
    }

    #[test]
    fn environment_csv_round_trip() {
        let p = lp(0.5, 1.0, 1.0);
        let env = sample_environment(&p, 25, 9).unwrap();
        let mut buf = Vec::new();
        env.write_csv(&mut buf).unwrap();
        let back = Environment::read_csv(&p, &buf[..]).unwrap();
        assert_eq!(back.x_max(), 25);
        for i in 1..=25 {
            assert_eq!(back.p(i), env.p(i));
            assert_eq!(back.s(i), env.s(i));
        }
    }

    #[test]
    fn quenched_hitting_times_vs_resistance_profile() {
        // Short sanity run: mean hitting time of level 3 over many walks in
        // one frozen environment approaches T^w(3).
        let p = lp(0.5, 1.0, 1.0);
        let mut env = sample_environment(&p, 64, 13).unwrap();
        let w = env.quenched_step_weights();
        let t3 = build_resistance_profile(&w).unwrap().t[3];
        let mut acc = NeumaierSum::new();
        let reps = 20_000u64;
        for r in 0..reps {
            let mut rng = walk_stream(99, r);
            let (hits, _) = quenched_first_hits(&mut env, &[3], 1_000_000, &mut rng).unwrap();
            acc.add(hits[&3].expect("level 3 reached") as f64);
        }
        let mc = acc.value() / reps as f64;
        // 4-sigma-ish loose band; tau has heavy but integrable tails here.
        assert!(
            (mc - t3).abs() < 0.1 * t3 + 1.0,
            "MC mean {mc} vs T(3) = {t3}"
        );
    }

    #[test]
    fn sampler_moments_match_beta() {
        // Beta(1/2, 1): mean 1/3, and shapes < 1 exercise the log-space
        // boost path.
        let mut rng = stream_rng(17, 0);
        let n = 200_000;
        let mut acc = NeumaierSum::new();
        for _ in 0..n {
            acc.add(sample_beta(0.5, 1.0, &mut rng).p);
        }
        let mean = acc.value() / n as f64;
        // SE = sqrt(var/n), var = ab/((a+b)^2(a+b+1)) = 2/45.
        let se = (2.0 / 45.0f64 / n as f64).sqrt();
        assert!((mean - 1.0 / 3.0).abs() < 4.0 * se, "mean {mean}");
    }

    #[test]
    fn tiny_shapes_underflow_linear_but_not_log() {
        let mut rng = stream_rng(23, 0);
        let mut saw_linear_underflow = false;
        for _ in 0..200 {
            let lg = sample_log_gamma(5e-4, &mut rng);
            assert!(lg.is_finite());
            if lg < -800.0 {
                saw_linear_underflow = true;
            }
        }
        assert!(saw_linear_underflow, "expected ln X < -800 draws at shape 5e-4");
    }

    #[test]
    fn s_statistics_reports_closed_forms() {
        let p = lp(0.5, 1.0, 1.0);
        let stats = s_statistics(&p, 50, 400, 21).unwrap();
        assert_eq!(stats.per_env_s.len(), 400);
        let se = (stats.var_s / 400.0).sqrt();
        assert!(
            (stats.sample_mean - stats.mean_s).abs() < 4.0 * se,
            "sample mean {} vs {}",
            stats.sample_mean,
            stats.mean_s
        );
        assert!(stats.sample_var > 0.0);
        assert!(stats.slln_ratio.is_finite());
    }

    #[test]
    fn s_statistics_grid_shares_environments() {
        let p = lp(0.5, 1.0, 1.0);
        let grid = s_statistics_grid(&p, &[10, 50], 50, 21).unwrap();
        let single = s_statistics(&p, 50, 50, 21).unwrap();
        assert_eq!(grid[1].per_env_s, single.per_env_s);
    }
}
