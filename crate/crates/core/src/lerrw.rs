//! The linearly edge-reinforced random walk on the half-line: stateful
//! simulation, exact path probabilities, and full path enumeration for
//! small horizons.
//!
//! Each traversal of the edge `{x, x+1}` adds `delta` to its weight, so at
//! time `n` the edge carries `w0(x) + delta * phi_n(x)` where `phi_n`
//! counts traversals. From site `x > 0` the walk steps right with
//! probability `w_n(x) / (w_n(x-1) + w_n(x))`; the origin reflects.

use std::collections::BTreeMap;
use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::NeumaierSum;
use crate::weights::WeightProfile;

/// Largest path length accepted by [`distribution_of_position`]
/// (about four million admissible paths).
pub const ENUMERATION_CAP: u32 = 22;

/// Live state of a reinforced walk.
///
/// Edge traversal counts are kept per left endpoint and grow with the
/// running maximum, so memory is O(max position), not O(steps).
/// Single-owner mutable; distinct replicas share nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReinforcedState {
    position: u64,
    step: u64,
    edge_counts: Vec<u64>,
}

impl Default for ReinforcedState {
    fn default() -> Self {
        Self::new()
    }
}

impl ReinforcedState {
    /// Fresh walk at the origin.
    pub fn new() -> Self {
        Self {
            position: 0,
            step: 0,
            edge_counts: Vec::new(),
        }
    }

    pub fn position(&self) -> u64 {
        self.position
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    /// Traversal count of the edge `{x, x+1}`.
    pub fn edge_count(&self, x: u64) -> u64 {
        self.edge_counts.get(x as usize).copied().unwrap_or(0)
    }

    /// Sum of all traversal counts; equals the step count.
    pub fn total_traversals(&self) -> u64 {
        self.edge_counts.iter().sum()
    }

    /// Current weight of the edge `{x, x+1}` under `profile`.
    pub fn current_weight(&self, profile: &WeightProfile, x: u64) -> f64 {
        profile.initial_weight(x) + profile.delta() * self.edge_count(x) as f64
    }

    fn bump(&mut self, edge: u64) {
        let e = edge as usize;
        if self.edge_counts.len() <= e {
            self.edge_counts.resize(e + 1, 0);
        }
        self.edge_counts[e] += 1;
    }
}

/// Advance the walk by one step.
///
/// At the origin the step is to 1 with probability one (and consumes no
/// randomness); elsewhere one uniform decides the direction.
pub fn step<R: Rng>(state: &mut ReinforcedState, profile: &WeightProfile, rng: &mut R) {
    if state.position == 0 {
        state.bump(0);
        state.position = 1;
    } else {
        let x = state.position;
        let w_right = state.current_weight(profile, x);
        let w_left = state.current_weight(profile, x - 1);
        let p_right = w_right / (w_left + w_right);
        if rng.random::<f64>() < p_right {
            state.bump(x);
            state.position = x + 1;
        } else {
            state.bump(x - 1);
            state.position = x - 1;
        }
    }
    state.step += 1;
}

fn validate_path(path: &[i64]) -> Result<()> {
    if path.is_empty() || path[0] != 0 {
        return Err(Error::InvalidPath("path must start at 0".into()));
    }
    for (k, pair) in path.windows(2).enumerate() {
        if (pair[1] - pair[0]).abs() != 1 {
            return Err(Error::InvalidPath(format!(
                "step {k} is not nearest-neighbor: {} -> {}",
                pair[0], pair[1]
            )));
        }
    }
    Ok(())
}

/// Exact probability of a nearest-neighbor path from the origin under the
/// reinforcement rule. Computed in log space, exponentiated at the end.
pub fn path_probability(profile: &WeightProfile, path: &[i64]) -> Result<f64> {
    validate_path(path)?;
    if let Some(bad) = path.iter().position(|&p| p < 0) {
        return Err(Error::InvalidPath(format!(
            "position {} at index {bad} is negative",
            path[bad]
        )));
    }
    let mut state = ReinforcedState::new();
    let mut log_p = NeumaierSum::new();
    for pair in path.windows(2) {
        let (from, to) = (pair[0] as u64, pair[1] as u64);
        if from == 0 {
            // reflected: probability one
            state.bump(0);
        } else {
            let w_right = state.current_weight(profile, from);
            let w_left = state.current_weight(profile, from - 1);
            let total = w_left + w_right;
            if to > from {
                log_p.add((w_right / total).ln());
                state.bump(from);
            } else {
                log_p.add((w_left / total).ln());
                state.bump(from - 1);
            }
        }
        state.position = to;
        state.step += 1;
    }
    Ok(log_p.value().exp())
}

/// Checkpoint schedule for trajectory statistics. The realized schedule is
/// clipped to the horizon, which is always included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Schedule {
    /// `n = 1, 2, 4, 8, ...` — matched to predictors that are functions
    /// of `ln n`.
    #[default]
    PowersOfTwo,
    /// `n = 10, 100, 1000, ...`
    Decades,
    Explicit {
        values: Vec<u64>,
    },
}

impl Schedule {
    pub fn realize(&self, horizon: u64) -> Vec<u64> {
        let mut out: Vec<u64> = match self {
            Schedule::PowersOfTwo => {
                let mut v = Vec::new();
                let mut n = 1u64;
                while n < horizon {
                    v.push(n);
                    n = n.saturating_mul(2);
                }
                v
            }
            Schedule::Decades => {
                let mut v = Vec::new();
                let mut n = 10u64;
                while n < horizon {
                    v.push(n);
                    n = n.saturating_mul(10);
                }
                v
            }
            Schedule::Explicit { values } => {
                values.iter().copied().filter(|&n| n < horizon).collect()
            }
        };
        out.push(horizon);
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Trajectory record at one checkpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointRecord {
    pub n: u64,
    pub max_position: u64,
    pub position: u64,
}

/// Summary statistics of one simulated trajectory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkStats {
    pub n_steps: u64,
    pub running_max: Vec<CheckpointRecord>,
    /// First-entrance times for the requested levels; `None` when the
    /// level was not reached within the horizon.
    pub first_hit: BTreeMap<u64, Option<u64>>,
    pub returns_to_origin: u64,
    pub final_position: u64,
}

impl WalkStats {
    /// Append rows `replica,n,max_position,position` (no header).
    pub fn write_csv_rows<W: Write>(&self, mut w: W, replica: usize) -> Result<()> {
        for c in &self.running_max {
            writeln!(w, "{},{},{},{}", replica, c.n, c.max_position, c.position)?;
        }
        Ok(())
    }
}

/// Run the walk for `n_steps` steps, recording the running maximum at the
/// scheduled checkpoints and first-entrance times of `hit_levels`.
/// Deterministic given `(profile, n_steps, rng stream)`.
pub fn simulate<R: Rng>(
    profile: &WeightProfile,
    n_steps: u64,
    checkpoints: &Schedule,
    hit_levels: &[u64],
    rng: &mut R,
) -> WalkStats {
    let cps = checkpoints.realize(n_steps);
    let delta = profile.delta();

    let mut w0: Vec<f64> = vec![profile.initial_weight(0)];
    let mut counts: Vec<u64> = vec![0];
    let mut pos: u64 = 0;
    let mut max_pos: u64 = 0;
    let mut returns: u64 = 0;

    let mut first_hit: BTreeMap<u64, Option<u64>> =
        hit_levels.iter().map(|&x| (x, None)).collect();
    if first_hit.contains_key(&0) {
        first_hit.insert(0, Some(0));
    }
    let mut pending_levels: Vec<u64> = {
        let mut v: Vec<u64> = hit_levels.iter().copied().filter(|&x| x > 0).collect();
        v.sort_unstable();
        v.dedup();
        v
    };

    let mut running_max = Vec::with_capacity(cps.len());
    let mut cp_idx = 0;
    while cp_idx < cps.len() && cps[cp_idx] == 0 {
        running_max.push(CheckpointRecord { n: 0, max_position: 0, position: 0 });
        cp_idx += 1;
    }

    for n in 1..=n_steps {
        if pos == 0 {
            counts[0] += 1;
            pos = 1;
        } else {
            let x = pos as usize;
            if counts.len() <= x {
                counts.push(0);
                w0.push(profile.initial_weight(x as u64));
            }
            let w_right = w0[x] + delta * counts[x] as f64;
            let w_left = w0[x - 1] + delta * counts[x - 1] as f64;
            if rng.random::<f64>() < w_right / (w_left + w_right) {
                counts[x] += 1;
                pos += 1;
            } else {
                counts[x - 1] += 1;
                pos -= 1;
            }
        }
        if pos > max_pos {
            max_pos = pos;
            while let Some(&lvl) = pending_levels.first() {
                if lvl <= max_pos {
                    first_hit.insert(lvl, Some(n));
                    pending_levels.remove(0);
                } else {
                    break;
                }
            }
        } else if pos == 0 {
            returns += 1;
        }
        if cp_idx < cps.len() && n == cps[cp_idx] {
            running_max.push(CheckpointRecord { n, max_position: max_pos, position: pos });
            cp_idx += 1;
        }
    }

    WalkStats {
        n_steps,
        running_max,
        first_hit,
        returns_to_origin: returns,
        final_position: pos,
    }
}

/// First-entrance times of `levels`, stopping as soon as every level has
/// been reached (or the horizon runs out). Levels not reached map to
/// `None`.
pub fn first_hits<R: Rng>(
    profile: &WeightProfile,
    levels: &[u64],
    horizon: u64,
    rng: &mut R,
) -> BTreeMap<u64, Option<u64>> {
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
    let delta = profile.delta();
    let mut w0: Vec<f64> = vec![profile.initial_weight(0)];
    let mut counts: Vec<u64> = vec![0];
    let mut pos: u64 = 0;
    let mut max_pos: u64 = 0;
    for n in 1..=horizon {
        if pending.is_empty() {
            break;
        }
        if pos == 0 {
            counts[0] += 1;
            pos = 1;
        } else {
            let x = pos as usize;
            if counts.len() <= x {
                counts.push(0);
                w0.push(profile.initial_weight(x as u64));
            }
            let w_right = w0[x] + delta * counts[x] as f64;
            let w_left = w0[x - 1] + delta * counts[x - 1] as f64;
            if rng.random::<f64>() < w_right / (w_left + w_right) {
                counts[x] += 1;
                pos += 1;
            } else {
                counts[x - 1] += 1;
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
    first_hit
}

/// All nonnegative nearest-neighbor paths of exactly `len` steps from the
/// origin, in lexicographic step order.
pub fn enumerate_admissible_paths(len: u32) -> Result<Vec<Vec<i64>>> {
    if len > ENUMERATION_CAP {
        return Err(Error::EnumerationCap { n: len, cap: ENUMERATION_CAP });
    }
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(len as usize + 1);
    path.push(0i64);
    fn rec(path: &mut Vec<i64>, remaining: u32, out: &mut Vec<Vec<i64>>) {
        if remaining == 0 {
            out.push(path.clone());
            return;
        }
        let here = *path.last().unwrap();
        if here > 0 {
            path.push(here - 1);
            rec(path, remaining - 1, out);
            path.pop();
        }
        path.push(here + 1);
        rec(path, remaining - 1, out);
        path.pop();
    }
    rec(&mut path, len, &mut out);
    Ok(out)
}

/// Exact endpoint distribution after `n` steps, by summation over all
/// admissible paths. `n` is capped at [`ENUMERATION_CAP`].
pub fn distribution_of_position(
    profile: &WeightProfile,
    n: u32,
) -> Result<BTreeMap<u64, f64>> {
    if n > ENUMERATION_CAP {
        return Err(Error::EnumerationCap { n, cap: ENUMERATION_CAP });
    }
    let delta = profile.delta();
    let max_site = n as usize + 1;
    let w0: Vec<f64> = (0..=max_site as u64).map(|x| profile.initial_weight(x)).collect();
    let mut counts = vec![0u64; max_site + 1];
    let mut acc = vec![NeumaierSum::new(); n as usize + 1];

    // Depth-first over the move tree with undo; probabilities stay in
    // linear space (>= ~1e-66 for 22 steps, far above underflow).
    fn rec(
        pos: usize,
        remaining: u32,
        prob: f64,
        delta: f64,
        w0: &[f64],
        counts: &mut Vec<u64>,
        acc: &mut Vec<NeumaierSum>,
    ) {
        if remaining == 0 {
            acc[pos].add(prob);
            return;
        }
        if pos == 0 {
            counts[0] += 1;
            rec(1, remaining - 1, prob, delta, w0, counts, acc);
            counts[0] -= 1;
        } else {
            let w_right = w0[pos] + delta * counts[pos] as f64;
            let w_left = w0[pos - 1] + delta * counts[pos - 1] as f64;
            let total = w_left + w_right;
            counts[pos] += 1;
            rec(pos + 1, remaining - 1, prob * w_right / total, delta, w0, counts, acc);
            counts[pos] -= 1;
            counts[pos - 1] += 1;
            rec(pos - 1, remaining - 1, prob * w_left / total, delta, w0, counts, acc);
            counts[pos - 1] -= 1;
        }
    }
    rec(0, n, 1.0, delta, &w0, &mut counts, &mut acc);

    Ok(acc
        .iter()
        .enumerate()
        .filter(|(_, s)| s.value() > 0.0)
        .map(|(pos, s)| (pos as u64, s.value()))
        .collect())
}

/// Dump trajectories of several replicas as CSV
/// (`replica,n,max_position,position`).
pub fn write_trajectories_csv<W: Write>(stats: &[WalkStats], mut w: W) -> Result<()> {
    writeln!(w, "replica,n,max_position,position")?;
    for (r, s) in stats.iter().enumerate() {
        s.write_csv_rows(&mut w, r)?;
    }
    Ok(())
}
