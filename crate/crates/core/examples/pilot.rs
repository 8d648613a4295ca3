//! Temporary pilot harness used to calibrate acceptance seeds. Not part
//! of the deliverable test suite.

use std::time::Instant;

use halfline_core::environment::{s_statistics, sample_environment};
use halfline_core::experiments::{
    run_alpha1_scaling, run_reinforced_scaling, ExperimentConfig, Mode,
};
use halfline_core::lerrw::{first_hits, Schedule};
use halfline_core::specialfn::{mean_s, var_s};
use halfline_core::weights::WeightProfile;

fn lp(a: f64, b: f64, d: f64) -> WeightProfile {
    WeightProfile::log_poly(a, b, d).unwrap()
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let what = args.get(1).map(|s| s.as_str()).unwrap_or("all");

    if what == "crit10" || what == "all" {
        // Criterion 10: (0,-1,1), 20 replicas, n = 1e7, decade checkpoints.
        for seed in [42u64, 43, 44, 45, 46] {
            let t0 = Instant::now();
            let mut c = ExperimentConfig::new(lp(0.0, -1.0, 1.0), Mode::ReinforcedScaling, 10_000_000);
            c.n_replicas = 20;
            c.master_seed = seed;
            c.checkpoints = Schedule::Decades;
            let r = run_reinforced_scaling(&c).unwrap();
            let ratios: Vec<(u64, f64)> = r
                .rows
                .iter()
                .filter(|row| row.n >= 10_000)
                .map(|row| (row.n, row.median_ratio))
                .collect();
            let vals: Vec<f64> = ratios.iter().map(|(_, v)| *v).collect();
            let spread = vals.iter().cloned().fold(f64::MIN, f64::max)
                / vals.iter().cloned().fold(f64::MAX, f64::min);
            println!(
                "crit10 seed={seed}: ratios {:?} spread {:.3} final-in-band {} ({:.1?})",
                ratios,
                spread,
                r.verdict,
                t0.elapsed()
            );
        }
    }

    if what == "crit11" || what == "all" {
        for seed in [42u64, 43, 44, 45, 46] {
            let t0 = Instant::now();
            let mut c = ExperimentConfig::new(lp(1.0, -1.0, 1.0), Mode::Alpha1Scaling, 10_000_000);
            c.n_replicas = 20;
            c.master_seed = seed;
            c.epsilon = 0.3;
            let r = run_alpha1_scaling(&c).unwrap();
            println!(
                "crit11 seed={seed}: in envelope {}/20, finals {:?} ({:.1?})",
                r.final_in_envelope,
                r.replica_final_max,
                t0.elapsed()
            );
        }
    }

    if what == "crit9" || what == "all" {
        let x = 1_000_000u64;
        let lnx = (x as f64).ln();
        // part 1: (0,-1,1) single env
        let p = lp(0.0, -1.0, 1.0);
        let e_s = mean_s(&p, x).unwrap();
        for seed in 42u64..47 {
            let t0 = Instant::now();
            let env = sample_environment(&p, x as usize, seed).unwrap();
            let ratio = env.s(x as usize) / e_s;
            println!(
                "crit9 part1 seed={seed}: S/E = {:.6} -> {} ({:.1?})",
                ratio,
                (ratio - 1.0).abs() < 0.01,
                t0.elapsed()
            );
        }
        // regime (ii): (0.5, 1, 1): S*K/(sqrt(x)/ln x) in [0.85, 1.15]
        let p2 = lp(0.5, 1.0, 1.0);
        let pred2 = 2.0 * (x as f64).sqrt() / lnx;
        // regime (iii): (1, -1, 1): S/(0.5 ln^2 x) in [0.75, 1.25]
        let p3 = lp(1.0, -1.0, 1.0);
        let pred3 = 0.5 * lnx * lnx;
        // regime (iv): (1, 0.5, 1): S/(-ln x) in [0.75, 1.25]
        let p4 = lp(1.0, 0.5, 1.0);
        let pred4 = -lnx;
        println!(
            "theory: (ii) E ratio {:.4}, (iii) {:.4}, (iv) {:.4}",
            mean_s(&p2, x).unwrap() / pred2,
            mean_s(&p3, x).unwrap() / pred3,
            mean_s(&p4, x).unwrap() / pred4
        );
        for seed in 42u64..62 {
            let r2 = sample_environment(&p2, x as usize, seed).unwrap().s(x as usize) / pred2;
            let r3 = sample_environment(&p3, x as usize, seed).unwrap().s(x as usize) / pred3;
            let r4 = sample_environment(&p4, x as usize, seed).unwrap().s(x as usize) / pred4;
            let ok2 = (0.85..=1.15).contains(&r2);
            let ok3 = (0.75..=1.25).contains(&r3);
            let ok4 = (0.75..=1.25).contains(&r4);
            println!(
                "crit9 regimes seed={seed}: (ii) {:.4} {} | (iii) {:.4} {} | (iv) {:.4} {}",
                r2, ok2, r3, ok3, r4, ok4
            );
        }
    }

    if what == "crit3" || what == "all" {
        let takei = WeightProfile::takei(0.0, 0.0).unwrap();
        for seed in [42u64, 43] {
            let t0 = Instant::now();
            let n = 100_000usize;
            let mut sum = 0.0;
            let mut sum2 = 0.0;
            for r in 0..n {
                let mut rng = halfline_core::rng::stream_rng(seed, r as u64);
                let hits = first_hits(&takei, &[5], 10_000_000, &mut rng);
                let tau = hits[&5].unwrap() as f64;
                sum += tau;
                sum2 += tau * tau;
            }
            let mean = sum / n as f64;
            let var = (sum2 - sum * sum / n as f64) / (n as f64 - 1.0);
            let se = (var / n as f64).sqrt();
            let z = (mean - 25.0) / se;
            println!("crit3 seed={seed}: mean {mean:.4} se {se:.4} z {z:.3} ({:.1?})", t0.elapsed());
        }
    }

    if what == "crit4" || what == "all" {
        let p = lp(0.5, 1.0, 1.0);
        for seed in [42u64, 43] {
            let t0 = Instant::now();
            let stats = s_statistics(&p, 200, 100_000, seed).unwrap();
            let se_mean = (stats.var_s / 100_000.0).sqrt();
            let z_mean = (stats.sample_mean - stats.mean_s) / se_mean;
            // SE of the sample variance via the fourth central moment.
            let m = stats.sample_mean;
            let n = stats.per_env_s.len() as f64;
            let m4: f64 = stats.per_env_s.iter().map(|s| (s - m).powi(4)).sum::<f64>() / n;
            let se_var = ((m4 - stats.sample_var * stats.sample_var * (n - 3.0) / (n - 1.0)) / n).sqrt();
            let z_var = (stats.sample_var - stats.var_s) / se_var;
            println!(
                "crit4 seed={seed}: z_mean {z_mean:.3} z_var {z_var:.3} ({:.1?})",
                t0.elapsed()
            );
        }
    }

    if what == "slln_time" || what == "all" {
        let t0 = Instant::now();
        let p = lp(0.0, -1.0, 1.0);
        let _ = sample_environment(&p, 1_000_000, 42).unwrap();
        println!("one 1e6-site env: {:.2?}", t0.elapsed());
    }
}
