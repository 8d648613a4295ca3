//! Shared fixtures for the criterion benches.

use halfline_core::WeightProfile;

/// Profiles spanning the regimes the benches care about.
pub fn bench_profiles() -> Vec<(&'static str, WeightProfile)> {
    vec![
        ("a0_bneg", WeightProfile::log_poly(0.0, -1.0, 1.0).unwrap()),
        ("afrac", WeightProfile::log_poly(0.5, 1.0, 1.0).unwrap()),
        ("a1_bneg", WeightProfile::log_poly(1.0, -1.0, 1.0).unwrap()),
    ]
}
