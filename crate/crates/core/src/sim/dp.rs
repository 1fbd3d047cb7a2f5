//! Local differential privacy on model deltas: L2 clipping followed by
//! per-coordinate Gaussian or Laplace noise.

use super::config::{DpSettings, Mechanism};
use crate::error::Result;
use rand::Rng;
use rand_distr::{Distribution, Normal};

pub fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Scale `v` down to L2 norm at most `clip_norm`.
pub fn clip_l2(v: &[f64], clip_norm: f64) -> Vec<f64> {
    let norm = l2_norm(v);
    if norm <= clip_norm {
        v.to_vec()
    } else {
        let s = clip_norm / norm;
        v.iter().map(|x| x * s).collect()
    }
}

/// Per-coordinate noise scale: Gaussian `σ = C·sqrt(2 ln(1.25/δ))/ε`,
/// Laplace `b = C·sensitivity/ε`.
pub fn noise_scale(dp: &DpSettings) -> f64 {
    match dp.mechanism {
        Mechanism::Gaussian => dp.clip_norm * (2.0 * (1.25 / dp.delta).ln()).sqrt() / dp.epsilon,
        Mechanism::Laplace => dp.clip_norm * dp.laplace_sensitivity / dp.epsilon,
    }
}

fn laplace<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> f64 {
    // Inverse CDF on u ∈ (-1/2, 1/2).
    let u: f64 = rng.random::<f64>() - 0.5;
    -scale * u.signum() * (1.0 - 2.0 * u.abs()).max(f64::MIN_POSITIVE).ln()
}

pub fn apply_local_dp<R: Rng + ?Sized>(delta: &[f64], dp: &DpSettings, rng: &mut R) -> Result<Vec<f64>> {
    dp.validate()?;
    let mut out = clip_l2(delta, dp.clip_norm);
    let scale = noise_scale(dp);
    match dp.mechanism {
        Mechanism::Gaussian => {
            let normal = Normal::new(0.0, scale).expect("finite positive sigma");
            out.iter_mut().for_each(|x| *x += normal.sample(rng));
        }
        Mechanism::Laplace => out.iter_mut().for_each(|x| *x += laplace(rng, scale)),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;
    use proptest::prelude::*;

    #[test]
    fn huge_epsilon_leaves_clipped_delta() {
        let mut rng = seed::stream(1, "dp", &[]);
        let dp = DpSettings::gaussian(1e9);
        let delta = vec![0.3, -0.2, 0.1];
        let out = apply_local_dp(&delta, &dp, &mut rng).unwrap();
        for (a, b) in out.iter().zip(&delta) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn clipping_hits_the_bound() {
        let v = vec![6.0, 8.0];
        let c = clip_l2(&v, 1.0);
        assert!((l2_norm(&c) - 1.0).abs() < 1e-15);
        assert!((c[0] - 0.6).abs() < 1e-15 && (c[1] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn nonpositive_epsilon_is_config_error() {
        let mut rng = seed::stream(1, "dp", &[]);
        let err = apply_local_dp(&[1.0], &DpSettings::gaussian(0.0), &mut rng).unwrap_err();
        assert!(matches!(err, crate::Error::Config(_)));
    }

    fn empirical_std(dp: &DpSettings) -> f64 {
        let mut rng = seed::stream(9, "dp-mc", &[]);
        let draws = apply_local_dp(&vec![0.0; 100_000], dp, &mut rng).unwrap();
        let mean = draws.iter().sum::<f64>() / draws.len() as f64;
        (draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / draws.len() as f64).sqrt()
    }

    #[test]
    fn gaussian_noise_std_matches_formula() {
        let dp = DpSettings::gaussian(6.0);
        let sigma = (2.0 * (1.25f64 / 1e-5).ln()).sqrt() / 6.0;
        assert!((noise_scale(&dp) - sigma).abs() < 1e-15);
        let s = empirical_std(&dp);
        assert!((s / sigma - 1.0).abs() < 0.02, "{s} vs {sigma}");
    }

    #[test]
    fn laplace_noise_std_matches_formula() {
        let dp = DpSettings {
            mechanism: Mechanism::Laplace,
            ..DpSettings::gaussian(2.0)
        };
        // Laplace(b) has standard deviation b·sqrt(2).
        let expected = noise_scale(&dp) * 2f64.sqrt();
        let s = empirical_std(&dp);
        assert!((s / expected - 1.0).abs() < 0.02, "{s} vs {expected}");
    }

    proptest! {
        #[test]
        fn clipping_never_increases_norm(v in prop::collection::vec(-1e3f64..1e3, 1..32), c in 1e-3f64..10.0) {
            let clipped = clip_l2(&v, c);
            prop_assert!(l2_norm(&clipped) <= l2_norm(&v) * (1.0 + 1e-12));
            prop_assert!(l2_norm(&clipped) <= c * (1.0 + 1e-12));
        }
    }
}
