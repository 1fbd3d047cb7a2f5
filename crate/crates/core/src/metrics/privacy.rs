use crate::error::{Error, Result};
use crate::factsheet::FactSheet;

pub fn metric_differential_privacy(fs: &FactSheet) -> bool {
    fs.flags.differential_privacy
}

/// Shannon entropy of the client participation distribution, normalized by
/// `log2(N)` so the result lies in `[0, 1]`.
pub fn metric_entropy(selection_counts: &[u64]) -> Result<f64> {
    let n = selection_counts.len();
    if n < 2 {
        return Err(Error::unavailable("entropy", "needs at least two clients"));
    }
    let total: u64 = selection_counts.iter().sum();
    if total == 0 {
        return Err(Error::unavailable("entropy", "no client was ever selected"));
    }
    let h: f64 = selection_counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total as f64;
            -p * p.log2()
        })
        .sum();
    Ok((h / (n as f64).log2()).clamp(0.0, 1.0))
}

/// Posterior probability that an adversary with a uniform prior over `N`
/// clients identifies its target under ε-indistinguishability:
/// `e^ε / (N − 1 + e^ε)`. Without DP the risk is 1.
pub fn metric_global_privacy_risk(epsilon: Option<f64>, num_clients: usize) -> f64 {
    match epsilon {
        None => 1.0,
        Some(eps) => {
            let others = num_clients.saturating_sub(1) as f64;
            // Rewritten as 1 / (1 + (N−1)e^{−ε}) so large ε does not overflow.
            1.0 / (1.0 + others * (-eps).exp())
        }
    }
}
