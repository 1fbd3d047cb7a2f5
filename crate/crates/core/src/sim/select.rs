use crate::error::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Selector {
    #[default]
    Random,
    /// Deterministic rotation: round `t` takes clients `t*m .. t*m + m` mod N.
    Roundrobin,
}

impl Selector {
    pub fn is_random(&self) -> bool {
        matches!(self, Selector::Random)
    }
}

/// Pick `m` of `n` client indices for `round`. Returned in ascending order.
pub fn select_clients<R: Rng + ?Sized>(
    selector: Selector,
    n: usize,
    m: usize,
    round: u32,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if m == 0 || m > n {
        return Err(Error::config(format!("cannot select {m} of {n} clients")));
    }
    let mut chosen: Vec<usize> = match selector {
        Selector::Random => rand::seq::index::sample(rng, n, m).into_vec(),
        Selector::Roundrobin => {
            let start = (round as usize % n) * m % n;
            (0..m).map(|k| (start + k) % n).collect()
        }
    };
    chosen.sort_unstable();
    Ok(chosen)
}
