//! Seed derivation and salted hashing.
//!
//! Every random stream in a run is derived from the run seed plus a
//! domain tag and a small tuple of indices, so streams are independent of
//! scheduling order and of each other.

use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt;

fn digest(seed: u64, tag: &str, parts: &[u64]) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update((tag.len() as u64).to_le_bytes());
    h.update(tag.as_bytes());
    for p in parts {
        h.update(p.to_le_bytes());
    }
    h.finalize().into()
}

/// Deterministic RNG for `(seed, tag, parts)`.
pub fn stream(seed: u64, tag: &str, parts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::from_seed(digest(seed, tag, parts))
}

/// 32 bytes of salt derived from the run seed.
pub fn salt(seed: u64, tag: &str) -> Vec<u8> {
    digest(seed, tag, &[]).to_vec()
}

fn salted_hex(salt: &[u8], payload: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(salt);
    h.update(payload);
    let out: [u8; 32] = h.finalize().into();
    hex::encode(&out[..8])
}

/// Opaque client identifier: a salted hash of the client index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClientId(pub String);

impl ClientId {
    pub fn hashed(salt: &[u8], index: usize) -> Self {
        ClientId(salted_hex(salt, &(index as u64).to_le_bytes()))
    }
}

impl fmt::Display for ClientId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Salted hash of a class label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HashedLabel(pub String);

impl HashedLabel {
    pub fn hashed(salt: &[u8], label: usize) -> Self {
        HashedLabel(salted_hex(salt, &(label as u64).to_le_bytes()))
    }
}
