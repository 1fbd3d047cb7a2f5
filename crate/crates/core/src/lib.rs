//! Federated-learning simulation harness with an embedded trustworthiness
//! evaluation engine.
//!
//! The pipeline runs in five stages:
//!
//! 1. [`data`] synthesizes (or loads) client datasets and their hashed class
//!    distributions.
//! 2. [`sim`] runs the federation round loop (sampling, local training,
//!    optional local DP, optional model-replacement attacker, aggregation)
//!    and collects [`sim::RunStatistics`].
//! 3. [`factsheet`] holds the accountability document and its completeness
//!    rules.
//! 4. [`metrics`] turns the collected inputs into raw metric values over the
//!    fixed pillar/notion taxonomy.
//! 5. [`scoring`] normalizes raw values, rolls them up into notion, pillar and
//!    global scores, and renders the trust report.
//!
//! [`experiment`] ties the stages together for the CLI and ships the four
//! reference presets.

pub mod data;
pub mod error;
pub mod exec;
pub mod experiment;
pub mod factsheet;
pub mod metrics;
pub mod model;
pub mod scoring;
pub mod seed;
pub mod sim;

pub use error::{Error, Result};
