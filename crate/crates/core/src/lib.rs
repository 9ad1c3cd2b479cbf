//! Pace-of-play analytics for hockey event logs.
//!
//! Load an [`event::EventLog`] with [`ingest`], build an
//! [`pipeline::Analysis`], then ask for zonal speeds ([`metrics`]), spatial
//! grids ([`polygrid`], [`heatmap`]), team and player comparisons
//! ([`team`], [`player`]) or outcome links ([`outcome`]). [`synth`] generates
//! seeded seasons with a truth ledger for testing; [`cli`] is the
//! `rinkpace` binary.

pub mod cli;
pub mod error;
pub mod event;
pub mod heatmap;
pub mod ingest;
pub mod metrics;
pub mod outcome;
pub mod pipeline;
pub mod player;
pub mod polygrid;
pub mod rink;
pub mod sequence;
pub mod synth;
pub mod table;
pub mod team;

pub use error::{Error, Result};
