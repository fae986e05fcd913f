//! Reliable spanners for metric spaces via locality-sensitive orderings.

pub mod error;
pub mod experiments;
pub mod generate;
pub mod graph;
pub mod hst;
pub mod lso;
pub mod metric;
pub mod partition;
pub mod path_spanner;
pub mod pipeline;
pub mod rng;
pub mod spanner;
pub mod ultrametric;

pub use error::{Error, Result};
pub use metric::{MetricSpace, PointId};
