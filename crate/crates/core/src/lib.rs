//! Chaotic artificial fish swarm search with multi-population differential
//! evolution, for the symmetric TSP and for depot-rooted multi-group routing
//! with a monetary cost objective.
//!
//! ```
//! use fishswarm::{datasets, hybrid, space::TspSpace};
//!
//! let space = TspSpace::new(datasets::oliver30().distance_matrix());
//! let mut cfg = hybrid::HybridConfig::default();
//! cfg.swarm.max_iter = 20;
//! let result = hybrid::run(&space, &cfg).unwrap();
//! assert_eq!(result.history.len(), 20);
//! ```

pub mod afsa;
pub mod bench;
pub mod datasets;
pub mod de;
pub mod error;
pub mod hybrid;
pub mod instance;
pub mod mtsp;
pub mod par;
pub mod space;
pub mod tour;

pub use error::{Error, Result};
pub use hybrid::{run, HybridConfig, RunResult, Variant};
pub use instance::{parse_tsplib, DistanceMatrix, Metric, TspInstance};
pub use mtsp::{CostBreakdown, CostParams, MtspPlan, MtspSpace, Scenario};
pub use space::{SearchSpace, TspSpace};
pub use tour::Tour;
