//! Agent-based simulation of local climate governance.
//!
//! Citizens weigh motives to decide whether to join an environmental NGO or
//! take part in its protests. Their motive weights drift upward with framed
//! news, the NGO turns turnout into political pressure, and a council of
//! politicians finally accepts, rejects or sends back a land-use proposal.
//!
//! ```
//! use climgov::{run, SimulationConfig};
//!
//! let mut config = SimulationConfig::default();
//! config.population.size = 300;
//! let summary = run(config, 42).unwrap();
//! assert_eq!(summary.member_series.len(), 12);
//! ```

pub mod behaviour;
pub mod dist;
pub mod engine;
pub mod engo;
pub mod error;
pub mod influence;
pub mod media;
pub mod politics;
pub mod population;
pub mod rng;
pub mod sweep;
pub mod validate;

pub use engine::{run, run_with_threads, RunSummary, Simulation, SimulationConfig, StepRecord};
pub use error::{Error, Result, Violation};
pub use politics::Decision;
pub use rng::SeedTree;
pub use sweep::{run_sweep, SweepSpec};

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/citizens.md")]
    mod citizens {}
    #[doc = include_str!("../../../book/src/network.md")]
    mod network {}
    #[doc = include_str!("../../../book/src/influence.md")]
    mod influence {}
    #[doc = include_str!("../../../book/src/engo.md")]
    mod engo {}
    #[doc = include_str!("../../../book/src/politics.md")]
    mod politics {}
    #[doc = include_str!("../../../book/src/running.md")]
    mod running {}
    #[doc = include_str!("../../../book/src/scenarios.md")]
    mod scenarios {}
}
