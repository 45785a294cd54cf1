//! Present-biased agents on combinatorial optimization tasks.
//!
//! An agent with present bias `beta` repeatedly solves the remaining task
//! under a distorted cost, commits the element it would execute first, and
//! replans. This crate simulates such agents on exact, desk-sized instances,
//! builds the worst-case families that make them procrastinate, and checks
//! the known cost-ratio bounds with exact rational arithmetic.
//!
//! ```
//! use biaslab::{agent, exact::ratio, instances};
//!
//! let inst = instances::isc(4, 3).unwrap();
//! let cfg = agent::AgentConfig::new(biaslab::Bias::min(ratio(1, 4)).unwrap());
//! let trace = agent::run_agent(&inst, &cfg).unwrap();
//! assert_eq!(trace.steps.len(), 4);
//! assert_eq!(trace.ratio.to_string(), "4/3");
//! ```

pub mod agent;
pub mod analysis;
pub mod error;
pub mod evaluators;
pub mod exact;
pub mod instances;
pub mod io;
pub mod problem;
pub mod taskgraph;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{ExtRational, Rational};
pub use problem::{Bias, Closure, ElementId, ElementSet, Instance, Objective, ProblemKind, Solution};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/biased-cost.md")]
    mod biased_cost {}
    #[doc = include_str!("../../../book/src/agent.md")]
    mod agent {}
    #[doc = include_str!("../../../book/src/worst-cases.md")]
    mod worst_cases {}
    #[doc = include_str!("../../../book/src/task-graphs.md")]
    mod task_graphs {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/sunflowers.md")]
    mod sunflowers {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
