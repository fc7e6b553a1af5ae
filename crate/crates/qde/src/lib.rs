//! Batch front end for `qde-core`.
//!
//! Reads JSON system specifications ([`spec`]), dispatches them to the core
//! kernels ([`tasks`]) and writes result records with plot-ready series
//! ([`record`]).

pub mod error;
pub mod record;
pub mod spec;
pub mod tasks;

pub use error::{exit, QdeError, Result};
pub use record::ResultRecord;
pub use spec::{parse_spec, parse_spec_file, System, SystemSpec, Task};
pub use tasks::run_task;
