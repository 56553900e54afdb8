//! Command-line front end for the `cayley-imc` simulator: list input,
//! run orchestration with oracle checks, JSON-lines traces and the sorting
//! benchmark.

pub mod bench;
pub mod cli;
pub mod input;
pub mod run;
pub mod trace;

pub use input::{parse_input, InputError, Source};
pub use run::{execute, Command, Outcome, RunSpec};
pub use trace::{parse_trace, replay, TraceError, TraceKind, TraceRecord};
