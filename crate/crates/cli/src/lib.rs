//! `hopf` command-line tool: compute, validate, and cross-check Hopf invariants of labeled
//! sphere triangulations stored in the plain-text instance format (see [`instance`]).
//!
//! Exit codes: 0 on success, 1 on invalid input or a failed check, 2 when an internal
//! certificate fails (non-integer pairing or an inconsistent linear system).

pub mod commands;
pub mod instance;

pub use commands::{run, Cli};
pub use instance::{emit, parse_instance, Instance, InstanceError, RawInstance};
