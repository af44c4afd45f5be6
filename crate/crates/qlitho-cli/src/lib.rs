//! Library surface of the scenario runner, shared by the `qlitho` binary and
//! its integration tests.

// Validation intentionally uses `!(x > 0)` so NaN parameters are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod report;
pub mod runner;
pub mod scenario;
