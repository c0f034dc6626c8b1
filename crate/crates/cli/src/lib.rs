//! Tables and verification ledgers computed live from the `solvlen` groups.

pub mod table;
pub mod verify;

pub use table::{cmd_table, render, Format, Table, TableKind, TableOptions, TableRow};
pub use verify::{cmd_verify, render_ledger, Suite, VerifyOptions};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Group(solvlen::GroupError),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Infeasible sizes and bad arguments are usage errors.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
