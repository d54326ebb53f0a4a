//! Command-line harness: mesh generation and auditing, single solves and
//! convergence studies.

pub mod args;
pub mod commands;
pub mod study;
pub mod table;

use std::io::Write;

use args::{Cli, Command};
use directfem::FemError;
use study::ConfigError;

pub fn run(cli: Cli, out: &mut impl Write) -> anyhow::Result<()> {
    match cli.command {
        Command::Mesh(c) => commands::mesh(c, out),
        Command::Solve(a) => commands::solve(a, out),
        Command::Convergence(a) => commands::convergence(a, out),
    }
}

/// 2 for bad input, 3 for numerical failures.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<ConfigError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<FemError>() {
        Some(e) if e.is_numerical() => 3,
        Some(FemError::CollapseBreaksConvexity { .. }) => 3,
        _ => 2,
    }
}
