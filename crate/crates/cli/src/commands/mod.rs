mod arith;
mod bounds;
mod mc;
mod quantize;
mod repsize;

use std::time::Instant;

use rayon::prelude::*;

use crate::args::Command;

/// Failure of a subcommand, mapped to the process exit code.
#[derive(Debug)]
pub enum Failure {
    /// Invalid flags or configuration file (exit 2).
    Config(anyhow::Error),
    /// A numeric routine failed where no per-row error column exists (exit 3).
    Numeric(anyhow::Error),
    /// Writing output failed (exit 1).
    Io(anyhow::Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Config(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }

    pub fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Config(e) | Failure::Numeric(e) | Failure::Io(e) => e,
        }
    }
}

pub type CmdResult = Result<(), Failure>;

pub fn run(command: Command) -> CmdResult {
    match command {
        Command::Quantize(a) => quantize::run(&a),
        Command::SweepRepsize(a) => repsize::run(&a),
        Command::SweepArith(a) => arith::run(&a),
        Command::McCompare(a) => mc::run(&a),
        Command::Bounds(a) => bounds::run(&a),
    }
}

/// Evaluates `f` on every cell, in parallel unless `sequential`; results keep the input order.
fn map_cells<C, R, F>(cells: &[C], sequential: bool, f: F) -> Vec<R>
where
    C: Sync,
    R: Send,
    F: Fn(&C) -> R + Sync + Send,
{
    if sequential {
        cells.iter().map(f).collect()
    } else {
        cells.par_iter().map(f).collect()
    }
}

/// Runs `f` and returns its result with the elapsed wall time in seconds.
fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let r = f();
    (r, start.elapsed().as_secs_f64())
}
