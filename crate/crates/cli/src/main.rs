//! `kerr-qpd`: point queries, field generation, validation and benchmarks for
//! Husimi and Wigner functions of Kerr-evolved coherent states.

mod bench;
mod common;
mod field;
mod point;
mod validate;

use std::process::ExitCode;

use clap::{Parser, Subcommand};


#[derive(Parser)]
#[command(name = "kerr-qpd", version, about = "Husimi and Wigner functions of Kerr-evolved coherent states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate Q and/or W at a single point.
    Point(point::PointArgs),
    /// Evaluate a field on a grid and write it to a file.
    Field(field::FieldArgs),
    /// Run the oracle-equivalence suites.
    Validate(validate::ValidateArgs),
    /// Time the evaluators against photon number.
    Bench(bench::BenchArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Point(a) => point::run(&a),
        Command::Field(a) => field::run(&a),
        Command::Validate(a) => validate::run(&a),
        Command::Bench(a) => bench::run(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
