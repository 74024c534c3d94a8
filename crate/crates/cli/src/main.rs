mod args;
mod commands;
mod io;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use io::AssertionFailure;

fn run(cli: &Cli) -> anyhow::Result<()> {
    let seed = cli.seed;
    let threads = cli.threads;
    match &cli.command {
        Command::Distance(a) => commands::distance(a),
        Command::Maxfilter(a) => commands::maxfilter(a),
        Command::Embed(a) => commands::embed(a),
        Command::FigureScatter(a) => commands::figure_scatter(a, seed, threads),
        Command::CycleTable(a) => commands::cycle_table(a),
        Command::Sdp(a) => commands::sdp(a),
        Command::VerifyDual(a) => commands::verify(a),
        Command::LowerBound(a) => commands::lower_bound(a, seed),
        Command::Probe(a) => commands::probe(a, seed),
        Command::Mds(a) => commands::mds(a),
        Command::Kmeans(a) => commands::kmeans(a, seed),
        Command::Ann(a) => commands::ann(a),
        Command::Bispectrum(a) => commands::bispectrum_cmd(a),
    }
}

/// 1 for failed guarantees, 3 for solver failures, 2 for everything else.
fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<AssertionFailure>().is_some() {
        return 1;
    }
    match e.downcast_ref::<orbitmetric::Error>() {
        Some(
            orbitmetric::Error::SolverDivergence(_)
            | orbitmetric::Error::InfeasibleNumerics(_)
            | orbitmetric::Error::EigenFailure(_),
        ) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
