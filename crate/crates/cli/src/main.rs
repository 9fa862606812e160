mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, GuessCommand, IerCommand, MziCommand, TomoCommand, WitnessCommand};
use output::EXIT_AUDIT;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Ier(IerCommand::Bound(a)) => commands::ier_bound(a),
        Command::Ier(IerCommand::Check(a)) => commands::ier_check(a),
        Command::Tomo(TomoCommand::Simulate(a)) => commands::tomo_simulate(a),
        Command::Tomo(TomoCommand::Reconstruct(a)) => commands::tomo_reconstruct(a),
        Command::Witness(WitnessCommand::EtaScan(a)) => commands::witness_eta_scan(a),
        Command::Witness(WitnessCommand::Optimize(a)) => commands::witness_optimize(a),
        Command::Mzi(MziCommand::Scan(a)) => commands::mzi(a),
        Command::GuessGame(GuessCommand::Run(a)) => commands::guess_game(a),
    };
    match result {
        Ok(outcome) => match outcome.audit_failure {
            None => ExitCode::SUCCESS,
            Some(msg) => {
                eprintln!("audit failed: {msg}");
                ExitCode::from(EXIT_AUDIT as u8)
            }
        },
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
