//! Runs a suite through the library and prints its JSON report.

use chromalg::cli::{report, Command, HopfAction, HopfInstance, RunConfig};

fn main() -> chromalg::Result<()> {
    let cfg = RunConfig::new(3, 2);
    let command = Command::Hopf { action: HopfAction::Check { instance: Some(HopfInstance::Composite) } };
    let rep = report(&cfg, &command)?.expect("a checking verb");
    println!("{}", rep.to_json());
    println!("{} passed, {} failed", rep.passed, rep.failed);
    Ok(())
}
