use clap::Parser;
use spectral_ergodicity::cli::{run, Cli};

fn main() -> anyhow::Result<()> {
    run(Cli::parse())?;
    Ok(())
}
