use clap::Parser;
use mfs::cli::{execute, Cli, RunConfig};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let config = RunConfig::from_cli(Cli::parse());
    if let Err(e) = execute(&config) {
        eprintln!("mfs: {e}");
        std::process::exit(1);
    }
}
