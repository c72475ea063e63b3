use std::io::Write;

use clap::Parser;
use middlemen::cli::{run, RunConfig};

fn main() {
    let out = run(&RunConfig::parse());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::io::stdout().flush().ok();
    std::process::exit(out.code);
}
