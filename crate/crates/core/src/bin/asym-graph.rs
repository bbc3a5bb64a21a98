use std::io::{self, Write};

fn main() {
    let mut input = io::stdin().lock();
    let mut out = io::stdout().lock();
    let mut err = io::stderr().lock();
    let code = asym_graph::cli::main_with(std::env::args(), &mut input, &mut out, &mut err);
    let _ = out.flush();
    std::process::exit(code);
}
