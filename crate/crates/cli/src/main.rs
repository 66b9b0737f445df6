use std::io::Write;
use std::process;

fn main() {
    let outcome = twochild_cli::run(std::env::args_os());
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    let _ = std::io::stdout().flush();
    process::exit(outcome.code);
}
