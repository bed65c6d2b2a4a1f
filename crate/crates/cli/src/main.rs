fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let outcome = cubal_cli::dispatch(&args);
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    std::process::exit(outcome.code);
}
