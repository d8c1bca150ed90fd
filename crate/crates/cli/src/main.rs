fn main() {
    std::process::exit(ramsey_cli::run(std::env::args_os()));
}
