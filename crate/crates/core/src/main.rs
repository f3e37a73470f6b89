fn main() {
    std::process::exit(fibrank::cli::run(std::env::args_os()));
}
