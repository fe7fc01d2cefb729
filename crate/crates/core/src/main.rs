fn main() {
    std::process::exit(billiards::cli::run_cli(std::env::args_os()));
}
