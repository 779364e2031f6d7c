fn main() {
    std::process::exit(cosmop_cli::run(std::env::args_os()));
}
