fn main() {
    std::process::exit(indcat_cli::run(std::env::args_os()));
}
