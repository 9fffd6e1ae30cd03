fn main() {
    std::process::exit(ias_cli::run(std::env::args_os()));
}
