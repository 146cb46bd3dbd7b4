fn main() {
    std::process::exit(regularity::cli::run(std::env::args_os()));
}
