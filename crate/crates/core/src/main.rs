fn main() {
    std::process::exit(sigkit::cli::run(std::env::args_os()));
}
