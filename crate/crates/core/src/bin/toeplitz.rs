fn main() {
    std::process::exit(toeplitz_core::cli::run(std::env::args_os()));
}
