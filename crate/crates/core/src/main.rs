fn main() {
    std::process::exit(radring::cli::main_with_args(std::env::args_os()));
}
