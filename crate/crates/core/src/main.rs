fn main() {
    std::process::exit(rnlab::cli::main_with(std::env::args_os()));
}
