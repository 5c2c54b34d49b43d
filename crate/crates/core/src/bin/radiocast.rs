fn main() {
    std::process::exit(radiocast::harness::cli::main_with(std::env::args_os()));
}
