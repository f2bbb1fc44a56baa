fn main() {
    std::process::exit(lazymatch::cli::main_with_args(std::env::args_os()));
}
