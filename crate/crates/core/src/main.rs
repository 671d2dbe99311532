fn main() {
    std::process::exit(superlie::cli::main_with_args(std::env::args_os()));
}
