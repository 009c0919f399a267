fn main() {
    std::process::exit(chromalg::cli::main_with_args(std::env::args_os()));
}
