fn main() {
    std::process::exit(fueltax_core::cli::main_with_args(std::env::args_os()));
}
