fn main() {
    std::process::exit(qadams::cli::main_with_args(std::env::args_os()));
}
