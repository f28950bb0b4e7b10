fn main() {
    std::process::exit(dualent::cli::main_with_args(std::env::args_os()));
}
