fn main() {
    std::process::exit(symfact::cli::main_with_args(std::env::args_os()));
}
