fn main() {
    std::process::exit(jsts::cli::main_with_args(std::env::args_os()));
}
