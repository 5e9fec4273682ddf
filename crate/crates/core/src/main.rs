fn main() {
    std::process::exit(modlat::cli::main_with_args(std::env::args_os()));
}
