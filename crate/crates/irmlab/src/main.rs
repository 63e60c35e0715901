fn main() {
    std::process::exit(irmlab::cli::main_with(std::env::args_os()));
}
