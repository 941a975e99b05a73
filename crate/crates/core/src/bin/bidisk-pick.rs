fn main() {
    std::process::exit(bidisk_pick::cli::main_with_args(std::env::args_os()));
}
