fn main() {
    std::process::exit(reconc_cli::run(std::env::args_os()));
}
