fn main() {
    std::process::exit(pcx_cli::run(std::env::args_os()));
}
