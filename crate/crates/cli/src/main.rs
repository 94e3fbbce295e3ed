fn main() {
    std::process::exit(pga_cli::run(std::env::args_os()));
}
