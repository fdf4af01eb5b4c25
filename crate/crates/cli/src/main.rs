fn main() {
    std::process::exit(mpgw_cli::run_cli(std::env::args_os()));
}
