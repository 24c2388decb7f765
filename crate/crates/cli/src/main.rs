fn main() {
    std::process::exit(pdklr_cli::run(std::env::args_os()));
}
