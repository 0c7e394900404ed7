fn main() {
    std::process::exit(subrayleigh::cli::run(std::env::args_os()));
}
