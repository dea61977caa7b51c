fn main() {
    std::process::exit(eelkit::cli::run(std::env::args_os()));
}
