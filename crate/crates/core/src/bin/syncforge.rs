fn main() {
    std::process::exit(syncforge::cli::run(std::env::args_os()));
}
