fn main() {
    std::process::exit(dewijs::cli::run(std::env::args_os()));
}
