fn main() {
    std::process::exit(landau::cli::run(std::env::args_os()));
}
