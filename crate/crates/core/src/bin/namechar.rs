fn main() {
    std::process::exit(namechar::cli::run(std::env::args_os()));
}
