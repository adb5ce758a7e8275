fn main() {
    std::process::exit(specflow::cli::run(std::env::args_os()));
}
