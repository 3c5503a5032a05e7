fn main() {
    std::process::exit(coopic::cli::run(std::env::args_os()));
}
