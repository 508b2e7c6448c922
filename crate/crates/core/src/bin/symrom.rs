fn main() {
    std::process::exit(symrom::cli::run(std::env::args_os()));
}
