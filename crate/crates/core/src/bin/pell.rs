fn main() {
    std::process::exit(pell::cli::run(std::env::args_os()));
}
