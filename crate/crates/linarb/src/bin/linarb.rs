fn main() {
    std::process::exit(linarb::cli::run(std::env::args()));
}
