fn main() {
    std::process::exit(methodrisk::cli::run());
}
