fn main() {
    std::process::exit(hasten::cli::run());
}
