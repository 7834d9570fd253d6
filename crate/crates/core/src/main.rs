fn main() {
    std::process::exit(kdvb::cli::run());
}
