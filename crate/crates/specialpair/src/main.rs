fn main() {
    std::process::exit(specialpair::cli::run());
}
