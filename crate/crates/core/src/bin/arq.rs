fn main() {
    std::process::exit(arq::cli::run());
}
