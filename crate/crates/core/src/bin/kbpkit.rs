fn main() {
    std::process::exit(kbpkit::cli::main());
}
