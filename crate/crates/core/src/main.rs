fn main() {
    std::process::exit(toepfree::cli::main());
}
