fn main() {
    std::process::exit(bott::cli::main());
}
