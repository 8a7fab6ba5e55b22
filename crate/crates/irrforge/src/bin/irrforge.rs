fn main() {
    std::process::exit(irrforge::cli::main());
}
