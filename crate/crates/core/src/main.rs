fn main() {
    std::process::exit(attrib::cli::main());
}
