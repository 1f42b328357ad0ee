fn main() {
    std::process::exit(klooster::cli::main());
}
