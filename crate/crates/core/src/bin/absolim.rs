fn main() {
    std::process::exit(absolim::cli::main());
}
