fn main() {
    std::process::exit(fluidsymp::cli::main());
}
