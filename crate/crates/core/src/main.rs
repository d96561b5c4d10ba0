fn main() {
    std::process::exit(qubit_walk::cli::main());
}
