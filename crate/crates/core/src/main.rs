fn main() {
    std::process::exit(semidirect::cli::main_with_std());
}
