fn main() {
    std::process::exit(quasiuniform::cli::main_entry());
}
