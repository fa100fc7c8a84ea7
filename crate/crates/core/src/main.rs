fn main() {
    std::process::exit(equilibria::cli::main_entry());
}
