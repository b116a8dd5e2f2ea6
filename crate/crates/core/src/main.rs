fn main() {
    std::process::exit(semisens::cli::main_with_env());
}
