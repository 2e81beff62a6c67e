fn main() {
    std::process::exit(torical::cli::main_from_env());
}
