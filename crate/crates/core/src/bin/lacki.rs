fn main() {
    std::process::exit(lacki::cli::main_from_env());
}
