fn main() {
    std::process::exit(etale_core::cli::main());
}
