fn main() {
    std::process::exit(qsd_core::cli::main_exit_code());
}
