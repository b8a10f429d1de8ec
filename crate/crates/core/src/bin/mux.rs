fn main() {
    std::process::exit(mux_core::cli::run(std::env::args_os()));
}
