fn main() {
    std::process::exit(qperm::cli::dispatch(std::env::args_os()));
}
