fn main() {
    std::process::exit(slnet::cli::run(std::env::args_os()));
}
