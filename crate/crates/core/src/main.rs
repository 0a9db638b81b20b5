fn main() {
    std::process::exit(urgency::cli::main(std::env::args_os()));
}
