fn main() {
    std::process::exit(bubble_cli::run(std::env::args_os()));
}
