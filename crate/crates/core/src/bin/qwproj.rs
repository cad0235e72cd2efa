fn main() {
    std::process::exit(qwproj::cli::run(std::env::args_os()));
}
