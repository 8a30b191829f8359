fn main() {
    std::process::exit(hoyt_ed::cli::run(std::env::args_os()));
}
