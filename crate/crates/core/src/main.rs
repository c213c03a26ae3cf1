fn main() {
    std::process::exit(maxcut_bridge::cli::run(std::env::args_os()));
}
