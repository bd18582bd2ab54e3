fn main() {
    std::process::exit(vren_cli::run(std::env::args_os()));
}
