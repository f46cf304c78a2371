fn main() {
    std::process::exit(boxlogic::cli::run(std::env::args_os()));
}
