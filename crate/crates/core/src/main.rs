fn main() {
    std::process::exit(gspcd::cli::run(std::env::args_os()));
}
