fn main() {
    std::process::exit(qaskey::cli::execute(std::env::args_os()));
}
