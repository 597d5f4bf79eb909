fn main() {
    std::process::exit(coxvar::cli::run(std::env::args_os()));
}
