fn main() {
    std::process::exit(infharm::cli::run(std::env::args_os()));
}
