fn main() {
    std::process::exit(valuscope_cli::run(std::env::args_os()));
}
