fn main() {
    std::process::exit(fisher_shannon_cli::main_with_args(std::env::args_os()));
}
