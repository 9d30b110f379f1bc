fn main() {
    std::process::exit(ilgraph::cli::run(std::env::args_os()));
}
