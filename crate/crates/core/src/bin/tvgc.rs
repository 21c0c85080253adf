fn main() {
    std::process::exit(tvg_centrality::cli::run(std::env::args_os()));
}
