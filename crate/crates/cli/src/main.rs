fn main() {
    // logging level is fixed; the tool takes no configuration from the environment
    env_logger::Builder::new().filter_level(log::LevelFilter::Warn).init();
    std::process::exit(centralspin_cli::app::run(std::env::args_os()));
}
