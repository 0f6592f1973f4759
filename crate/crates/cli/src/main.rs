use clap::Parser;

fn main() {
    tracing_subscriber::fmt().with_writer(std::io::stderr).init();
    match repay_cli::run(repay_cli::Cli::parse()) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}
