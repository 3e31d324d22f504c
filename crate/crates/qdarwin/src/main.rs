use clap::Parser;

fn main() {
    let cli = qdarwin::Cli::parse();
    if let Err(e) = qdarwin::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
