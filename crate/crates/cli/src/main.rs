use clap::Parser;

fn main() {
    let cli = nsym_model_cli::Cli::parse();
    std::process::exit(nsym_model_cli::execute(cli));
}
