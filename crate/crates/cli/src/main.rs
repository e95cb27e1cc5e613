use clap::Parser;

fn main() {
    let cli = intform_cli::Cli::parse();
    let status = intform_cli::run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(status);
}
