use clap::Parser;

fn main() {
  let cli = hopf_cli::Cli::parse();
  let code = hopf_cli::run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
  std::process::exit(code);
}
