use clap::Parser;

fn main() {
    let cli = match frechet_cli::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                frechet_cli::EXIT_INVALID
            } else {
                frechet_cli::EXIT_OK
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    std::process::exit(frechet_cli::run(&cli));
}
