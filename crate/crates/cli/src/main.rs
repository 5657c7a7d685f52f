use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use trustsample_cli::{run, Cli, EXIT_CONFIG};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = run(cli, &mut out, &mut io::stderr());
    if out.flush().is_err() {
        return ExitCode::from(trustsample_cli::EXIT_DATA);
    }
    ExitCode::from(code)
}
