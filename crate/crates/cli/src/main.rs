use std::process::ExitCode;

use curio_cli::CliError;

fn main() -> ExitCode {
    match curio_cli::run(std::env::args_os()) {
        Ok(manifest) => {
            for file in &manifest.files {
                println!("{}", manifest.out_dir.join(file).display());
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Info(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("curio: error: {err}");
            err.exit_code()
        }
    }
}
