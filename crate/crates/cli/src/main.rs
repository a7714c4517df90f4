use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let out = hopfcert_cli::run_command(&args);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.output.as_bytes());
    ExitCode::from(out.code as u8)
}
