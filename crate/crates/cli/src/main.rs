use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let result = dedekind_cli::run_args(std::env::args_os());
    // a closed pipe downstream is not an error worth reporting
    let _ = writeln!(std::io::stdout(), "{}", result.render());
    if result.exit_code != 0 {
        if let Some(msg) = result.document["summary"].as_str() {
            eprintln!("dedekind: {msg}");
        }
    }
    ExitCode::from(result.exit_code as u8)
}
