use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = brouwer::cli::run(std::env::args_os());
    if outcome.report.is_null() {
        // Help, version, or an argument error rendered by the parser.
        if outcome.code == brouwer::cli::EXIT_OK {
            print!("{}", outcome.summary);
        } else {
            eprint!("{}", outcome.summary);
        }
        return ExitCode::from(outcome.code as u8);
    }
    let text = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
    match &outcome.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("error: cannot write {}: {}", path.display(), e);
                return ExitCode::from(brouwer::cli::EXIT_INPUT as u8);
            }
            println!("{}", outcome.summary);
        }
        None => {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", text);
            eprintln!("{}", outcome.summary);
        }
    }
    ExitCode::from(outcome.code as u8)
}
