use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let inv = stfix::cli::run(std::env::args_os());
    if let Some(message) = inv.message {
        print!("{message}");
        return ExitCode::SUCCESS;
    }
    let text = inv.report.render();
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(text.as_bytes());
    if let Some(path) = inv.out {
        if let Err(e) = std::fs::write(&path, &text) {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    ExitCode::from(inv.report.exit_code as u8)
}
