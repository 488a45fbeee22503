use std::process::ExitCode;

fn main() -> ExitCode {
    ainfree_core::cli::init_threads();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = ainfree_core::cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code as u8)
}
