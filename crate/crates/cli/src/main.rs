use std::process::ExitCode;

mod app;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    ExitCode::from(app::run(&argv) as u8)
}
