use std::io::Write;

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let (code, report) = qmedia::cli::run(&argv);
    let mut stdout = std::io::stdout();
    let _ = stdout.write_all(report.as_bytes());
    std::process::exit(code);
}
