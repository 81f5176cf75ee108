use std::io::Write;

fn main() {
    let mut out = std::io::BufWriter::new(std::io::stdout());
    let code = easyqg_cli::run(std::env::args_os(), &mut out, &mut std::io::stderr());
    let _ = out.flush();
    std::process::exit(code);
}
