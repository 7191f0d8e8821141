use std::io::Write;

fn main() {
    if let Some(n) = std::env::var("SD_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let (code, text) = splitdyn::cli::main_with_args(std::env::args_os());
    // a closed pipe is not an error of the computation
    let _ = if code == 0 {
        std::io::stdout().lock().write_all(text.as_bytes())
    } else {
        std::io::stderr().lock().write_all(text.as_bytes())
    };
    std::process::exit(code);
}
