use std::io;

fn main() {
    if let Some(threads) = std::env::var("MBDOM_THREADS").ok().and_then(|v| v.parse().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let args: Vec<String> = std::env::args().collect();
    let code = mbdom::cli::run(&args, &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
