//! Drive the command-line front end without spawning a process.

fn main() {
    let model = concat!(env!("CARGO_MANIFEST_DIR"), "/models/two_exponential.json");
    for args in [
        vec!["derive"],
        vec!["ruin", "--u", "1", "3"],
        vec!["table", "--x1", "0.5", "1.5", "2", "--x2", "1", "3", "2"],
    ] {
        let argv = ["quadrant-ruin", "--model", model].into_iter().chain(args).map(std::ffi::OsString::from);
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = quadrant_ruin::cli::run(argv, &mut out, &mut err);
        print!("{}", String::from_utf8_lossy(&out));
        println!("(exit {code})\n");
    }
}
