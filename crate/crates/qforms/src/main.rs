fn main() {
    let out = qforms::cli::run_args(std::env::args_os());
    if out.code == qforms::cli::EXIT_PASS {
        println!("{}", out.output.trim_end());
    } else {
        eprintln!("{}", out.output.trim_end());
    }
    std::process::exit(out.code);
}
