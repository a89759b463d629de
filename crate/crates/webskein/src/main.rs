use clap::Parser;

fn main() {
    let args = webskein::cli::Args::parse();
    let out = webskein::cli::run(&args.command);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::process::exit(out.code);
}
