use clap::Parser;

fn main() {
    let args = beltrami_cli::Args::parse();
    match beltrami_cli::main_with(&args) {
        Ok(summary) => println!("{summary}"),
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            std::process::exit(e.exit_code());
        }
    }
}
