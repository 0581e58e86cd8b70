use clap::Parser;

fn main() {
    let cli = aperture_cli::Cli::parse();
    match aperture_cli::execute(&cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(1);
        }
    }
}
