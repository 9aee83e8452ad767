use energy_series::cli;

fn main() {
    std::process::exit(cli::main_with(std::env::args_os()));
}
