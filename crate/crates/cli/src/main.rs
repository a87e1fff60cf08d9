fn main() {
    std::process::exit(impact_lattice_cli::main_impl(std::env::args_os()));
}
