fn main() {
    std::process::exit(hermite_coords::cli::run());
}
