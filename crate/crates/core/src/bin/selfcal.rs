fn main() {
    std::process::exit(selfcal::harness::cli::main());
}
