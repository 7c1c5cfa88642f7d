fn main() {
    std::process::exit(rcw::run(std::env::args_os()));
}
