fn main() {
    std::process::exit(weakcde::run(std::env::args_os()));
}
