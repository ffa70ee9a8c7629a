fn main() {
    std::process::exit(perfect_unary::run(std::env::args_os()));
}
