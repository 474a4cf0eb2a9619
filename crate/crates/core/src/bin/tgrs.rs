fn main() {
    std::process::exit(tgrs::cli::main_with(std::env::args_os()));
}
