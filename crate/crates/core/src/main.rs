fn main() -> std::process::ExitCode {
    dunkl_appell::cli::main_with_args(std::env::args_os())
}
