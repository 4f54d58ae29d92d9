fn main() -> std::process::ExitCode {
    tokenlab::cli::main()
}
