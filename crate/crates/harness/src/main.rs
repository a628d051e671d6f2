fn main() -> std::process::ExitCode {
    witt_lab::cli::main()
}
