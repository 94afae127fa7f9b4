fn main() -> std::process::ExitCode {
    detrec::cli::main_entry()
}
