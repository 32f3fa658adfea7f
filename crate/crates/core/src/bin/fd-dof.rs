fn main() {
    std::process::exit(fd_dof::cli::main_exit_code());
}
