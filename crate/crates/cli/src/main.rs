fn main() {
    std::process::exit(sdpfeas::run(std::env::args_os()));
}
