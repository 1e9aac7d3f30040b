fn main() {
    // placeholder while the core library is under construction
    eprintln!("zpcover: not yet wired up");
    std::process::exit(2);
}
