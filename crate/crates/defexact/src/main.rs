fn main() {
    std::process::exit(defexact::run());
}
