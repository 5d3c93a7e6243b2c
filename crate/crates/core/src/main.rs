fn main() {
    std::process::exit(zipcurve::run());
}
