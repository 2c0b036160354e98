fn main() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = polyerg::cli::run(["polyerg", "classify", "n", "2*n", "n^2"], &mut out, &mut err);
    print!("{}", String::from_utf8_lossy(&out));
    eprint!("{}", String::from_utf8_lossy(&err));
    println!("exit code {code}");
}
