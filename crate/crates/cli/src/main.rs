fn main() {
    let (code, out) = gradua_cli::run(std::env::args_os());
    if code == 2 {
        eprint!("{out}");
    } else {
        print!("{out}");
    }
    if !out.ends_with('\n') {
        if code == 2 { eprintln!() } else { println!() }
    }
    std::process::exit(code);
}
