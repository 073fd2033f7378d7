//! Regenerates the standard set of spectrum figures through the CLI entry
//! point, writing each into its own directory.
//!
//!     cargo run --release --example figures -- [out_dir]

fn main() {
    let out = std::env::args().nth(1).unwrap_or_else(|| "figures".into());
    let sets: [(&str, &[&str]); 6] = [
        ("unweighted", &["--beta", "2", "--c", "2", "--m", "0", "--weights", "0,0"]),
        ("unstable_ideal", &["--beta", "2", "--c", "2", "--m", "0", "--weights", "ideal"]),
        ("stable_ideal", &["--beta", "1.3", "--c", "2", "--m", "0", "--weights", "ideal"]),
        ("sublinear_ideal", &["--beta", "2", "--c", "2", "--m", "0.7", "--weights", "ideal"]),
        ("linear_ideal", &["--beta", "2", "--c", "2", "--m", "1", "--weights", "ideal"]),
        ("diffusive_ideal", &["--beta", "1.3", "--c", "2", "--m", "0", "--eps", "0.02", "--weights", "ideal"]),
    ];
    for (name, flags) in sets {
        let dir = format!("{out}/{name}");
        let mut args = vec!["wavespec", "spectrum"];
        args.extend_from_slice(flags);
        args.extend(["--out-dir", &dir]);
        let code = wavespec::cli::run(args);
        println!("{name:<16} -> {dir}/spectrum.svg (exit {code})");
    }
    let code = wavespec::cli::run([
        "wavespec", "profile", "--beta", "2", "--c", "2", "--m", "0", "--z-range", "-6:6", "--n", "601", "--format",
        "svg", "--out", &format!("{out}/profile.svg"),
    ]);
    println!("profile          -> {out}/profile.svg (exit {code})");
}
