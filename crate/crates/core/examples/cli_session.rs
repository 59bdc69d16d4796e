//! The `diffset` front end driven in-process: construct, verify, report.

use local_diffsets::cli::run as diffset;
use local_diffsets::Result;

fn call(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = diffset(std::iter::once("diffset").chain(args.iter().copied()), &mut out, &mut err);
    let mut text = String::from_utf8_lossy(&out).into_owned();
    text.push_str(&String::from_utf8_lossy(&err));
    (code, text)
}

pub fn run() -> Result<String> {
    let dir = std::env::temp_dir().join(format!("diffset-session-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let p4 = dir.join("p4.txt");
    let ap = dir.join("ap16.txt");
    let (p4s, aps) = (p4.to_str().expect("utf-8 path"), ap.to_str().expect("utf-8 path"));

    let mut out = String::new();
    for args in [
        vec!["construct", "--levels", "4", "--out", p4s],
        vec!["construct", "--kind", "ap", "--n", "16", "--out", aps],
        vec!["verify", p4s, "--all-k", "--format", "csv"],
        vec!["verify", aps, "--k", "4", "--format", "csv"],
        vec!["report", p4s, aps],
        vec!["prove", "domain-reduction"],
    ] {
        let (code, text) = call(&args);
        out.push_str(&format!("$ diffset {}\n{text}[exit {code}]\n\n", args.join(" ")));
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    print!("{}", run()?);
    Ok(())
}
