//! Drive the command-line front end in process: write a survival table and
//! its manifest to a temporary directory, then replay the manifest.

use std::process::ExitCode;

fn main() -> ExitCode {
    let dir = std::env::temp_dir().join("deltaquench-example");
    let out = dir.to_str().expect("utf-8 temp path");
    let code = deltaquench::cli::run([
        "deltaquench", "survival", "--mu", "3", "--tmax", "5", "--nt", "11", "--out", out,
    ]);
    if code != ExitCode::SUCCESS {
        return code;
    }
    let csv = std::fs::read_to_string(dir.join("survival.csv")).expect("table written");
    print!("{csv}");
    let manifest = dir.join("survival.manifest.json");
    println!("{}", std::fs::read_to_string(&manifest).expect("manifest written"));
    deltaquench::cli::run(["deltaquench", "survival", "--config", manifest.to_str().unwrap(), "--out", out])
}
