//! Replaying golden transcripts: one command line followed by its exact
//! output.
#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

pub fn render(cmd: &str, o: &pft_cli::Outcome) -> String {
    let mut s = format!("$ pft {cmd}\n{}", o.stdout);
    for line in o.stderr.lines() {
        s.push_str(&format!("! {line}\n"));
    }
    s.push_str(&format!("? {}\n", o.code));
    s
}

pub fn transcripts() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "txt"))
        .collect();
    files.sort();
    files
}

pub fn replay(path: &Path) -> (String, String) {
    let expected = fs::read_to_string(path).unwrap();
    let cmd = expected
        .lines()
        .next()
        .and_then(|l| l.strip_prefix("$ pft "))
        .unwrap_or_else(|| panic!("{}: first line must be `$ pft ...`", path.display()))
        .to_string();
    let args = shlex::split(&cmd).expect("balanced quotes");
    let outcome = pft_cli::run(std::iter::once("pft".to_string()).chain(args));
    (expected, render(&cmd, &outcome))
}

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}
