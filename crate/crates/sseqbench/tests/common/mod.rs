#![allow(dead_code)]

use std::path::{Path, PathBuf};

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

/// Runs the CLI in process with `args` after the program name.
pub fn run(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("sseqbench").chain(args.iter().copied());
    let code = sseqbench::cli::main_with(argv, &mut out, &mut err);
    Output { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

pub fn run_on(config: &Path, args: &[&str]) -> Output {
    let path = config.to_str().unwrap();
    let mut full = vec!["--config", path];
    full.extend_from_slice(args);
    run(&full)
}

pub fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

/// The G2 fixture, with the `[homotopy]` section rebuilt from `pi`.
pub fn g2_with_homotopy(pi: &[(u32, &str, &str)]) -> String {
    let text = std::fs::read_to_string(fixture("g2.cfg")).unwrap();
    let mut out = String::new();
    let mut skipping = false;
    for line in text.lines() {
        if line.starts_with('[') {
            skipping = line == "[homotopy]";
            if skipping {
                out.push_str("[homotopy]\nloops = 3\nwindow = 5\n");
                for (d, g, k) in pi {
                    out.push_str(&format!("pi.{d} = {g} ; {k} ; test data\n"));
                }
                out.push('\n');
                continue;
            }
        }
        if !skipping {
            out.push_str(line);
            out.push('\n');
        }
    }
    out
}
