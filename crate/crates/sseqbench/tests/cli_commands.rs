mod common;

use std::fs;

use common::{fixture, g2_with_homotopy, run, run_on, write_config};

fn g2() -> std::path::PathBuf {
    fixture("g2.cfg")
}

fn section<'a>(stdout: &'a str, name: &str) -> &'a str {
    let header = format!("==> {name} <==\n");
    let start = stdout.find(&header).unwrap_or_else(|| panic!("no {name} in output")) + header.len();
    let rest = &stdout[start..];
    // Artifacts after the first are preceded by one blank line.
    rest.find("\n\n==> ").map_or(rest, |end| &rest[..end + 1])
}

#[test]
fn exit_codes() {
    assert_eq!(run_on(&g2(), &["constraints"]).code, 0);
    assert_eq!(run(&["constraints"]).code, 1, "missing --config");
    assert_eq!(run(&["--config", "/nonexistent/x.cfg", "e2"]).code, 1);
    assert_eq!(run_on(&g2(), &["no-such-command"]).code, 1);
    assert_eq!(run_on(&g2(), &["einfty"]).code, 1, "unknown left unset");
    assert_eq!(run_on(&g2(), &["einfty", "--set", "epsilon=2"]).code, 1);
    assert_eq!(run_on(&g2(), &["gauge", "--k", "1", "--epsilon", "0=1"]).code, 1);
    assert_eq!(run_on(&g2(), &["chart", "--page", "1", "--set", "epsilon=1"]).code, 1);
    assert_eq!(run(&["--help"]).code, 0);

    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), "bad.cfg", "[workbench]\ndegree_bound = 4\n[base]\nx = -1\n");
    let out = run_on(&bad, &["e2"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("line 4"), "{}", out.stderr);
}

#[test]
fn constraints_on_g2() {
    let out = run_on(&g2(), &["constraints"]);
    let csv = section(&out.stdout, "constraints_admissible.csv");
    assert_eq!(csv, "r,source_s,source_t,target_s,target_t,target_in_window\n6,0,5,6,0,true\n6,4,5,10,0,true\n");
    let log = section(&out.stdout, "constraints_log.csv");
    assert!(log.contains("0,5,2,2,4,base-zero"));
    assert!(log.contains("0,5,4,4,2,fibre-zero"));
    assert!(log.contains("0,5,>=7,,,negative-fibre-degree"));
    let text = section(&out.stdout, "constraints.txt");
    assert!(text.contains("d6: (0,5) -> (6,0)"));
    assert!(text.contains("r>=7: target has negative fibre degree"));
}

#[test]
fn constraints_on_a_point_fibre_are_empty() {
    let out = run_on(&fixture("zero_fibre.cfg"), &["constraints"]);
    assert_eq!(out.code, 0);
    assert_eq!(
        section(&out.stdout, "constraints_admissible.csv"),
        "r,source_s,source_t,target_s,target_t,target_in_window\n"
    );
    assert_eq!(section(&out.stdout, "constraints_log.csv"), "source_s,source_t,r,target_s,target_t,reason,detail\n");
}

#[test]
fn constraints_with_a_wider_window() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(g2()).unwrap().replace("degree_bound = 10", "degree_bound = 11");
    let cfg = write_config(dir.path(), "w11.cfg", &text);
    let out = run_on(&cfg, &["constraints"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let csv = section(&out.stdout, "constraints_admissible.csv");
    assert!(csv.contains("6,0,5,6,0,true"));
    assert!(csv.contains("6,4,5,10,0,true"));
    assert!(csv.contains("6,6,5,12,0,false"), "{csv}");
}

#[test]
fn gauge_branches() {
    let four = run_on(&g2(), &["gauge", "--k", "-8"]);
    assert_eq!(four.code, 0);
    let csv = section(&four.stdout, "gauge_k-8.csv");
    assert!(csv.lines().skip(1).all(|l| l.split(',').nth(2) == Some("0")), "one branch only");
    assert!(csv.lines().skip(1).all(|l| l.split(',').nth(3) == Some("0")));

    let odd = run_on(&g2(), &["gauge", "--k", "3"]);
    let csv = section(&odd.stdout, "gauge_k3.csv");
    assert!(csv.contains("3,odd,1,1,6,0"));
    assert!(csv.contains("3,odd,0,0,6,1"));

    let set = run_on(&g2(), &["gauge", "--k", "3", "--epsilon", "odd=1"]);
    assert_eq!(set.code, 0);
    assert!(!section(&set.stdout, "gauge_k3.csv").contains(",0,0,"), "override leaves one branch");
}

#[test]
fn einfty_survivors() {
    let out = run_on(&g2(), &["einfty", "--set", "epsilon=1"]);
    assert_eq!(out.code, 0);
    let totals = section(&out.stdout, "einfty_totals.csv");
    let dims: Vec<&str> = totals.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(dims, ["1", "0", "0", "0", "1", "0", "0", "1", "1", "0", "0"]);
}

#[test]
fn sweep_lists_both_branches() {
    let out = run_on(&g2(), &["sweep"]);
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "branch,epsilon,degree,dim");
    assert_eq!(lines.len(), 1 + 2 * 11);
    assert!(lines.contains(&"0,0,6,1"));
    assert!(lines.contains(&"1,1,6,0"));
}

#[test]
fn chart_has_two_d6_arrows() {
    let out = run_on(&g2(), &["chart", "--page", "6", "--format", "svg", "--set", "epsilon=1"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.matches("class=\"d6\"").count(), 2);
    assert_eq!(out.stdout.matches("<circle").count(), 8);

    let seven = run_on(&g2(), &["chart", "--page", "7", "--format", "svg", "--set", "epsilon=1"]);
    assert_eq!(seven.stdout.matches("<line class=").count(), 0);
    assert_eq!(seven.stdout.matches("<circle").count(), 4);

    let flat = run_on(&g2(), &["chart", "--page", "6", "--format", "tikz", "--set", "epsilon=0"]);
    assert!(!flat.stdout.contains("\\draw[->"));
}

#[test]
fn chart_of_a_point_fibre_is_the_base_row() {
    let out = run_on(&fixture("zero_fibre.cfg"), &["chart", "--page", "2", "--format", "tikz"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let dots: Vec<&str> = out.stdout.lines().filter(|l| l.contains("\\fill")).collect();
    assert_eq!(dots.len(), 6);
    assert!(dots.iter().all(|l| l.contains(",0) circle")), "{dots:?}");
}

#[test]
fn uct_default_table() {
    let out = run_on(&g2(), &["uct"]);
    assert_eq!(out.code, 0);
    let summary = section(&out.stdout, "uct_summary.txt");
    assert_eq!(summary, "M^0 = 1, M^1 = 0, M^2 = 0, M^3 = 0, M^4 = 0, M^5 >=1\n");
    assert!(section(&out.stdout, "uct.csv").contains("Mimura-Toda"));
}

#[test]
fn uct_on_a_vanishing_table() {
    let dir = tempfile::tempdir().unwrap();
    let pi: Vec<(u32, &str, &str)> = (1..=8).map(|d| (d, "0", "exact")).collect();
    let text = g2_with_homotopy(&pi).replace("u5 = 5\n", "");
    let cfg = write_config(dir.path(), "zero.cfg", &text.replace("d6(u5) = epsilon*x6", ""));
    let out = run_on(&cfg, &["uct"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(section(&out.stdout, "uct_summary.txt"), "M^0 = 1, M^1 = 0, M^2 = 0, M^3 = 0, M^4 = 0, M^5 = 0\n");
}

#[test]
fn uct_with_exact_pi8() {
    let dir = tempfile::tempdir().unwrap();
    let pi = [
        (1, "0", "exact"),
        (2, "0", "exact"),
        (3, "Z", "exact"),
        (4, "0", "exact"),
        (5, "0", "exact"),
        (6, "Z/3", "exact"),
        (7, "0", "exact"),
        (8, "Z/2", "exact"),
    ];
    let cfg = write_config(dir.path(), "exact.cfg", &g2_with_homotopy(&pi));
    let out = run_on(&cfg, &["uct"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(section(&out.stdout, "uct_summary.txt").ends_with("M^5 = 1\n"));
}

#[test]
fn hit_on_one_variable() {
    let out = run_on(&fixture("one_variable.cfg"), &["hit", "--bound", "31"]);
    assert_eq!(out.code, 0);
    let non_hit: Vec<&str> = out
        .stdout
        .lines()
        .skip(1)
        .filter(|l| l.split(',').nth(3) != Some("0"))
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(non_hit, ["0", "1", "3", "7", "15", "31"]);
}

#[test]
fn hit_on_trivial_action() {
    let out = run_on(&fixture("trivial_action.cfg"), &["hit", "--bound", "16"]);
    let non_hit: Vec<&str> = out
        .stdout
        .lines()
        .skip(1)
        .filter(|l| l.split(',').nth(3) != Some("0"))
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(non_hit, ["0", "4", "12"]);
}

#[test]
fn hit_reports_missing_entries() {
    let out = run_on(&g2(), &["hit", "--bound", "10"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("Sq2(x4) is not specified"), "{}", out.stderr);
}

#[test]
fn scaffold_marks_user_entries() {
    let out = run_on(&g2(), &["sq-scaffold"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("sq.4(x4) = x4^2  # forced"));
    assert!(out.stdout.contains("# sq.2(x4) = ?  # user-supplied"));
}

#[test]
fn out_dir_receives_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = run(&["--config", g2().to_str().unwrap(), "--out", d, "constraints"]);
    assert_eq!(out.code, 0);
    for name in ["constraints_admissible.csv", "constraints_log.csv", "constraints.txt"] {
        assert!(dir.path().join(name).is_file(), "{name}");
        assert!(out.stdout.contains(name));
    }
    let inline = run_on(&g2(), &["constraints"]);
    let written = fs::read_to_string(dir.path().join("constraints_log.csv")).unwrap();
    assert_eq!(section(&inline.stdout, "constraints_log.csv"), written);
}

#[test]
fn normalize_output_reloads() {
    let dir = tempfile::tempdir().unwrap();
    let text = run_on(&g2(), &["normalize"]).stdout;
    let json = run_on(&g2(), &["normalize", "--json"]).stdout;
    let a = write_config(dir.path(), "a.cfg", &text);
    let b = write_config(dir.path(), "b.json", &json);
    assert_eq!(run_on(&a, &["normalize"]).stdout, text);
    assert_eq!(run_on(&b, &["normalize"]).stdout, text);
    assert_eq!(run_on(&a, &["sweep"]).stdout, run_on(&g2(), &["sweep"]).stdout);
}
