use std::collections::BTreeMap;
use std::process::{Command, Output};

fn stfix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stfix")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Splits `kind k=v k="v w"` into the kind and its fields.
fn parse_line(line: &str) -> (String, Vec<(String, String)>) {
    let (kind, rest) = line.split_once(' ').unwrap_or((line, ""));
    let mut fields = Vec::new();
    let mut chars = rest.chars().peekable();
    while chars.peek().is_some() {
        let key: String = chars.by_ref().take_while(|&c| c != '=').collect();
        let mut value = String::new();
        if chars.peek() == Some(&'"') {
            chars.next();
            while let Some(c) = chars.next() {
                match c {
                    '\\' => value.push(chars.next().unwrap()),
                    '"' => break,
                    c => value.push(c),
                }
            }
            chars.next();
        } else {
            value = chars.by_ref().take_while(|&c| c != ' ').collect();
        }
        fields.push((key, value));
    }
    (kind.to_string(), fields)
}

fn records(text: &str) -> Vec<(String, BTreeMap<String, String>)> {
    text.lines()
        .map(|l| {
            let (kind, fields) = parse_line(l);
            let keys: Vec<&String> = fields.iter().map(|(k, _)| k).collect();
            assert!(keys.windows(2).all(|w| w[0] < w[1]), "unsorted keys in {l}");
            (kind, fields.into_iter().collect())
        })
        .collect()
}

fn check_result(text: &str, exit: i32, status: &str) {
    let recs = records(text);
    let (kind, last) = recs.last().unwrap();
    assert_eq!(kind, "RESULT");
    assert_eq!(last["exit"], exit.to_string());
    assert_eq!(last["status"], status);
    assert_eq!(recs.iter().filter(|(k, _)| k == "RESULT").count(), 1);
}

#[test]
fn angle_at_five_is_positive() {
    let o = stfix(&["angle", "--p", "5", "--n", "3", "--k", "1", "--pair", "1,2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    check_result(&text, 0, "ok");
    let recs = records(&text);
    let angle = &recs.iter().find(|(k, _)| k == "angle").unwrap().1;
    let cos: f64 = angle["cosine"].parse().unwrap();
    assert!((cos - 5f64.powf(-0.5)).abs() < 1e-11);
    assert_eq!(angle["order"], "125");
    assert!(angle["margin"].parse::<f64>().unwrap() > 0.0);
}

#[test]
fn bad_input_is_a_config_error() {
    for args in [
        vec!["angle", "--p", "4", "--n", "3", "--k", "1"],
        vec!["angle", "--n", "3", "--k", "1"],
        vec!["solve", "--scenario", "nonsense"],
        vec!["heisenberg", "--p", "3", "--bogus", "1"],
        vec!["flatness", "--curvature", "-1"],
    ] {
        let o = stfix(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        check_result(&stdout(&o), 2, "config-error");
    }
}

#[test]
fn runtime_failures_exit_one() {
    let o = stfix(&["enumerate", "--p", "3", "--n", "3", "--k", "1", "--cap", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    check_result(&text, 1, "error");
    assert!(records(&text).iter().any(|(k, f)| k == "error" && f["message"].contains("cap")));
}

#[test]
fn flags_override_the_config_file() {
    let dir = std::env::temp_dir().join(format!("stfix-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "# heisenberg run\np = 3\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_file = records(&stdout(&stfix(&["heisenberg", "--config", cfg])));
    let summary = &from_file.iter().find(|(k, _)| k == "heisenberg").unwrap().1;
    assert_eq!(summary["p"], "3");
    assert_eq!(summary["irreps"], "11");

    let overridden = records(&stdout(&stfix(&["heisenberg", "--config", cfg, "--p", "5"])));
    let summary = &overridden.iter().find(|(k, _)| k == "heisenberg").unwrap().1;
    assert_eq!(summary["p"], "5");
    assert_eq!(summary["irreps"], "29");

    let bad = dir.join("bad.cfg");
    std::fs::write(&bad, "p = 3\nwidth = 2\n").unwrap();
    let o = stfix(&["heisenberg", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("line 2"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reports_are_reproducible() {
    let dir = std::env::temp_dir().join(format!("stfix-det-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let run = |name: &str| {
        let path = dir.join(name);
        let o = stfix(&["solve", "--scenario", "mirrors", "--model", "hyperboloid", "--seed", "4", "--out", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        let written = std::fs::read(&path).unwrap();
        assert_eq!(written, o.stdout);
        written
    };
    assert_eq!(run("a.txt"), run("b.txt"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn solve_reaches_a_fixed_point() {
    let text = stdout(&stfix(&["solve", "--scenario", "mirrors", "--dim", "2"]));
    check_result(&text, 0, "ok");
    let recs = records(&text);
    let solve = &recs.iter().find(|(k, _)| k == "solve").unwrap().1;
    assert_eq!(solve["status"], "fixed-point");
    assert!(solve["fixed_displacement"].parse::<f64>().unwrap() <= 1e-8);
}
