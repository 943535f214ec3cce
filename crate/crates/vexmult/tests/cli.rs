use std::process::{Command, Output};

use serde_json::Value;

fn vexmult(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vexmult")).args(args).env_remove("VEXMULT_STATE_CAP").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).unwrap()
}

const INTRO: [&str; 4] = ["--w", "1 2 5 4 3 6 7", "--v", "5 2 6 4 1 7 3"];

#[test]
fn ascii_multiplicity_report() {
    let o = vexmult(&[&["mult", "--type", "A"][..], &INTRO].concat());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "type A\nw 1 2 5 4 3 6 7\nv 5 2 6 4 1 7 3\ntriple k=1,2;p=3,4;q=4,3;type=A\nkprime 2,3\nlambda (2,1)\nmu (3,3,2)\nmultiplicity 5\n"
    );
    assert!(o.stderr.is_empty());
    let again = vexmult(&[&["mult", "--type", "A"][..], &INTRO].concat());
    assert_eq!(again.stdout, o.stdout);
}

#[test]
fn json_multiplicity_report() {
    let o = vexmult(&[&["--format", "json", "mult", "--type", "A", "--list"][..], &INTRO].concat());
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["multiplicity"], 5);
    assert_eq!(v["lambda"], serde_json::json!([2, 1]));
    assert_eq!(v["mu"], serde_json::json!([3, 3, 2]));
    assert_eq!(v["states"].as_array().unwrap().len(), 5);
}

#[test]
fn failed_preconditions_exit_2() {
    let o = vexmult(&["mult", "--type", "A", "--w", "2 1 4 3", "--v", "4 3 2 1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert_eq!(stderr_json(&o)["error"], "not-vexillary");

    let o = vexmult(&["mult", "--type", "A", "--w", "1 3 2", "--v", "2 1 3"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "not-below");

    let o = vexmult(&["rothe", "--type", "D", "--w", "-1 2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "domain");
}

#[test]
fn usage_errors_exit_64() {
    for args in [&["frobnicate"][..], &["mult", "--type", "A"], &["mult", "--type", "E", "--w", "1", "--v", "1"]] {
        let o = vexmult(args);
        assert_eq!(o.status.code(), Some(64), "{args:?}");
        assert!(o.stdout.is_empty());
    }
    assert_eq!(vexmult(&["--help"]).status.code(), Some(0));
}

#[test]
fn state_cap_exits_3() {
    let args = ["excite", "--type", "A", "--lambda", "3,2,1", "--mu", "6,6,5,4,3,2"];
    let o = vexmult(&[&args[..], &["--state-cap", "10"]].concat());
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["error"], "state-cap");

    let o = Command::new(env!("CARGO_BIN_EXE_vexmult")).args(args).env("VEXMULT_STATE_CAP", "10").output().unwrap();
    assert_eq!(o.status.code(), Some(3));

    let o = vexmult(&args);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn bar_notation() {
    let o = vexmult(&["--bar-notation", "triple", "--from", "k=1,2;p=3,1;q=3,2;type=C", "--n", "5"]);
    assert_eq!(stdout(&o), "2b 1 3b 4 5\n");
    let o = vexmult(&["triple", "--from", "k=1,2;p=3,1;q=3,2;type=C", "--n", "5"]);
    assert_eq!(stdout(&o), "-2 1 -3 4 5\n");
    let o = vexmult(&["triple", "--type", "D", "--w", "3 1b 2b 4 5"]);
    assert_eq!(stdout(&o), "k=1,2;p=2,1;q=1,0;type=D\n");
}

#[test]
fn rothe_picture() {
    let o = vexmult(&["rothe", "--type", "C", "--w", "-1 2"]);
    assert_eq!(stdout(&o), "   -2 -1  1  2\n-2  *  .  .  .\n-1  .  #  *  .\n 1  .  *  .  .\n 2  .  .  .  *\n");
}

#[test]
fn kl_verify_running_example() {
    let o = vexmult(&["kl-verify", "--type", "C", "--w", "-2 1 -3 4 5", "--v", "1 3 -5 -4 -2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "labelled entries 13 of 13 expected: ok\ntype (b) survivors 13 of 13 expected: ok\n\
         rank claim over F_101 with 100 trials, seed 0: ok\nlabel accounting: ok\n"
    );
}

#[test]
fn corpus_lines() {
    let o = vexmult(&["corpus", "--type", "A", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let summary = &lines.last().unwrap()["summary"];
    assert_eq!(summary["pairs"].as_u64().unwrap() as usize, lines.len() - 1);
    assert_eq!(summary["max_multiplicity"], 1);
}
