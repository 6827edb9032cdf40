use std::io::Write;
use std::process::{Command, Output, Stdio};

use tempfile::NamedTempFile;

const FIXTURE: &str = "((1,(2,3)),(4,5)) | (1,(2,((3,4),5))) | id";

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tanglegram"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn file(contents: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn fixture_multideck_has_three_cards() {
    let o = run(&["multideck"], FIXTURE);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n=5"));
    let mults: Vec<&str> = lines
        .map(|l| l.split_whitespace().next().unwrap())
        .collect();
    assert_eq!(mults, ["2", "1", "2"]);
}

#[test]
fn fixture_reconstructs_from_a_file() {
    let deck = stdout(&run(&["multideck"], FIXTURE));
    let f = file(&deck);
    let o = run(&["reconstruct", f.path().to_str().unwrap()], "");
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let canon = stdout(&run(&["canon"], FIXTURE));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, [canon.trim(), "method=cat-type2"]);
}

#[test]
fn enumerate_size_four() {
    let o = run(&["enumerate", "--size", "4"], "");
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 14);
    assert_eq!(lines[13], "13");
}

#[test]
fn enumerate_trees_size_five() {
    let text = stdout(&run(&["enumerate", "--size", "5", "--trees"], ""));
    assert_eq!(text.lines().last(), Some("3"));
}

#[test]
fn output_is_deterministic() {
    let a = run(&["enumerate", "--size", "5", "--format", "labels"], "");
    let b = run(&["enumerate", "--size", "5", "--format", "labels"], "");
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn serialization_round_trips_up_to_six() {
    for n in 2..=6 {
        for format in ["perm", "labels"] {
            let listed = stdout(&run(
                &["enumerate", "--size", &n.to_string(), "--format", format],
                "",
            ));
            let lines: Vec<&str> = listed.lines().collect();
            let (count, listed) = lines.split_last().unwrap();
            assert_eq!(count.parse::<usize>().unwrap(), listed.len());
            let body: String = listed.iter().map(|l| format!("{l}\n")).collect();
            let again = run(&["canon", "--format", format], &body);
            assert!(again.status.success());
            assert_eq!(stdout(&again), body, "n={n} format={format}");
        }
    }
}

#[test]
fn tree_multideck_reconstructs_the_tree() {
    let deck = stdout(&run(&["multideck"], "((a,b),(c,(d,e)))"));
    let o = run(&["reconstruct"], &deck);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o).trim(),
        stdout(&run(&["canon"], "((a,b),(c,(d,e)))")).trim()
    );
}

#[test]
fn parse_errors_exit_with_three() {
    assert_eq!(run(&["canon"], "(a,").status.code(), Some(3));
    assert_eq!(run(&["reconstruct"], "no header\n").status.code(), Some(3));
}

#[test]
fn inconsistent_multideck_exits_with_four() {
    let o = run(&["reconstruct"], "n=6\n1 (*,*) | (*,*) | p=[0,1]\n");
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn ambiguous_multideck_exits_with_six() {
    let t = "(*,(*,(*,(*,*)))) | (*,(*,(*,(*,*)))) | p=[3,2,4,0,1]";
    let deck = stdout(&run(&["multideck"], t));
    assert_eq!(run(&["reconstruct"], &deck).status.code(), Some(6));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["bogus"], "").status.code(), Some(2));
    assert_eq!(run(&["enumerate"], "").status.code(), Some(2));
}

#[test]
fn roundtrip_succeeds_at_size_six() {
    let o = run(&["roundtrip", "--size", "6"], "");
    assert!(o.status.success());
    assert!(stdout(&o)
        .starts_with("size=6 examined=858 recovered=858 oracle_recovered=858 agree=858 failed=0"));
}

#[test]
fn verify_reports_size_five_collisions() {
    let o = run(&["verify", "--size", "5", "--caterpillar-only"], "");
    assert_eq!(o.status.code(), Some(5));
    assert!(stdout(&o).contains("collisions=3"));
    let o = run(&["verify", "--size", "6", "--caterpillar-only"], "");
    assert!(o.status.success());
    assert!(stdout(&o).contains("collisions=0"));
}
