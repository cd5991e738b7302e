use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use graphcode::io::{parse_graphcode, parse_presentation};
use graphcode::Bar;

fn graphcode_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_graphcode"))
}

fn run(args: &[&str]) -> Output {
    graphcode_bin().args(args).output().expect("binary runs")
}

fn file(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

const ONE_RELATION: &str = "scc2020\n2\n1 1\n3 2 ; 0\n1 1 ;\n";
const PATH: &str = "graphcode\n3 2\n2\n1 3 1\n1 2 2\n1\n0 1\n";
const TWO_PATHS: &str = "graphcode\n4 2\n4\n1 3 1\n1 2 2\n2 4 1\n2 3 2\n2\n0 1\n2 3\n";
const THREE_LINES: &str = "scc2020\n2\n1 3\n3 3 ; 0 1 2\n1 3 ;\n2 2 ;\n3 1 ;\n";

#[test]
fn build_writes_the_graphcode_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let input = file(dir.path(), "p.scc", ONE_RELATION);
    let out = run(&["build", "--uncompressed", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let g = parse_graphcode(&stdout(&out)).unwrap();
    assert_eq!(g.vertices(), &[Bar::new(1, 4, 1), Bar::new(1, 3, 2)]);
    assert_eq!(g.edges(), &[(0, 1)]);
    assert!(stderr(&out).contains("vertices=2 edges=1 components=1"));

    let target = dir.path().join("g.gc");
    let out = run(&["build", input.to_str().unwrap(), "--fully-compress", "-o", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    assert!(parse_graphcode(&fs::read_to_string(target).unwrap()).is_ok());
}

#[test]
fn build_of_an_empty_presentation() {
    let dir = tempfile::tempdir().unwrap();
    let input = file(dir.path(), "p.scc", "scc2020\n2\n0 0\n");
    let out = run(&["build", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(parse_graphcode(&stdout(&out)).unwrap().num_vertices(), 0);
}

#[test]
fn parse_errors_exit_with_two_and_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = file(dir.path(), "bad.scc", "scc2021\n");
    let out = run(&["build", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("bad.scc:1:"));
    let out = run(&["build", dir.path().join("missing").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invariant_violations_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let input = file(dir.path(), "g.gc", "graphcode\n3 2\n1\n2 2 1\n0\n");
    let out = run(&["present", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let input = file(dir.path(), "h.gc", "graphcode\n4 2\n2\n1 2 1\n3 4 2\n1\n0 1\n");
    let out = run(&["present", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn components_are_written_one_per_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = file(dir.path(), "g.gc", TWO_PATHS);
    let parts = dir.path().join("parts");
    let out = run(&["components", input.to_str().unwrap(), "-o", parts.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("components=2"));
    let mut names: Vec<String> = fs::read_dir(&parts)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["component_0.gc", "component_1.gc"]);
    let first = parse_graphcode(&fs::read_to_string(parts.join("component_0.gc")).unwrap()).unwrap();
    let second = parse_graphcode(&fs::read_to_string(parts.join("component_1.gc")).unwrap()).unwrap();
    assert_eq!(first.vertices(), &[Bar::new(1, 3, 1), Bar::new(1, 2, 2)]);
    assert_eq!(second.vertices(), &[Bar::new(2, 4, 1), Bar::new(2, 3, 2)]);

    let single = file(dir.path(), "path.gc", PATH);
    let one = dir.path().join("one");
    let out = run(&["components", single.to_str().unwrap(), "-o", one.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read_dir(&one).unwrap().count(), 1);
}

#[test]
fn present_reads_off_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let input = file(dir.path(), "g.gc", PATH);
    let out = run(&["present", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let p = parse_presentation(&stdout(&out)).unwrap();
    assert_eq!((p.num_generators(), p.num_relations()), (2, 3));

    let out = run(&["present", "--minimize", input.to_str().unwrap()]);
    let q = parse_presentation(&stdout(&out)).unwrap();
    assert!(q.num_generators() <= 2 && q.num_relations() <= 3);

    let empty = file(dir.path(), "e.gc", "graphcode\n2 2\n0\n0\n");
    let out = run(&["present", empty.to_str().unwrap()]);
    assert_eq!(parse_presentation(&stdout(&out)).unwrap().num_generators(), 0);
}

#[test]
fn intervals_of_a_sum() {
    let dir = tempfile::tempdir().unwrap();
    let input = file(dir.path(), "g.gc", TWO_PATHS);
    let out = run(&["intervals", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "YES\ninterval\n1 1 3\n2 1 2\ninterval\n1 2 4\n2 2 3\n");

    let empty = file(dir.path(), "e.gc", "graphcode\n2 2\n0\n0\n");
    let out = run(&["intervals", empty.to_str().unwrap()]);
    assert_eq!((out.status.code(), stdout(&out).as_str()), (Some(0), "YES\n"));
}

#[test]
fn intervals_of_a_scrambled_sum_from_gen() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sum.gc");
    let out = run(&[
        "gen", "--seed", "5", "--kind", "interval-sum", "--m", "6", "--n", "5", "--size", "4", "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["intervals", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("YES\ninterval\n"));
}

#[test]
fn intervals_reject_three_lines_in_a_plane() {
    let dir = tempfile::tempdir().unwrap();
    let input = file(dir.path(), "p.scc", THREE_LINES);
    let out = run(&["intervals", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("NO"));
    let witness = lines.next().unwrap();
    assert!(witness.starts_with("height="));
    assert!(witness.ends_with("step=pivot_conflict") || witness.ends_with("step=row_elimination_failed"));
}

#[test]
fn intervals_need_distinct_bars() {
    let dir = tempfile::tempdir().unwrap();
    let input = file(dir.path(), "g.gc", "graphcode\n3 1\n2\n1 3 1\n1 3 1\n0\n");
    let out = run(&["intervals", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn oracle_compare_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let p = file(dir.path(), "p.scc", ONE_RELATION);
    let out = run(&["build", p.to_str().unwrap()]);
    let g = file(dir.path(), "g.gc", &stdout(&out));
    let out = run(&["oracle", "compare", p.to_str().unwrap(), g.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(
        stdout(&out),
        "grid: 3 2\ndimension_function: equal\nrank_invariant: equal\nisomorphic: yes\n"
    );

    let other = file(dir.path(), "q.scc", "scc2020\n2\n1 1\n2 2 ; 0\n1 1 ;\n");
    let out = run(&["oracle", "compare", p.to_str().unwrap(), other.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("dimension_function: different"));

    let huge = file(dir.path(), "h.scc", "scc2020\n2\n1 0\n1000 1000 ;\n");
    let out = run(&["oracle", "compare", huge.to_str().unwrap(), huge.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn gen_is_deterministic() {
    for kind in ["presentation", "graphcode", "interval-sum"] {
        let a = run(&["gen", "--seed", "9", "--kind", kind]);
        let b = run(&["gen", "--seed", "9", "--kind", kind]);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
    let p = run(&["gen", "--seed", "9"]);
    assert!(parse_presentation(&stdout(&p)).is_ok());
}

#[test]
fn stats_report_both_modes() {
    let dir = tempfile::tempdir().unwrap();
    let p = file(dir.path(), "p.scc", ONE_RELATION);
    let out = run(&["stats", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("generators 1\n"));
    assert!(text.contains("uncompressed_vertices 2\n"));
    let g = file(dir.path(), "g.gc", TWO_PATHS);
    let out = run(&["stats", g.to_str().unwrap()]);
    assert!(stdout(&out).contains("components 2\n"));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let p = file(dir.path(), "p.scc", THREE_LINES);
    for args in [["build", "--uncompressed"], ["intervals", "--"], ["stats", "--"]] {
        let mut full: Vec<&str> = args.iter().copied().filter(|a| *a != "--").collect();
        full.push(p.to_str().unwrap());
        assert_eq!(run(&full).stdout, run(&full).stdout);
    }
}
