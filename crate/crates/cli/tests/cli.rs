use std::process::{Command, Output};

use tempfile::TempDir;

const D4_CONSTANT: &str = "n 2
facet 0 1 2 3
facet 0 1 2 4
facet 0 1 3 4
facet 0 2 3 4
facet 1 2 3 4
label 0 1
label 1 1
label 2 1
label 3 1
label 4 1
";

fn hopf(args: &[&str]) -> Output {
  Command::new(env!("CARGO_BIN_EXE_hopf"))
    .args(args)
    .output()
    .unwrap()
}

fn stdout(o: &Output) -> String {
  String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
  String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
  let p = dir.path().join(name);
  std::fs::write(&p, text).unwrap();
  p.to_str().unwrap().to_string()
}

fn generated(dir: &TempDir, name: &str, args: &[&str]) -> String {
  let mut full = vec!["generate"];
  full.extend_from_slice(args);
  let o = hopf(&full);
  assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
  write(dir, name, &stdout(&o))
}

#[test]
fn hopf_fixture_prints_single_unit_token() {
  let dir = TempDir::new().unwrap();
  let path = generated(&dir, "hopf.txt", &["hopf"]);
  let o = hopf(&["hopf", &path]);
  assert_eq!(o.status.code(), Some(0));
  let out = stdout(&o);
  assert!(out == "1\n" || out == "-1\n", "{out:?}");
  assert!(stderr(&o).is_empty());

  let rev = hopf(&["hopf", &path, "--reverse-orientation"]);
  let a: i64 = out.trim().parse().unwrap();
  let b: i64 = stdout(&rev).trim().parse().unwrap();
  assert_eq!(a, -b);
}

#[test]
fn stats_go_to_stderr_as_key_value_lines() {
  let dir = TempDir::new().unwrap();
  let path = generated(&dir, "hopf.txt", &["hopf"]);
  let o = hopf(&[
    "hopf",
    &path,
    "--stats",
    "--sigma-bar",
    "2,4,3",
    "--gauge-seed",
    "9",
  ]);
  assert_eq!(o.status.code(), Some(0));
  assert_eq!(stdout(&o).lines().count(), 1);
  let err = stderr(&o);
  for key in [
    "f_vector=12,60,96,48",
    "rank=",
    "nullity=11",
    "fill=",
    "wall_time_ms=",
    "solve_time_ms=",
  ] {
    assert!(err.lines().any(|l| l.starts_with(key)), "missing {key} in {err}");
  }
  assert!(err.lines().all(|l| l.contains('=')));
}

#[test]
fn constant_labeling_gives_zero() {
  let dir = TempDir::new().unwrap();
  let path = write(&dir, "d4.txt", D4_CONSTANT);
  let o = hopf(&["hopf", &path]);
  assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "0\n"));
}

#[test]
fn invalid_labeling_exits_one_and_names_facet() {
  let dir = TempDir::new().unwrap();
  let text = D4_CONSTANT
    .replace("label 1 1", "label 1 2")
    .replace("label 2 1", "label 2 3")
    .replace("label 3 1", "label 3 4");
  let path = write(&dir, "bad.txt", &text);
  let o = hopf(&["hopf", &path]);
  assert_eq!(o.status.code(), Some(1));
  assert!(stdout(&o).is_empty());
  assert!(stderr(&o).contains("offending facet: 0 1 2 3"), "{}", stderr(&o));

  let v = hopf(&["validate", &path]);
  assert_eq!(v.status.code(), Some(1));
  assert!(stdout(&v).contains("labeling: FAIL"));
}

#[test]
fn exit_codes_on_error_paths() {
  let dir = TempDir::new().unwrap();
  let missing = dir.path().join("nope.txt");
  assert_eq!(hopf(&["hopf", missing.to_str().unwrap()]).status.code(), Some(1));

  let syntax = write(
    &dir,
    "syntax.txt",
    &D4_CONSTANT.replace("facet 0 1 2 4", "facet 0 1 2"),
  );
  let o = hopf(&["hopf", &syntax]);
  assert_eq!(o.status.code(), Some(1));
  assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

  let fixture = generated(&dir, "hopf.txt", &["hopf"]);
  let o = hopf(&["hopf", &fixture, "--inject-omega-fault"]);
  assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
  assert!(stdout(&o).is_empty());

  let even = hopf(&["generate", "boundary-sphere", "2"]);
  assert_eq!(even.status.code(), Some(1));
  let bad_label = hopf(&["generate", "boundary-sphere", "3", "--constant-label", "9"]);
  assert_eq!(bad_label.status.code(), Some(1));
}

#[test]
fn validate_reports_each_check() {
  let dir = TempDir::new().unwrap();
  let good = write(&dir, "d4.txt", D4_CONSTANT);
  let o = hopf(&["validate", &good]);
  assert_eq!(o.status.code(), Some(0));
  for check in [
    "parse",
    "purity",
    "closedness",
    "connectivity",
    "orientability",
    "labeling",
  ] {
    assert!(stdout(&o).contains(&format!("{check}: PASS")), "{check}");
  }

  let open = D4_CONSTANT.replace("facet 1 2 3 4\n", "");
  let path = write(&dir, "open.txt", &open);
  let o = hopf(&["validate", &path]);
  assert_eq!(o.status.code(), Some(1));
  let out = stdout(&o);
  assert!(out.contains("closedness: FAIL"), "{out}");
  assert!(out.contains("labeling: SKIP"));
}

#[test]
fn rank_check_flags_printed_formula() {
  let dir = TempDir::new().unwrap();
  let path = write(&dir, "d4.txt", D4_CONSTANT);
  let o = hopf(&["rank-check", &path]);
  assert_eq!(o.status.code(), Some(0));
  let out = stdout(&o);
  assert!(out.contains("nullity=4\n"));
  assert!(out.contains("derived_formula=4 agree"));
  assert!(out.contains("printed_formula=6 MISMATCH"));
  assert!(out.contains("degree0_nullity=1"));

  let join = generated(&dir, "join.txt", &["join-polygons", "3", "3"]);
  let out = stdout(&hopf(&["rank-check", &join]));
  assert!(out.contains("f_vector=6,15,18,9"));
  assert!(out.contains("nullity=5\n"));
}

#[test]
fn consistency_passes_and_detects_faults() {
  let dir = TempDir::new().unwrap();
  let fixture = generated(&dir, "hopf.txt", &["hopf"]);
  let o = hopf(&["consistency", &fixture, "--trials", "10", "--seed", "3"]);
  assert_eq!(o.status.code(), Some(0));
  assert!(stdout(&o).lines().last().unwrap().starts_with("PASS"));

  let constant = write(&dir, "d4.txt", D4_CONSTANT);
  let o = hopf(&["consistency", &constant]);
  assert_eq!(o.status.code(), Some(0));
  assert!(stdout(&o).contains("PASS common=0"));

  let o = hopf(&["consistency", &fixture, "--inject-fault", "5"]);
  assert_eq!(o.status.code(), Some(1));
  assert!(stderr(&o).contains("divergent:"));
}

#[test]
fn generate_round_trips_and_subdivision_agrees() {
  let dir = TempDir::new().unwrap();
  let path = generated(&dir, "hopf.txt", &["hopf"]);
  let text = std::fs::read_to_string(&path).unwrap();
  let body: String = text
    .lines()
    .filter(|l| !l.starts_with('#'))
    .map(|l| format!("{l}\n"))
    .collect();
  let inst = hopf_cli::parse_instance(&text).unwrap();
  assert_eq!(inst.emit(), body);

  let d4 = generated(&dir, "d4.txt", &["boundary-sphere", "3", "--constant-label", "1"]);
  assert_eq!(
    hopf_cli::parse_instance(&std::fs::read_to_string(&d4).unwrap())
      .unwrap()
      .complex
      .f_vector(),
    vec![5, 10, 10, 5]
  );

  let sd = generated(&dir, "sd.txt", &["hopf", "--subdivide", "1"]);
  let a = stdout(&hopf(&["hopf", &path]));
  let b = stdout(&hopf(&["hopf", &sd]));
  assert_eq!(a, b);
}
