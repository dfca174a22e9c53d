use std::path::PathBuf;
use std::process::{Command, Output};

fn program(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/programs").join(name)
}

fn haskelite(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_haskelite")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_program(name: &str, src: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("haskelite-{}-{name}", std::process::id()));
    std::fs::write(&path, src).unwrap();
    path
}

#[test]
fn plain_insert_trace() {
    let o = haskelite(&["run", program("insert.hs").to_str().unwrap(), "-e", "insert 3 [1,2,4]"]);
    assert!(o.status.success());
    let want = "  insert 3 [1, 2, 4]
  { 3 <= 1 = False }
= .... False
  { insert x (y:ys) | otherwise = y:insert x ys }
= 1 : (insert 3 [2, 4])
  { 3 <= 2 = False }
= .... False
  { insert x (y:ys) | otherwise = y:insert x ys }
= 1 : (2 : (insert 3 [4]))
  { 3 <= 4 = True }
= .... True
  { insert x (y:ys) | x<=y = x:y:ys }
= 1 : (2 : (3 : (4 : [])))
  { final result }
= [1, 2, 3, 4]
";
    assert_eq!(stdout(&o), want);
}

#[test]
fn json_matches_plain() {
    let file = program("foldl.hs");
    let file = file.to_str().unwrap();
    let json = haskelite(&["run", file, "-e", "foldl (*) 1 [2,3,4]", "--json"]);
    let plain = haskelite(&["run", file, "-e", "foldl (*) 1 [2,3,4]"]);
    assert!(json.status.success() && plain.status.success());
    let entries: Vec<serde_json::Value> = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(entries.last().unwrap()["rendered"], "24");
    // The plain layout carries the same rendered/justification pairs.
    let mut lines = Vec::new();
    for (i, e) in entries.iter().enumerate() {
        let r = e["rendered"].as_str().unwrap();
        if i == 0 {
            lines.push(format!("  {r}"));
        } else {
            lines.push(format!("  {{ {} }}", e["justification"].as_str().unwrap()));
            lines.push(format!("= {r}"));
        }
    }
    assert_eq!(stdout(&plain), lines.join("\n") + "\n");
    for e in &entries {
        assert!(e["depth"].is_u64());
        assert_eq!(e["span"].as_array().unwrap().len(), 2);
    }
}

#[test]
fn prints_types() {
    let o = haskelite(&["type", "-e", "\\x -> x"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "a -> a");
    let o = haskelite(&["type", "-e", "foldr insert []", "--file", program("insert.hs").to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "[Int] -> [Int]");
}

#[test]
fn exit_codes() {
    let empty = temp_program("empty.hs", "");
    let empty = empty.to_str().unwrap();
    assert_eq!(haskelite(&["run", empty, "-e", "head []"]).status.code(), Some(2));
    assert_eq!(haskelite(&["run", empty, "-e", "1 + 'c'"]).status.code(), Some(3));
    assert_eq!(haskelite(&["run", empty, "-e", "(1 +"]).status.code(), Some(4));
    let looping = temp_program("loop.hs", "loop n = loop (n + 1)\n");
    let o = haskelite(&["run", looping.to_str().unwrap(), "-e", "loop 0", "--fuel", "100"]);
    assert_eq!(o.status.code(), Some(5));
    assert_eq!(haskelite(&["run", empty, "-e", "1 `div` 0"]).status.code(), Some(1));
    assert_eq!(haskelite(&["run", "/nonexistent/file.hs", "-e", "1"]).status.code(), Some(1));
}

#[test]
fn diagnostics_have_positions() {
    let bad = temp_program("bad.hs", "f x = x +\n");
    let o = haskelite(&["run", bad.to_str().unwrap(), "-e", "f 1"]);
    assert_eq!(o.status.code(), Some(4));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("error at 2:"), "{err}");
}

#[test]
fn stops_at_whnf_without_force() {
    let o = haskelite(&["run", program("insert.hs").to_str().unwrap(), "-e", "insert 3 [1,2,4]", "--no-force"]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("= 1 : (insert 3 [2, 4])\n"), "{}", stdout(&o));
}
