use serde_json::Value;
use std::io::Write;
use std::process::{Command, Output};

fn multisect(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multisect")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> Value {
    let o = multisect(args);
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn schema() -> Value {
    serde_json::from_str(include_str!("../../../docs/json-schema.json")).unwrap()
}

/// Keys of `value` match the `required` list of the named definition,
/// recursing into referenced object definitions.
fn conforms(schema: &Value, def: &str, value: &Value) -> Result<(), String> {
    let d = &schema["definitions"][def];
    let obj = value.as_object().ok_or(format!("{def}: not an object"))?;
    let required: Vec<&str> = d["required"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort_unstable();
    let mut want = required.clone();
    want.sort_unstable();
    if keys != want {
        return Err(format!("{def}: keys {keys:?}, schema {want:?}"));
    }
    for (key, prop) in d["properties"].as_object().unwrap() {
        let target = prop["items"]["$ref"].as_str().or(prop["$ref"].as_str());
        let Some(target) = target.and_then(|r| r.strip_prefix("#/definitions/")) else { continue };
        if schema["definitions"][target]["type"] != "object" {
            continue;
        }
        match &obj[key] {
            Value::Array(items) => items.iter().try_for_each(|v| conforms(schema, target, v))?,
            Value::Null => {}
            v => conforms(schema, target, v)?,
        }
    }
    Ok(())
}

#[test]
fn verify_cover_for_t5() {
    let o = multisect(&["verify", "--k", "3", "--suite", "cover"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS [cover] pieces partition the subcubes: 243 cubes partitioned 81/81/81"));
}

#[test]
fn verify_xi_for_t7_pair() {
    let o = multisect(&["verify", "--k", "4", "--suite", "xi", "--I", "0,2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("formula matches"));
}

#[test]
fn exhaustive_depth_is_gated() {
    assert_eq!(multisect(&["verify", "--k", "5", "--depth", "exhaustive"]).status.code(), Some(2));
    assert_eq!(multisect(&["verify", "--k", "3", "--suite", "attach"]).status.code(), Some(2));
    assert_eq!(multisect(&["verify", "--k", "1"]).status.code(), Some(2));
}

#[test]
fn failing_suite_exits_one() {
    let o = multisect(&["verify", "--k", "2", "--suite", "central", "--depth", "exhaustive"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL [central]"));
}

#[test]
fn seeded_sweeps_are_deterministic() {
    let a = multisect(&["verify", "--k", "4", "--suite", "membership", "--seed", "7", "--format", "json"]);
    let b = multisect(&["verify", "--k", "4", "--suite", "membership", "--seed", "7", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
}

#[test]
fn golden_t7_pair_matches() {
    let o = multisect(&["handles", "--n", "7", "--I", "0,2", "--golden", "T7X02"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("golden T7X02: match (12 rows)"));
}

#[test]
fn golden_diff_exits_one() {
    let o = multisect(&["handles", "--n", "9", "--I", "0,1,3", "--golden", "T91"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("golden T91: 1 differing rows"), "{out}");
    let v = json(&["handles", "--golden", "T91", "--format", "json"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 20);
    assert_eq!(v["golden"]["matched"], false);
}

#[test]
fn golden_output_is_byte_stable() {
    let a = multisect(&["handles", "--golden", "T92", "--format", "csv"]);
    let b = multisect(&["handles", "--golden", "T92", "--format", "csv"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn non_simple_sets_are_translated() {
    let o = multisect(&["handles", "--n", "5", "--I", "1,2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("I = {1,2} is the translate of {0,1} by 1"));
    let v = json(&["handles", "--n", "5", "--I", "1,2", "--format", "json"]);
    assert_eq!(v["index_set"], serde_json::json!([0, 1]));
    assert_eq!(v["shift"], 1);
}

#[test]
fn handles_csv_has_a_header_and_one_line_per_piece() {
    let o = multisect(&["handles", "--n", "7", "--I", "0,2", "--format", "csv"]);
    let text = stdout(&o);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap().iter().next(), Some("J"));
    let hs: Vec<String> = reader.records().map(|r| r.unwrap()[8].to_string()).collect();
    assert_eq!(hs, ["0", "0", "1", "0", "1", "0", "1", "1", "1", "2", "1", "2"]);
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(multisect(&["handles", "--n", "6", "--I", "0"]).status.code(), Some(2));
    assert_eq!(multisect(&["handles", "--n", "5", "--I", "0,1,2"]).status.code(), Some(2));
    assert_eq!(multisect(&["handles", "--golden", "T99"]).status.code(), Some(2));
    assert_eq!(multisect(&["handles", "--golden", "T91", "--n", "7"]).status.code(), Some(2));
    assert_eq!(multisect(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn cubulate_twist() {
    let o = multisect(&["cubulate", "--sigma", "2,3,1", "--n", "3", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("H_1 = Z + Z_3"));
    assert!(out.contains("central surface genus 3"));
    assert!(out.contains("sphere"));
}

#[test]
fn cubulate_identity() {
    let o = multisect(&["cubulate", "--sigma", "identity", "--n", "3", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("H_1 = Z^3"));
    let v = json(&["cubulate", "--sigma", "identity", "--n", "5", "--format", "json"]);
    assert_eq!(v["homology"][1]["rank"], 5);
}

#[test]
fn cubulate_rejects_invalid_files() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "n 3 cubes 1\n0 face+1 -> 0 face+2 perm 2,3,1").unwrap();
    let o = multisect(&["cubulate", "--file", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("does not send a face+ to a face-"));

    let mut g = tempfile::NamedTempFile::new().unwrap();
    writeln!(g, "n 3 cubes 1\n0 face+1 -> 0 face-2 perm 2,3").unwrap();
    let o = multisect(&["cubulate", "--file", g.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    assert_eq!(multisect(&["cubulate", "--file", "/nonexistent/x.cube"]).status.code(), Some(2));
    assert_eq!(multisect(&["cubulate", "--sigma", "2,3,1", "--k", "3"]).status.code(), Some(2));
}

#[test]
fn cubulate_reads_the_text_format() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        "# twisted cube\nn 3 cubes 1\n0 face+1 -> 0 face-2 perm 2,3,1\n0 face+2 -> 0 face-3 perm 2,3,1\n0 face+3 -> 0 face-1 perm 2,3,1\n"
    )
    .unwrap();
    let v = json(&["cubulate", "--file", f.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(v["homology"][1], serde_json::json!({"rank": 1, "torsion": [3]}));
    assert_eq!(v["lift"]["piece_genus"], serde_json::json!([3, 3]));
}

#[test]
fn json_outputs_follow_the_schema() {
    let s = schema();
    let cases: [(&str, Vec<&str>); 5] = [
        ("verify", vec!["verify", "--k", "2", "--format", "json"]),
        ("handles", vec!["handles", "--n", "7", "--I", "0,2", "--golden", "T7X02", "--format", "json"]),
        ("handles", vec!["handles", "--n", "4", "--I", "0,1", "--format", "json"]),
        ("cubulate", vec!["cubulate", "--sigma", "2,3,1", "--format", "json"]),
        ("cubulate", vec!["cubulate", "--sigma", "2,1,3,4,5", "--format", "json"]),
    ];
    for (def, args) in cases {
        let v = json(&args);
        assert_eq!(v["command"], def);
        conforms(&s, def, &v).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(again, v);
    }
}

#[test]
fn thread_count_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_multisect"))
        .args(["verify", "--k", "3", "--suite", "cover"])
        .env("MULTISECT_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let bad = Command::new(env!("CARGO_BIN_EXE_multisect"))
        .args(["verify", "--k", "3", "--suite", "cover"])
        .env("MULTISECT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
