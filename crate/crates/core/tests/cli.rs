use orbivertex::cli::run;
use serde_json::Value;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("orbivertex").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json_result(args: &[&str]) -> Value {
    let (code, out, err) = invoke(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn char_csv_table() {
    let (code, out, _) = invoke(&["char", "--d", "3", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("# orbivertex 0.1.0 {"));
    assert_eq!(&lines[1..], ["nu\\mu,3,2+1,1+1+1", "3,1,1,1", "2+1,-1,0,2", "1+1+1,1,-1,1"]);
}

#[test]
fn json_envelope_embeds_config() {
    let v = json_result(&["char", "--d", "2"]);
    assert_eq!(v["artifact"], "orbivertex");
    assert_eq!(v["config"]["command"], "char");
    assert_eq!(v["config"]["d"], 2);
    assert_eq!(v["result"]["table"], serde_json::json!([[1, 1], [-1, 1]]));
}

#[test]
fn hurwitz_values_match_oracle() {
    let v = json_result(&["hurwitz", "--nu", "2", "--mu", "2", "--chi", "0,2", "--oracle"]);
    for row in v["result"]["rows"].as_array().unwrap() {
        assert_eq!(row["value_burnside"], "1/2");
        assert_eq!(row["value_burnside"], row["value_oracle"]);
    }
}

#[test]
fn gw_disk_leading_pole() {
    let v = json_result(&["gw", "--mu", "1", "--lambda-order", "2", "--x-order", "0"]);
    let terms = v["result"]["series"]["terms"].as_array().unwrap();
    let lead = terms.iter().find(|t| t["exponents"][0] == "-1/1").expect("lambda^-1 term");
    assert_eq!(lead["coeff"][0], "1/1");
}

#[test]
fn verify_passes_and_output_is_deterministic() {
    let args = ["verify", "--suite", "correspondence", "--a", "2", "--d", "1", "--lambda-order", "3", "--x-order", "2"];
    let (c1, o1, _) = invoke(&args);
    let (c2, o2, _) = invoke(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(o1, o2);
    let v: Value = serde_json::from_str(&o1).unwrap();
    assert_eq!(v["result"]["passed"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(invoke(&["verify", "--suite", "nonsense"]).0, 1);
    assert_eq!(invoke(&["gw"]).0, 1);
    assert_eq!(invoke(&["char", "--d", "9"]).0, 3);
    assert_eq!(invoke(&["verify", "--suite", "gluing", "--d", "9"]).0, 3);
    assert_eq!(invoke(&["hurwitz", "--nu", "3,2", "--mu", "5", "--oracle"]).0, 3);
    assert_eq!(invoke(&["verify", "--suite", "burnside", "--d", "2", "--r", "7"]).0, 3);
    assert_eq!(invoke(&["dt", "--nu", "1", "--enumerate", "11"]).0, 3);
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
}

#[test]
fn local_gw_csv_has_one_header() {
    let (code, out, _) = invoke(&["local-gw", "--d", "1", "--lambda-order", "2", "--x-order", "0", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(lines, ["d,boundary,b,gamma,value", "1,1,0/1,,1/1", "1,1,2/1,,1/24"]);
}

#[test]
fn glue_plan_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let plan = serde_json::json!({
        "blocks": [
            { "kind": "cap", "a": 1, "d": 2 },
            { "kind": "tube", "d": 2, "tau": 1 },
            { "kind": "cap", "a": 1, "d": 2 }
        ],
        "steps": [
            { "left": 0, "left_slot": 0, "right": 1, "right_slot": 0 },
            { "left": 3, "left_slot": 0, "right": 2, "right_slot": 0 }
        ]
    });
    let path = dir.path().join("plan.json");
    std::fs::write(&path, plan.to_string()).unwrap();
    let out_path = dir.path().join("closed.json");
    let (code, _, err) = invoke(&[
        "local-gw",
        "--glue",
        path.to_str().unwrap(),
        "--lambda-order",
        "2",
        "--x-order",
        "0",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let entries = v["result"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!(entries[0]["boundary"], serde_json::json!([]));
}

#[test]
fn written_block_feeds_a_glue_plan() {
    let dir = tempfile::tempdir().unwrap();
    let block = dir.path().join("cap.json");
    let (code, _, err) =
        invoke(&["local-gw", "--a", "2", "--d", "2", "--lambda-order", "2", "--out", block.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let plan = serde_json::json!({
        "blocks": [{ "kind": "file", "path": "cap.json" }, { "kind": "identity", "d": 2 }],
        "steps": [{ "left": 0, "left_slot": 0, "right": 1, "right_slot": 0 }]
    });
    let path = dir.path().join("plan.json");
    std::fs::write(&path, plan.to_string()).unwrap();
    let args = ["local-gw", "--glue", path.to_str().unwrap(), "--lambda-order", "2", "--format", "csv"];
    let (code, glued, err) = invoke(&args);
    assert_eq!(code, 0, "{err}");
    let (_, direct, _) = invoke(&["local-gw", "--a", "2", "--d", "2", "--lambda-order", "2", "--format", "csv"]);
    let body = |s: &str| s.lines().skip(1).map(str::to_string).collect::<Vec<_>>();
    assert_eq!(body(&glued), body(&direct));
}
