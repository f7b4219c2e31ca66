use std::collections::BTreeMap;
use std::process::{Command, Output};

use serde_json::Value;

fn sfc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sfc"))
        .args(args)
        .arg("--quiet")
        .env_remove("SFC_CACHE_DIR")
        .output()
        .expect("run sfc")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn verify_thm5_1_example() {
    let out = sfc(&["verify", "--theorem", "thm5_1", "--p", "3", "--m", "2"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["computed"]["n"], 10);
    assert_eq!(v["computed"]["k"], 3);
    assert_eq!(v["computed"]["d"], 6);
    assert_eq!(v["pass"], true);
}

#[test]
fn code_x3_m5_distribution() {
    let out = sfc(&["code", "--f", "mono:3", "--p", "2", "--m", "5", "--weights", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let w = &json_of(&out)["weights"];
    assert_eq!((w["n"].as_u64(), w["k"].as_u64(), w["d"].as_u64()), (Some(33), Some(10), Some(12)));
    let total: u64 = w["weights"].as_object().unwrap().values().map(|c| c.as_u64().unwrap()).sum();
    assert_eq!(total, 1 << 10);
}

#[test]
fn segre_even_m_is_not_applicable() {
    let out = sfc(&["oval-check", "--family", "segre", "--m", "4"]);
    assert_eq!(code(&out), 3);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("not applicable"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&sfc(&["code", "--f", "nonsense", "--m", "3"])), 2);
    assert_eq!(code(&sfc(&["verify", "--theorem", "thm0_0", "--m", "3"])), 2);
    assert_eq!(code(&sfc(&["code", "--m", "3"])), 2);
    assert_eq!(code(&sfc(&["mds-check", "--f", "mono:2", "--p", "4", "--m", "2"])), 2);
}

#[test]
fn budget_exceeded_exits_3() {
    let out = sfc(&["code", "--f", "mono:3", "--m", "9", "--weights", "--budget", "100"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn failed_checks_exit_1() {
    let out = sfc(&["oval-check", "--f", "mono:3", "--m", "5"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json_of(&out)["is_oval"], false);
    let out = sfc(&["mds-check", "--f", "mono:3", "--p", "3", "--m", "2"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json_of(&out)["passed"], false);
}

#[test]
fn json_output_is_deterministic_across_jobs() {
    let a = sfc(&["verify", "--theorem", "thm6_9", "--m", "5", "--jobs", "1"]);
    let b = sfc(&["verify", "--theorem", "thm6_9", "--m", "5", "--jobs", "4"]);
    let c = sfc(&["verify", "--theorem", "thm6_9", "--m", "5", "--jobs", "4"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(b.stdout, c.stdout);
}

/// Numeric leaves of a JSON value keyed by dotted path.
fn json_leaves(v: &Value, path: String, out: &mut BTreeMap<String, String>) {
    let key = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| json_leaves(x, key(k), out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| json_leaves(x, key(&i.to_string()), out)),
        Value::Number(n) => {
            out.insert(path, n.to_string());
        }
        _ => {}
    }
}

#[test]
fn csv_carries_json_numbers() {
    let args = ["verify", "--theorem", "thm5_1", "--p", "3", "--m", "2"];
    let json = json_of(&sfc(&args));
    let csv_out = sfc(&[&args[..], &["--format", "csv"]].concat());
    assert_eq!(code(&csv_out), 0);
    let text = String::from_utf8(csv_out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("key,value"));
    let csv: BTreeMap<String, String> = lines
        .map(|l| {
            let (k, v) = l.split_once(',').unwrap();
            (k.to_string(), v.to_string())
        })
        .collect();
    let mut nums = BTreeMap::new();
    json_leaves(&json, String::new(), &mut nums);
    assert!(!nums.is_empty());
    for (k, v) in nums {
        assert_eq!(csv.get(&k), Some(&v), "{k}");
    }
}

#[test]
fn text_format_has_headline() {
    let out = sfc(&["code", "--f", "const1", "--p", "3", "--m", "2", "--weights", "--format", "text"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("[10,3,6] code over GF(3)"), "{text}");
}

#[test]
fn field_cache_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let first = sfc(&["field", "cache", "--p", "3", "--m", "4", "--cache-dir", d]);
    assert_eq!(code(&first), 0);
    let v = json_of(&first);
    assert_eq!(v["created"], true);
    assert_eq!(v["roundtrip"], true);
    let second = sfc(&["field", "cache", "--p", "3", "--m", "4", "--cache-dir", d]);
    assert_eq!(json_of(&second)["created"], false);

    let info = Command::new(env!("CARGO_BIN_EXE_sfc"))
        .args(["field", "info", "--p", "3", "--m", "4", "--quiet"])
        .env("SFC_CACHE_DIR", d)
        .output()
        .unwrap();
    assert_eq!(code(&info), 0);
    assert_eq!(json_of(&info)["alpha_order"], 80);
}

#[test]
fn corrupt_cache_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(code(&sfc(&["field", "cache", "--p", "2", "--m", "6", "--cache-dir", d])), 0);
    let path = dir.path().join("gf_2_6.sfcf");
    let mut bytes = std::fs::read(&path).unwrap();
    let mid = bytes.len() / 2;
    bytes[mid] ^= 0xff;
    std::fs::write(&path, bytes).unwrap();
    let out = sfc(&["field", "info", "--m", "6", "--cache-dir", d]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("corrupt"));
}

#[test]
fn subfield_compare_agrees() {
    for (p, m, f) in [("3", "2", "mono:4"), ("2", "4", "const1"), ("2", "5", "mono:3")] {
        let out = sfc(&["subfield", "compare", "--f", f, "--p", p, "--m", m]);
        assert_eq!(code(&out), 0, "{p} {m} {f}");
        assert_eq!(json_of(&out)["equal"], true);
    }
    let out = sfc(&["subfield", "compare", "--f", "const1", "--p", "2", "--m", "4", "--a-subfield", "2"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn subfield_expand_and_trace_params() {
    let e = json_of(&sfc(&["subfield", "expand", "--f", "mono:3", "--m", "5", "--basis-shift", "3"]));
    let t = json_of(&sfc(&["subfield", "trace", "--f", "mono:3", "--m", "5"]));
    assert_eq!(e["code"], t["code"]);
    assert_eq!(e["code"]["k"], 10);
}

#[test]
fn charsum_commands() {
    let g = sfc(&["charsum", "gauss", "--p", "3", "--m", "3"]);
    assert_eq!(code(&g), 0);
    assert_eq!(json_of(&g)["agrees"], true);

    let w = sfc(&["charsum", "weil", "--p", "5", "--m", "2", "--samples", "8", "--seed", "7"]);
    assert_eq!(code(&w), 0);
    assert_eq!(json_of(&w)["cases"].as_array().unwrap().len(), 8);
    let w2 = sfc(&["charsum", "weil", "--p", "2", "--m", "4", "--b", "a^1", "--a2", "a^3", "--a1", "1", "--a0", "0"]);
    assert_eq!(code(&w2), 0);

    let c = sfc(&["charsum", "carlitz", "--m", "5"]);
    assert_eq!(code(&c), 0);
    assert_eq!(json_of(&c)["scan"]["s11"], -8);
    let c1 = sfc(&["charsum", "carlitz", "--m", "3", "--a", "1", "--b", "1"]);
    assert_eq!(json_of(&c1)["S"], -4);

    let n = sfc(&["charsum", "counts", "--lemma", "lem6_2", "--p", "3", "--param", "2"]);
    assert_eq!(code(&n), 0);
    assert_eq!(json_of(&n)["match"], true);
}

#[test]
fn probe_reports_agreement_without_failing() {
    let out = sfc(&["probe", "--conj", "conj1", "--m", "5"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["conjecture"]["agrees"], true);
    assert_eq!(code(&sfc(&["probe", "--conj", "thm5_1", "--m", "5"])), 2);
}

#[test]
fn verify_accepts_l_parameter() {
    let out = sfc(&["verify", "--theorem", "thm6_4", "--p", "2", "--l", "2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json_of(&out)["pass"], true);
}
